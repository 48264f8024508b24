//! The category of finite sets as an executable model.
//!
//! An object is a size `n` (elements `0..n`); a map is its value table.
//! Element encodings are fixed:
//!
//! * product `J×C` and coproduct `⊔_J C`: `(j, c) ↦ j·|C| + c`;
//! * exponential `Y^D`: `f ↦ Σ f(d)·|Y|^d` (little-endian base `|Y|`).
//!
//! The endofunctor algebra is `Id`, `S×-`, `(-)^S`, `⊔_J -` and composition,
//! with `S×- ⊣ (-)^S` as the built-in adjoint pair.

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::random::Lcg;

/// Largest set the model will build.
pub const DEFAULT_SIZE_BOUND: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSetObj {
    pub size: usize,
}

impl FinSetObj {
    pub fn new(size: usize) -> Self {
        FinSetObj { size }
    }
}

/// A function `0..dom -> 0..cod` given by its table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSetMap {
    dom: usize,
    cod: usize,
    table: Vec<usize>,
}

impl FinSetMap {
    pub fn new(dom: usize, cod: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom {
            return Err(Error::Size(format!(
                "table has {} entries for a domain of {dom}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= cod) {
            return Err(Error::Size(format!("entry {bad} out of range for codomain {cod}")));
        }
        Ok(FinSetMap { dom, cod, table })
    }

    pub fn identity(n: usize) -> Self {
        FinSetMap {
            dom: n,
            cod: n,
            table: (0..n).collect(),
        }
    }

    pub fn dom(&self) -> FinSetObj {
        FinSetObj::new(self.dom)
    }

    pub fn cod(&self) -> FinSetObj {
        FinSetObj::new(self.cod)
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self` first, then `g`.
    pub fn then(&self, g: &FinSetMap) -> Result<FinSetMap> {
        if self.cod != g.dom {
            return Err(Error::Size(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.dom, self.cod, g.dom, g.cod
            )));
        }
        Ok(FinSetMap {
            dom: self.dom,
            cod: g.cod,
            table: self.table.iter().map(|&x| g.table[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod];
        self.table.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod];
        for &v in &self.table {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom == self.cod && self.is_injective()
    }
}

/// Every map `dom -> cod`, in little-endian table order.
pub fn all_maps(dom: usize, cod: usize) -> impl Iterator<Item = FinSetMap> {
    let count = if dom == 0 {
        1
    } else if cod == 0 {
        0
    } else {
        cod.pow(dom as u32)
    };
    (0..count).map(move |code| FinSetMap {
        dom,
        cod,
        table: decode(code, cod, dom),
    })
}

/// A uniformly random map from the seeded generator.
pub fn random_map(rng: &mut Lcg, dom: usize, cod: usize) -> FinSetMap {
    assert!(dom == 0 || cod > 0, "no maps into the empty set");
    FinSetMap {
        dom,
        cod,
        table: (0..dom).map(|_| rng.below(cod)).collect(),
    }
}

fn encode(digits: &[usize], base: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

fn decode(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % base.max(1));
        code /= base.max(1);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FunctorExpr {
    Id,
    TimesS(usize),
    PowerS(usize),
    CoprodJ(usize),
    /// `Compose(F, G)` is `F ∘ G`, i.e. `C ↦ F(G(C))`.
    Compose(Box<FunctorExpr>, Box<FunctorExpr>),
}

impl FunctorExpr {
    pub fn compose(f: FunctorExpr, g: FunctorExpr) -> FunctorExpr {
        FunctorExpr::Compose(Box::new(f), Box::new(g))
    }
}

/// The finite-set model with a size guard.
#[derive(Clone, Copy, Debug)]
pub struct FinSet {
    pub bound: usize,
}

impl Default for FinSet {
    fn default() -> Self {
        FinSet {
            bound: DEFAULT_SIZE_BOUND,
        }
    }
}

impl FinSet {
    fn check(&self, n: Option<usize>, what: &str) -> Result<usize> {
        match n {
            Some(n) if n <= self.bound => Ok(n),
            _ => Err(Error::Size(format!("{what} exceeds {} elements", self.bound))),
        }
    }

    fn power(&self, base: usize, exp: usize) -> Result<usize> {
        let n = u32::try_from(exp).ok().and_then(|e| base.checked_pow(e));
        self.check(n, "exponential")
    }

    pub fn eval_obj(&self, f: &FunctorExpr, c: FinSetObj) -> Result<FinSetObj> {
        let size = match f {
            FunctorExpr::Id => c.size,
            FunctorExpr::TimesS(s) | FunctorExpr::CoprodJ(s) => self.check(c.size.checked_mul(*s), "product")?,
            FunctorExpr::PowerS(s) => self.power(c.size, *s)?,
            FunctorExpr::Compose(f, g) => return self.eval_obj(f, self.eval_obj(g, c)?),
        };
        Ok(FinSetObj::new(size))
    }

    pub fn eval_map(&self, f: &FunctorExpr, m: &FinSetMap) -> Result<FinSetMap> {
        match f {
            FunctorExpr::Id => Ok(m.clone()),
            FunctorExpr::TimesS(s) | FunctorExpr::CoprodJ(s) => {
                let dom = self.check(m.dom.checked_mul(*s), "product")?;
                let cod = self.check(m.cod.checked_mul(*s), "product")?;
                let table = (0..dom).map(|x| (x / m.dom) * m.cod + m.table[x % m.dom]).collect();
                Ok(FinSetMap { dom, cod, table })
            }
            FunctorExpr::PowerS(s) => {
                let dom = self.power(m.dom, *s)?;
                let cod = self.power(m.cod, *s)?;
                let table = (0..dom)
                    .map(|code| {
                        let g: Vec<usize> = decode(code, m.dom, *s).into_iter().map(|v| m.table[v]).collect();
                        encode(&g, m.cod)
                    })
                    .collect();
                Ok(FinSetMap { dom, cod, table })
            }
            FunctorExpr::Compose(f, g) => self.eval_map(f, &self.eval_map(g, m)?),
        }
    }

    /// `⊔_J F(C) -> F(⊔_J C)`, the `j`-th summand sent along `F(incl_j)`.
    pub fn canonical_alpha(&self, f: &FunctorExpr, j: usize, c: FinSetObj) -> Result<FinSetMap> {
        let fc = self.eval_obj(f, c)?.size;
        let coprod = FinSetObj::new(self.check(c.size.checked_mul(j), "coproduct")?);
        let dom = self.check(fc.checked_mul(j), "coproduct")?;
        let cod = self.eval_obj(f, coprod)?.size;
        let mut table = Vec::with_capacity(dom);
        for summand in 0..j {
            let incl = FinSetMap {
                dom: c.size,
                cod: coprod.size,
                table: (0..c.size).map(|x| summand * c.size + x).collect(),
            };
            table.extend_from_slice(&self.eval_map(f, &incl)?.table);
        }
        Ok(FinSetMap { dom, cod, table })
    }

    /// Check `F(⊔f) ∘ α_C = α_C' ∘ ⊔F(f)` for one map `f : C -> C'`.
    pub fn alpha_is_natural_at(&self, f: &FunctorExpr, j: usize, m: &FinSetMap) -> Result<bool> {
        let coprod = FunctorExpr::CoprodJ(j);
        let lhs = self
            .canonical_alpha(f, j, m.dom())?
            .then(&self.eval_map(f, &self.eval_map(&coprod, m)?)?)?;
        let rhs = self
            .eval_map(&coprod, &self.eval_map(f, m)?)?
            .then(&self.canonical_alpha(f, j, m.cod())?)?;
        Ok(lhs == rhs)
    }

    /// The strength `J × Y^D -> (J × Y)^D`, `(j, f) ↦ (d ↦ (j, f d))`.
    pub fn strength_map(&self, j: FinSetObj, y: FinSetObj, d: FinSetObj) -> Result<FinSetMap> {
        let yd = self.power(y.size, d.size)?;
        let dom = self.check(j.size.checked_mul(yd), "product")?;
        let jy = self.check(j.size.checked_mul(y.size), "product")?;
        let cod = self.power(jy, d.size)?;
        let table = (0..dom)
            .map(|code| {
                let j0 = code / yd;
                let f = decode(code % yd, y.size, d.size);
                let g: Vec<usize> = f.into_iter().map(|v| j0 * y.size + v).collect();
                encode(&g, jy)
            })
            .collect();
        Ok(FinSetMap { dom, cod, table })
    }

    /// `J -> J^D`, each element sent to the constant function.
    pub fn natural_map_j_to_jd(&self, j: FinSetObj, d: FinSetObj) -> Result<FinSetMap> {
        let cod = self.power(j.size, d.size)?;
        let table = (0..j.size).map(|j0| encode(&vec![j0; d.size], j.size)).collect();
        Ok(FinSetMap {
            dom: j.size,
            cod,
            table,
        })
    }

    /// Is precomposition with the projection `X×D -> X` a bijection
    /// `hom(X, J) -> hom(X×D, J)`?
    pub fn transpose_bijection(&self, x: FinSetObj, j: FinSetObj, d: FinSetObj) -> Result<bool> {
        let xd = self.check(x.size.checked_mul(d.size), "product")?;
        let source = self.power(j.size, x.size)?;
        let target = self.power(j.size, xd)?;
        if source != target {
            return Ok(false);
        }
        let projection = FinSetMap {
            dom: xd,
            cod: x.size,
            table: (0..xd).map(|p| p / d.size.max(1)).collect(),
        };
        let mut hit = vec![false; target];
        for g in all_maps(x.size, j.size) {
            let pulled = projection.then(&g)?;
            let code = encode(&pulled.table, j.size);
            if std::mem::replace(&mut hit[code], true) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Do maps `i : D -> 1` and `r : 1 -> D` with `r ∘ i = id_D` exist?
pub fn retract_of_one(d: FinSetObj) -> bool {
    all_maps(d.size, 1)
        .any(|i| all_maps(1, d.size).any(|r| i.then(&r).map(|ri| ri == FinSetMap::identity(d.size)).unwrap_or(false)))
}

/// Does the projection `1×D -> D` factor through the projection `1×D -> 1`?
pub fn projection_factors(d: FinSetObj) -> bool {
    // 1×D has the same encoding as D; both projections are tables on it
    let to_d = FinSetMap::identity(d.size);
    let to_one = FinSetMap {
        dom: d.size,
        cod: 1,
        table: vec![0; d.size],
    };
    all_maps(1, d.size).any(|r| to_one.then(&r).map(|m| m == to_d).unwrap_or(false))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomRow {
    pub j: usize,
    pub domain: usize,
    pub codomain: usize,
    pub bijective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomReport {
    pub d: usize,
    pub rows: Vec<AtomRow>,
    pub retract_of_one: bool,
    pub projection_factors: bool,
    /// Every `J -> J^D` was a bijection.
    pub consistent_with_strong_adjoint: bool,
}

impl AtomReport {
    pub fn failures(&self) -> impl Iterator<Item = &AtomRow> {
        self.rows.iter().filter(|r| !r.bijective)
    }
}

/// Test whether `J -> J^D` is invertible for every `|J| ≤ max_j`, the
/// necessary condition for `(-)^D` to have a strong right adjoint.
pub fn atom_strong_check(model: &FinSet, d: FinSetObj, max_j: usize, exec: Exec) -> Result<AtomReport> {
    if max_j < 2 {
        return Err(Error::Size("max_j must be at least 2".into()));
    }
    let rows = exec::map_range(exec, max_j + 1, |j| {
        model.natural_map_j_to_jd(FinSetObj::new(j), d).map(|m| AtomRow {
            j,
            domain: m.dom,
            codomain: m.cod,
            bijective: m.is_bijective(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let consistent = rows.iter().all(|r| r.bijective);
    Ok(AtomReport {
        d: d.size,
        rows,
        retract_of_one: retract_of_one(d),
        projection_factors: projection_factors(d),
        consistent_with_strong_adjoint: consistent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopowerCase {
    pub s: usize,
    pub j: usize,
    pub c: usize,
    pub bijective: bool,
}

/// `canonical_alpha(S×-, j, c)` for every `1 ≤ s, j, c ≤ max`.
pub fn copower_sweep(model: &FinSet, max: usize, exec: Exec) -> Result<Vec<CopowerCase>> {
    let cases: Vec<(usize, usize, usize)> = (1..=max)
        .flat_map(|s| (1..=max).flat_map(move |j| (1..=max).map(move |c| (s, j, c))))
        .collect();
    exec::map(exec, &cases, |&(s, j, c)| {
        model
            .canonical_alpha(&FunctorExpr::TimesS(s), j, FinSetObj::new(c))
            .map(|m| CopowerCase {
                s,
                j,
                c,
                bijective: m.is_bijective(),
            })
    })
    .into_iter()
    .collect()
}

/// Naturality of `canonical_alpha(S×-, j, -)` on `samples` seeded random maps
/// with sizes and parameters at most `max`. Returns the number that held.
pub fn copower_naturality(model: &FinSet, samples: usize, max: usize, seed: u64, exec: Exec) -> Result<usize> {
    let mut rng = Lcg::new(seed);
    let draws: Vec<(usize, usize, FinSetMap)> = (0..samples)
        .map(|_| {
            let s = 1 + rng.below(max);
            let j = 1 + rng.below(max.min(3));
            let dom = 1 + rng.below(max);
            let cod = 1 + rng.below(max);
            (s, j, random_map(&mut rng, dom, cod))
        })
        .collect();
    let held = exec::map(exec, &draws, |(s, j, m)| {
        model.alpha_is_natural_at(&FunctorExpr::TimesS(*s), *j, m)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(held.into_iter().filter(|&h| h).count())
}
