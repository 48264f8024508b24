//! Finite-dimensional linear algebra as a model: an object word is the
//! tensor product of its letters' spaces, a diagram is a matrix.
//!
//! Column vectors throughout, so a diagram `s1 ; s2` evaluates to `M2 · M1`.
//! The basis of a word is indexed big-endian in mixed radix: the multi-index
//! `(i1, .., ik)` over dimensions `(d1, .., dk)` is `((i1·d2 + i2)·d3 + ..)`,
//! which makes `kron` the tensor product on arrows.

use std::fmt;

use crate::duality::{Theorem1Setup, Theorem3Setup};
use crate::error::{Error, Result};
use crate::moncat::{Diagram, GenId, ObjectWord, Signature};
use crate::random::Lcg;

/// Largest row or column count `kron` and evaluation will build.
pub const MAX_DIMENSION: usize = 10_000;
/// `mate_beta` refuses matrices whose condition estimate exceeds this.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Numeric(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite entry".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn scale(&self, k: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// `self · other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Numeric(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out.data[r * other.cols..(r + 1) * other.cols].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self` acts on the more significant factor.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        let rows = checked_dim(self.rows, other.rows)?;
        let cols = checked_dim(self.cols, other.cols)?;
        Ok(Matrix::from_fn(rows, cols, |r, c| {
            self.get(r / other.rows, c / other.cols) * other.get(r % other.rows, c % other.cols)
        }))
    }

    /// Largest absolute entry of `self - other`; infinite on a shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .map(|v| v.abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Gauss-Jordan inverse with partial pivoting, together with the
    /// condition estimate `‖A‖∞ · ‖A⁻¹‖∞`.
    pub fn inverse_with_condition(&self) -> Result<(Matrix, f64)> {
        if !self.is_square() {
            return Err(Error::Numeric(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(n).data;
        let scale = self.norm_inf().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
                .expect("non-empty pivot range");
            if a[pivot * n + col].abs() <= scale * f64::EPSILON {
                return Err(Error::Numeric("matrix is singular".into()));
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                    inv.swap(pivot * n + k, col * n + k);
                }
            }
            let p = a[col * n + col];
            for k in 0..n {
                a[col * n + k] /= p;
                inv[col * n + k] /= p;
            }
            for r in 0..n {
                let f = a[r * n + col];
                if r == col || f == 0.0 {
                    continue;
                }
                for k in 0..n {
                    a[r * n + k] -= f * a[col * n + k];
                    inv[r * n + k] -= f * inv[col * n + k];
                }
            }
        }
        let inv = Matrix::new(n, n, inv)?;
        let cond = self.norm_inf() * inv.norm_inf();
        Ok((inv, cond))
    }

    /// Inverse, refused when the condition estimate exceeds [`MAX_CONDITION`].
    pub fn inverse(&self) -> Result<Matrix> {
        let (inv, cond) = self.inverse_with_condition()?;
        if cond > MAX_CONDITION {
            return Err(Error::Numeric(format!(
                "condition estimate {cond:.3e} exceeds {MAX_CONDITION:e}"
            )));
        }
        Ok(inv)
    }
}

fn checked_dim(a: usize, b: usize) -> Result<usize> {
    match a.checked_mul(b) {
        Some(n) if n <= MAX_DIMENSION => Ok(n),
        _ => Err(Error::Size(format!("dimension {a}·{b} exceeds {MAX_DIMENSION}"))),
    }
}

/// The symmetric braiding `P⊗Q -> Q⊗P`: basis `i·q + j` goes to `j·p + i`.
pub fn flip(p: usize, q: usize) -> Matrix {
    let mut m = Matrix::zeros(p * q, p * q);
    for i in 0..p {
        for j in 0..q {
            m.data[(j * p + i) * (p * q) + i * q + j] = 1.0;
        }
    }
    m
}

/// Standard unit `1 -> n²` and counit `n² -> 1` of a space with its dual.
pub fn dual_pair(n: usize) -> (Matrix, Matrix) {
    let mut eta = Matrix::zeros(n * n, 1);
    let mut eps = Matrix::zeros(1, n * n);
    for i in 0..n {
        eta.data[i * n + i] = 1.0;
        eps.data[i * n + i] = 1.0;
    }
    (eta, eps)
}

/// Entries uniform in `[-1, 1]`, plus `2·I` when square.
pub fn random_matrix(rng: &mut Lcg, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |r, c| {
        let v = rng.uniform(-1.0, 1.0);
        if rows == cols && r == c {
            v + 2.0
        } else {
            v
        }
    })
}

/// Dimensions for object generators and matrices for morphism generators.
#[derive(Clone, Debug)]
pub struct ModelAssignment {
    dims: Vec<usize>,
    gens: Vec<Option<Matrix>>,
}

impl ModelAssignment {
    /// Every object starts at dimension 1, no generator is assigned.
    pub fn new(sig: &Signature) -> Self {
        ModelAssignment {
            dims: vec![1; sig.objects().len()],
            gens: vec![None; sig.morphisms().len()],
        }
    }

    pub fn set_dim(&mut self, sig: &Signature, object: &str, dim: usize) -> Result<()> {
        let id = sig
            .object(object)
            .ok_or_else(|| Error::Signature(format!("unknown object `{object}`")))?;
        if dim == 0 {
            return Err(Error::Size(format!("object `{object}` needs a positive dimension")));
        }
        self.dims[id.0] = dim;
        Ok(())
    }

    pub fn dim(&self, w: &ObjectWord) -> Result<usize> {
        w.as_slice()
            .iter()
            .try_fold(1, |acc, o| checked_dim(acc, self.dims[o.0]))
    }

    /// Assign a matrix, checking its shape against the current dimensions.
    pub fn set_gen(&mut self, sig: &Signature, gen: GenId, m: Matrix) -> Result<()> {
        let g = sig.morphism(gen);
        let (rows, cols) = (self.dim(&g.cod)?, self.dim(&g.dom)?);
        if (m.rows, m.cols) != (rows, cols) {
            return Err(Error::Numeric(format!(
                "`{}` needs a {rows}x{cols} matrix, got {}x{}",
                g.name, m.rows, m.cols
            )));
        }
        self.gens[gen.0] = Some(m);
        Ok(())
    }

    pub fn set_gen_named(&mut self, sig: &Signature, name: &str, m: Matrix) -> Result<()> {
        let id = sig
            .gen(name)
            .ok_or_else(|| Error::Signature(format!("unknown generator `{name}`")))?;
        self.set_gen(sig, id, m)
    }

    pub fn matrix(&self, sig: &Signature, gen: GenId) -> Result<&Matrix> {
        self.gens[gen.0]
            .as_ref()
            .ok_or_else(|| Error::Signature(format!("no matrix assigned to `{}`", sig.morphism(gen).name)))
    }
}

/// The matrix of a diagram. Slices are applied in place, one whiskered
/// generator at a time, without materialising the Kronecker products.
pub fn eval_diagram(sig: &Signature, d: &Diagram, m: &ModelAssignment) -> Result<Matrix> {
    let cols = m.dim(d.input())?;
    let mut state = Matrix::identity(cols);
    let words = d.words(sig);
    for (slice, word) in d.slices().iter().zip(&words) {
        let g = m.matrix(sig, slice.gen)?;
        let gen = sig.morphism(slice.gen);
        let left = m.dim(&word.range(0, slice.offset))?;
        let right = m.dim(&word.range(slice.offset + gen.dom.len(), word.len()))?;
        let rows = checked_dim(checked_dim(left, g.rows)?, right)?;
        let mut next = Matrix::zeros(rows, cols);
        for l in 0..left {
            for out in 0..g.rows {
                for k in 0..g.cols {
                    let w = g.get(out, k);
                    if w == 0.0 {
                        continue;
                    }
                    for r in 0..right {
                        let src = ((l * g.cols + k) * right + r) * cols;
                        let dst = ((l * g.rows + out) * right + r) * cols;
                        for c in 0..cols {
                            next.data[dst + c] += w * state.data[src + c];
                        }
                    }
                }
            }
        }
        state = next;
    }
    Ok(state)
}

/// `β = (B·X·ε) ∘ (B·α⁻¹·B) ∘ (η·X·B)` for `α : X·A -> A·X`, with `B` the
/// standard dual of `A`.
pub fn mate_beta(alpha: &Matrix, dim_a: usize, dim_x: usize) -> Result<Matrix> {
    let n = checked_dim(dim_a, dim_x)?;
    if (alpha.rows, alpha.cols) != (n, n) {
        return Err(Error::Numeric(format!(
            "alpha must be {n}x{n} for dims ({dim_a}, {dim_x}), got {}x{}",
            alpha.rows, alpha.cols
        )));
    }
    let inv = alpha.inverse()?;
    let (eta, eps) = dual_pair(dim_a);
    let id_b = Matrix::identity(dim_a);
    let id_x = Matrix::identity(dim_x);
    let open = eta.kron(&id_x)?.kron(&id_b)?;
    let middle = id_b.kron(&inv)?.kron(&id_b)?;
    let close = id_b.kron(&id_x)?.kron(&eps)?;
    close.mul(&middle)?.mul(&open)
}

/// Residuals of the two compatibility squares tying `β` to `α` through the
/// standard duality, as max-abs entries.
pub fn compatibility_residuals(alpha: &Matrix, beta: &Matrix, dim_a: usize, dim_x: usize) -> Result<(f64, f64)> {
    let (eta, eps) = dual_pair(dim_a);
    let id_a = Matrix::identity(dim_a);
    let id_b = id_a.clone();
    let id_x = Matrix::identity(dim_x);
    // unit: (B·α)(β·A)(X·η) = η·X on X
    let lhs = id_b.kron(alpha)?.mul(&beta.kron(&id_a)?)?.mul(&id_x.kron(&eta)?)?;
    let unit = lhs.max_abs_diff(&eta.kron(&id_x)?);
    // counit: (ε·X)(A·β)(α·B) = X·ε on X·A·B
    let lhs = eps.kron(&id_x)?.mul(&id_a.kron(beta)?)?.mul(&alpha.kron(&id_b)?)?;
    let counit = lhs.max_abs_diff(&id_x.kron(&eps)?);
    Ok((unit, counit))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem1Numeric {
    pub dim_a: usize,
    pub dim_x: usize,
    pub gamma_after_alpha: f64,
    pub alpha_after_gamma: f64,
    pub gamma_vs_inverse: f64,
    pub unit_square: f64,
    pub counit_square: f64,
}

impl Theorem1Numeric {
    pub fn max_residual(&self) -> f64 {
        [
            self.gamma_after_alpha,
            self.alpha_after_gamma,
            self.gamma_vs_inverse,
            self.unit_square,
            self.counit_square,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Interpret the invertibility signature with the given `α`, `β` from
/// [`mate_beta`] and the standard dual pair, then measure `γ` against `α`.
pub fn check_theorem1_numeric(alpha: &Matrix, dim_a: usize, dim_x: usize) -> Result<Theorem1Numeric> {
    let beta = mate_beta(alpha, dim_a, dim_x)?;
    let setup = Theorem1Setup::new()?;
    let sig = &setup.sig;
    let mut m = ModelAssignment::new(sig);
    m.set_dim(sig, "X", dim_x)?;
    m.set_dim(sig, "A", dim_a)?;
    m.set_dim(sig, "B", dim_a)?;
    let (eta, eps) = dual_pair(dim_a);
    m.set_gen(sig, setup.alpha, alpha.clone())?;
    m.set_gen(sig, setup.beta, beta.clone())?;
    m.set_gen(sig, setup.eta, eta)?;
    m.set_gen(sig, setup.eps, eps)?;
    let gamma = eval_diagram(sig, &setup.gamma(), &m)?;
    let n = dim_a * dim_x;
    let id = Matrix::identity(n);
    let (unit, counit) = compatibility_residuals(alpha, &beta, dim_a, dim_x)?;
    Ok(Theorem1Numeric {
        dim_a,
        dim_x,
        gamma_after_alpha: gamma.mul(alpha)?.max_abs_diff(&id),
        alpha_after_gamma: alpha.mul(&gamma)?.max_abs_diff(&id),
        gamma_vs_inverse: gamma.max_abs_diff(&alpha.inverse()?),
        unit_square: unit,
        counit_square: counit,
    })
}

/// A seeded random `α` for the given dimensions.
pub fn random_alpha(seed: u64, dim_a: usize, dim_x: usize) -> Matrix {
    let n = dim_a * dim_x;
    random_matrix(&mut Lcg::new(seed), n, n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem3Numeric {
    pub dim_a: usize,
    pub dim_x: usize,
    pub expression_vs_a: f64,
    pub composite_vs_flip: f64,
}

/// Flip braidings for `a`, `b` and `b⁻¹`; evaluates the expression of `a`
/// through `b⁻¹` and the composite structure on `B·A`.
pub fn check_theorem3_numeric(dim_a: usize, dim_x: usize) -> Result<Theorem3Numeric> {
    checked_dim(dim_a * dim_a, dim_x)?;
    let setup = Theorem3Setup::new()?;
    let sig = &setup.sig;
    let mut m = ModelAssignment::new(sig);
    m.set_dim(sig, "X", dim_x)?;
    m.set_dim(sig, "A", dim_a)?;
    m.set_dim(sig, "B", dim_a)?;
    let (eta, eps) = dual_pair(dim_a);
    let a = flip(dim_a, dim_x);
    m.set_gen(sig, setup.co_a, a.clone())?;
    m.set_gen(sig, setup.co_b, flip(dim_a, dim_x))?;
    m.set_gen(sig, setup.binv, flip(dim_x, dim_a))?;
    m.set_gen(sig, setup.eta, eta)?;
    m.set_gen(sig, setup.eps, eps)?;
    let expr = eval_diagram(sig, &setup.expression(), &m)?;
    let composite = eval_diagram(sig, &setup.composite_on_ba(), &m)?;
    Ok(Theorem3Numeric {
        dim_a,
        dim_x,
        expression_vs_a: expr.max_abs_diff(&a),
        composite_vs_flip: composite.max_abs_diff(&flip(dim_a * dim_a, dim_x)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exchange::{adjacent_swap, swap_sides_at};
    use crate::moncat::Slice;
    use crate::random::random_diagram;

    fn slice_matrix(sig: &Signature, m: &ModelAssignment, word: &ObjectWord, s: &Slice) -> Matrix {
        let g = sig.morphism(s.gen);
        let left = Matrix::identity(m.dim(&word.range(0, s.offset)).unwrap());
        let right = Matrix::identity(m.dim(&word.range(s.offset + g.dom.len(), word.len())).unwrap());
        left.kron(m.matrix(sig, s.gen).unwrap()).unwrap().kron(&right).unwrap()
    }

    /// Evaluation through explicit Kronecker products.
    fn eval_by_kron(sig: &Signature, d: &Diagram, m: &ModelAssignment) -> Matrix {
        let mut acc = Matrix::identity(m.dim(d.input()).unwrap());
        for (s, w) in d.slices().iter().zip(d.words(sig)) {
            acc = slice_matrix(sig, m, &w, s).mul(&acc).unwrap();
        }
        acc
    }

    fn toy() -> (Signature, ModelAssignment) {
        let mut sig = Signature::new();
        for o in ["P", "Q", "R"] {
            sig.add_object(o).unwrap();
        }
        let w = |sig: &Signature, n: &[&str]| sig.word(n).unwrap();
        let f = w(&sig, &["P", "Q"]);
        let g = w(&sig, &["Q", "P"]);
        sig.add_morphism("f", f.clone(), g.clone()).unwrap();
        sig.add_morphism("g", w(&sig, &["R"]), w(&sig, &["P", "R"])).unwrap();
        sig.add_morphism("h", w(&sig, &["Q", "R"]), ObjectWord::unit()).unwrap();
        sig.add_morphism("k", ObjectWord::unit(), w(&sig, &["Q"])).unwrap();
        let mut m = ModelAssignment::new(&sig);
        m.set_dim(&sig, "P", 2).unwrap();
        m.set_dim(&sig, "Q", 3).unwrap();
        m.set_dim(&sig, "R", 2).unwrap();
        let mut rng = Lcg::new(3);
        for (i, g) in sig.morphisms().to_vec().iter().enumerate() {
            let r = random_matrix(&mut rng, m.dim(&g.cod).unwrap(), m.dim(&g.dom).unwrap());
            m.set_gen(&sig, GenId(i), r).unwrap();
        }
        (sig, m)
    }

    #[test]
    fn kron_cases() {
        assert_eq!(
            Matrix::identity(2).kron(&Matrix::identity(3)).unwrap(),
            Matrix::identity(6)
        );
        let mut rng = Lcg::new(1);
        let m = random_matrix(&mut rng, 2, 3);
        let two = Matrix::new(1, 1, vec![2.0]).unwrap();
        assert_eq!(two.kron(&m).unwrap(), m.scale(2.0));
        for _ in 0..20 {
            let (a, b, c, d) = (
                random_matrix(&mut rng, 2, 2),
                random_matrix(&mut rng, 2, 2),
                random_matrix(&mut rng, 2, 2),
                random_matrix(&mut rng, 2, 2),
            );
            let lhs = a.kron(&b).unwrap().mul(&c.kron(&d).unwrap()).unwrap();
            let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap()).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
        assert!(matches!(
            Matrix::identity(101).kron(&Matrix::identity(100)),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn flip_cases() {
        assert_eq!(flip(1, 4), Matrix::identity(4));
        assert_eq!(flip(2, 3).mul(&flip(3, 2)).unwrap(), Matrix::identity(6));
        let f = flip(2, 3);
        assert_eq!(f.get(3, 4), 1.0);
        assert_eq!((0..6).map(|r| f.get(r, 4)).sum::<f64>(), 1.0);
        // naturality against kron: flip · (u ⊗ v) = v ⊗ u
        let mut rng = Lcg::new(8);
        let u = random_matrix(&mut rng, 2, 1);
        let v = random_matrix(&mut rng, 3, 1);
        assert_eq!(f.mul(&u.kron(&v).unwrap()).unwrap(), v.kron(&u).unwrap());
    }

    #[test]
    fn dual_pair_zigzags_are_exact() {
        let (eta, eps) = dual_pair(1);
        assert_eq!((eta.data(), eps.data()), (&[1.0][..], &[1.0][..]));
        for n in 1..=4 {
            let (eta, eps) = dual_pair(n);
            let id = Matrix::identity(n);
            let z1 = eps.kron(&id).unwrap().mul(&id.kron(&eta).unwrap()).unwrap();
            let z2 = id.kron(&eps).unwrap().mul(&eta.kron(&id).unwrap()).unwrap();
            assert_eq!(z1, id);
            assert_eq!(z2, id);
        }
    }

    #[test]
    fn inverse_agrees_with_nalgebra() {
        let mut rng = Lcg::new(17);
        for n in 1..=9 {
            let a = random_matrix(&mut rng, n, n);
            let ours = a.inverse().unwrap();
            let theirs = nalgebra::DMatrix::from_row_slice(n, n, a.data()).try_inverse().unwrap();
            let theirs = Matrix::new(n, n, theirs.transpose().as_slice().to_vec()).unwrap();
            assert!(ours.max_abs_diff(&theirs) <= 1e-9, "n={n}");
        }
        let singular = Matrix::new(2, 2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(singular.inverse(), Err(Error::Numeric(_))));
        let bad = Matrix::new(2, 2, vec![1.0, 1.0, 1.0, 1.0 + 1e-10]).unwrap();
        assert!(matches!(bad.inverse(), Err(Error::Numeric(_))));
    }

    #[test]
    fn eval_matches_kron_oracle_and_swaps() {
        let (sig, m) = toy();
        let mut rng = Lcg::new(99);
        let mut swapped = 0;
        for _ in 0..300 {
            let d = random_diagram(&sig, &mut rng, 6, 5);
            let v = eval_diagram(&sig, &d, &m).unwrap();
            assert!(v.max_abs_diff(&eval_by_kron(&sig, &d, &m)) <= 1e-12);
            for i in 0..d.len().saturating_sub(1) {
                if !swap_sides_at(&sig, &d, i).is_empty() {
                    let e = adjacent_swap(&sig, &d, i).unwrap();
                    assert!(v.max_abs_diff(&eval_diagram(&sig, &e, &m).unwrap()) <= 1e-12);
                    swapped += 1;
                }
            }
        }
        assert!(swapped > 50);
    }

    #[test]
    fn eval_is_a_monoidal_functor() {
        let (sig, m) = toy();
        assert_eq!(
            eval_diagram(&sig, &Diagram::identity(sig.word(&["P", "Q"]).unwrap()), &m).unwrap(),
            Matrix::identity(6)
        );
        let mut rng = Lcg::new(4);
        for _ in 0..200 {
            let d = random_diagram(&sig, &mut rng, 3, 4);
            let e = random_diagram(&sig, &mut rng, 3, 4);
            let (vd, ve) = (eval_diagram(&sig, &d, &m).unwrap(), eval_diagram(&sig, &e, &m).unwrap());
            let t = eval_diagram(&sig, &d.tensor(&e), &m).unwrap();
            assert!(t.max_abs_diff(&vd.kron(&ve).unwrap()) <= 1e-12);
            if let Ok(c) = d.compose(&Diagram::identity(d.output().clone())) {
                assert!(eval_diagram(&sig, &c, &m).unwrap().max_abs_diff(&vd) <= 1e-12);
            }
            let tail = random_diagram(&sig, &mut rng, 3, 4);
            if tail.input() == d.output() {
                let c = d.compose(&tail).unwrap();
                let vt = eval_diagram(&sig, &tail, &m).unwrap();
                assert!(eval_diagram(&sig, &c, &m).unwrap().max_abs_diff(&vt.mul(&vd).unwrap()) <= 1e-12);
            }
        }
    }

    #[test]
    fn unassigned_generator_is_an_error() {
        let (sig, _) = toy();
        let m = ModelAssignment::new(&sig);
        let d = sig.generator(GenId(0));
        assert!(matches!(eval_diagram(&sig, &d, &m), Err(Error::Signature(_))));
        let mut m = ModelAssignment::new(&sig);
        assert!(m.set_gen(&sig, GenId(0), Matrix::identity(3)).is_err());
    }

    #[test]
    fn gamma_of_flips_is_a_flip() {
        let setup = Theorem1Setup::new().unwrap();
        let sig = &setup.sig;
        for (da, dx) in [(1, 1), (2, 2), (2, 3), (3, 2)] {
            let mut m = ModelAssignment::new(sig);
            m.set_dim(sig, "X", dx).unwrap();
            m.set_dim(sig, "A", da).unwrap();
            m.set_dim(sig, "B", da).unwrap();
            let (eta, eps) = dual_pair(da);
            m.set_gen(sig, setup.alpha, flip(dx, da)).unwrap();
            m.set_gen(sig, setup.beta, flip(dx, da)).unwrap();
            m.set_gen(sig, setup.eta, eta).unwrap();
            m.set_gen(sig, setup.eps, eps).unwrap();
            assert_eq!(eval_diagram(sig, &setup.gamma(), &m).unwrap(), flip(da, dx));
        }
    }

    #[test]
    fn mate_of_flip_is_flip() {
        for (da, dx) in [(1, 1), (2, 2), (2, 3), (3, 2)] {
            assert_eq!(mate_beta(&flip(dx, da), da, dx).unwrap(), flip(dx, da));
        }
    }

    #[test]
    fn mate_with_unit_x_is_inverse_transpose() {
        let mut rng = Lcg::new(21);
        for da in 1..=3 {
            let alpha = random_matrix(&mut rng, da, da);
            let beta = mate_beta(&alpha, da, 1).unwrap();
            assert!(beta.max_abs_diff(&alpha.inverse().unwrap().transpose()) <= 1e-12);
        }
    }

    #[test]
    fn mate_satisfies_both_squares() {
        for seed in [42, 43, 44, 7] {
            for (da, dx) in [(2, 2), (2, 3), (3, 2), (3, 3), (1, 3)] {
                let alpha = random_alpha(seed, da, dx);
                let beta = mate_beta(&alpha, da, dx).unwrap();
                let (u, c) = compatibility_residuals(&alpha, &beta, da, dx).unwrap();
                assert!(u <= 1e-9 && c <= 1e-9, "seed {seed} dims ({da},{dx}): {u} {c}");
            }
        }
        assert!(mate_beta(&Matrix::zeros(4, 4), 2, 2).is_err());
        assert!(mate_beta(&Matrix::identity(3), 2, 2).is_err());
    }

    #[test]
    fn theorem1_numeric_cases() {
        let flip_report = check_theorem1_numeric(&flip(2, 2), 2, 2).unwrap();
        assert_eq!(flip_report.gamma_after_alpha, 0.0);
        assert_eq!(flip_report.alpha_after_gamma, 0.0);
        let unit = check_theorem1_numeric(&Matrix::new(1, 1, vec![3.0]).unwrap(), 1, 1).unwrap();
        assert!(unit.max_residual() <= 1e-15);
        for (da, dx) in [(1, 2), (2, 1), (2, 3), (3, 3)] {
            let r = check_theorem1_numeric(&random_alpha(42, da, dx), da, dx).unwrap();
            assert!(r.max_residual() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn theorem3_numeric_cases() {
        for (da, dx) in [(1, 1), (1, 3), (2, 2), (3, 2), (2, 3), (3, 3)] {
            let r = check_theorem3_numeric(da, dx).unwrap();
            assert_eq!(r.expression_vs_a, 0.0, "{r:?}");
            assert_eq!(r.composite_vs_flip, 0.0, "{r:?}");
        }
    }
}
