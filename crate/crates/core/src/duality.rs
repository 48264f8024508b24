//! Duality data, (co-)commutation structures and the composites built from
//! them, plus drivers that prove the invertibility and mate identities with
//! the rewrite prover.
//!
//! An X-commutation structure on `A` is a map `X·A -> A·X`; a co-commutation
//! goes the other way, `A·X -> X·A`. Structures are stored as diagrams rather
//! than single generators so that composite structures (on `A·B`, or the
//! trivial one on the unit) can be used wherever a declared one can.

use crate::error::{Error, Result};
use crate::moncat::{Diagram, GenId, ObjectWord, Signature};
use crate::rewrite::{prove_equal, ProofTrace, ProveError, RewriteRule, SearchBudget};

fn expect_boundaries(d: &Diagram, input: &ObjectWord, output: &ObjectWord) -> Result<()> {
    if d.input() != input {
        return Err(Error::BoundaryMismatch {
            left: d.input().clone(),
            right: input.clone(),
        });
    }
    if d.output() != output {
        return Err(Error::BoundaryMismatch {
            left: d.output().clone(),
            right: output.clone(),
        });
    }
    Ok(())
}

fn same_x(x1: &ObjectWord, x2: &ObjectWord) -> Result<()> {
    if x1 != x2 {
        return Err(Error::BoundaryMismatch {
            left: x1.clone(),
            right: x2.clone(),
        });
    }
    Ok(())
}

/// A right dual `b` of `a`: `eta : I -> b·a`, `eps : a·b -> I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityData {
    pub a: ObjectWord,
    pub b: ObjectWord,
    pub eta: GenId,
    pub eps: GenId,
}

impl DualityData {
    pub fn new(sig: &Signature, a: ObjectWord, b: ObjectWord, eta: GenId, eps: GenId) -> Result<Self> {
        expect_boundaries(&sig.generator(eta), &ObjectWord::unit(), &b.concat(&a))?;
        expect_boundaries(&sig.generator(eps), &a.concat(&b), &ObjectWord::unit())?;
        Ok(DualityData { a, b, eta, eps })
    }

    pub fn eta(&self, sig: &Signature) -> Diagram {
        sig.generator(self.eta)
    }

    pub fn eps(&self, sig: &Signature) -> Diagram {
        sig.generator(self.eps)
    }

    /// The zigzags `(a·eta);(eps·a) = id_a` and `(eta·b);(b·eps) = id_b`,
    /// named `triangle_A` and `triangle_B`.
    pub fn triangle_rules(&self, sig: &Signature) -> Result<(RewriteRule, RewriteRule)> {
        let unit = ObjectWord::unit();
        let zig_a = self
            .eta(sig)
            .whisker(&self.a, &unit)
            .compose(&self.eps(sig).whisker(&unit, &self.a))?;
        let zig_b = self
            .eta(sig)
            .whisker(&unit, &self.b)
            .compose(&self.eps(sig).whisker(&self.b, &unit))?;
        Ok((
            RewriteRule::new("triangle_A", zig_a, Diagram::identity(self.a.clone()))?,
            RewriteRule::new("triangle_B", zig_b, Diagram::identity(self.b.clone()))?,
        ))
    }
}

/// `map : x·carrier -> carrier·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationStructure {
    pub x: ObjectWord,
    pub carrier: ObjectWord,
    pub map: Diagram,
}

impl CommutationStructure {
    pub fn new(x: ObjectWord, carrier: ObjectWord, map: Diagram) -> Result<Self> {
        expect_boundaries(&map, &x.concat(&carrier), &carrier.concat(&x))?;
        Ok(CommutationStructure { x, carrier, map })
    }

    pub fn from_generator(sig: &Signature, x: ObjectWord, carrier: ObjectWord, alpha: GenId) -> Result<Self> {
        Self::new(x, carrier, sig.generator(alpha))
    }

    /// The canonical structure on the unit: an identity on `x`.
    pub fn trivial(x: ObjectWord) -> Self {
        CommutationStructure {
            carrier: ObjectWord::unit(),
            map: Diagram::identity(x.clone()),
            x,
        }
    }
}

/// `map : carrier·x -> x·carrier`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoCommutationStructure {
    pub x: ObjectWord,
    pub carrier: ObjectWord,
    pub map: Diagram,
}

impl CoCommutationStructure {
    pub fn new(x: ObjectWord, carrier: ObjectWord, map: Diagram) -> Result<Self> {
        expect_boundaries(&map, &carrier.concat(&x), &x.concat(&carrier))?;
        Ok(CoCommutationStructure { x, carrier, map })
    }

    pub fn from_generator(sig: &Signature, x: ObjectWord, carrier: ObjectWord, a: GenId) -> Result<Self> {
        Self::new(x, carrier, sig.generator(a))
    }

    pub fn trivial(x: ObjectWord) -> Self {
        CoCommutationStructure {
            carrier: ObjectWord::unit(),
            map: Diagram::identity(x.clone()),
            x,
        }
    }
}

/// The square making `f : src.carrier -> dst.carrier` a morphism of
/// commutation structures: `src ; (f·x)  =  (x·f) ; dst`.
pub fn commutation_square(
    name: &str,
    f: &Diagram,
    src: &CommutationStructure,
    dst: &CommutationStructure,
) -> Result<RewriteRule> {
    same_x(&src.x, &dst.x)?;
    expect_boundaries(f, &src.carrier, &dst.carrier)?;
    let unit = ObjectWord::unit();
    let lhs = src.map.compose(&f.whisker(&unit, &src.x))?;
    let rhs = f.whisker(&src.x, &unit).compose(&dst.map)?;
    RewriteRule::new(name, lhs, rhs)
}

/// The square for co-commutation structures: `src ; (x·f)  =  (f·x) ; dst`.
pub fn cocommutation_square(
    name: &str,
    f: &Diagram,
    src: &CoCommutationStructure,
    dst: &CoCommutationStructure,
) -> Result<RewriteRule> {
    same_x(&src.x, &dst.x)?;
    expect_boundaries(f, &src.carrier, &dst.carrier)?;
    let unit = ObjectWord::unit();
    let lhs = src.map.compose(&f.whisker(&src.x, &unit))?;
    let rhs = f.whisker(&unit, &src.x).compose(&dst.map)?;
    RewriteRule::new(name, lhs, rhs)
}

/// The structure on `s.carrier·t.carrier`: `(s·B) ; (A·t)`.
pub fn tensor_commutation(s: &CommutationStructure, t: &CommutationStructure) -> Result<CommutationStructure> {
    same_x(&s.x, &t.x)?;
    let unit = ObjectWord::unit();
    let map = s
        .map
        .whisker(&unit, &t.carrier)
        .compose(&t.map.whisker(&s.carrier, &unit))?;
    CommutationStructure::new(s.x.clone(), s.carrier.concat(&t.carrier), map)
}

/// The composite co-commutation on `s.carrier·t.carrier`: `(B·t) ; (s·A)`.
pub fn cocommutation_tensor(s: &CoCommutationStructure, t: &CoCommutationStructure) -> Result<CoCommutationStructure> {
    same_x(&s.x, &t.x)?;
    let unit = ObjectWord::unit();
    let map = t
        .map
        .whisker(&s.carrier, &unit)
        .compose(&s.map.whisker(&unit, &t.carrier))?;
    CoCommutationStructure::new(s.x.clone(), s.carrier.concat(&t.carrier), map)
}

/// `(A·x·eta) ; (A·m·A) ; (eps·x·A)` for `m : x·B -> B·x`.
fn mate_shape(sig: &Signature, d: &DualityData, x: &ObjectWord, middle: &Diagram) -> Result<Diagram> {
    expect_boundaries(middle, &x.concat(&d.b), &d.b.concat(x))?;
    let unit = ObjectWord::unit();
    d.eta(sig)
        .whisker(&d.a.concat(x), &unit)
        .compose(&middle.whisker(&d.a, &d.a))?
        .compose(&d.eps(sig).whisker(&unit, &x.concat(&d.a)))
}

/// Candidate inverse of `s.map`, built from the dual structure `t` on `B`.
pub fn theorem1_gamma(
    sig: &Signature,
    s: &CommutationStructure,
    d: &DualityData,
    t: &CommutationStructure,
) -> Result<Diagram> {
    same_x(&s.x, &t.x)?;
    same_x(&s.carrier, &d.a)?;
    same_x(&t.carrier, &d.b)?;
    mate_shape(sig, d, &s.x, &t.map)
}

/// `(A·x·eta) ; (A·binv·A) ; (eps·x·A)`, the expression of `a` through the
/// inverse of the co-commutation on the dual.
pub fn theorem3_expression(sig: &Signature, d: &DualityData, x: &ObjectWord, binv: GenId) -> Result<Diagram> {
    mate_shape(sig, d, x, &sig.generator(binv))
}

/// `(eta·x·B) ; (B·a·B) ; (B·x·eps)`: the candidate inverse for the
/// co-commutation on the dual `B`.
pub fn dual_candidate_inverse(sig: &Signature, d: &DualityData, a: &CoCommutationStructure) -> Result<Diagram> {
    same_x(&a.carrier, &d.a)?;
    let unit = ObjectWord::unit();
    let x = &a.x;
    d.eta(sig)
        .whisker(&unit, &x.concat(&d.b))
        .compose(&a.map.whisker(&d.b, &d.b))?
        .compose(&d.eps(sig).whisker(&d.b.concat(x), &unit))
}

/// A proved goal.
#[derive(Clone, Debug)]
pub struct Goal {
    pub name: String,
    pub lhs: Diagram,
    pub rhs: Diagram,
    pub trace: ProofTrace,
}

/// Proof traces together with the signature they refer to.
#[derive(Clone, Debug)]
pub struct Verification {
    pub signature: Signature,
    pub goals: Vec<Goal>,
}

fn prove_goal(
    sig: &Signature,
    name: &str,
    lhs: Diagram,
    rhs: Diagram,
    rules: &[RewriteRule],
    budget: SearchBudget,
) -> Result<Goal> {
    match prove_equal(sig, &lhs, &rhs, rules, budget) {
        Ok(trace) => Ok(Goal {
            name: name.to_string(),
            lhs,
            rhs,
            trace,
        }),
        Err(ProveError::Typing(e)) => Err(e),
        Err(e @ ProveError::Exhausted(_)) => Err(Error::ProofNotFound(format!("{name}: {e}"))),
    }
}

/// Fixed signature for the invertibility theorem: objects `X A B`,
/// `alpha : X A -> A X`, `beta : X B -> B X`, `eta : 1 -> B A`,
/// `eps : A B -> 1`, and the four hypothesis equations.
#[derive(Clone, Debug)]
pub struct Theorem1Setup {
    pub sig: Signature,
    pub x: ObjectWord,
    pub a: ObjectWord,
    pub b: ObjectWord,
    pub alpha: GenId,
    pub beta: GenId,
    pub eta: GenId,
    pub eps: GenId,
    pub duality: DualityData,
    pub on_a: CommutationStructure,
    pub on_b: CommutationStructure,
}

impl Theorem1Setup {
    pub fn new() -> Result<Self> {
        let mut sig = Signature::new();
        let x = ObjectWord::new(vec![sig.add_object("X")?]);
        let a = ObjectWord::new(vec![sig.add_object("A")?]);
        let b = ObjectWord::new(vec![sig.add_object("B")?]);
        let unit = ObjectWord::unit();
        let alpha = sig.add_morphism("alpha", x.concat(&a), a.concat(&x))?;
        let beta = sig.add_morphism("beta", x.concat(&b), b.concat(&x))?;
        let eta = sig.add_morphism("eta", unit.clone(), b.concat(&a))?;
        let eps = sig.add_morphism("eps", a.concat(&b), unit)?;

        let duality = DualityData::new(&sig, a.clone(), b.clone(), eta, eps)?;
        let on_a = CommutationStructure::from_generator(&sig, x.clone(), a.clone(), alpha)?;
        let on_b = CommutationStructure::from_generator(&sig, x.clone(), b.clone(), beta)?;
        let trivial = CommutationStructure::trivial(x.clone());

        let (tri_a, tri_b) = duality.triangle_rules(&sig)?;
        let on_ba = tensor_commutation(&on_b, &on_a)?;
        let on_ab = tensor_commutation(&on_a, &on_b)?;
        let eta_square = commutation_square("eta_square", &duality.eta(&sig), &trivial, &on_ba)?;
        let eps_square = commutation_square("eps_square", &duality.eps(&sig), &on_ab, &trivial)?;
        for rule in [tri_a, tri_b, eta_square, eps_square] {
            sig.add_equation(rule)?;
        }
        Ok(Theorem1Setup {
            sig,
            x,
            a,
            b,
            alpha,
            beta,
            eta,
            eps,
            duality,
            on_a,
            on_b,
        })
    }

    pub fn gamma(&self) -> Diagram {
        theorem1_gamma(&self.sig, &self.on_a, &self.duality, &self.on_b).expect("fixed signature is well-typed")
    }

    pub fn alpha(&self) -> Diagram {
        self.sig.generator(self.alpha)
    }

    pub fn rules(&self) -> &[RewriteRule] {
        self.sig.equations()
    }
}

/// Prove `gamma ; alpha = id(A X)` and `alpha ; gamma = id(X A)`.
pub fn verify_theorem1() -> Result<Verification> {
    verify_theorem1_with(SearchBudget::default())
}

pub fn verify_theorem1_with(budget: SearchBudget) -> Result<Verification> {
    let setup = Theorem1Setup::new()?;
    let gamma = setup.gamma();
    let alpha = setup.alpha();
    let ax = setup.a.concat(&setup.x);
    let xa = setup.x.concat(&setup.a);
    let goals = vec![
        prove_goal(
            &setup.sig,
            "alpha_after_gamma",
            gamma.compose(&alpha)?,
            Diagram::identity(ax),
            setup.rules(),
            budget,
        )?,
        prove_goal(
            &setup.sig,
            "gamma_after_alpha",
            alpha.compose(&gamma)?,
            Diagram::identity(xa),
            setup.rules(),
            budget,
        )?,
    ];
    Ok(Verification {
        signature: setup.sig,
        goals,
    })
}

/// Fixed signature for the mate theorem: objects `X A B`, `a : A X -> X A`,
/// `b : B X -> X B`, `binv : X B -> B X`, `eta : 1 -> B A`, `eps : A B -> 1`.
#[derive(Clone, Debug)]
pub struct Theorem3Setup {
    pub sig: Signature,
    pub x: ObjectWord,
    pub a: ObjectWord,
    pub b: ObjectWord,
    pub co_a: GenId,
    pub co_b: GenId,
    pub binv: GenId,
    pub eta: GenId,
    pub eps: GenId,
    pub duality: DualityData,
    pub on_a: CoCommutationStructure,
    pub on_b: CoCommutationStructure,
}

pub const TRIANGLE_A: &str = "triangle_A";
pub const TRIANGLE_B: &str = "triangle_B";
pub const ETA_COSQUARE: &str = "eta_cosquare";
pub const EPS_COSQUARE: &str = "eps_cosquare";

impl Theorem3Setup {
    pub fn new() -> Result<Self> {
        let mut sig = Signature::new();
        let x = ObjectWord::new(vec![sig.add_object("X")?]);
        let a = ObjectWord::new(vec![sig.add_object("A")?]);
        let b = ObjectWord::new(vec![sig.add_object("B")?]);
        let unit = ObjectWord::unit();
        let co_a = sig.add_morphism("a", a.concat(&x), x.concat(&a))?;
        let co_b = sig.add_morphism("b", b.concat(&x), x.concat(&b))?;
        let binv = sig.add_morphism("binv", x.concat(&b), b.concat(&x))?;
        let eta = sig.add_morphism("eta", unit.clone(), b.concat(&a))?;
        let eps = sig.add_morphism("eps", a.concat(&b), unit)?;

        let duality = DualityData::new(&sig, a.clone(), b.clone(), eta, eps)?;
        let on_a = CoCommutationStructure::from_generator(&sig, x.clone(), a.clone(), co_a)?;
        let on_b = CoCommutationStructure::from_generator(&sig, x.clone(), b.clone(), co_b)?;
        let trivial = CoCommutationStructure::trivial(x.clone());

        let (tri_a, tri_b) = duality.triangle_rules(&sig)?;
        let b_d = sig.generator(co_b);
        let binv_d = sig.generator(binv);
        let b_binv = RewriteRule::new("b_binv", binv_d.compose(&b_d)?, Diagram::identity(x.concat(&b)))?;
        let binv_b = RewriteRule::new("binv_b", b_d.compose(&binv_d)?, Diagram::identity(b.concat(&x)))?;
        let c = cocommutation_tensor(&on_b, &on_a)?;
        let c_ab = cocommutation_tensor(&on_a, &on_b)?;
        let eta_co = cocommutation_square(ETA_COSQUARE, &duality.eta(&sig), &trivial, &c)?;
        let eps_co = cocommutation_square(EPS_COSQUARE, &duality.eps(&sig), &c_ab, &trivial)?;
        for rule in [tri_a, tri_b, b_binv, binv_b, eta_co, eps_co] {
            sig.add_equation(rule)?;
        }
        Ok(Theorem3Setup {
            sig,
            x,
            a,
            b,
            co_a,
            co_b,
            binv,
            eta,
            eps,
            duality,
            on_a,
            on_b,
        })
    }

    /// The composite through `binv` that should equal `a`.
    pub fn expression(&self) -> Diagram {
        theorem3_expression(&self.sig, &self.duality, &self.x, self.binv).expect("fixed signature is well-typed")
    }

    /// The candidate inverse of `b`.
    pub fn delta(&self) -> Diagram {
        dual_candidate_inverse(&self.sig, &self.duality, &self.on_a).expect("fixed signature is well-typed")
    }

    /// The composite co-commutation on `B A`.
    pub fn composite_on_ba(&self) -> Diagram {
        cocommutation_tensor(&self.on_b, &self.on_a)
            .expect("fixed signature is well-typed")
            .map
    }

    pub fn rules(&self) -> &[RewriteRule] {
        self.sig.equations()
    }

    /// Triangles and compatibility squares only; no inverse for `b`.
    pub fn compatibility_rules(&self) -> Vec<RewriteRule> {
        self.rules()
            .iter()
            .filter(|r| [TRIANGLE_A, TRIANGLE_B, ETA_COSQUARE, EPS_COSQUARE].contains(&r.name.as_str()))
            .cloned()
            .collect()
    }
}

/// Prove that the expression through `binv` equals `a`, once with every
/// hypothesis and once with the counit square withheld.
pub fn verify_theorem3() -> Result<Verification> {
    verify_theorem3_with(SearchBudget::default())
}

pub fn verify_theorem3_with(budget: SearchBudget) -> Result<Verification> {
    let setup = Theorem3Setup::new()?;
    let a = setup.sig.generator(setup.co_a);
    let unit_route: Vec<RewriteRule> = setup
        .rules()
        .iter()
        .filter(|r| r.name != EPS_COSQUARE)
        .cloned()
        .collect();
    let goals = vec![
        prove_goal(
            &setup.sig,
            "a_via_binv",
            setup.expression(),
            a.clone(),
            setup.rules(),
            budget,
        )?,
        // without the counit square the only route goes through the unit square
        prove_goal(
            &setup.sig,
            "a_via_binv_unit_square",
            setup.expression(),
            a,
            &unit_route,
            budget,
        )?,
    ];
    Ok(Verification {
        signature: setup.sig,
        goals,
    })
}

/// Prove that `delta` is a two-sided inverse of `b` using only the
/// triangles and the compatibility squares.
pub fn theorem1_dual_inverse() -> Result<Verification> {
    theorem1_dual_inverse_with(SearchBudget::default())
}

pub fn theorem1_dual_inverse_with(budget: SearchBudget) -> Result<Verification> {
    let setup = Theorem3Setup::new()?;
    let rules = setup.compatibility_rules();
    let delta = setup.delta();
    let b = setup.sig.generator(setup.co_b);
    let goals = vec![
        prove_goal(
            &setup.sig,
            "delta_after_b",
            b.compose(&delta)?,
            Diagram::identity(setup.b.concat(&setup.x)),
            &rules,
            budget,
        )?,
        prove_goal(
            &setup.sig,
            "b_after_delta",
            delta.compose(&b)?,
            Diagram::identity(setup.x.concat(&setup.b)),
            &rules,
            budget,
        )?,
    ];
    Ok(Verification {
        signature: setup.sig,
        goals,
    })
}
