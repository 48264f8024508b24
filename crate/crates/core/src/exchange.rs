//! Equality of diagrams modulo the interchange law.
//!
//! Two consecutive slices commute when the later one's input interval lies
//! entirely left or entirely right of the earlier one's output interval in
//! the word between them. When both intervals are empty at the same wire gap
//! (a counit followed by a unit, say) both placements are legal and produce
//! different slice lists, so an interchange class is not a plain trace-monoid
//! class. We therefore compute the class as the closure under all legal
//! adjacent swaps and take the least member under the `(offset, generator)`
//! key as its canonical form.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::moncat::{Diagram, Signature, Slice};

/// Default bound on the size of an interchange class.
pub const DEFAULT_LINEARIZATION_CAP: usize = 10_000;

/// Which side of the earlier slice the later slice sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn swap_sides(sig: &Signature, first: Slice, second: Slice) -> (bool, bool) {
    let g1 = sig.morphism(first.gen);
    let g2 = sig.morphism(second.gen);
    let left = second.offset + g2.dom.len() <= first.offset;
    let right = second.offset >= first.offset + g1.cod.len();
    (left, right)
}

fn swap_pair(sig: &Signature, first: Slice, second: Slice, side: Side) -> (Slice, Slice) {
    let g1 = sig.morphism(first.gen);
    let g2 = sig.morphism(second.gen);
    match side {
        // second moves first and keeps its offset; first shifts by second's width change
        Side::Left => (
            Slice::new(second.offset, second.gen),
            Slice::new(first.offset + g2.cod.len() - g2.dom.len(), first.gen),
        ),
        Side::Right => (
            Slice::new(second.offset + g1.dom.len() - g1.cod.len(), second.gen),
            Slice::new(first.offset, first.gen),
        ),
    }
}

/// Legal placements for exchanging slices `i` and `i + 1` (zero, one or two).
pub fn swap_sides_at(sig: &Signature, d: &Diagram, i: usize) -> Vec<Side> {
    let s = d.slices();
    if i + 1 >= s.len() {
        return Vec::new();
    }
    let (l, r) = swap_sides(sig, s[i], s[i + 1]);
    let mut out = Vec::with_capacity(2);
    if l {
        out.push(Side::Left);
    }
    if r {
        out.push(Side::Right);
    }
    out
}

/// Exchange slices `i` and `i + 1` using the given placement.
pub fn swap_with(sig: &Signature, d: &Diagram, i: usize, side: Side) -> Result<Diagram> {
    let len = d.len();
    if i + 1 >= len {
        return Err(Error::SliceIndex { index: i, len });
    }
    if !swap_sides_at(sig, d, i).contains(&side) {
        return Err(Error::NotSwappable(i));
    }
    let mut slices = d.slices().to_vec();
    let (a, b) = swap_pair(sig, slices[i], slices[i + 1], side);
    slices[i] = a;
    slices[i + 1] = b;
    Ok(Diagram::from_parts_unchecked(
        d.input().clone(),
        slices,
        d.output().clone(),
    ))
}

/// Exchange two independent consecutive slices. When both placements are
/// legal the left one is used.
pub fn adjacent_swap(sig: &Signature, d: &Diagram, i: usize) -> Result<Diagram> {
    let len = d.len();
    if i + 1 >= len {
        return Err(Error::SliceIndex { index: i, len });
    }
    match swap_sides_at(sig, d, i).first() {
        Some(&side) => swap_with(sig, d, i, side),
        None => Err(Error::NotSwappable(i)),
    }
}

/// Members of an interchange class, each with the permutation taking the
/// original slice order to that member's order (`perm[k]` is the original
/// index of the member's `k`-th slice). Sorted by the canonical key.
#[derive(Clone, Debug)]
pub struct InterchangeClass {
    members: Vec<(Diagram, Vec<usize>)>,
}

impl InterchangeClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn canonical(&self) -> &Diagram {
        &self.members[0].0
    }

    pub fn get(&self, index: usize) -> Option<&Diagram> {
        self.members.get(index).map(|(d, _)| d)
    }

    pub fn diagrams(&self) -> impl Iterator<Item = &Diagram> {
        self.members.iter().map(|(d, _)| d)
    }

    pub fn members(&self) -> &[(Diagram, Vec<usize>)] {
        &self.members
    }

    /// Position of a member in the sorted list.
    pub fn index_of(&self, d: &Diagram) -> Option<usize> {
        self.members.binary_search_by(|(m, _)| m.slices().cmp(d.slices())).ok()
    }
}

/// Swap closure of `d`: every member with its permutation, or, when more
/// than `cap` members exist, the members found before giving up.
pub(crate) fn closure(
    sig: &Signature,
    d: &Diagram,
    cap: usize,
) -> std::result::Result<InterchangeClass, Vec<Vec<Slice>>> {
    let n = d.len();
    let mut seen: HashMap<Vec<Slice>, Vec<usize>> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(d.slices().to_vec(), (0..n).collect());
    queue.push_back(d.slices().to_vec());
    if seen.len() > cap {
        return Err(seen.into_keys().collect());
    }
    while let Some(slices) = queue.pop_front() {
        let perm = seen[&slices].clone();
        for i in 0..n.saturating_sub(1) {
            let (l, r) = swap_sides(sig, slices[i], slices[i + 1]);
            for (ok, side) in [(l, Side::Left), (r, Side::Right)] {
                if !ok {
                    continue;
                }
                let mut next = slices.clone();
                let (a, b) = swap_pair(sig, slices[i], slices[i + 1], side);
                next[i] = a;
                next[i + 1] = b;
                if seen.contains_key(&next) {
                    continue;
                }
                let mut p = perm.clone();
                p.swap(i, i + 1);
                seen.insert(next.clone(), p);
                if seen.len() > cap {
                    return Err(seen.into_keys().collect());
                }
                queue.push_back(next);
            }
        }
    }
    let mut members: Vec<(Diagram, Vec<usize>)> = seen
        .into_iter()
        .map(|(slices, perm)| {
            (
                Diagram::from_parts_unchecked(d.input().clone(), slices, d.output().clone()),
                perm,
            )
        })
        .collect();
    members.sort_by(|a, b| a.0.slices().cmp(b.0.slices()));
    Ok(InterchangeClass { members })
}

/// Closure of `d` under adjacent swaps, failing once more than `cap`
/// distinct members have been found.
pub fn interchange_class(sig: &Signature, d: &Diagram, cap: usize) -> Result<InterchangeClass> {
    closure(sig, d, cap).map_err(|partial| Error::LinearizationBudget {
        lower_bound: partial.len(),
        cap,
    })
}

/// All distinct linearizations of the interchange class, in canonical-key order.
pub fn linearizations(sig: &Signature, d: &Diagram, cap: usize) -> Result<Vec<Diagram>> {
    Ok(interchange_class(sig, d, cap)?
        .members
        .into_iter()
        .map(|(d, _)| d)
        .collect())
}

/// Canonical representative plus the slice permutation that reaches it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub diagram: Diagram,
    pub certificate: Vec<usize>,
}

/// Lexicographically least member of the interchange class under the key
/// `(offset, generator id)`. Total: the class is explored without a cap.
pub fn canonicalize(sig: &Signature, d: &Diagram) -> CanonicalForm {
    let class = interchange_class(sig, d, usize::MAX).expect("uncapped closure cannot exceed its cap");
    let (diagram, certificate) = class.members.into_iter().next().expect("class contains d");
    CanonicalForm { diagram, certificate }
}

pub fn interchange_equal(sig: &Signature, d1: &Diagram, d2: &Diagram) -> bool {
    if !d1.same_boundaries(d2) || d1.len() != d2.len() {
        return false;
    }
    if d1 == d2 {
        return true;
    }
    canonicalize(sig, d1).diagram == canonicalize(sig, d2).diagram
}

/// Precedence between slices that holds in every linearization, stored as
/// its covering relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DependencyGraph {
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        // reachability over the covering edges
        let mut stack = vec![i];
        let mut seen = vec![false; self.nodes];
        while let Some(k) = stack.pop() {
            for &(a, b) in &self.edges {
                if a == k && !seen[b] {
                    if b == j {
                        return true;
                    }
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        false
    }
}

pub fn dependency_graph(sig: &Signature, d: &Diagram, cap: usize) -> Result<DependencyGraph> {
    let class = interchange_class(sig, d, cap)?;
    let n = d.len();
    // position[m][orig] = place of original slice `orig` in member m
    let positions: Vec<Vec<usize>> = class
        .members
        .iter()
        .map(|(_, perm)| {
            let mut pos = vec![0; n];
            for (place, &orig) in perm.iter().enumerate() {
                pos[orig] = place;
            }
            pos
        })
        .collect();
    let before = |i: usize, j: usize| positions.iter().all(|p| p[i] < p[j]);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !before(i, j) {
                continue;
            }
            let covered = (0..n).any(|k| k != i && k != j && before(i, k) && before(k, j));
            if !covered {
                edges.push((i, j));
            }
        }
    }
    Ok(DependencyGraph { nodes: n, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moncat::{GenId, ObjectWord};

    struct Fixture {
        sig: Signature,
        alpha: GenId,
        beta: GenId,
        eta: GenId,
        eps: GenId,
    }

    fn fixture() -> Fixture {
        let mut sig = Signature::new();
        let x = sig.add_object("X").unwrap();
        let a = sig.add_object("A").unwrap();
        let b = sig.add_object("B").unwrap();
        let w = |v: &[crate::moncat::ObjId]| ObjectWord::new(v.to_vec());
        let alpha = sig.add_morphism("alpha", w(&[x, a]), w(&[a, x])).unwrap();
        let beta = sig.add_morphism("beta", w(&[x, b]), w(&[b, x])).unwrap();
        let eta = sig.add_morphism("eta", w(&[]), w(&[b, a])).unwrap();
        let eps = sig.add_morphism("eps", w(&[a, b]), w(&[])).unwrap();
        Fixture {
            sig,
            alpha,
            beta,
            eta,
            eps,
        }
    }

    fn dia(f: &Fixture, input: &[&str], slices: &[(GenId, usize)]) -> Diagram {
        let w = f.sig.word(input).unwrap();
        Diagram::new(&f.sig, w, slices.iter().map(|&(g, o)| Slice::new(o, g)).collect()).unwrap()
    }

    #[test]
    fn swap_disjoint_commutation_slices() {
        let f = fixture();
        let d = dia(&f, &["X", "A", "X", "B"], &[(f.alpha, 0), (f.beta, 2)]);
        let s = adjacent_swap(&f.sig, &d, 0).unwrap();
        assert_eq!(s.slices(), &[Slice::new(2, f.beta), Slice::new(0, f.alpha)]);
        // typing oracle: both orders are well-typed with the same boundaries
        let re = Diagram::new(&f.sig, s.input().clone(), s.slices().to_vec()).unwrap();
        assert_eq!(re.output(), &f.sig.word(&["A", "X", "B", "X"]).unwrap());
        assert_eq!(adjacent_swap(&f.sig, &s, 0).unwrap(), d);
    }

    #[test]
    fn dependent_slices_refuse_to_swap() {
        let f = fixture();
        let d = dia(&f, &["X", "A"], &[(f.alpha, 0), (f.eta, 1)]);
        assert_eq!(adjacent_swap(&f.sig, &d, 0), Err(Error::NotSwappable(0)));
        assert!(matches!(adjacent_swap(&f.sig, &d, 1), Err(Error::SliceIndex { .. })));
    }

    #[test]
    fn counit_then_unit_at_same_gap_has_two_placements() {
        let f = fixture();
        let d = dia(&f, &["A", "B"], &[(f.eps, 0), (f.eta, 0)]);
        assert_eq!(swap_sides_at(&f.sig, &d, 0), vec![Side::Left, Side::Right]);
        let l = swap_with(&f.sig, &d, 0, Side::Left).unwrap();
        let r = swap_with(&f.sig, &d, 0, Side::Right).unwrap();
        assert_eq!(l.slices(), &[Slice::new(0, f.eta), Slice::new(2, f.eps)]);
        assert_eq!(r.slices(), &[Slice::new(2, f.eta), Slice::new(0, f.eps)]);
        assert_eq!(linearizations(&f.sig, &d, 10).unwrap().len(), 3);
        assert_eq!(adjacent_swap(&f.sig, &l, 0).unwrap(), d);
    }

    #[test]
    fn canonical_forms_of_identity_and_interchange() {
        let f = fixture();
        let id = Diagram::identity(f.sig.word(&["A", "X"]).unwrap());
        assert_eq!(canonicalize(&f.sig, &id).diagram, id);
        assert_eq!(linearizations(&f.sig, &id, 1).unwrap(), vec![id.clone()]);

        let d = dia(&f, &["X", "A", "X", "B"], &[(f.beta, 2), (f.alpha, 0)]);
        let e = dia(&f, &["X", "A", "X", "B"], &[(f.alpha, 0), (f.beta, 2)]);
        // both linearizations, enumerated by hand
        let lins = linearizations(&f.sig, &d, 10).unwrap();
        assert_eq!(lins, vec![e.clone(), d.clone()]);
        let c = canonicalize(&f.sig, &d);
        assert_eq!(c.diagram, e);
        assert_eq!(c.certificate, vec![1, 0]);
        assert_eq!(canonicalize(&f.sig, &e).diagram, e);
        assert!(interchange_equal(&f.sig, &d, &e));
        assert!(!interchange_equal(
            &f.sig,
            &f.sig.generator(f.alpha),
            &f.sig.generator(f.beta)
        ));
    }

    #[test]
    fn bifunctoriality_square_of_the_first_proof() {
        // (eps·X·A) then alpha  ==  (A·B·alpha) then (eps·A·X)
        let f = fixture();
        let lhs = dia(&f, &["A", "B", "X", "A"], &[(f.eps, 0), (f.alpha, 0)]);
        let rhs = dia(&f, &["A", "B", "X", "A"], &[(f.alpha, 2), (f.eps, 0)]);
        assert!(interchange_equal(&f.sig, &lhs, &rhs));
    }

    #[test]
    fn gamma_linearizations_match_permutation_filter() {
        let f = fixture();
        let gamma = dia(&f, &["A", "X"], &[(f.eta, 2), (f.beta, 1), (f.eps, 0)]);
        let lins = linearizations(&f.sig, &gamma, 100).unwrap();
        // brute force: every order of the three generators with every offset,
        // keeping the well-typed ones with the same boundaries
        let gens = [f.eta, f.beta, f.eps];
        let mut survivors = Vec::new();
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            for o0 in 0..5 {
                for o1 in 0..5 {
                    for o2 in 0..5 {
                        let slices = vec![
                            Slice::new(o0, gens[p[0]]),
                            Slice::new(o1, gens[p[1]]),
                            Slice::new(o2, gens[p[2]]),
                        ];
                        if let Ok(d) = Diagram::new(&f.sig, gamma.input().clone(), slices) {
                            if d.output() == gamma.output() {
                                survivors.push(d);
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(lins.len(), 1);
        assert_eq!(survivors, lins);
    }

    #[test]
    fn cap_is_enforced() {
        let f = fixture();
        let d = dia(&f, &["X", "A", "X", "B"], &[(f.alpha, 0), (f.beta, 2)]);
        assert_eq!(
            linearizations(&f.sig, &d, 1).unwrap_err(),
            Error::LinearizationBudget { lower_bound: 2, cap: 1 }
        );
    }

    #[test]
    fn dependency_graph_of_chain_and_independent_pair() {
        let f = fixture();
        let gamma = dia(&f, &["A", "X"], &[(f.eta, 2), (f.beta, 1), (f.eps, 0)]);
        let g = dependency_graph(&f.sig, &gamma, 100).unwrap();
        assert_eq!(g.edges, vec![(0, 1), (1, 2)]);
        assert!(g.precedes(0, 2));
        let d = dia(&f, &["X", "A", "X", "B"], &[(f.alpha, 0), (f.beta, 2)]);
        assert!(dependency_graph(&f.sig, &d, 100).unwrap().edges.is_empty());
    }
}
