//! Exhaustive rewrite closure on a micro-signature whose rules preserve
//! slice counts, so every equivalence class is finite.

use std::collections::{BTreeSet, HashMap, VecDeque};

use commuter_core::moncat::{Diagram, ObjectWord, Signature, Slice};
use commuter_core::rewrite::RewriteRule;

use super::oracle_class;

pub const MICRO: &str = "
obj P Q
gen f : P -> P
gen g : P -> P
gen s : P Q -> Q P
rule nat_f : ((f * id Q) ; s) = (s ; (id Q * f))
rule ff_gg : (f ; f) = (g ; g)
";

pub fn all_diagrams(sig: &Signature, input: &ObjectWord, n: usize) -> Vec<Diagram> {
    let mut out = vec![Diagram::identity(input.clone())];
    for _ in 0..n {
        let mut next = Vec::new();
        for d in &out {
            let w = d.output();
            for (gi, g) in sig.morphisms().iter().enumerate() {
                for off in 0..=w.len().saturating_sub(g.dom.len()) {
                    if g.dom.len() <= w.len() && w.embeds_at(&g.dom, off) {
                        let mut slices = d.slices().to_vec();
                        slices.push(Slice::new(off, commuter_core::GenId(gi)));
                        next.push(Diagram::new(sig, input.clone(), slices).unwrap());
                    }
                }
            }
        }
        out = next;
    }
    out
}

/// Rewrites of one raw linearization: contiguous blocks equal to a shifted
/// rule side, replaced by the other side.
pub fn raw_rewrites(sig: &Signature, d: &Diagram, rules: &[RewriteRule]) -> Vec<Vec<Slice>> {
    let mut out = Vec::new();
    let words = d.words(sig);
    for r in rules {
        for (from, to) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
            let m = from.len();
            if m > d.len() {
                continue;
            }
            for (start, w) in words.iter().enumerate().take(d.len() - m + 1) {
                for k in 0..=w.len().saturating_sub(from.input().len()) {
                    if !w.embeds_at(from.input(), k) {
                        continue;
                    }
                    let hit = (0..m).all(|t| {
                        let (a, b) = (d.slices()[start + t], from.slices()[t]);
                        a.gen == b.gen && a.offset == b.offset + k
                    });
                    if hit {
                        let mut slices = d.slices()[..start].to_vec();
                        slices.extend(to.slices().iter().map(|s| Slice::new(s.offset + k, s.gen)));
                        slices.extend_from_slice(&d.slices()[start + m..]);
                        out.push(slices);
                    }
                }
            }
        }
    }
    out
}

/// Component index of every diagram, by BFS over swaps and rewrites.
pub fn components(sig: &Signature, ds: &[Diagram], rules: &[RewriteRule]) -> HashMap<Vec<Slice>, usize> {
    let mut comp: HashMap<Vec<Slice>, usize> = HashMap::new();
    let input = ds[0].input().clone();
    let mut next_id = 0;
    for d in ds {
        if comp.contains_key(d.slices()) {
            continue;
        }
        let id = next_id;
        next_id += 1;
        let mut queue = VecDeque::from([d.slices().to_vec()]);
        comp.insert(d.slices().to_vec(), id);
        while let Some(cur) = queue.pop_front() {
            let cd = Diagram::new(sig, input.clone(), cur).unwrap();
            let mut nbrs: BTreeSet<Vec<Slice>> = oracle_class(sig, &cd);
            nbrs.extend(raw_rewrites(sig, &cd, rules));
            for nb in nbrs {
                if let std::collections::hash_map::Entry::Vacant(e) = comp.entry(nb.clone()) {
                    e.insert(id);
                    queue.push_back(nb);
                }
            }
        }
    }
    comp
}
