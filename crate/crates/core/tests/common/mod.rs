#![allow(dead_code)]

pub mod closure;

use std::collections::{BTreeSet, VecDeque};

use commuter_core::moncat::{Diagram, ObjectWord, Signature, Slice};

/// Objects `X A B`; a mix of wide, narrow, and empty-sided generators.
pub fn mixed_signature() -> Signature {
    let mut sig = Signature::new();
    for o in ["X", "A", "B"] {
        sig.add_object(o).unwrap();
    }
    let w = |sig: &Signature, n: &[&str]| sig.word(n).unwrap();
    let gens: [(&str, &[&str], &[&str]); 6] = [
        ("alpha", &["X", "A"], &["A", "X"]),
        ("beta", &["X", "B"], &["B", "X"]),
        ("eta", &[], &["B", "A"]),
        ("eps", &["A", "B"], &[]),
        ("f", &["X"], &["X"]),
        ("m", &["A", "A"], &["A"]),
    ];
    for (name, dom, cod) in gens {
        let (dom, cod) = (w(&sig, dom), w(&sig, cod));
        sig.add_morphism(name, dom, cod).unwrap();
    }
    sig
}

/// Wire labels: `Input(k)` for input wire `k`, `Made(s, j)` for output `j`
/// of slice `s` in the original numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Wire {
    Input(usize),
    Made(usize, usize),
}

/// Apply labelled slices in order; `None` if a slice does not consume the
/// wires it is recorded to consume.
fn run(sig: &Signature, input_len: usize, events: &[(usize, Slice)], consumed: &[Vec<Wire>]) -> Option<Vec<Wire>> {
    let mut word: Vec<Wire> = (0..input_len).map(Wire::Input).collect();
    for &(label, s) in events {
        let g = sig.morphism(s.gen);
        if s.offset + g.dom.len() > word.len() || word[s.offset..s.offset + g.dom.len()] != consumed[label][..] {
            return None;
        }
        let made = (0..g.cod.len()).map(|j| Wire::Made(label, j));
        word.splice(s.offset..s.offset + g.dom.len(), made);
    }
    Some(word)
}

/// The interchange class by wire identity, without the engine's swap rules:
/// two consecutive slices may trade places at any offsets such that each
/// still eats exactly the same wires and the final labelled word is
/// unchanged.
pub fn oracle_class(sig: &Signature, d: &Diagram) -> BTreeSet<Vec<Slice>> {
    let n_in = d.input().len();
    let mut word: Vec<Wire> = (0..n_in).map(Wire::Input).collect();
    let mut consumed = Vec::new();
    for (k, s) in d.slices().iter().enumerate() {
        let g = sig.morphism(s.gen);
        consumed.push(word[s.offset..s.offset + g.dom.len()].to_vec());
        word.splice(
            s.offset..s.offset + g.dom.len(),
            (0..g.cod.len()).map(|j| Wire::Made(k, j)),
        );
    }
    let target = word;
    let start: Vec<(usize, Slice)> = d.slices().iter().copied().enumerate().collect();
    let mut seen = BTreeSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(ev) = queue.pop_front() {
        for i in 0..ev.len().saturating_sub(1) {
            let before = run(sig, n_in, &ev[..i], &consumed).expect("states in the class are valid");
            let width = before.len() + 4;
            for o2 in 0..=width {
                for o1 in 0..=width {
                    let mut next = ev.clone();
                    next[i] = (ev[i + 1].0, Slice::new(o2, ev[i + 1].1.gen));
                    next[i + 1] = (ev[i].0, Slice::new(o1, ev[i].1.gen));
                    if run(sig, n_in, &next, &consumed).as_ref() == Some(&target) && seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    seen.into_iter()
        .map(|ev| ev.into_iter().map(|(_, s)| s).collect())
        .collect()
}

pub fn word(sig: &Signature, names: &[&str]) -> ObjectWord {
    sig.word(names).unwrap()
}
