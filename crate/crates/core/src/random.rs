//! Seeded pseudo-random numbers and random well-typed diagrams.
//!
//! The generator is the 64-bit linear congruential generator
//! `state <- state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
//! started from the seed itself. Floats take the top 53 bits of the new
//! state, giving a uniform value in `[0, 1)`. Integers below `n` take the top
//! 32 bits modulo `n`. Everything downstream of a seed is reproducible across
//! platforms.

use crate::moncat::{Diagram, GenId, ObjId, ObjectWord, Signature, Slice};

#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        ((self.next_u64() >> 32) % n as u64) as usize
    }
}

/// A random well-typed diagram: a random input word of at most three wires,
/// then up to `max_slices` generator applications drawn uniformly from all
/// placements that keep the word at most `max_width` wires wide.
pub fn random_diagram(sig: &Signature, rng: &mut Lcg, max_slices: usize, max_width: usize) -> Diagram {
    let n_obj = sig.objects().len();
    let width = rng.below(max_width.min(3) + 1);
    let input: Vec<ObjId> = (0..width).map(|_| ObjId(rng.below(n_obj))).collect();
    let input = ObjectWord::new(input);
    let target = rng.below(max_slices + 1);
    let mut slices = Vec::with_capacity(target);
    let mut word = input.clone();
    for _ in 0..target {
        let mut candidates = Vec::new();
        for (gi, g) in sig.morphisms().iter().enumerate() {
            if g.dom.len() > word.len() || word.len() - g.dom.len() + g.cod.len() > max_width {
                continue;
            }
            for off in 0..=word.len() - g.dom.len() {
                if word.embeds_at(&g.dom, off) {
                    candidates.push(Slice::new(off, GenId(gi)));
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        let s = candidates[rng.below(candidates.len())];
        let g = sig.morphism(s.gen);
        word = word.splice(s.offset, g.dom.len(), &g.cod);
        slices.push(s);
    }
    Diagram::from_parts_unchecked(input, slices, word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcg_is_reproducible_and_in_range() {
        let mut a = Lcg::new(42);
        let mut b = Lcg::new(42);
        for _ in 0..1000 {
            let x = a.next_f64();
            assert_eq!(x, b.next_f64());
            assert!((0.0..1.0).contains(&x));
        }
        let mut c = Lcg::new(7);
        assert!((0..1000).all(|_| c.below(5) < 5));
        // first output pinned for seed 42
        assert_eq!(
            Lcg::new(42).next_u64(),
            42u64
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407)
        );
    }
}
