//! The prover against the exhaustive closure in `common::closure`.

mod common;

use std::collections::HashMap;

use common::closure::{all_diagrams, components, MICRO};
use commuter_core::dsl::parse;
use commuter_core::moncat::Diagram;
use commuter_core::random::Lcg;
use commuter_core::rewrite::{prove_equal, replay_with, ProveError, SearchBudget};

#[test]
fn prover_agrees_with_exhaustive_closure() {
    let doc = parse(MICRO).unwrap();
    let sig = &doc.signature;
    let rules = sig.equations().to_vec();
    let budget = SearchBudget {
        max_depth_per_side: 12,
        max_nodes: 50_000,
        linearization_cap: 10_000,
    };
    let mut rng = Lcg::new(9);
    let (mut proved, mut refuted) = (0, 0);
    for input in [&["P", "Q"][..], &["P", "P"], &["P", "Q", "P"]] {
        let input = sig.word(input).unwrap();
        for n in 1..=4 {
            let ds = all_diagrams(sig, &input, n);
            let comp = components(sig, &ds, &rules);
            let mut by_comp: HashMap<usize, Vec<&Diagram>> = HashMap::new();
            for d in &ds {
                by_comp.entry(comp[d.slices()]).or_default().push(d);
            }
            let mut pairs = Vec::new();
            for _ in 0..15 {
                let d = ds[rng.below(ds.len())].clone();
                let same = &by_comp[&comp[d.slices()]];
                pairs.push((d.clone(), same[rng.below(same.len())].clone()));
                let other = ds[rng.below(ds.len())].clone();
                if other.output() == d.output() {
                    pairs.push((d, other));
                }
            }
            for (d, e) in pairs {
                let expected = comp[d.slices()] == comp[e.slices()];
                match prove_equal(sig, &d, &e, &rules, budget) {
                    Ok(trace) => {
                        assert!(
                            expected,
                            "proved a false equation {} = {}",
                            sig.render_diagram(&d),
                            sig.render_diagram(&e)
                        );
                        assert!(replay_with(sig, &rules, &trace, 10_000).unwrap());
                        proved += 1;
                    }
                    Err(ProveError::Exhausted(stats)) => {
                        assert!(
                            !expected,
                            "missed {} = {}: {stats:?}",
                            sig.render_diagram(&d),
                            sig.render_diagram(&e)
                        );
                        assert!(stats.complete, "inconclusive search on a finite class: {stats:?}");
                        refuted += 1;
                    }
                    Err(other) => panic!("{other}"),
                }
            }
        }
    }
    assert!(proved > 50 && refuted > 20, "proved {proved}, refuted {refuted}");
}

#[test]
fn different_slice_counts_never_meet() {
    let doc = parse(MICRO).unwrap();
    let sig = &doc.signature;
    let f = sig.generator_named("f").unwrap();
    let ff = f.compose(&f).unwrap();
    let fff = ff.compose(&f).unwrap();
    let r = prove_equal(sig, &f, &fff, sig.equations(), SearchBudget::default());
    assert!(matches!(r, Err(ProveError::Exhausted(s)) if s.complete));
    assert!(prove_equal(
        sig,
        &ff,
        &sig.generator_named("g")
            .unwrap()
            .compose(&sig.generator_named("g").unwrap())
            .unwrap(),
        sig.equations(),
        SearchBudget::default()
    )
    .is_ok());
}
