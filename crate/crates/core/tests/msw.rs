use std::fs;
use std::path::PathBuf;

use cluster_loops::corpus::{random_arc, random_surface};
use cluster_loops::expansion::{expand, VariableAssignment};
use cluster_loops::loopgraph::CutClass;
use cluster_loops::mswcheck::{msw_expand_double, msw_expand_single, phi_double, phi_single, SymClass};
use cluster_loops::surface::{ArcFile, Surface, TaggedArc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn load(dir: &str) -> (Surface, TaggedArc) {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(dir);
    let s = Surface::from_json(&fs::read_to_string(root.join("surface.json")).unwrap()).unwrap();
    let a = ArcFile::from_json(&fs::read_to_string(root.join("arc.json")).unwrap()).unwrap();
    let g = s.resolve_arc(&a).unwrap();
    (s, g)
}

#[test]
fn fig10_symmetric_matchings() {
    let (s, g) = load("fig10");
    let va = VariableAssignment::new(&s);
    let r = phi_single(&s, &g, &va).unwrap();
    assert_eq!((r.ell.k, r.ell.l), (3, 3));
    assert_eq!(r.ell.graph.len(), 9);
    assert_eq!(r.terms.len(), 15);
    assert!(r.ok());
    let all = r.ell.graph.perfect_matchings().len();
    assert!(
        all > 15,
        "some perfect matchings of the loop graph of ℓ_p are not symmetric"
    );
    let counts = r.class_counts();
    let e: usize = counts
        .iter()
        .filter(|((c, _), _)| *c == SymClass::E)
        .map(|(_, n)| n)
        .sum();
    let left = counts.get(&(SymClass::S, CutClass::Left)).copied().unwrap_or(0);
    assert_eq!(e + left, 15);
    assert_eq!(
        msw_expand_single(&s, &g, &va).unwrap(),
        expand(&s, &g, &va).unwrap().polynomial
    );
}

#[test]
fn fig12_compatible_pairs() {
    let (s, g) = load("fig12");
    let va = VariableAssignment::new(&s);
    let r = phi_double(&s, &g, &va).unwrap();
    assert_eq!(r.terms.len(), 12);
    assert_eq!(r.good.len(), 12);
    assert!(r.ok());
    assert_eq!(
        msw_expand_double(&s, &g, &va).unwrap(),
        expand(&s, &g, &va).unwrap().polynomial
    );
}

/// Random notched arcs with `notches` notched ends on which the loop-graph
/// formula applies; returns how many were checked.
fn check_random(seed: u64, notches: usize, want: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for i in 0..20_000 {
        if checked == want {
            break;
        }
        let t = random_surface(4 + i % 3, 1 + i % 3, i % 9, &mut rng);
        let s = Surface::build(&t).unwrap();
        let Some(g) = random_arc(&s, 6, 1.0, &mut rng).filter(|g| g.n_notches() == notches) else {
            continue;
        };
        let va = VariableAssignment::new(&s);
        let Ok(e) = expand(&s, &g, &va) else { continue };
        if notches == 1 {
            let r = phi_single(&s, &g, &va).unwrap();
            assert!(r.ok(), "{:?}: {:?}", g.crossings, r.class_counts());
            assert_eq!(
                msw_expand_single(&s, &g, &va).unwrap(),
                e.polynomial,
                "{:?}",
                g.crossings
            );
        } else {
            let r = phi_double(&s, &g, &va).unwrap();
            assert!(r.ok(), "{:?}: {:?}", g.crossings, r.class_counts());
            assert_eq!(
                msw_expand_double(&s, &g, &va).unwrap(),
                e.polynomial,
                "{:?}",
                g.crossings
            );
        }
        checked += 1;
    }
    checked
}

#[test]
fn random_singly_notched_agree() {
    assert_eq!(check_random(5, 1, 60), 60);
}

#[test]
fn random_doubly_notched_agree() {
    assert_eq!(check_random(6, 2, 30), 30);
}
