use std::fs;
use std::path::PathBuf;

use cluster_loops::corpus::{random_arc, random_surface};
use cluster_loops::loopgraph::build_loop_graph;
use cluster_loops::poset::{check_lattice, loop_arrows, quiver_of_loop};
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
fn figure_lattices() {
    for (dir, n) in [("fig10", 15), ("fig12", 12)] {
        let (s, g) = load(dir);
        let lg = build_loop_graph(&s, &g).unwrap();
        let c = check_lattice(&lg).unwrap();
        assert_eq!(c.matchings, n);
        assert_eq!(c.ideals, n);
        assert!(c.ok(lg.len()), "{dir}: {c:?}");
    }
}

#[test]
fn figure_quivers() {
    let (s, g) = load("fig10");
    let lg = build_loop_graph(&s, &g).unwrap();
    let mut a = loop_arrows(&lg);
    a.sort();
    assert_eq!(a, vec![(1, 0), (2, 1), (2, 3), (3, 0), (4, 3), (4, 5)]);
    let (s, g) = load("fig12");
    let lg = build_loop_graph(&s, &g).unwrap();
    let mut a = loop_arrows(&lg);
    a.sort();
    assert_eq!(a, vec![(1, 0), (2, 1), (2, 3), (3, 0), (3, 5), (4, 3), (4, 5)]);
}

/// Heights of good matchings are exactly the order ideals of the quiver and
/// positive twists are exactly the covering relations, on random notched arcs.
#[test]
fn random_lattices() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for i in 0..600 {
        let t = random_surface(4 + i % 3, 1 + i % 3, i % 5, &mut rng);
        let s = Surface::build(&t).unwrap();
        let Some(g) = random_arc(&s, 6, 0.9, &mut rng) else {
            continue;
        };
        if g.n_notches() == 0 {
            continue;
        }
        let Ok(lg) = build_loop_graph(&s, &g) else { continue };
        quiver_of_loop(&lg).unwrap();
        let c = check_lattice(&lg).unwrap();
        assert!(c.ok(lg.len()), "{:?}: {c:?}", g.crossings);
        checked += 1;
    }
    assert!(checked >= 100, "only {checked} loop graphs");
}
