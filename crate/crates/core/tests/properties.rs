use cluster_loops::corpus::{random_arc, random_surface};
use cluster_loops::expansion::{expand, VariableAssignment};
use cluster_loops::laurent::{LaurentPolynomial, Monomial, Var};
use cluster_loops::mutation::{mutate_matrix, Seed};
use cluster_loops::poset::HasseQuiver;
use cluster_loops::snakegraph::{Glue, SnakeGraph};
use cluster_loops::surface::Surface;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn skew_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2usize..6).prop_flat_map(|n| {
        proptest::collection::vec(-2i64..=2, n * (n - 1) / 2).prop_map(move |upper| {
            let mut b = vec![vec![0; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let v = it.next().unwrap();
                    b[i][j] = v;
                    b[j][i] = -v;
                }
            }
            b
        })
    })
}

fn monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((0u32..3, -2i32..=2, any::<bool>()), 0..4).prop_map(|v| {
        Monomial::from_pairs(
            v.into_iter()
                .map(|(i, e, x)| (if x { Var::X(i) } else { Var::Y(i) }, e)),
        )
    })
}

fn laurent() -> impl Strategy<Value = LaurentPolynomial> {
    proptest::collection::vec((monomial(), -3i64..=3), 0..5)
        .prop_map(|v| LaurentPolynomial::from_terms(v.into_iter().map(|(m, c)| (m, BigInt::from(c)))))
}

fn is_skew(b: &[Vec<i64>]) -> bool {
    (0..b.len()).all(|i| (0..b.len()).all(|j| b[i][j] == -b[j][i]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mutation_is_an_involution(b in skew_matrix(), steps in proptest::collection::vec(0usize..5, 0..3), i in 0usize..5) {
        let n = b.len();
        let vars: Vec<u32> = (0..n as u32).collect();
        let mut seed = Seed::initial(&b, &vars).unwrap();
        for s in steps {
            seed = seed.mutate(s % n, &vars).unwrap();
        }
        let twice = seed.mutate(i % n, &vars).unwrap().mutate(i % n, &vars).unwrap();
        prop_assert_eq!(twice, seed);
    }

    #[test]
    fn matrix_mutation_keeps_skew_symmetry(b in skew_matrix(), i in 0usize..5) {
        let m = mutate_matrix(&b, i % b.len());
        prop_assert!(is_skew(&m));
        prop_assert_eq!(mutate_matrix(&m, i % b.len()), b);
    }

    #[test]
    fn cluster_variables_have_monomial_denominators(b in skew_matrix(), steps in proptest::collection::vec(0usize..5, 1..5)) {
        let n = b.len();
        let vars: Vec<u32> = (0..n as u32).collect();
        let mut seed = Seed::initial(&b, &vars).unwrap();
        for s in steps {
            seed = seed.mutate(s % n, &vars).unwrap();
            for x in seed.cluster() {
                let num = x.divide_by_monomial(&x.monomial_content());
                prop_assert!(num.terms().all(|(m, _)| m.is_polynomial()));
            }
        }
    }

    #[test]
    fn laurent_ring_laws(p in laurent(), q in laurent(), r in laurent()) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn exact_division_undoes_multiplication(p in laurent(), q in laurent()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).exact_divide(&q).unwrap(), p);
    }

    #[test]
    fn matching_enumerators_agree(glue in proptest::collection::vec(any::<bool>(), 0..9)) {
        let glue: Vec<Glue> = glue.into_iter().map(|t| if t { Glue::Top } else { Glue::Right }).collect();
        let g = SnakeGraph::from_glue(&glue);
        let fast = g.perfect_matchings();
        let mut slow = g.perfect_matchings_bruteforce();
        let mut sorted = fast.clone();
        sorted.sort_by(|a, b| a.edges.cmp(&b.edges));
        slow.sort_by(|a, b| a.edges.cmp(&b.edges));
        prop_assert_eq!(sorted, slow);
        prop_assert!(fast.iter().all(|m| g.is_perfect(m)));
    }

    #[test]
    fn order_ideal_enumerators_agree(n in 1usize..8, pairs in proptest::collection::vec((0usize..8, 0usize..8), 0..10)) {
        let arrows: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a > b).collect();
        let q = HasseQuiver::new(n, &arrows);
        prop_assume!(q.is_ok());
        let q = q.unwrap();
        let mut fast = q.order_ideals();
        let mut slow = q.order_ideals_bruteforce();
        fast.sort();
        slow.sort();
        prop_assert_eq!(&fast, &slow);
        prop_assert!(fast.iter().all(|i| q.is_order_ideal(i)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expansions_are_positive_over_the_crossing_monomial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_surface(4 + (seed % 4) as usize, (seed % 3) as usize, (seed % 7) as usize, &mut rng);
        let s = Surface::build(&t).unwrap();
        prop_assert!(is_skew(&s.adjacency_matrix()));
        let g = random_arc(&s, 6, 0.7, &mut rng);
        prop_assume!(g.is_some());
        let g = g.unwrap();
        let va = VariableAssignment::new(&s);
        let e = expand(&s, &g, &va);
        prop_assume!(e.is_ok());
        let e = e.unwrap();
        let num = e.numerator();
        prop_assert!(num.all_coefficients_positive());
        prop_assert!(num.terms().all(|(m, _)| m.is_polynomial()));
        prop_assert_eq!(num.divide_by_monomial(&e.cross), e.polynomial);
    }
}
