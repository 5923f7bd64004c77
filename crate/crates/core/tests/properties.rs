use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cubegirth::actions::{flips, Action, TreeAction};
use cubegirth::build;
use cubegirth::constructions::{build_line_complex, find_diametric_pair, WreathGroup};
use cubegirth::families::FreeProductTree;
use cubegirth::girth::{girth_cayley, labelled, shortest_cycle_through};
use cubegirth::groups::{small_groups, GroupOps};
use cubegirth::halfspaces::engine::Probe;
use cubegirth::halfspaces::{BaseRelation, Halfspace, HyperplaneSystem};
use cubegirth::iso::isomorphic;
use cubegirth::pingpong::{build_cert_from_poles, check_free_cert, check_girth_cert, BuildParams, Built};
use cubegirth::{CubeComplexGraph, Half, Letter, VertexId, Word};

fn complex() -> impl Strategy<Value = CubeComplexGraph> {
    prop_oneof![
        (1usize..=4).prop_map(build::hypercube),
        (1usize..=4, 1usize..=5).prop_map(|(a, b)| build::grid(a, b)),
        (2usize..=40, any::<u64>()).prop_map(|(n, s)| build::random_tree(n, s)),
        (2usize..=5).prop_map(build::staircase),
        (2usize..=4, 1usize..=3).prop_map(|(k, p)| build::star(k).product(&build::path(p))),
        (1usize..=4).prop_map(|c| {
            let x = build::hypercube(2);
            let pair = find_diametric_pair(&x).unwrap().unwrap();
            build_line_complex(&x, &pair, c).unwrap().graph
        }),
    ]
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len)
        .prop_map(|ls| Word(ls.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect()))
}

/// Median of three vertices by scanning every vertex.
fn brute_median(g: &CubeComplexGraph, a: VertexId, b: VertexId, c: VertexId) -> Vec<VertexId> {
    let d = |x: VertexId, y: VertexId| g.distance(x, y).unwrap();
    g.vertices()
        .filter(|&m| d(a, m) + d(m, b) == d(a, b) && d(b, m) + d(m, c) == d(b, c) && d(a, m) + d(m, c) == d(a, c))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_edge_in_one_hyperplane(g in complex()) {
        let sys = HyperplaneSystem::new(&g).unwrap();
        let total: usize = sys.hyperplanes().iter().map(|h| h.edges.len()).sum();
        prop_assert_eq!(total, g.edge_count());
        for e in g.edges() {
            prop_assert!(sys.class_of_edge(e).is_some());
        }
    }

    #[test]
    fn vertices_are_the_ultrafilters(g in complex()) {
        let sys = HyperplaneSystem::new(&g).unwrap();
        let ufs = sys.pocset().ultrafilters(1 << 20).unwrap();
        prop_assert_eq!(ufs.len(), g.vertex_count());
        let views: BTreeSet<Vec<Halfspace>> = g.vertices().map(|v| sys.vertex_ultrafilter(v).unwrap().halfspaces).collect();
        prop_assert_eq!(views.len(), g.vertex_count());
    }

    #[test]
    fn median_agrees_with_scan(g in complex(), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        prop_assert!(g.validate_median().unwrap().is_median);
        let vs: Vec<VertexId> = g.vertices().collect();
        let [a, b, c] = [picks[0].get(&vs), picks[1].get(&vs), picks[2].get(&vs)].map(|v| *v);
        let scanned = brute_median(&g, a, b, c);
        prop_assert_eq!(scanned, vec![g.median(a, b, c).unwrap()]);
    }

    #[test]
    fn separation_hierarchy(g in complex()) {
        let sys = HyperplaneSystem::new(&g).unwrap();
        for i in 0..sys.len() {
            for j in 0..sys.len() {
                if i == j {
                    continue;
                }
                let r = sys.pair_relation(Halfspace::new(i, 0), Halfspace::new(j, 0));
                prop_assert!(!r.strongly_separated || r.separated);
                prop_assert!(!r.separated || r.base != BaseRelation::Transverse);
                prop_assert_eq!(r.base == BaseRelation::Transverse, sys.square_witness(i, j));
            }
        }
    }

    #[test]
    fn tree_separation_is_a_third_edge(n in 3usize..=30, seed in any::<u64>()) {
        let t = build::random_tree(n, seed);
        let sys = HyperplaneSystem::new(&t).unwrap();
        for i in 0..sys.len() {
            for j in 0..sys.len() {
                if i == j {
                    continue;
                }
                prop_assert!(!sys.transverse(i, j));
                let third = (0..sys.len()).any(|m| m != i && m != j && sys.separates(m, i, j));
                prop_assert_eq!(sys.strongly_separated(i, j), third);
            }
        }
    }

    #[test]
    fn factorization_multiplies_back(g in complex()) {
        let factors = g.irreducible_factorization().unwrap();
        let mut product = factors[0].clone();
        for f in &factors[1..] {
            product = product.product(f);
        }
        prop_assert!(isomorphic(&product, &g));
    }

    #[test]
    fn line_balls_are_cat0(c in 1usize..=5, n in 1usize..=3) {
        let x = build::hypercube(n);
        let pair = find_diametric_pair(&x).unwrap().unwrap();
        let ball = build_line_complex(&x, &pair, c).unwrap();
        prop_assert!(ball.graph.validate_median().unwrap().is_median);
        prop_assert!(ball.graph.vertices().all(|v| ball.graph.link_is_flag(v)));
    }

    #[test]
    fn word_evaluation_is_a_homomorphism(u in word(2, 6), v in word(2, 6), x in word(2, 4)) {
        let t = TreeAction::new(FreeProductTree::free(2));
        let x = t.tree.reduce(&x);
        prop_assert_eq!(t.apply(&u.concat(&v), &x), t.apply(&u, &t.apply(&v, &x)));
    }

    #[test]
    fn strong_separation_is_invariant(p in word(2, 4), q in word(2, 4), g in word(2, 4), lp in 0usize..4, lq in 0usize..4) {
        let t = TreeAction::new(FreeProductTree::free(2));
        let alphabet = t.tree.alphabet();
        let edge = |w: &Word, l: usize| {
            let from = t.tree.reduce(w);
            Half::new(from.clone(), t.tree.reduce(&from.concat(&Word(vec![alphabet[l]]))))
        };
        let (h, k) = (edge(&p, lp), edge(&q, lq));
        let probe = Probe::new(&t.tree, 24);
        let before = probe.strongly_separated(&h, &k).unwrap();
        let after = probe.strongly_separated(&t.apply_half(&g, &h), &t.apply_half(&g, &k)).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn flips_are_disjoint(g in word(3, 5), p in word(3, 3), l in 0usize..3) {
        let t = TreeAction::new(FreeProductTree::involutions(3));
        let from = t.tree.reduce(&p);
        let to = t.tree.reduce(&from.concat(&Word(vec![Letter::new(l, false)])));
        let h = Half::new(from, to);
        let probe = Probe::new(&t.tree, 20);
        if flips(&t, &probe, &g, &h).unwrap().is_some() {
            prop_assert!(probe.disjoint(&h, &t.apply_half(&g, &h)).unwrap());
        }
    }

    #[test]
    fn girth_is_vertex_transitive(which in any::<prop::sample::Index>(), root in any::<prop::sample::Index>()) {
        let groups = small_groups(24);
        let g = &which.get(&groups).group;
        let gens = g.generator_indices();
        let r = root.index(g.order());
        let at_root = shortest_cycle_through(g, &labelled(g, &gens), &r, None);
        prop_assert_eq!(at_root.length(), girth_cayley(g, &gens).unwrap().length());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wreath_multiplication(n in 2usize..=3, seed in any::<u64>()) {
        let x = build::hypercube(n);
        let pair = find_diametric_pair(&x).unwrap().unwrap();
        let group = WreathGroup::new(&x, &pair, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (group.sample(&mut rng), group.sample(&mut rng), group.sample(&mut rng));
        prop_assert_eq!(
            group.multiply(&group.multiply(&a, &b), &c),
            group.multiply(&a, &group.multiply(&b, &c))
        );
        let ab = group.multiply(&a, &b);
        for p in group.line.window(-4, 4) {
            prop_assert_eq!(group.act(&ab, &p), group.act(&a, &group.act(&b, &p)));
        }
        if !group.is_identity(&a) {
            prop_assert!(group.line.window(-8, 8).iter().any(|p| group.act(&a, p) != *p));
        }
    }

    /// Certificates built for random generating sets of F2 that contain `a`
    /// and `b` are stable under a larger K and ball, symmetric, and carry a
    /// free subgroup certificate.
    #[test]
    fn pingpong_certificates(extra in prop::collection::vec(word(2, 3), 0..=2)) {
        let f2 = vec![TreeAction::new(FreeProductTree::free(2))];
        let (a, b): (Word, Word) = ("a".parse().unwrap(), "b".parse().unwrap());
        let mut gens = vec![a.clone(), b.clone()];
        gens.extend(extra.into_iter().filter(|w| !w.is_empty()));
        let hs = [(
            Half::new(Word::identity(), a.clone()),
            Half::new(Word::identity(), b.clone()),
        )];
        let params = BuildParams { depth: 8, n_max: 8, m_max: 12, radius: 30 };
        if let Built::Cert(cert) = build_cert_from_poles(&f2, &a, &b, &gens, &hs, &params).unwrap() {
            let v = check_girth_cert(&f2, &cert, 2, 30).unwrap();
            if v.passed() {
                prop_assert!(check_girth_cert(&f2, &cert, 3, 34).unwrap().passed());
                prop_assert!(check_girth_cert(&f2, &cert.swapped(), 2, 30).unwrap().passed());
                prop_assert!(check_free_cert(&f2, &cert.free_part(), 2, 30).unwrap().passed());
            }
        }
    }
}
