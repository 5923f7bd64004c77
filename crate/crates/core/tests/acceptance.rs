//! Acceptance gate. One line per criterion; exits nonzero if any fails.
//!
//! Each criterion returns a textual report that excludes timings. Every
//! criterion is run twice with the same seed and the two reports must be
//! byte-identical (criterion 10).

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cubegirth::actions::TreeAction;
use cubegirth::amplify::{amplify_facing, verify_family};
use cubegirth::build;
use cubegirth::constructions::{
    aut_fixing_pair, build_line_complex, coordinate_action, find_diametric_pair, verify_wreath_law, wreath_demo,
};
use cubegirth::families::FreeProductTree;
use cubegirth::girth::{derived_series, girth_cayley, girth_free_product, Girth};
use cubegirth::groups::{elementary_abelian2, cyclic, small_groups, symmetric, FiniteGroup};
use cubegirth::halfspaces::engine::Probe;
use cubegirth::halfspaces::{
    dual_complex, hyperplanes, is_strongly_separated, quadrant_classify, BaseRelation, Halfspace, HyperplaneSystem,
};
use cubegirth::iso::canonical_form;
use cubegirth::pingpong::{build_cert_from_poles, check_girth_cert, BuildParams, Outcome, PingPongCert};
use cubegirth::{CubeComplexGraph, Half, Word};

const SEED: u64 = 0x5eed;

struct Run {
    pass: bool,
    summary: String,
    report: String,
}

fn run(pass: bool, summary: impl Into<String>, report: String) -> Run {
    Run {
        pass,
        summary: summary.into(),
        report,
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn criterion_1(seed: u64) -> Run {
    let mut report = String::new();
    let mut pass = true;
    for n in 1..=4 {
        let k = hyperplanes(&build::hypercube(n)).unwrap().len();
        pass &= k == n;
        writeln!(report, "I^{n}: {k}").unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..20 {
        let vertices = rng.gen_range(2..=51);
        let t = build::random_tree(vertices, rng.gen());
        let k = hyperplanes(&t).unwrap().len();
        pass &= k == t.edge_count();
        writeln!(report, "tree {i}: {} edges, {k} hyperplanes", t.edge_count()).unwrap();
    }
    run(pass, "I^1..I^4 and 20 random trees", report)
}

fn corpus(seed: u64) -> Vec<(String, CubeComplexGraph)> {
    let mut out: Vec<(String, CubeComplexGraph)> = Vec::new();
    for n in 1..=5 {
        out.push((format!("I^{n}"), build::hypercube(n)));
    }
    for (a, b) in [(2, 3), (3, 3), (4, 5), (1, 9)] {
        out.push((format!("grid {a}x{b}"), build::grid(a, b)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in [12, 40, 90, 150] {
        out.push((format!("tree {n}"), build::random_tree(n, rng.gen())));
    }
    for k in 2..=5 {
        out.push((format!("staircase {k}"), build::staircase(k)));
    }
    out.push(("star4 x star3".into(), build::star(4).product(&build::star(3))));
    for (n, copies) in [(2, 2), (2, 5), (3, 2)] {
        let x = build::hypercube(n);
        let pair = find_diametric_pair(&x).unwrap().unwrap();
        out.push((format!("L[I^{n}] {copies} copies"), build_line_complex(&x, &pair, copies).unwrap().graph));
    }
    out.push(("star3 x path2".into(), build::star(3).product(&build::path(2))));
    out.push(("I^2 x path4".into(), build::hypercube(2).product(&build::path(4))));
    out.push(("tree x tree".into(), build::random_tree(8, 1).product(&build::random_tree(9, 2))));
    out.push(("staircase x I^1".into(), build::staircase(3).product(&build::hypercube(1))));
    out
}

fn criterion_2(seed: u64) -> Run {
    let mut report = String::new();
    let mut pass = true;
    let items = corpus(seed);
    for (name, g) in &items {
        assert!(g.vertex_count() <= 200, "{name} has {} vertices", g.vertex_count());
        let sys = HyperplaneSystem::new(g).unwrap();
        let dual = dual_complex(&sys.pocset()).unwrap();
        let same = canonical_form(&dual) == canonical_form(g);
        pass &= same;
        writeln!(report, "{name}: {} vertices, {} hyperplanes, roundtrip {same}", g.vertex_count(), sys.len()).unwrap();
    }
    pass &= items.len() >= 20;
    run(pass, format!("{} complexes", items.len()), report)
}

fn all_distances(g: &CubeComplexGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for v in g.neighbors(cubegirth::VertexId(u as u32)) {
                    if d[v.index()] == usize::MAX {
                        d[v.index()] = d[u] + 1;
                        q.push_back(v.index());
                    }
                }
            }
            d
        })
        .collect()
}

/// Brute-force pair relations from vertex partitions. Sides come from
/// distances to the representative edge; transversality is a full
/// four-quadrant scan, separation a scan over all third hyperplanes.
fn oracle_mismatches(g: &CubeComplexGraph) -> (usize, usize) {
    let sys = HyperplaneSystem::new(g).unwrap();
    let d = all_distances(g);
    let n = g.vertex_count();
    let h = sys.len();
    let side: Vec<Vec<u8>> = sys
        .hyperplanes()
        .iter()
        .map(|hp| {
            let [r0, r1] = hp.roots;
            (0..n).map(|x| u8::from(d[x][r1.index()] < d[x][r0.index()])).collect()
        })
        .collect();
    let quadrant_empty = |i: usize, a: u8, j: usize, b: u8| !(0..n).any(|x| side[i][x] == a && side[j][x] == b);
    let transverse: Vec<Vec<bool>> = (0..h)
        .map(|i| {
            (0..h)
                .map(|j| i != j && (0..4u8).all(|q| !quadrant_empty(i, q >> 1, j, q & 1)))
                .collect()
        })
        .collect();
    // which side of m the edges of i lie on, if they all lie on one side
    let edges: Vec<Vec<(usize, usize)>> = (0..h)
        .map(|i| {
            g.edges()
                .filter(|e| side[i][e.0.index()] != side[i][e.1.index()])
                .map(|e| (e.0.index(), e.1.index()))
                .collect()
        })
        .collect();
    let position: Vec<Vec<Option<u8>>> = (0..h)
        .map(|i| {
            (0..h)
                .map(|m| {
                    let s = side[m][edges[i][0].0];
                    edges[i]
                        .iter()
                        .all(|&(a, b)| side[m][a] == s && side[m][b] == s)
                        .then_some(s)
                })
                .collect()
        })
        .collect();
    let mut mismatches = 0;
    let mut pairs = 0;
    for i in 0..h {
        for j in 0..h {
            if i == j {
                continue;
            }
            pairs += 1;
            let expected_base = if transverse[i][j] {
                BaseRelation::Transverse
            } else if quadrant_empty(i, 0, j, 0) {
                BaseRelation::Facing
            } else {
                let q = (0..4u8).find(|q| quadrant_empty(i, q >> 1, j, q & 1)).unwrap();
                BaseRelation::Nested {
                    empty_quadrant: [q >> 1, q & 1],
                }
            };
            let separated = (0..h).any(|m| {
                m != i
                    && m != j
                    && matches!((position[i][m], position[j][m]), (Some(a), Some(b)) if a != b)
            });
            let strongly = separated && !(0..h).any(|m| transverse[m][i] && transverse[m][j]);
            let got = quadrant_classify(&sys, Halfspace::new(i, 0), Halfspace::new(j, 0)).unwrap();
            if got.base != expected_base
                || got.separated != separated
                || got.strongly_separated != strongly
                || is_strongly_separated(&sys, i, j) != strongly
            {
                mismatches += 1;
            }
        }
    }
    (pairs, mismatches)
}

fn criterion_3(seed: u64) -> Run {
    let mut report = String::new();
    let (mut total, mut bad) = (0, 0);
    for (name, g) in corpus(seed) {
        let (pairs, mismatches) = oracle_mismatches(&g);
        total += pairs;
        bad += mismatches;
        writeln!(report, "{name}: {pairs} ordered pairs, {mismatches} mismatches").unwrap();
    }
    run(bad == 0, format!("{total} ordered pairs, {bad} mismatches"), report)
}

fn criterion_4(_seed: u64) -> Run {
    let mut report = String::new();
    let mut pass = true;
    for n in 2..=4 {
        let x = build::hypercube(n);
        let pair = find_diametric_pair(&x).unwrap().unwrap();
        let fg = aut_fixing_pair(&x, &pair).unwrap();
        let ca = coordinate_action(&x, &fg).unwrap();
        let ok = fg.group.order() == factorial(n) && ca.image_order == factorial(n) && ca.is_isomorphism_onto_symmetric();
        pass &= ok;
        writeln!(report, "I^{n}: fixing order {}, image order {}, iso {ok}", fg.group.order(), ca.image_order).unwrap();
    }
    run(pass, "fixing groups of I^2..I^4 are S_2, S_3, S_4", report)
}

fn criterion_5(seed: u64) -> Run {
    let mut report = String::new();
    let mut pass = true;
    for (n, exponent) in [(2, 8), (3, 48)] {
        let x = build::hypercube(n);
        let pair = find_diametric_pair(&x).unwrap().unwrap();
        let r = verify_wreath_law(&x, &pair, 1000, 3, seed).unwrap();
        pass &= r.passed() && r.exponent == exponent && r.pairs_tested == 1000 && r.copy_preservation_failures == 0;
        writeln!(report, "{}", serde_json::to_string(&r).unwrap()).unwrap();
    }
    run(pass, "L[I^2] exponent 8, L[I^3] exponent 48, 1000 pairs each", report)
}

fn criterion_6(seed: u64) -> Run {
    let series = derived_series(&symmetric(5));
    let demo = wreath_demo(5, 200, 3, seed).unwrap();
    let pass = series.orders == vec![120, 60]
        && !series.solvable
        && demo.chain_established()
        && demo.coordinate_action.group_order == 120
        && demo.law.exponent == 3840
        && demo.law.pairs_tested >= 200;
    let report = format!(
        "{}\n{}\n",
        serde_json::to_string(&series).unwrap(),
        serde_json::to_string(&demo).unwrap()
    );
    run(pass, "S_5 series [120, 60]; L[I^5] chain with exponent 3840", report)
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn criterion_7(_seed: u64) -> Run {
    let f2 = vec![TreeAction::new(FreeProductTree::free(2))];
    let hs = [(Half::new(w("1"), w("a")), Half::new(w("1"), w("b")))];
    let params = BuildParams {
        depth: 6,
        n_max: 6,
        m_max: 8,
        radius: 20,
    };
    let gens = [w("a"), w("b")];
    let cert = build_cert_from_poles(&f2, &w("a"), &w("b"), &gens, &hs, &params)
        .unwrap()
        .cert()
        .expect("a certificate for F2");
    let k3 = check_girth_cert(&f2, &cert, 3, 20).unwrap();
    let k4 = check_girth_cert(&f2, &cert, 4, 22).unwrap();
    let mut report = format!("N = {}, M = {}, K=3 {:?}, K=4 {:?}\n", cert.n, cert.m, k3.outcome, k4.outcome);
    let mut overlapping = cert.clone();
    overlapping.gens.push(w("bbb"));
    let mutants: [(&str, PingPongCert<Word>); 3] = [
        ("x inside U_sigma", PingPongCert { x: (0, w("aaa")), ..cert.clone() }),
        ("overlapping generator", overlapping),
        ("non-strict nesting", PingPongCert { m: 0, ..cert.clone() }),
    ];
    let mut pass = k3.passed() && k4.passed();
    for (name, bad) in &mutants {
        let v = check_girth_cert(&f2, bad, 3, 20).unwrap();
        pass &= v.outcome != Outcome::Pass;
        writeln!(report, "{name}: {:?}", v.outcome).unwrap();
    }
    run(pass, format!("F2 cert N={} M={}, K=3 and K=4 pass, 3 mutants rejected", cert.n, cert.m), report)
}

fn criterion_8(_seed: u64) -> Run {
    let t = TreeAction::new(FreeProductTree::involutions(3));
    let (a, b, c) = (Half::new(w("a"), w("ab")), Half::new(w("b"), w("ba")), Half::new(w("1"), w("c")));
    let probe = Probe::new(&t.tree, 48);
    let fam = amplify_facing(&t, &probe, [&a, &b, &c], 4, 5).unwrap();
    let family = verify_family(&probe, &fam.halves).unwrap();
    let claims = fam.transcript.iter().flat_map(|s| &s.claims).all(|c| c.holds);
    let pass = fam.len() == 4 && fam.complete() && family.all_green() && claims;
    let report = format!("{}\n{}\n", serde_json::to_string(&fam).unwrap(), serde_json::to_string(&family).unwrap());
    run(pass, format!("{} pairs, family all green: {}", fam.len(), family.all_green()), report)
}

/// Girth of the simple Cayley graph by breadth-first search from every vertex.
fn brute_girth(group: &FiniteGroup, gens: &[usize]) -> Option<usize> {
    let n = group.order();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let mut s: HashSet<usize> = HashSet::new();
            for &g in gens {
                s.insert(group.mul(x, g));
                s.insert(group.mul(x, group.inv(g)));
            }
            s.remove(&x);
            let mut v: Vec<usize> = s.into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect();
    let mut best: Option<usize> = None;
    for root in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[root] = 0;
        let mut q = VecDeque::from([root]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    q.push_back(v);
                } else if parent[u] != v {
                    let len = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

fn criterion_9(_seed: u64) -> Run {
    let mut report = String::new();
    let (mut sets, mut bad) = (0usize, 0usize);
    for sg in small_groups(24) {
        let g = &sg.group;
        let n = g.order();
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            subsets.push(vec![a]);
            for b in a + 1..n {
                subsets.push(vec![a, b]);
                for c in b + 1..n {
                    subsets.push(vec![a, b, c]);
                }
            }
        }
        let mut checked = 0;
        for s in subsets {
            if g.closure(&s).len() != n {
                continue;
            }
            checked += 1;
            if girth_cayley(g, &s).unwrap().length() != brute_girth(g, &s) {
                bad += 1;
            }
        }
        sets += checked;
        writeln!(report, "{}: {checked} generating sets", sg.name).unwrap();
    }
    let z5 = cyclic(5);
    let z5_girth = girth_cayley(&z5, &z5.generator_indices()).unwrap().length();
    let v4 = elementary_abelian2(2);
    let v4_girth = girth_cayley(&v4, &v4.generator_indices()).unwrap().length();
    let f2 = girth_free_product(&FreeProductTree::free(2), &[Word::gen(0), Word::gen(1)], 8);
    let spots = z5_girth == Some(5)
        && v4_girth == Some(4)
        && f2 == Girth::InfiniteWithin {
            radius: 8,
            lower_bound: 17,
        };
    writeln!(report, "Z5 {z5_girth:?}, Z2^2 {v4_girth:?}, F2 {f2:?}").unwrap();
    run(bad == 0 && spots, format!("{sets} generating sets, {bad} mismatches, spot values ok: {spots}"), report)
}

type Criterion = (usize, &'static str, fn(u64) -> Run, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "hyperplane counts", criterion_1, Duration::from_secs(1)),
        (2, "duality roundtrip", criterion_2, Duration::from_secs(10)),
        (3, "pair-relation oracles", criterion_3, Duration::from_secs(30)),
        (4, "fixing group is symmetric", criterion_4, Duration::from_secs(60)),
        (5, "wreath law", criterion_5, Duration::from_secs(120)),
        (6, "nonsolvable chain", criterion_6, Duration::from_secs(120)),
        (7, "ping-pong end to end", criterion_7, Duration::from_secs(60)),
        (8, "facing amplification", criterion_8, Duration::from_secs(60)),
        (9, "girth oracle", criterion_9, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    let mut deterministic = true;
    for (id, name, f, budget) in criteria {
        let start = Instant::now();
        let first = f(SEED);
        let elapsed = start.elapsed();
        let second = f(SEED);
        let same = first.report == second.report;
        deterministic &= same;
        let pass = first.pass && elapsed <= budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {name}: {} ({}; {:.2}s of {}s)",
            if pass { "PASS" } else { "FAIL" },
            first.summary,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !first.pass {
            print!("{}", first.report);
        }
    }
    println!(
        "criterion 10 determinism: {} (reports byte-identical across reruns)",
        if deterministic { "PASS" } else { "FAIL" }
    );
    if !deterministic {
        failed += 1;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
