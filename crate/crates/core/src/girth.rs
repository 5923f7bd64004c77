//! Girth of Cayley graphs, its supremum over generating sets, and laws.
//!
//! Cayley graphs are simple and undirected with right multiplication: `g`
//! is joined to `g s` and `g s^-1`. An involution contributes one edge, so
//! `a^2 = 1` does not produce a 2-cycle.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FreeProductTree;
use crate::groups::{FiniteGroup, GroupOps};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Girth {
    /// Shortest cycle, with its edge labels read from the identity.
    Finite { length: usize, witness: Vec<String> },
    /// No cycle through the identity was found in the explored region.
    Infinite,
    /// No cycle within `radius` of the identity: girth is at least `lower_bound`.
    InfiniteWithin { radius: usize, lower_bound: usize },
}

impl Girth {
    pub fn length(&self) -> Option<usize> {
        match self {
            Girth::Finite { length, .. } => Some(*length),
            _ => None,
        }
    }

    /// Ordering key with infinity above every integer.
    fn key(&self) -> usize {
        self.length().unwrap_or(usize::MAX)
    }
}

/// Label of `s^-1` given the label of `s`.
pub fn inverse_label(label: &str) -> String {
    if label.len() == 1 && label.chars().all(|c| c.is_ascii_lowercase()) {
        label.to_ascii_uppercase()
    } else {
        format!("{label}^-1")
    }
}

/// Neighbours of `x` in the simple Cayley graph, with the label of each step.
fn cayley_neighbors<G: GroupOps>(group: &G, gens: &[(String, G::Elem)], x: &G::Elem) -> Vec<(String, G::Elem)>
where
    G::Elem: Hash + Eq,
{
    let mut out: Vec<(String, G::Elem)> = Vec::new();
    let mut seen: HashSet<G::Elem> = HashSet::new();
    seen.insert(x.clone());
    for (label, s) in gens {
        if group.is_identity(s) {
            continue;
        }
        let fwd = group.mul(x, s);
        if seen.insert(fwd.clone()) {
            out.push((label.clone(), fwd));
        }
        let back = group.mul(x, &group.inv(s));
        if seen.insert(back.clone()) {
            out.push((inverse_label(label), back));
        }
    }
    out
}

/// Shortest cycle through `root`, exploring at most `radius` steps out.
///
/// Breadth-first search labels each vertex with the root neighbour its tree
/// path starts from; the shortest cycle through the root is the least
/// `d(u) + d(v) + 1` over non-tree edges `uv` joining different branches.
pub fn shortest_cycle_through<G: GroupOps>(
    group: &G,
    gens: &[(String, G::Elem)],
    root: &G::Elem,
    radius: Option<usize>,
) -> Girth
where
    G::Elem: Hash + Eq,
{
    struct Node<E> {
        elem: E,
        depth: usize,
        parent: usize,
        label: String,
        branch: usize,
    }
    let mut nodes: Vec<Node<G::Elem>> = vec![Node {
        elem: root.clone(),
        depth: 0,
        parent: usize::MAX,
        label: String::new(),
        branch: usize::MAX,
    }];
    let mut index: HashMap<G::Elem, usize> = HashMap::from([(root.clone(), 0)]);
    let mut best: Option<(usize, usize, usize, String)> = None;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let du = nodes[u].depth;
        if let Some((len, ..)) = best {
            if 2 * du + 1 >= len {
                break;
            }
        }
        let nbrs = cayley_neighbors(group, gens, &nodes[u].elem);
        for (label, y) in nbrs {
            match index.get(&y) {
                None => {
                    if radius.is_some_and(|r| du >= r) {
                        continue;
                    }
                    let id = nodes.len();
                    let branch = if u == 0 { id } else { nodes[u].branch };
                    nodes.push(Node {
                        elem: y.clone(),
                        depth: du + 1,
                        parent: u,
                        label,
                        branch,
                    });
                    index.insert(y, id);
                    queue.push_back(id);
                }
                Some(&v) => {
                    if v == 0 || nodes[v].parent == u || nodes[u].parent == v {
                        continue;
                    }
                    if u != 0 && nodes[u].branch == nodes[v].branch {
                        continue;
                    }
                    let len = du + nodes[v].depth + 1;
                    if best.as_ref().is_none_or(|b| len < b.0) {
                        best = Some((len, u, v, label));
                    }
                }
            }
        }
    }
    match best {
        Some((length, u, v, label)) => {
            let path = |mut x: usize| -> Vec<String> {
                let mut out = Vec::new();
                while x != 0 {
                    out.push(nodes[x].label.clone());
                    x = nodes[x].parent;
                }
                out.reverse();
                out
            };
            let mut witness = path(u);
            witness.push(label);
            let back = path(v);
            witness.extend(back.iter().rev().map(|l| invert_step(l)));
            Girth::Finite { length, witness }
        }
        None => match radius {
            Some(r) if nodes.iter().any(|n| n.depth == r) => Girth::InfiniteWithin {
                radius: r,
                lower_bound: 2 * r + 1,
            },
            _ => Girth::Infinite,
        },
    }
}

fn invert_step(label: &str) -> String {
    if let Some(base) = label.strip_suffix("^-1") {
        return base.to_string();
    }
    if label.len() == 1 && label.chars().all(|c| c.is_ascii_uppercase()) {
        return label.to_ascii_lowercase();
    }
    inverse_label(label)
}

/// Labelled generator list `g0, g1, ...` of a finite group's elements.
pub fn labelled(group: &FiniteGroup, gens: &[usize]) -> Vec<(String, usize)> {
    gens.iter()
        .enumerate()
        .map(|(i, &g)| {
            let label = group
                .labels()
                .get(i)
                .filter(|_| group.generator_indices().get(i) == Some(&g))
                .cloned()
                .unwrap_or_else(|| {
                    if gens.len() <= 26 {
                        ((b'a' + i as u8) as char).to_string()
                    } else {
                        format!("s{i}")
                    }
                });
            (label, g)
        })
        .collect()
}

/// Girth of the Cayley graph of a finite group; `gens` must generate.
pub fn girth_cayley(group: &FiniteGroup, gens: &[usize]) -> Result<Girth> {
    let span = group.closure(gens);
    if span.len() != group.order() {
        return Err(Error::NotGenerating {
            found: span.len(),
            total: group.order(),
        });
    }
    Ok(shortest_cycle_through(group, &labelled(group, gens), &0, None))
}

/// Free products of `Z` and `Z/2` with reduced words as elements.
#[derive(Clone, Debug)]
pub struct FreeProductGroup(pub FreeProductTree);

impl GroupOps for FreeProductGroup {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::identity()
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        self.0.mul(a, b)
    }

    fn inv(&self, a: &Word) -> Word {
        self.0.inverse(a)
    }

    fn is_identity(&self, a: &Word) -> bool {
        a.is_empty()
    }

    fn elements(&self) -> Option<Vec<Word>> {
        None
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Word {
        use rand::Rng;
        let alphabet = self.0.alphabet();
        let len = rng.gen_range(0..=8);
        let w = Word((0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect());
        self.0.reduce(&w)
    }

    fn describe(&self, a: &Word) -> String {
        a.to_string()
    }
}

/// Girth of the Cayley graph of `<gens>` inside a free product, explored to `radius`.
pub fn girth_free_product(tree: &FreeProductTree, gens: &[Word], radius: usize) -> Girth {
    let group = FreeProductGroup(tree.clone());
    let labelled: Vec<(String, Word)> = gens
        .iter()
        .map(|w| (w.to_string(), tree.reduce(w)))
        .collect();
    shortest_cycle_through(&group, &labelled, &Word::identity(), Some(radius))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GirthSup {
    /// `None` stands for infinite girth.
    pub value: Option<usize>,
    pub witness: Vec<usize>,
    pub witness_cycles: Girth,
    pub generating_sets: usize,
    pub classes_examined: usize,
}

/// Cap on subsets enumerated by [`girth_sup_bounded`].
pub const MAX_SUBSETS: usize = 1 << 22;

/// Maximum girth over generating sets of size at most `max_gens`.
///
/// Sets with the same symmetric closure give the same graph, and conjugate
/// sets give isomorphic graphs, so each conjugacy class of closures is
/// evaluated once. The witness is the first set, in lexicographic order of
/// element indices, attaining the maximum.
pub fn girth_sup_bounded(group: &FiniteGroup, max_gens: usize) -> Result<GirthSup> {
    let n = group.order();
    let others: Vec<usize> = (1..n).collect();
    let max_gens = max_gens.min(others.len());
    let mut total: usize = 0;
    let mut binom: usize = 1;
    for k in 1..=max_gens {
        binom = binom.saturating_mul(others.len() + 1 - k) / k;
        total = total.saturating_add(binom);
    }
    if total > MAX_SUBSETS {
        return Err(Error::Invalid(format!("{total} generating subsets exceed the cap {MAX_SUBSETS}")));
    }
    let symmetric = |s: &[usize]| -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().flat_map(|&x| [x, group.inv(x)]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let canonical = |key: &[usize]| -> Vec<usize> {
        (0..n)
            .map(|g| {
                let gi = group.inv(g);
                let mut c: Vec<usize> = key.iter().map(|&x| group.mul(group.mul(g, x), gi)).collect();
                c.sort_unstable();
                c
            })
            .min()
            .unwrap()
    };
    let mut seen: HashMap<Vec<usize>, Option<usize>> = HashMap::new();
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut generating = 0usize;
    if n == 1 {
        return Ok(GirthSup {
            value: None,
            witness: Vec::new(),
            witness_cycles: Girth::Infinite,
            generating_sets: 1,
            classes_examined: 0,
        });
    }
    for k in 1..=max_gens {
        for combo in crate::complex::combinations(others.len(), k) {
            let s: Vec<usize> = combo.iter().map(|&i| others[i]).collect();
            let key = canonical(&symmetric(&s));
            let girth_key = match seen.get(&key) {
                Some(&g) => {
                    if g == Some(usize::MAX - 1) {
                        continue;
                    }
                    g
                }
                None => {
                    if group.closure(&s).len() != n {
                        seen.insert(key, Some(usize::MAX - 1));
                        continue;
                    }
                    let g = Some(shortest_cycle_through(group, &labelled(group, &s), &0, None).key());
                    seen.insert(key, g);
                    g
                }
            };
            generating += 1;
            let value = girth_key.unwrap();
            if best.as_ref().is_none_or(|b| value > b.0) {
                best = Some((value, s));
            }
        }
    }
    let (value, witness) = best.ok_or_else(|| Error::Invalid("no generating set within the size bound".into()))?;
    let witness_cycles = shortest_cycle_through(group, &labelled(group, &witness), &0, None);
    Ok(GirthSup {
        value: (value != usize::MAX).then_some(value),
        witness,
        witness_cycles,
        generating_sets: generating,
        classes_examined: seen.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum LawPolicy {
    Exhaustive,
    Samples { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub word: String,
    pub holds: bool,
    pub exhaustive: bool,
    pub tuples_checked: usize,
    pub counterexample: Option<Vec<String>>,
}

/// Evaluates `w` with letter `i` read as `x_i`.
pub fn evaluate<G: GroupOps>(group: &G, w: &Word, xs: &[G::Elem]) -> G::Elem {
    let mut acc = group.identity();
    for l in w.letters() {
        let x = &xs[l.gen as usize];
        acc = if l.inv { group.mul(&acc, &group.inv(x)) } else { group.mul(&acc, x) };
    }
    acc
}

pub const EXHAUSTIVE_ELEMENTS: usize = 10_000;
pub const EXHAUSTIVE_TUPLES: usize = 10_000_000;

/// Checks `w(x_1, ..., x_r) = 1`. Exhaustive policy falls back to sampling
/// (with seed 0 and one million samples) when the tuple space is too large.
pub fn check_law<G: GroupOps>(group: &G, w: &Word, policy: LawPolicy) -> Result<LawReport> {
    let w = w.free_reduced();
    if w.is_empty() {
        return Err(Error::Invalid("the law must be a nonempty reduced word".into()));
    }
    let r = w.max_generator().unwrap() + 1;
    let describe = |xs: &[G::Elem]| xs.iter().map(|x| group.describe(x)).collect::<Vec<_>>();
    let elements = match policy {
        LawPolicy::Exhaustive => group.elements().filter(|e| {
            e.len() <= EXHAUSTIVE_ELEMENTS && (e.len() as f64).powi(r as i32) <= EXHAUSTIVE_TUPLES as f64
        }),
        LawPolicy::Samples { .. } => None,
    };
    if let Some(elements) = elements {
        let m = elements.len();
        let mut idx = vec![0usize; r];
        let mut checked = 0usize;
        loop {
            let xs: Vec<G::Elem> = idx.iter().map(|&i| elements[i].clone()).collect();
            checked += 1;
            if !group.is_identity(&evaluate(group, &w, &xs)) {
                return Ok(LawReport {
                    word: w.to_string(),
                    holds: false,
                    exhaustive: true,
                    tuples_checked: checked,
                    counterexample: Some(describe(&xs)),
                });
            }
            // odometer, last coordinate fastest
            let mut pos = r;
            loop {
                if pos == 0 {
                    return Ok(LawReport {
                        word: w.to_string(),
                        holds: true,
                        exhaustive: true,
                        tuples_checked: checked,
                        counterexample: None,
                    });
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < m {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
    let (count, seed) = match policy {
        LawPolicy::Samples { count, seed } => (count, seed),
        LawPolicy::Exhaustive => (1_000_000, 0),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let xs: Vec<G::Elem> = (0..r).map(|_| group.sample(&mut rng)).collect();
        if !group.is_identity(&evaluate(group, &w, &xs)) {
            return Ok(LawReport {
                word: w.to_string(),
                holds: false,
                exhaustive: false,
                tuples_checked: i + 1,
                counterexample: Some(describe(&xs)),
            });
        }
    }
    Ok(LawReport {
        word: w.to_string(),
        holds: true,
        exhaustive: false,
        tuples_checked: count,
        counterexample: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedSeries {
    pub orders: Vec<usize>,
    pub solvable: bool,
}

/// Orders of `G ⊇ G' ⊇ G'' ⊇ ...` until the series stabilises.
pub fn derived_series(group: &FiniteGroup) -> DerivedSeries {
    let mut current: Vec<usize> = (0..group.order()).collect();
    let mut orders = vec![current.len()];
    while current.len() > 1 {
        let next = group.commutator_subgroup(&current);
        if next.len() == current.len() {
            break;
        }
        orders.push(next.len());
        current = next;
    }
    DerivedSeries {
        solvable: current.len() == 1,
        orders,
    }
}
