//! Hyperplanes, halfspaces and their pairwise relations.
//!
//! [`HyperplaneSystem`] handles finite complexes with explicit vertex sets
//! stored as bitsets. [`engine`] answers the same questions on lazily
//! generated spaces with a radius budget. [`pocset`] holds the abstract side
//! of the duality between complexes and pocsets.

pub mod engine;
pub mod pocset;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::complex::{CubeComplexGraph, EdgeId, GraphBuilder, VertexId};
use crate::error::{Error, Result};
use crate::space::MedianSpace;
use engine::{Half, Probe};

pub use pocset::{dual_complex, Pocset};

/// Relation between two oriented halfspaces `h`, `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    Complementary,
    Transverse,
    /// `h ∩ k = ∅`
    Facing,
    /// `h ⊊ k`
    Subset,
    /// `k ⊊ h`
    Superset,
    /// `h* ∩ k* = ∅`
    Covering,
}

impl Relation {
    /// From the emptiness of `h∩k`, `h∩k*`, `h*∩k`, `h*∩k*`.
    pub fn from_empty_quadrants(e: [bool; 4]) -> Self {
        match e {
            [false, false, false, false] => Relation::Transverse,
            [true, false, false, false] => Relation::Facing,
            [false, true, false, false] => Relation::Subset,
            [false, false, true, false] => Relation::Superset,
            [false, false, false, true] => Relation::Covering,
            [false, true, true, false] => Relation::Equal,
            [true, false, false, true] => Relation::Complementary,
            _ => unreachable!("halfspaces are nonempty: {e:?}"),
        }
    }

    pub fn is_transverse(self) -> bool {
        self == Relation::Transverse
    }
}

/// A side of a hyperplane of a [`HyperplaneSystem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Halfspace {
    pub hyperplane: usize,
    pub side: u8,
}

impl Halfspace {
    pub fn new(hyperplane: usize, side: u8) -> Self {
        Halfspace { hyperplane, side }
    }

    pub fn star(self) -> Self {
        Halfspace {
            hyperplane: self.hyperplane,
            side: 1 - self.side,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hyperplane {
    pub id: usize,
    pub edges: Vec<EdgeId>,
    /// Endpoints of the representative edge on sides 0 and 1.
    pub roots: [VertexId; 2],
}

/// Hyperplane-level relation with a chosen side on each hyperplane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BaseRelation {
    Transverse,
    /// The chosen sides are disjoint.
    Facing,
    /// Nested; the empty quadrant is given as a side of each hyperplane.
    Nested { empty_quadrant: [u8; 2] },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairRelation {
    pub base: BaseRelation,
    pub separated: bool,
    pub strongly_separated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UltrafilterView {
    pub vertex: VertexId,
    pub halfspaces: Vec<Halfspace>,
}

type Bits = Vec<u64>;

fn bit(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

/// All hyperplanes of a finite median graph, with sides as bitsets.
#[derive(Clone, Debug)]
pub struct HyperplaneSystem {
    n: usize,
    hyperplanes: Vec<Hyperplane>,
    /// `side1[h]` holds the vertices on side 1 of `h`; `full` masks the vertex range.
    side1: Vec<Bits>,
    full: Bits,
    carriers: Vec<Bits>,
    edge_class: HashMap<EdgeId, usize>,
    transverse: Vec<bool>,
    square_witness: Vec<bool>,
}

impl HyperplaneSystem {
    pub fn new(g: &CubeComplexGraph) -> Result<Self> {
        g.check_connected()?;
        let n = g.vertex_count();
        let words = n.div_ceil(64).max(1);
        let edges: Vec<EdgeId> = g.edges().collect();
        let eidx: HashMap<EdgeId, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut parent: Vec<usize> = (0..edges.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        let mut squares: Vec<(usize, usize)> = Vec::new();
        for x in g.vertices() {
            let nb = g.neighbors(x);
            for (i, &y) in nb.iter().enumerate() {
                for &z in &nb[i + 1..] {
                    for &w in g.neighbors(y) {
                        if w != x && g.adjacent(w, z) {
                            let (xy, xz) = (eidx[&EdgeId::new(x, y)], eidx[&EdgeId::new(x, z)]);
                            let (zw, yw) = (eidx[&EdgeId::new(z, w)], eidx[&EdgeId::new(y, w)]);
                            for (a, b) in [(xy, zw), (xz, yw)] {
                                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                                if ra != rb {
                                    parent[ra] = rb;
                                }
                            }
                            squares.push((xy, xz));
                        }
                    }
                }
            }
        }
        let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
        for e in 0..edges.len() {
            let r = find(&mut parent, e);
            classes.entry(r).or_default().push(e);
        }
        let edge_key = |e: &EdgeId| -> (String, String) {
            let (a, b) = (g.name(e.0), g.name(e.1));
            if a <= b {
                (a.to_string(), b.to_string())
            } else {
                (b.to_string(), a.to_string())
            }
        };
        let mut ordered: Vec<(Vec<(String, String)>, Vec<EdgeId>)> = classes
            .into_values()
            .map(|members| {
                let mut es: Vec<EdgeId> = members.iter().map(|&i| edges[i]).collect();
                es.sort_by_key(|e| edge_key(e));
                (es.iter().map(&edge_key).collect(), es)
            })
            .collect();
        ordered.sort();
        let least = g.least_named_vertex().expect("connected graphs are nonempty");
        let mut full = vec![0u64; words];
        for v in 0..n {
            set_bit(&mut full, v);
        }
        let mut hyperplanes = Vec::new();
        let mut side1 = Vec::new();
        let mut carriers = Vec::new();
        let mut edge_class = HashMap::new();
        for (id, (_, es)) in ordered.into_iter().enumerate() {
            let cut: std::collections::HashSet<EdgeId> = es.iter().copied().collect();
            let rep = es[0];
            let reach = |start: VertexId| -> Bits {
                let mut seen = vec![0u64; words];
                set_bit(&mut seen, start.index());
                let mut queue = VecDeque::from([start]);
                while let Some(x) = queue.pop_front() {
                    for &y in g.neighbors(x) {
                        if !bit(&seen, y.index()) && !cut.contains(&EdgeId::new(x, y)) {
                            set_bit(&mut seen, y.index());
                            queue.push_back(y);
                        }
                    }
                }
                seen
            };
            let a = reach(rep.0);
            let b = reach(rep.1);
            let overlap = a.iter().zip(&b).any(|(x, y)| x & y != 0);
            let covered: usize = a.iter().zip(&b).map(|(x, y)| (x | y).count_ones() as usize).sum();
            let split = es.iter().all(|e| bit(&a, e.0.index()) != bit(&a, e.1.index()));
            if overlap || covered != n || !split {
                return Err(Error::RepresentationInvalid(format!(
                    "removing the hyperplane of edge {}--{} does not split the complex into two components",
                    g.name(rep.0),
                    g.name(rep.1)
                )));
            }
            let (s0, s1) = if bit(&a, least.index()) { (a, b) } else { (b, a) };
            let roots = if bit(&s0, rep.0.index()) { [rep.0, rep.1] } else { [rep.1, rep.0] };
            let mut carrier = vec![0u64; words];
            for e in &es {
                set_bit(&mut carrier, e.0.index());
                set_bit(&mut carrier, e.1.index());
                edge_class.insert(*e, id);
            }
            side1.push(s1);
            carriers.push(carrier);
            hyperplanes.push(Hyperplane { id, edges: es, roots });
        }
        let h = hyperplanes.len();
        let mut square_witness = vec![false; h * h];
        for (e, f) in squares {
            let (i, j) = (edge_class[&edges[e]], edge_class[&edges[f]]);
            square_witness[i * h + j] = true;
            square_witness[j * h + i] = true;
        }
        let mut sys = HyperplaneSystem {
            n,
            hyperplanes,
            side1,
            full,
            carriers,
            edge_class,
            transverse: Vec::new(),
            square_witness,
        };
        let mut transverse = vec![false; h * h];
        for i in 0..h {
            for j in (i + 1)..h {
                let t = (0..4u8).all(|q| !sys.quadrant_empty(Halfspace::new(i, q >> 1), Halfspace::new(j, q & 1)));
                transverse[i * h + j] = t;
                transverse[j * h + i] = t;
            }
        }
        sys.transverse = transverse;
        Ok(sys)
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, i: usize) -> &Hyperplane {
        &self.hyperplanes[i]
    }

    pub fn class_of_edge(&self, e: EdgeId) -> Option<usize> {
        self.edge_class.get(&e).copied()
    }

    pub fn side_of(&self, h: usize, v: VertexId) -> u8 {
        u8::from(bit(&self.side1[h], v.index()))
    }

    pub fn contains(&self, h: Halfspace, v: VertexId) -> bool {
        self.side_of(h.hyperplane, v) == h.side
    }

    fn bits(&self, h: Halfspace) -> Bits {
        if h.side == 1 {
            self.side1[h.hyperplane].clone()
        } else {
            self.side1[h.hyperplane].iter().zip(&self.full).map(|(s, f)| !s & f).collect()
        }
    }

    pub fn members(&self, h: Halfspace) -> Vec<VertexId> {
        (0..self.n)
            .filter(|&v| self.contains(h, VertexId(v as u32)))
            .map(|v| VertexId(v as u32))
            .collect()
    }

    /// The two sides of hyperplane `i`; side 0 holds the least-named vertex.
    pub fn halfspace_pair(&self, i: usize) -> (Vec<VertexId>, Vec<VertexId>) {
        (self.members(Halfspace::new(i, 0)), self.members(Halfspace::new(i, 1)))
    }

    /// The halfspace `{x : d(x, to) < d(x, from)}` for an edge.
    pub fn halfspace_of_edge(&self, from: VertexId, to: VertexId) -> Option<Halfspace> {
        let h = self.class_of_edge(EdgeId::new(from, to))?;
        Some(Halfspace::new(h, self.side_of(h, to)))
    }

    pub fn quadrant_empty(&self, h: Halfspace, k: Halfspace) -> bool {
        let a = self.bits(h);
        let b = self.bits(k);
        a.iter().zip(&b).all(|(x, y)| x & y == 0)
    }

    pub fn disjoint(&self, h: Halfspace, k: Halfspace) -> bool {
        self.quadrant_empty(h, k)
    }

    pub fn subset(&self, h: Halfspace, k: Halfspace) -> bool {
        self.quadrant_empty(h, k.star())
    }

    pub fn relation(&self, h: Halfspace, k: Halfspace) -> Relation {
        if h.hyperplane == k.hyperplane {
            return if h.side == k.side { Relation::Equal } else { Relation::Complementary };
        }
        Relation::from_empty_quadrants([
            self.quadrant_empty(h, k),
            self.quadrant_empty(h, k.star()),
            self.quadrant_empty(h.star(), k),
            self.quadrant_empty(h.star(), k.star()),
        ])
    }

    /// Transversality decided by the four quadrants.
    pub fn transverse(&self, i: usize, j: usize) -> bool {
        i != j && self.transverse[i * self.len() + j]
    }

    /// Transversality decided by the existence of a square with an edge in each.
    pub fn square_witness(&self, i: usize, j: usize) -> bool {
        self.square_witness[i * self.len() + j]
    }

    /// Whether `m` has the carriers of `i` and `j` in opposite sides.
    pub fn separates(&self, m: usize, i: usize, j: usize) -> bool {
        if m == i || m == j {
            return false;
        }
        let side = |c: &Bits| -> Option<bool> {
            let inside = c.iter().zip(&self.side1[m]).all(|(x, s)| x & !s == 0);
            let outside = c.iter().zip(&self.side1[m]).all(|(x, s)| x & s == 0);
            match (inside, outside) {
                (true, false) => Some(true),
                (false, true) => Some(false),
                _ => None,
            }
        };
        match (side(&self.carriers[i]), side(&self.carriers[j])) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        }
    }

    pub fn separated(&self, i: usize, j: usize) -> bool {
        i != j && !self.transverse(i, j) && (0..self.len()).any(|m| self.separates(m, i, j))
    }

    pub fn strongly_separated(&self, i: usize, j: usize) -> bool {
        self.separated(i, j) && !(0..self.len()).any(|m| self.transverse(m, i) && self.transverse(m, j))
    }

    pub fn pair_relation(&self, h: Halfspace, k: Halfspace) -> PairRelation {
        let (i, j) = (h.hyperplane, k.hyperplane);
        let base = if self.transverse(i, j) {
            BaseRelation::Transverse
        } else if self.quadrant_empty(h, k) {
            BaseRelation::Facing
        } else {
            let q = (0..4u8)
                .find(|q| self.quadrant_empty(Halfspace::new(i, q >> 1), Halfspace::new(j, q & 1)))
                .expect("non-transverse distinct hyperplanes have an empty quadrant");
            BaseRelation::Nested {
                empty_quadrant: [q >> 1, q & 1],
            }
        };
        let separated = self.separated(i, j);
        PairRelation {
            base,
            separated,
            strongly_separated: separated && self.strongly_separated(i, j),
        }
    }

    /// The halfspaces containing `v`, checked for Choice and Consistency.
    pub fn vertex_ultrafilter(&self, v: VertexId) -> Result<UltrafilterView> {
        let halfspaces: Vec<Halfspace> = (0..self.len())
            .map(|h| Halfspace::new(h, self.side_of(h, v)))
            .collect();
        for &a in &halfspaces {
            for b in 0..self.len() {
                if b == a.hyperplane {
                    continue;
                }
                for side in 0..2 {
                    let k = Halfspace::new(b, side);
                    if self.subset(a, k) && !halfspaces.contains(&k) {
                        return Err(Error::RepresentationInvalid(format!(
                            "ultrafilter of vertex {} is not consistent",
                            v.index()
                        )));
                    }
                }
            }
        }
        Ok(UltrafilterView { vertex: v, halfspaces })
    }

    /// Containments between distinct hyperplanes, one generator per nested pair.
    pub fn containments(&self) -> Vec<(Halfspace, Halfspace)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if self.transverse(i, j) {
                    continue;
                }
                for q in 0..4u8 {
                    let (h, k) = (Halfspace::new(i, q >> 1), Halfspace::new(j, q & 1));
                    if self.quadrant_empty(h, k) {
                        out.push((h, k.star()));
                    }
                }
            }
        }
        out
    }

    pub fn pocset(&self) -> Pocset {
        let c: Vec<((usize, u8), (usize, u8))> = self
            .containments()
            .into_iter()
            .map(|(h, k)| ((h.hyperplane, h.side), (k.hyperplane, k.side)))
            .collect();
        Pocset::new(self.len(), &c).expect("harvested pocsets are consistent")
    }

    /// Quotient of `g` collapsing every hyperplane outside `class`.
    pub fn restriction_quotient(&self, g: &CubeComplexGraph, class: &[usize]) -> CubeComplexGraph {
        let key = |v: VertexId| -> Vec<u8> { class.iter().map(|&h| self.side_of(h, v)).collect() };
        let mut b = GraphBuilder::new();
        let mut ids: BTreeMap<Vec<u8>, VertexId> = BTreeMap::new();
        for v in g.vertices() {
            ids.entry(key(v)).or_insert_with(|| b.vertex(g.name(v)));
        }
        let mut seen = BTreeSet::new();
        for &h in class {
            for e in &self.hyperplanes[h].edges {
                let (x, y) = (ids[&key(e.0)], ids[&key(e.1)]);
                if seen.insert(EdgeId::new(x, y)) {
                    b.edge(x, y).expect("collapsed edges are simple");
                }
            }
        }
        if let Some(base) = g.base() {
            b.set_base(ids[&key(base)]);
        }
        b.build()
    }
}

pub fn hyperplanes(g: &CubeComplexGraph) -> Result<Vec<Hyperplane>> {
    Ok(HyperplaneSystem::new(g)?.hyperplanes)
}

pub fn quadrant_classify(sys: &HyperplaneSystem, h: Halfspace, k: Halfspace) -> Result<PairRelation> {
    if h.hyperplane == k.hyperplane {
        return Err(Error::Invalid("quadrants need two distinct hyperplanes".into()));
    }
    Ok(sys.pair_relation(h, k))
}

pub fn is_strongly_separated(sys: &HyperplaneSystem, i: usize, j: usize) -> bool {
    sys.strongly_separated(i, j)
}

/// Pairwise disjoint sides of pairwise distinct hyperplanes. The two sides of
/// one hyperplane share its carrier, so they never face each other.
pub fn facing_tuple_check(sys: &HyperplaneSystem, hs: &[Halfspace]) -> bool {
    hs.iter().enumerate().all(|(i, &h)| {
        hs[i + 1..]
            .iter()
            .all(|&k| h.hyperplane != k.hyperplane && sys.disjoint(h, k))
    })
}

/// A verified descending chain `h_0 ⊋ h_1 ⊋ ...`.
#[derive(Clone, Debug, Serialize)]
pub struct DescendingChain<V> {
    pub generator: String,
    pub halfspaces: Vec<Half<V>>,
    pub names: Vec<String>,
    pub strongly_separated: bool,
    /// Radius at which verification ran out, if it did.
    pub truncated: Option<usize>,
}

impl<V> DescendingChain<V> {
    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }
}

/// Verifies strict descent (and strong separation of consecutive hyperplanes
/// when `strong` is set). Chains stop at the first unverifiable step; a failed
/// containment is an error.
pub fn verify_descending<S: MedianSpace + ?Sized>(
    probe: &Probe<S>,
    generator: impl Into<String>,
    halfspaces: Vec<Half<S::V>>,
    strong: bool,
) -> Result<DescendingChain<S::V>> {
    let generator = generator.into();
    let mut out = DescendingChain {
        generator,
        halfspaces: Vec::new(),
        names: Vec::new(),
        strongly_separated: strong,
        truncated: None,
    };
    for (i, h) in halfspaces.into_iter().enumerate() {
        if i > 0 {
            let prev = out.halfspaces.last().unwrap();
            let step = probe.strict_subset(&h, prev).and_then(|w| {
                let ss = if strong && w.is_some() { probe.strongly_separated(prev, &h)? } else { true };
                Ok((w.is_some(), ss))
            });
            match step {
                Ok((true, ss)) => {
                    if !ss {
                        out.strongly_separated = false;
                    }
                }
                Ok((false, _)) => {
                    return Err(Error::Invalid(format!(
                        "chain `{}` is not descending at index {i}",
                        out.generator
                    )))
                }
                Err(Error::Inconclusive { radius, .. }) => {
                    out.truncated = Some(radius);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        out.names.push(probe.name(&h));
        out.halfspaces.push(h);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum ChainVerdict {
    /// 1-based index of the first disjoint pair.
    DisjointAt { index: usize },
    IntersectingThrough { m: usize },
}

pub fn chain_disjointness<S: MedianSpace + ?Sized>(
    probe: &Probe<S>,
    a: &[Half<S::V>],
    b: &[Half<S::V>],
    m: usize,
) -> Result<ChainVerdict> {
    if a.len() < m || b.len() < m {
        return Err(Error::Invalid(format!("chains are shorter than the requested depth {m}")));
    }
    for i in 0..m {
        if probe.disjoint(&a[i], &b[i])? {
            return Ok(ChainVerdict::DisjointAt { index: i + 1 });
        }
    }
    Ok(ChainVerdict::IntersectingThrough { m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;

    #[test]
    fn counts() {
        for n in 1..=4 {
            assert_eq!(hyperplanes(&build::hypercube(n)).unwrap().len(), n);
        }
        assert_eq!(hyperplanes(&build::random_tree(25, 3)).unwrap().len(), 24);
        assert_eq!(hyperplanes(&build::grid(2, 3)).unwrap().len(), 3);
        assert!(HyperplaneSystem::new(&build::cycle(6)).is_err());
    }

    #[test]
    fn sides() {
        let p4 = build::path(4);
        let sys = HyperplaneSystem::new(&p4).unwrap();
        let mid = sys.class_of_edge(EdgeId::new(p4.id("1").unwrap(), p4.id("2").unwrap())).unwrap();
        let (a, b) = sys.halfspace_pair(mid);
        assert_eq!((a.len(), b.len()), (2, 2));
        assert!(a.contains(&p4.id("0").unwrap()));
        let star = build::star(3);
        let sys = HyperplaneSystem::new(&star).unwrap();
        for h in 0..3 {
            let (a, b) = sys.halfspace_pair(h);
            // "c" sorts first, so side 0 is the big side
            assert_eq!((a.len(), b.len()), (3, 1));
        }
        let cube = HyperplaneSystem::new(&build::hypercube(3)).unwrap();
        assert!((0..3).all(|h| cube.halfspace_pair(h).0.len() == 4));
    }

    #[test]
    fn relations() {
        let sq = HyperplaneSystem::new(&build::hypercube(2)).unwrap();
        assert!(sq.transverse(0, 1));
        let p4 = build::path(4);
        let sys = HyperplaneSystem::new(&p4).unwrap();
        let e = |a: &str, b: &str| sys.class_of_edge(EdgeId::new(p4.id(a).unwrap(), p4.id(b).unwrap())).unwrap();
        let (e1, e3) = (e("0", "1"), e("2", "3"));
        let r = sys.pair_relation(Halfspace::new(e1, 0), Halfspace::new(e3, 1));
        assert_eq!(r.base, BaseRelation::Facing);
        assert!(r.strongly_separated);
        assert!(!sys.separated(e1, e("1", "2")));
        let star = HyperplaneSystem::new(&build::star(3)).unwrap();
        assert!(facing_tuple_check(&star, &[Halfspace::new(0, 1), Halfspace::new(1, 1), Halfspace::new(2, 1)]));
        assert!(!facing_tuple_check(&star, &[Halfspace::new(0, 1), Halfspace::new(0, 0)]));
    }

    #[test]
    fn product_hyperplanes_are_not_strongly_separated() {
        let x = build::hypercube(2).product(&build::path(4));
        let sys = HyperplaneSystem::new(&x).unwrap();
        let path_planes: Vec<usize> = (0..sys.len())
            .filter(|&h| sys.hyperplane(h).edges.len() == 4)
            .collect();
        assert_eq!(path_planes.len(), 3);
        assert!(sys.separated(path_planes[0], path_planes[2]) || sys.separated(path_planes[0], path_planes[1]));
        for (i, &a) in path_planes.iter().enumerate() {
            for &b in &path_planes[i + 1..] {
                assert!(!sys.strongly_separated(a, b));
            }
        }
    }

    #[test]
    fn ultrafilters() {
        let p2 = build::path(2);
        let sys = HyperplaneSystem::new(&p2).unwrap();
        assert_eq!(sys.vertex_ultrafilter(VertexId(0)).unwrap().halfspaces, vec![Halfspace::new(0, 0)]);
        let star = build::star(3);
        let sys = HyperplaneSystem::new(&star).unwrap();
        let u = sys.vertex_ultrafilter(star.id("c").unwrap()).unwrap();
        assert!(u.halfspaces.iter().all(|&h| sys.members(h).len() == 3));
    }

    #[test]
    fn factor_quotients() {
        let g = build::star(3).product(&build::path(2));
        let f = g.irreducible_factorization().unwrap();
        assert_eq!(f.iter().map(|x| x.vertex_count()).sum::<usize>(), 6);
    }
}
