//! Median spaces accessed through neighbourhoods and distances.
//!
//! Both finite complexes and the lazily generated families implement
//! [`MedianSpace`]; all geometric routines that do not need a global view of
//! the complex are written against this trait.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use crate::complex::{CubeComplexGraph, GraphBuilder, VertexId};
use crate::error::{Error, Result};

pub trait MedianSpace: Send + Sync {
    type V: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn basepoint(&self) -> Self::V;
    fn neighbors(&self, v: &Self::V) -> Vec<Self::V>;
    fn distance(&self, a: &Self::V, b: &Self::V) -> usize;
    fn vertex_name(&self, v: &Self::V) -> String;
    fn parse_vertex(&self, s: &str) -> Option<Self::V>;

    fn is_finite(&self) -> bool {
        false
    }

    /// Whether hyperbolic elements of the built-in actions on this space come
    /// with combinatorial axes that may be certified.
    fn certifies_axes(&self) -> bool {
        false
    }

    /// A finite convex region around the basepoint, growing with `r`.
    fn region(&self, r: usize) -> Vec<Self::V> {
        ball(self, &self.basepoint(), r)
    }

    fn adjacent(&self, a: &Self::V, b: &Self::V) -> bool {
        self.distance(a, b) == 1
    }
}

impl MedianSpace for CubeComplexGraph {
    type V = VertexId;

    fn basepoint(&self) -> VertexId {
        CubeComplexGraph::basepoint(self)
    }

    fn neighbors(&self, v: &VertexId) -> Vec<VertexId> {
        CubeComplexGraph::neighbors(self, *v).to_vec()
    }

    fn distance(&self, a: &VertexId, b: &VertexId) -> usize {
        CubeComplexGraph::distance(self, *a, *b).unwrap_or(usize::MAX / 4)
    }

    fn vertex_name(&self, v: &VertexId) -> String {
        self.name(*v).to_string()
    }

    fn parse_vertex(&self, s: &str) -> Option<VertexId> {
        self.id(s)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn region(&self, _r: usize) -> Vec<VertexId> {
        self.vertices().collect()
    }

    fn adjacent(&self, a: &VertexId, b: &VertexId) -> bool {
        CubeComplexGraph::adjacent(self, *a, *b)
    }
}

/// Vertices within distance `r` of `center`, in breadth-first order.
pub fn ball<S: MedianSpace + ?Sized>(space: &S, center: &S::V, r: usize) -> Vec<S::V> {
    let mut seen = HashSet::new();
    let mut out = vec![center.clone()];
    seen.insert(center.clone());
    let mut frontier = vec![center.clone()];
    for _ in 0..r {
        let mut next = Vec::new();
        for x in &frontier {
            for y in space.neighbors(x) {
                if seen.insert(y.clone()) {
                    next.push(y.clone());
                    out.push(y);
                }
            }
        }
        frontier = next;
    }
    out
}

/// All vertices on geodesics from `a` to `b`.
pub fn interval<S: MedianSpace + ?Sized>(space: &S, a: &S::V, b: &S::V) -> Vec<S::V> {
    let total = space.distance(a, b);
    let mut seen = HashSet::new();
    let mut out = vec![a.clone()];
    seen.insert(a.clone());
    let mut queue = VecDeque::from([(a.clone(), total)]);
    while let Some((x, left)) = queue.pop_front() {
        if left == 0 {
            continue;
        }
        for y in space.neighbors(&x) {
            if !seen.contains(&y) && space.distance(&y, b) + 1 == left {
                seen.insert(y.clone());
                out.push(y.clone());
                queue.push_back((y, left - 1));
            }
        }
    }
    out
}

/// Convex hull by iterated interval closure, failing once it exceeds `cap` vertices.
pub fn hull<S: MedianSpace + ?Sized>(space: &S, points: &[S::V], cap: usize) -> Result<BTreeSet<S::V>> {
    let mut set: BTreeSet<S::V> = points.iter().cloned().collect();
    let mut done: HashSet<(S::V, S::V)> = HashSet::new();
    loop {
        let current: Vec<S::V> = set.iter().cloned().collect();
        let mut grew = false;
        for (i, x) in current.iter().enumerate() {
            for y in &current[i + 1..] {
                if !done.insert((x.clone(), y.clone())) {
                    continue;
                }
                if space.distance(x, y) <= 1 {
                    continue;
                }
                for z in interval(space, x, y) {
                    if set.insert(z) {
                        grew = true;
                    }
                }
                if set.len() > cap {
                    return Err(Error::Inconclusive {
                        what: "convex hull exceeds the vertex cap".into(),
                        radius: cap,
                        needed: set.len(),
                    });
                }
            }
        }
        if !grew {
            return Ok(set);
        }
    }
}

/// Induced subgraph on `vertices` as a finite complex, with the vertex map.
pub fn materialize<S: MedianSpace + ?Sized>(space: &S, vertices: &[S::V]) -> (CubeComplexGraph, HashMap<S::V, VertexId>) {
    let mut b = GraphBuilder::new();
    let mut ids = HashMap::new();
    for v in vertices {
        let id = b.vertex(space.vertex_name(v));
        ids.insert(v.clone(), id);
    }
    for v in vertices {
        let a = ids[v];
        let mut nbrs = space.neighbors(v);
        nbrs.sort();
        for w in nbrs {
            if let Some(&c) = ids.get(&w) {
                if a < c {
                    b.edge(a, c).expect("space neighbourhoods are simple");
                }
            }
        }
    }
    if let Some(&base) = ids.get(&space.basepoint()) {
        b.set_base(base);
    }
    (b.build(), ids)
}

/// The induced cube spanned at `corner` by the given neighbours, as its vertex set.
pub fn span_cube<S: MedianSpace + ?Sized>(space: &S, corner: &S::V, dirs: &[S::V]) -> Option<Vec<S::V>> {
    let k = dirs.len();
    if k > 16 {
        return None;
    }
    let mut by_mask: Vec<Option<S::V>> = vec![None; 1 << k];
    by_mask[0] = Some(corner.clone());
    for (i, d) in dirs.iter().enumerate() {
        if !space.adjacent(corner, d) {
            return None;
        }
        by_mask[1 << i] = Some(d.clone());
    }
    let mut order: Vec<usize> = (0..1usize << k).filter(|m| m.count_ones() >= 2).collect();
    order.sort_by_key(|m| (m.count_ones(), *m));
    for mask in order {
        let lower: Vec<S::V> = (0..k)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| by_mask[mask ^ (1 << b)].clone().unwrap())
            .collect();
        // in a median graph the completing vertex is unique when it exists
        let far = mask.count_ones() as usize;
        let cand = space.neighbors(&lower[0]).into_iter().find(|c| {
            space.distance(corner, c) == far && lower[1..].iter().all(|l| space.adjacent(c, l))
        })?;
        by_mask[mask] = Some(cand);
    }
    let mut out: Vec<S::V> = by_mask.into_iter().map(Option::unwrap).collect();
    out.sort();
    out.dedup();
    (out.len() == 1 << k).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;

    #[test]
    fn intervals_and_hulls() {
        let g = build::grid(3, 3);
        let a = g.id("(0,0)").unwrap();
        let b = g.id("(2,2)").unwrap();
        assert_eq!(interval(&g, &a, &b).len(), 9);
        let c = g.id("(0,2)").unwrap();
        let h = hull(&g, &[a, c], 100).unwrap();
        assert_eq!(h.len(), 3);
        assert!(hull(&g, &[a, b], 4).is_err());
    }

    #[test]
    fn generic_cube_spanning() {
        let q = build::hypercube(3);
        let c = q.id("000").unwrap();
        let dirs = q.neighbors(c).to_vec();
        assert_eq!(span_cube(&q, &c, &dirs).unwrap().len(), 8);
        let t = build::path(3);
        let m = t.id("1").unwrap();
        assert!(span_cube(&t, &m, &t.neighbors(m).to_vec()).is_none());
    }
}
