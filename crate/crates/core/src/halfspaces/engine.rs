//! Halfspaces of an arbitrary median space, named by an oriented edge.
//!
//! `Half { from, to }` is the side of the hyperplane dual to the edge
//! `from -- to` that contains `to`; a vertex `x` lies in it iff
//! `d(x, to) < d(x, from)`. Membership is therefore exact wherever distances
//! are. Emptiness questions are answered on the convex hull of the endpoints
//! involved: the gate map onto a convex set crossed by two hyperplanes
//! preserves membership in all four quadrants, so a quadrant is empty iff it
//! misses the hull. Every search is bounded by a radius around the basepoint
//! and reports [`Error::Inconclusive`] rather than guessing.

use std::cell::Cell;
use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfspaces::Relation;
use crate::space::{self, MedianSpace};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Half<V> {
    pub from: V,
    pub to: V,
}

impl<V: Clone> Half<V> {
    pub fn new(from: V, to: V) -> Self {
        Half { from, to }
    }

    /// The complementary halfspace.
    pub fn star(&self) -> Self {
        Half {
            from: self.to.clone(),
            to: self.from.clone(),
        }
    }

    pub fn map<W>(&self, mut f: impl FnMut(&V) -> W) -> Half<W> {
        Half {
            from: f(&self.from),
            to: f(&self.to),
        }
    }
}

/// Vertex cap for hulls and hyperplane closures, independent of the radius.
pub const DEFAULT_CAP: usize = 250_000;

/// Budgeted query context over a median space.
pub struct Probe<'a, S: MedianSpace + ?Sized> {
    space: &'a S,
    base: S::V,
    radius: usize,
    cap: usize,
    consumed: Cell<usize>,
}

/// Result of a bounded hyperplane closure.
#[derive(Clone, Debug)]
pub struct Carrier<V> {
    /// Edges of the hyperplane, oriented from the `from` side to the `to` side.
    pub edges: Vec<(V, V)>,
    /// One representative edge per hyperplane transverse to this one.
    pub crossing: Vec<Half<V>>,
}

impl<'a, S: MedianSpace + ?Sized> Probe<'a, S> {
    pub fn new(space: &'a S, radius: usize) -> Self {
        Probe {
            space,
            base: space.basepoint(),
            radius,
            cap: DEFAULT_CAP,
            consumed: Cell::new(0),
        }
    }

    /// Probe with no radius limit, for finite complexes.
    pub fn unbounded(space: &'a S) -> Self {
        Self::new(space, usize::MAX / 4)
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn space(&self) -> &'a S {
        self.space
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Largest distance from the basepoint touched so far.
    pub fn consumed(&self) -> usize {
        self.consumed.get()
    }

    fn touch(&self, v: &S::V, what: &str) -> Result<()> {
        let d = self.space.distance(&self.base, v);
        if d > self.consumed.get() {
            self.consumed.set(d);
        }
        if d > self.radius {
            return Err(Error::Inconclusive {
                what: what.to_string(),
                radius: self.radius,
                needed: d,
            });
        }
        Ok(())
    }

    pub fn name(&self, h: &Half<S::V>) -> String {
        format!("{}|{}", self.space.vertex_name(&h.from), self.space.vertex_name(&h.to))
    }

    pub fn parse(&self, s: &str) -> Option<Half<S::V>> {
        let (a, b) = s.split_once('|')?;
        let h = Half::new(self.space.parse_vertex(a)?, self.space.parse_vertex(b)?);
        self.is_edge(&h).then_some(h)
    }

    pub fn is_edge(&self, h: &Half<S::V>) -> bool {
        self.space.adjacent(&h.from, &h.to)
    }

    #[inline]
    pub fn contains(&self, h: &Half<S::V>, x: &S::V) -> bool {
        self.space.distance(x, &h.to) < self.space.distance(x, &h.from)
    }

    /// Whether the edges of `h` and `k` are dual to the same hyperplane.
    pub fn same_hyperplane(&self, h: &Half<S::V>, k: &Half<S::V>) -> bool {
        self.contains(h, &k.from) != self.contains(h, &k.to)
    }

    pub fn equal(&self, h: &Half<S::V>, k: &Half<S::V>) -> bool {
        self.same_hyperplane(h, k) && self.contains(h, &k.to)
    }

    /// Convex hull of `points`, within budget.
    pub fn hull(&self, points: &[S::V]) -> Result<BTreeSet<S::V>> {
        for p in points {
            self.touch(p, "hull endpoint outside the radius")?;
        }
        let set = space::hull(self.space, points, self.cap)?;
        for v in &set {
            self.touch(v, "convex hull leaves the radius")?;
        }
        Ok(set)
    }

    /// Some vertex of `h ∩ k`, or `None` if the intersection is empty.
    pub fn quadrant(&self, h: &Half<S::V>, k: &Half<S::V>) -> Result<Option<S::V>> {
        if self.same_hyperplane(h, k) {
            return Ok(self.contains(h, &k.to).then(|| h.to.clone()));
        }
        for x in [&h.to, &h.from, &k.to, &k.from] {
            if self.contains(h, x) && self.contains(k, x) {
                return Ok(Some(x.clone()));
            }
        }
        let hull = self.hull(&[h.from.clone(), h.to.clone(), k.from.clone(), k.to.clone()])?;
        Ok(hull.into_iter().find(|x| self.contains(h, x) && self.contains(k, x)))
    }

    pub fn disjoint(&self, h: &Half<S::V>, k: &Half<S::V>) -> Result<bool> {
        Ok(self.quadrant(h, k)?.is_none())
    }

    pub fn subset(&self, h: &Half<S::V>, k: &Half<S::V>) -> Result<bool> {
        self.disjoint(h, &k.star())
    }

    /// `h ⊊ k`, returning a vertex of `k` outside `h` as the witness.
    pub fn strict_subset(&self, h: &Half<S::V>, k: &Half<S::V>) -> Result<Option<S::V>> {
        if !self.subset(h, k)? {
            return Ok(None);
        }
        self.quadrant(k, &h.star())
    }

    pub fn transverse(&self, h: &Half<S::V>, k: &Half<S::V>) -> Result<bool> {
        Ok(self.relation(h, k)? == Relation::Transverse)
    }

    pub fn relation(&self, h: &Half<S::V>, k: &Half<S::V>) -> Result<Relation> {
        if self.same_hyperplane(h, k) {
            return Ok(if self.contains(h, &k.to) {
                Relation::Equal
            } else {
                Relation::Complementary
            });
        }
        let (hs, ks) = (h.star(), k.star());
        let empties = [
            self.quadrant(h, k)?.is_none(),
            self.quadrant(h, &ks)?.is_none(),
            self.quadrant(&hs, k)?.is_none(),
            self.quadrant(&hs, &ks)?.is_none(),
        ];
        Ok(Relation::from_empty_quadrants(empties))
    }

    /// A geodesic from `a` to `b`, stepping to the least neighbour (in vertex order) that gets closer.
    pub fn geodesic(&self, a: &S::V, b: &S::V) -> Vec<S::V> {
        let mut path = vec![a.clone()];
        let mut cur = a.clone();
        let mut left = self.space.distance(a, b);
        while left > 0 {
            let mut nbrs = self.space.neighbors(&cur);
            nbrs.sort();
            let next = nbrs
                .into_iter()
                .find(|y| self.space.distance(y, b) + 1 == left)
                .expect("median spaces are geodesic");
            path.push(next.clone());
            cur = next;
            left -= 1;
        }
        path
    }

    /// A hyperplane separating the hyperplanes of `h` and `k`, oriented to contain `k`.
    ///
    /// Every separating hyperplane crosses a geodesic between nearest endpoints,
    /// so only the edges of one such geodesic are candidates.
    pub fn separator(&self, h: &Half<S::V>, k: &Half<S::V>) -> Result<Option<Half<S::V>>> {
        if self.same_hyperplane(h, k) || self.transverse(h, k)? {
            return Ok(None);
        }
        let mut best: Option<(usize, S::V, S::V)> = None;
        for p in [&h.from, &h.to] {
            for q in [&k.from, &k.to] {
                let d = self.space.distance(p, q);
                if best.as_ref().is_none_or(|b| d < b.0) {
                    best = Some((d, p.clone(), q.clone()));
                }
            }
        }
        let (_, p, q) = best.unwrap();
        let path = self.geodesic(&p, &q);
        for pair in path.windows(2) {
            let m = Half::new(pair[0].clone(), pair[1].clone());
            self.touch(&m.to, "separator search leaves the radius")?;
            if self.same_hyperplane(&m, h) || self.same_hyperplane(&m, k) {
                continue;
            }
            let h_side = self.contains(&m, &h.from);
            if h_side != self.contains(&m, &h.to) {
                continue;
            }
            if self.contains(&m, &k.from) == h_side || self.contains(&m, &k.to) == h_side {
                continue;
            }
            if self.transverse(&m, h)? || self.transverse(&m, k)? {
                continue;
            }
            return Ok(Some(m));
        }
        Ok(None)
    }

    pub fn separated(&self, h: &Half<S::V>, k: &Half<S::V>) -> Result<bool> {
        Ok(self.separator(h, k)?.is_some())
    }

    /// All edges of the hyperplane of `h` and the hyperplanes crossing it,
    /// by closure over squares. Fails if the class is not finite within budget.
    pub fn carrier(&self, h: &Half<S::V>) -> Result<Carrier<S::V>> {
        let mut seen: HashSet<(S::V, S::V)> = HashSet::new();
        let mut edges = Vec::new();
        let mut crossing: Vec<Half<S::V>> = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert((h.from.clone(), h.to.clone()));
        queue.push_back((h.from.clone(), h.to.clone()));
        while let Some((a, b)) = queue.pop_front() {
            self.touch(&a, "hyperplane carrier leaves the radius")?;
            self.touch(&b, "hyperplane carrier leaves the radius")?;
            edges.push((a.clone(), b.clone()));
            if edges.len() > self.cap {
                return Err(Error::Inconclusive {
                    what: "hyperplane carrier exceeds the vertex cap".into(),
                    radius: self.radius,
                    needed: self.radius + 1,
                });
            }
            let b_nbrs = self.space.neighbors(&b);
            let mut a_nbrs = self.space.neighbors(&a);
            a_nbrs.sort();
            for c in a_nbrs {
                if c == b {
                    continue;
                }
                // completing the square a-b-d-c
                let Some(d) = b_nbrs.iter().find(|d| **d != a && self.space.adjacent(&c, d)) else {
                    continue;
                };
                let cr = Half::new(a.clone(), c.clone());
                if !crossing.iter().any(|m| self.same_hyperplane(m, &cr)) {
                    crossing.push(cr);
                }
                if seen.insert((c.clone(), d.clone())) {
                    queue.push_back((c, d.clone()));
                }
            }
        }
        Ok(Carrier { edges, crossing })
    }

    /// Separated, and no hyperplane is transverse to both.
    pub fn strongly_separated(&self, h: &Half<S::V>, k: &Half<S::V>) -> Result<bool> {
        if !self.separated(h, k)? {
            return Ok(false);
        }
        let (carrier, other) = match self.carrier(h) {
            Ok(c) => (c, k),
            Err(e) if e.is_inconclusive() => (self.carrier(k)?, h),
            Err(e) => return Err(e),
        };
        for m in &carrier.crossing {
            if self.transverse(m, other)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Least edge-path distance between endpoints of edges of the two hyperplanes.
    pub fn hyperplane_distance(&self, h: &Half<S::V>, k: &Half<S::V>) -> Result<usize> {
        if self.same_hyperplane(h, k) {
            return Ok(0);
        }
        let a = self.carrier(h)?;
        let b = self.carrier(k)?;
        let mut best = usize::MAX;
        for (x1, x2) in &a.edges {
            for (y1, y2) in &b.edges {
                for x in [x1, x2] {
                    for y in [y1, y2] {
                        best = best.min(self.space.distance(x, y));
                    }
                }
            }
        }
        Ok(best)
    }

    /// Sides of distinct hyperplanes that are pairwise disjoint.
    pub fn facing(&self, hs: &[Half<S::V>]) -> Result<bool> {
        for i in 0..hs.len() {
            for j in (i + 1)..hs.len() {
                if self.same_hyperplane(&hs[i], &hs[j]) || !self.disjoint(&hs[i], &hs[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;
    use crate::families::FreeProductTree;
    use crate::word::Word;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn tree_relations() {
        let t = FreeProductTree::free(2);
        let p = Probe::new(&t, 10);
        let h = Half::new(w("1"), w("a"));
        let k = Half::new(w("a"), w("aa"));
        assert!(p.contains(&h, &w("ab")));
        assert!(!p.contains(&h, &w("b")));
        assert_eq!(p.relation(&k, &h).unwrap(), Relation::Subset);
        assert!(!p.separated(&h, &k).unwrap());
        let far = Half::new(w("aa"), w("aaa"));
        assert!(p.separated(&h, &far).unwrap());
        assert!(p.strongly_separated(&h, &far).unwrap());
        assert_eq!(p.hyperplane_distance(&h, &far).unwrap(), 1);
        let b = Half::new(w("1"), w("b"));
        assert_eq!(p.relation(&h, &b).unwrap(), Relation::Facing);
    }

    #[test]
    fn grid_transversality() {
        let g = build::grid(3, 3);
        let v = |s: &str| g.id(s).unwrap();
        let p = Probe::unbounded(&g);
        let h = Half::new(v("(0,0)"), v("(1,0)"));
        let k = Half::new(v("(0,1)"), v("(0,2)"));
        assert!(p.transverse(&h, &k).unwrap());
        let c = p.carrier(&h).unwrap();
        assert_eq!(c.edges.len(), 3);
        assert_eq!(c.crossing.len(), 2);
        let h2 = Half::new(v("(1,2)"), v("(2,2)"));
        assert_eq!(p.relation(&h, &h2).unwrap(), Relation::Superset);
        assert!(!p.separated(&h, &h2).unwrap());
    }

    #[test]
    fn budget_is_reported() {
        let t = FreeProductTree::free(2);
        let p = Probe::new(&t, 2);
        let h = Half::new(w("1"), w("a"));
        let k = Half::new(w("bbb"), w("bbbb"));
        match p.relation(&h, &k) {
            Err(Error::Inconclusive { radius, needed, .. }) => {
                assert_eq!(radius, 2);
                assert!(needed > 2);
            }
            other => panic!("{other:?}"),
        }
    }
}
