//! Lazily generated infinite median spaces.
//!
//! * [`FreeProductTree`]: the Cayley tree of a free product of copies of `Z`
//!   and `Z/2`, acted on by left multiplication.
//! * [`LineComplex`]: `Z`-many copies of a finite complex glued end to end at
//!   a diametric pair.
//! * [`Product`]: finite products of the above.

use std::sync::Arc;

use serde::Serialize;

use crate::complex::{CubeComplexGraph, VertexId};
use crate::error::{Error, Result};
use crate::space::MedianSpace;
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Factor {
    Z,
    Z2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeProductTree {
    factors: Vec<Factor>,
}

impl FreeProductTree {
    pub fn new(factors: Vec<Factor>) -> Self {
        assert!(!factors.is_empty() && factors.len() <= crate::word::MAX_GENERATORS);
        FreeProductTree { factors }
    }

    /// Free group of rank `k`; its Cayley tree is `2k`-regular.
    pub fn free(k: usize) -> Self {
        Self::new(vec![Factor::Z; k])
    }

    /// Free product of `k` copies of `Z/2`; its Cayley tree is `k`-regular.
    pub fn involutions(k: usize) -> Self {
        Self::new(vec![Factor::Z2; k])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn involution_flags(&self) -> Vec<bool> {
        self.factors.iter().map(|f| *f == Factor::Z2).collect()
    }

    pub fn is_involution(&self, g: usize) -> bool {
        self.factors.get(g) == Some(&Factor::Z2)
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| if *f == Factor::Z { 2 } else { 1 }).sum()
    }

    pub fn alphabet(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (g, f) in self.factors.iter().enumerate() {
            out.push(Letter::new(g, false));
            if *f == Factor::Z {
                out.push(Letter::new(g, true));
            }
        }
        out
    }

    pub fn reduce(&self, w: &Word) -> Word {
        w.reduced(|g| self.is_involution(g))
    }

    pub fn mul(&self, x: &Word, y: &Word) -> Word {
        self.reduce(&x.concat(y))
    }

    pub fn inverse(&self, x: &Word) -> Word {
        self.reduce(&x.inverse())
    }
}

impl MedianSpace for FreeProductTree {
    type V = Word;

    fn basepoint(&self) -> Word {
        Word::identity()
    }

    fn neighbors(&self, v: &Word) -> Vec<Word> {
        self.alphabet()
            .into_iter()
            .map(|l| self.reduce(&v.concat(&Word(vec![l]))))
            .collect()
    }

    fn distance(&self, a: &Word, b: &Word) -> usize {
        let common = a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count();
        a.len() + b.len() - 2 * common
    }

    fn vertex_name(&self, v: &Word) -> String {
        v.to_string()
    }

    fn parse_vertex(&self, s: &str) -> Option<Word> {
        let w: Word = s.parse().ok()?;
        if w.max_generator().is_some_and(|g| g >= self.rank()) {
            return None;
        }
        let r = self.reduce(&w);
        (r == w).then_some(w)
    }

    fn certifies_axes(&self) -> bool {
        true
    }
}

/// A point of `L[X]`, normalised so the glue vertex `(i, v*) = (i + 1, v)` is
/// always written with the copy in which it is `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LinePoint {
    pub copy: i64,
    pub vertex: VertexId,
}

#[derive(Clone, Debug)]
pub struct LineComplex {
    base: Arc<CubeComplexGraph>,
    v: VertexId,
    v_star: VertexId,
    diam: usize,
}

impl LineComplex {
    /// Requires `(v, v_star)` to be diametrically opposed in `base`.
    pub fn new(base: CubeComplexGraph, v: VertexId, v_star: VertexId) -> Result<Self> {
        let hyperplanes = crate::halfspaces::HyperplaneSystem::new(&base)?.len();
        let diam = base
            .distance(v, v_star)
            .ok_or_else(|| Error::Invalid("diametric pair lies in different components".into()))?;
        if diam != hyperplanes || v == v_star {
            return Err(Error::Invalid(format!(
                "`{}` and `{}` are not diametrically opposed: distance {diam}, {hyperplanes} hyperplanes",
                base.name(v),
                base.name(v_star)
            )));
        }
        Ok(LineComplex {
            base: Arc::new(base),
            v,
            v_star,
            diam,
        })
    }

    pub fn base(&self) -> &CubeComplexGraph {
        &self.base
    }

    pub fn v(&self) -> VertexId {
        self.v
    }

    pub fn v_star(&self) -> VertexId {
        self.v_star
    }

    /// Distance between consecutive glue vertices.
    pub fn period(&self) -> usize {
        self.diam
    }

    pub fn point(&self, copy: i64, vertex: VertexId) -> LinePoint {
        if vertex == self.v_star {
            LinePoint {
                copy: copy + 1,
                vertex: self.v,
            }
        } else {
            LinePoint { copy, vertex }
        }
    }

    pub fn shift(&self, p: &LinePoint, n: i64) -> LinePoint {
        LinePoint {
            copy: p.copy + n,
            vertex: p.vertex,
        }
    }

    /// Every point of copies `lo..=hi`, including both end glue vertices.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<LinePoint> {
        let mut out = Vec::new();
        for i in lo..=hi {
            for x in self.base.vertices() {
                if x != self.v_star {
                    out.push(LinePoint { copy: i, vertex: x });
                }
            }
        }
        out.push(LinePoint {
            copy: hi + 1,
            vertex: self.v,
        });
        out
    }

    /// Copies containing `p` (two for glue vertices).
    pub fn copies_of(&self, p: &LinePoint) -> Vec<i64> {
        if p.vertex == self.v {
            vec![p.copy - 1, p.copy]
        } else {
            vec![p.copy]
        }
    }

    fn d_base(&self, a: VertexId, b: VertexId) -> usize {
        self.base.distance(a, b).expect("base complex is connected")
    }
}

impl MedianSpace for LineComplex {
    type V = LinePoint;

    fn basepoint(&self) -> LinePoint {
        LinePoint {
            copy: 0,
            vertex: self.v,
        }
    }

    fn neighbors(&self, p: &LinePoint) -> Vec<LinePoint> {
        let mut out: Vec<LinePoint> = self
            .base
            .neighbors(p.vertex)
            .iter()
            .map(|&y| self.point(p.copy, y))
            .collect();
        if p.vertex == self.v {
            out.extend(
                self.base
                    .neighbors(self.v_star)
                    .iter()
                    .map(|&y| self.point(p.copy - 1, y)),
            );
        }
        out.sort();
        out
    }

    fn distance(&self, a: &LinePoint, b: &LinePoint) -> usize {
        let (a, b) = if a.copy <= b.copy { (a, b) } else { (b, a) };
        if a.copy == b.copy {
            return self.d_base(a.vertex, b.vertex);
        }
        // b.vertex may be the glue vertex v of copy b.copy, i.e. v* of copy b.copy - 1
        let gaps = (b.copy - 1 - a.copy) as usize;
        self.d_base(a.vertex, self.v_star) + gaps * self.diam + self.d_base(self.v, b.vertex)
    }

    fn vertex_name(&self, p: &LinePoint) -> String {
        format!("{}@{}", self.base.name(p.vertex), p.copy)
    }

    fn parse_vertex(&self, s: &str) -> Option<LinePoint> {
        let (x, i) = s.rsplit_once('@')?;
        let copy: i64 = i.parse().ok()?;
        let vertex = self.base.id(x)?;
        Some(self.point(copy, vertex))
    }

    fn certifies_axes(&self) -> bool {
        true
    }

    fn region(&self, r: usize) -> Vec<LinePoint> {
        self.window(-(r as i64), r as i64)
    }
}

/// Cartesian product of two median spaces.
#[derive(Clone, Debug)]
pub struct Product<A, B> {
    pub left: A,
    pub right: B,
}

impl<A, B> Product<A, B> {
    pub fn new(left: A, right: B) -> Self {
        Product { left, right }
    }
}

fn split_pair(s: &str) -> Option<(&str, &str)> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&inner[..i], &inner[i + 1..])),
            _ => {}
        }
    }
    None
}

impl<A: MedianSpace, B: MedianSpace> MedianSpace for Product<A, B> {
    type V = (A::V, B::V);

    fn basepoint(&self) -> Self::V {
        (self.left.basepoint(), self.right.basepoint())
    }

    fn neighbors(&self, v: &Self::V) -> Vec<Self::V> {
        let mut out: Vec<Self::V> = self
            .left
            .neighbors(&v.0)
            .into_iter()
            .map(|x| (x, v.1.clone()))
            .collect();
        out.extend(self.right.neighbors(&v.1).into_iter().map(|y| (v.0.clone(), y)));
        out
    }

    fn distance(&self, a: &Self::V, b: &Self::V) -> usize {
        self.left.distance(&a.0, &b.0) + self.right.distance(&a.1, &b.1)
    }

    fn vertex_name(&self, v: &Self::V) -> String {
        format!("({},{})", self.left.vertex_name(&v.0), self.right.vertex_name(&v.1))
    }

    fn parse_vertex(&self, s: &str) -> Option<Self::V> {
        let (a, b) = split_pair(s)?;
        Some((self.left.parse_vertex(a)?, self.right.parse_vertex(b)?))
    }

    fn is_finite(&self) -> bool {
        self.left.is_finite() && self.right.is_finite()
    }

    fn certifies_axes(&self) -> bool {
        self.left.certifies_axes() && self.right.certifies_axes()
    }

    /// Boxes rather than metric balls, so that regions stay convex.
    fn region(&self, r: usize) -> Vec<Self::V> {
        let left = self.left.region(r);
        let right = self.right.region(r);
        let mut out = Vec::with_capacity(left.len() * right.len());
        for x in &left {
            for y in &right {
                out.push((x.clone(), y.clone()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;
    use crate::space::{ball, materialize};

    fn bfs_distance<S: MedianSpace>(s: &S, a: &S::V, b: &S::V, limit: usize) -> Option<usize> {
        for r in 0..=limit {
            if ball(s, a, r).contains(b) {
                return Some(r);
            }
        }
        None
    }

    #[test]
    fn free_group_tree() {
        let f2 = FreeProductTree::free(2);
        assert_eq!(ball(&f2, &Word::identity(), 2).len(), 1 + 4 + 12);
        let x: Word = "abA".parse().unwrap();
        let y: Word = "aB".parse().unwrap();
        assert_eq!(f2.distance(&x, &y), 3);
        assert_eq!(bfs_distance(&f2, &x, &y, 6), Some(3));
        assert_eq!(f2.parse_vertex("aA"), None);
    }

    #[test]
    fn involution_tree_is_three_regular() {
        let t = FreeProductTree::involutions(3);
        assert_eq!(t.neighbors(&Word::identity()).len(), 3);
        assert_eq!(t.neighbors(&"ab".parse().unwrap()).len(), 3);
        assert_eq!(ball(&t, &Word::identity(), 3).len(), 1 + 3 + 6 + 12);
    }

    #[test]
    fn line_distances_match_bfs() {
        let sq = build::hypercube(2);
        let (v, vs) = (sq.id("00").unwrap(), sq.id("11").unwrap());
        let line = LineComplex::new(sq.clone(), v, vs).unwrap();
        let pts = line.window(-2, 2);
        assert_eq!(pts.len(), 5 * 4 - 4);
        for a in &pts {
            for b in &pts {
                assert_eq!(Some(line.distance(a, b)), bfs_distance(&line, a, b, 12), "{a:?} {b:?}");
            }
        }
        let (g, _) = materialize(&line, &pts);
        assert!(g.validate_median().unwrap().is_median);
        assert_eq!(line.parse_vertex("11@0"), Some(line.point(1, v)));
        assert!(LineComplex::new(sq.clone(), v, sq.id("01").unwrap()).is_err());
    }

    #[test]
    fn product_names_parse() {
        let p = Product::new(FreeProductTree::free(2), FreeProductTree::free(2));
        let v = ("ab".parse().unwrap(), "B".parse().unwrap());
        assert_eq!(p.vertex_name(&v), "(ab,B)");
        assert_eq!(p.parse_vertex("(ab,B)"), Some(v));
        assert_eq!(p.neighbors(&p.basepoint()).len(), 8);
    }
}
