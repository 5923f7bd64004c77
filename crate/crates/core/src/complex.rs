//! Cube complexes stored by their 1-skeleton.
//!
//! A finite CAT(0) cube complex is determined by its 1-skeleton, which is a
//! median graph; cubes are recovered on demand as induced hypercube subgraphs.
//! Lazily generated infinite families live in [`crate::families`] and are
//! materialized into finite convex regions of this type when needed.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DIMENSION_BOUND: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Undirected edge, stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub VertexId, pub VertexId);

impl EdgeId {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            EdgeId(a, b)
        } else {
            EdgeId(b, a)
        }
    }
}

/// How a complex was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Generation {
    FiniteExplicit,
    /// A finite convex region of a lazily generated family, centred at `basepoint`.
    Ball { basepoint: VertexId, radius: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cube {
    pub dim: usize,
    pub corner: VertexId,
    /// Vertex reached from `corner` by moving along the directions set in the mask.
    pub by_mask: Vec<VertexId>,
    /// The `dim` neighbours of `corner` spanning the cube.
    pub directions: Vec<VertexId>,
}

impl Cube {
    pub fn sorted_vertices(&self) -> Vec<VertexId> {
        let mut v = self.by_mask.clone();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MedianReport {
    pub is_median: bool,
    pub counterexample: Option<[VertexId; 3]>,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Clone)]
struct DistanceTable {
    n: usize,
    d: Vec<u16>,
}

const UNREACHABLE: u16 = u16::MAX;

impl DistanceTable {
    fn get(&self, a: VertexId, b: VertexId) -> Option<usize> {
        let x = self.d[a.index() * self.n + b.index()];
        (x != UNREACHABLE).then_some(x as usize)
    }
}

#[derive(Clone)]
pub struct CubeComplexGraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    adj: Vec<Vec<VertexId>>,
    /// Edges in declaration order and orientation, for faithful serialization.
    edges: Vec<(VertexId, VertexId)>,
    base: Option<VertexId>,
    generation: Generation,
    dim_bound: usize,
    dist: OnceLock<DistanceTable>,
}

impl fmt::Debug for CubeComplexGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CubeComplexGraph")
            .field("vertices", &self.names.len())
            .field("edges", &self.edges.len())
            .field("generation", &self.generation)
            .field("dim_bound", &self.dim_bound)
            .finish()
    }
}

/// Incremental construction of a [`CubeComplexGraph`].
#[derive(Default, Clone, Debug)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    seen: std::collections::HashSet<EdgeId>,
    base: Option<VertexId>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `name`, declaring it if needed.
    pub fn vertex(&mut self, name: impl Into<String>) -> VertexId {
        let name = name.into();
        if let Some(&id) = self.index.get(&name) {
            return id;
        }
        let id = VertexId(self.names.len() as u32);
        self.index.insert(name.clone(), id);
        self.names.push(name);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn has_vertex(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn edge(&mut self, a: VertexId, b: VertexId) -> Result<()> {
        if a == b {
            return Err(Error::Invalid(format!(
                "loop at vertex `{}`",
                self.names[a.index()]
            )));
        }
        if !self.seen.insert(EdgeId::new(a, b)) {
            return Err(Error::Invalid(format!(
                "parallel edge `{}`-`{}`",
                self.names[a.index()],
                self.names[b.index()]
            )));
        }
        self.edges.push((a, b));
        Ok(())
    }

    pub fn edge_by_name(&mut self, a: &str, b: &str) -> Result<()> {
        let a = self.vertex(a);
        let b = self.vertex(b);
        self.edge(a, b)
    }

    pub fn set_base(&mut self, v: VertexId) {
        self.base = Some(v);
    }

    pub fn build(self) -> CubeComplexGraph {
        let n = self.names.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a.index()].push(b);
            adj[b.index()].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        CubeComplexGraph {
            names: self.names,
            index: self.index,
            adj,
            edges: self.edges,
            base: self.base,
            generation: Generation::FiniteExplicit,
            dim_bound: DEFAULT_DIMENSION_BOUND,
            dist: OnceLock::new(),
        }
    }
}

impl CubeComplexGraph {
    pub fn from_edges(names: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for n in names {
            b.vertex(*n);
        }
        for (x, y) in edges {
            b.edge_by_name(x, y)?;
        }
        Ok(b.build())
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len() as u32).map(VertexId)
    }

    /// Edges as declared (orientation preserved).
    pub fn declared_edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|&(a, b)| EdgeId::new(a, b))
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.index()].len()
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adj[a.index()].binary_search(&b).is_ok()
    }

    pub fn base(&self) -> Option<VertexId> {
        self.base
    }

    pub fn basepoint(&self) -> VertexId {
        self.base.unwrap_or(VertexId(0))
    }

    pub fn set_base(&mut self, v: VertexId) {
        self.base = Some(v);
    }

    pub fn generation(&self) -> &Generation {
        &self.generation
    }

    pub fn with_generation(mut self, generation: Generation) -> Self {
        self.generation = generation;
        self
    }

    pub fn dimension_bound(&self) -> usize {
        self.dim_bound
    }

    pub fn with_dimension_bound(mut self, bound: usize) -> Self {
        self.dim_bound = bound.max(1);
        self
    }

    /// Least vertex by name; fixes the side-0 convention for halfspaces.
    pub fn least_named_vertex(&self) -> Option<VertexId> {
        self.vertices().min_by(|a, b| self.name(*a).cmp(self.name(*b)))
    }

    pub fn bfs(&self, from: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[from.index()] = Some(0);
        queue.push_back(from);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x.index()].unwrap();
            for &y in self.neighbors(x) {
                if dist[y.index()].is_none() {
                    dist[y.index()] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    fn table(&self) -> &DistanceTable {
        self.dist.get_or_init(|| {
            let n = self.vertex_count();
            let mut d = vec![UNREACHABLE; n * n];
            for v in self.vertices() {
                for (i, x) in self.bfs(v).into_iter().enumerate() {
                    if let Some(x) = x {
                        d[v.index() * n + i] = x.min(UNREACHABLE as usize - 1) as u16;
                    }
                }
            }
            DistanceTable { n, d }
        })
    }

    /// Edge-path distance; `None` across components.
    pub fn distance(&self, a: VertexId, b: VertexId) -> Option<usize> {
        self.table().get(a, b)
    }

    fn dist_unchecked(&self, a: VertexId, b: VertexId) -> usize {
        self.distance(a, b).unwrap_or(usize::MAX / 4)
    }

    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen[v.index()] {
                continue;
            }
            let comp: Vec<VertexId> = self
                .bfs(v)
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_some())
                .map(|(i, _)| VertexId(i as u32))
                .collect();
            for x in &comp {
                seen[x.index()] = true;
            }
            out.push(comp);
        }
        out
    }

    pub fn check_connected(&self) -> Result<()> {
        let comps = self.components();
        if comps.len() > 1 {
            return Err(Error::Disconnected(
                self.name(comps[0][0]).to_string(),
                self.name(comps[1][0]).to_string(),
            ));
        }
        Ok(())
    }

    pub fn in_interval(&self, a: VertexId, x: VertexId, b: VertexId) -> bool {
        self.dist_unchecked(a, x) + self.dist_unchecked(x, b) == self.dist_unchecked(a, b)
    }

    pub fn interval(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        self.vertices().filter(|&x| self.in_interval(a, x, b)).collect()
    }

    /// One geodesic from `a` to `b`, choosing the least neighbour id at each step.
    pub fn geodesic(&self, a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
        let total = self.distance(a, b)?;
        let mut path = vec![a];
        let mut cur = a;
        for step in 1..=total {
            cur = *self
                .neighbors(cur)
                .iter()
                .find(|&&y| self.dist_unchecked(a, y) == step && self.dist_unchecked(y, b) == total - step)?;
            path.push(cur);
        }
        Some(path)
    }

    /// Checks the median property over all vertex triples.
    pub fn validate_median(&self) -> Result<MedianReport> {
        self.check_connected()?;
        let n = self.vertex_count();
        let report = |c: Option<[VertexId; 3]>| MedianReport {
            is_median: c.is_none(),
            counterexample: c,
            vertices: n,
            edges: self.edge_count(),
        };
        let words = n.div_ceil(64).max(1);
        // interval bitsets, row-major by (a, b)
        let mut intervals = vec![0u64; n * n * words];
        for a in 0..n {
            for b in 0..n {
                let (va, vb) = (VertexId(a as u32), VertexId(b as u32));
                let dab = self.dist_unchecked(va, vb);
                let row = &mut intervals[(a * n + b) * words..(a * n + b + 1) * words];
                for x in 0..n {
                    let vx = VertexId(x as u32);
                    if self.dist_unchecked(va, vx) + self.dist_unchecked(vx, vb) == dab {
                        row[x / 64] |= 1 << (x % 64);
                    }
                }
            }
        }
        let slice = |a: usize, b: usize| &intervals[(a * n + b) * words..(a * n + b + 1) * words];
        for u in 0..n {
            for v in u..n {
                let uv = slice(u, v);
                for w in v..n {
                    let vw = slice(v, w);
                    let uw = slice(u, w);
                    let count: u32 = (0..words)
                        .map(|i| (uv[i] & vw[i] & uw[i]).count_ones())
                        .sum();
                    if count != 1 {
                        return Ok(report(Some([
                            VertexId(u as u32),
                            VertexId(v as u32),
                            VertexId(w as u32),
                        ])));
                    }
                }
            }
        }
        Ok(report(None))
    }

    /// The unique vertex on geodesics between each pair of `u`, `v`, `w`.
    pub fn median(&self, u: VertexId, v: VertexId, w: VertexId) -> Result<VertexId> {
        self.check_connected()?;
        let mut found = self
            .vertices()
            .filter(|&x| self.in_interval(u, x, v) && self.in_interval(v, x, w) && self.in_interval(u, x, w));
        match (found.next(), found.next()) {
            (Some(m), None) => Ok(m),
            _ => Err(Error::NotMedian(
                self.name(u).into(),
                self.name(v).into(),
                self.name(w).into(),
            )),
        }
    }

    /// Spans the cube at `corner` in the given neighbour directions, if it exists
    /// as an induced hypercube.
    pub fn span_cube(&self, corner: VertexId, directions: &[VertexId]) -> Option<Cube> {
        let k = directions.len();
        if k > 24 || directions.iter().any(|&d| !self.adjacent(corner, d)) {
            return None;
        }
        let size = 1usize << k;
        let mut order: Vec<usize> = (3..size).filter(|m| m.count_ones() >= 2).collect();
        order.sort_by_key(|m| (m.count_ones(), *m));
        let mut by_mask = vec![None; size];
        by_mask[0] = Some(corner);
        for (i, &d) in directions.iter().enumerate() {
            by_mask[1 << i] = Some(d);
        }
        if !self.fill_cube(&order, 0, &mut by_mask) {
            return None;
        }
        let by_mask: Vec<VertexId> = by_mask.into_iter().map(Option::unwrap).collect();
        let mut sorted = by_mask.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != size {
            return None;
        }
        for i in 0..size {
            for j in (i + 1)..size {
                let hyper_adjacent = (i ^ j).count_ones() == 1;
                if hyper_adjacent != self.adjacent(by_mask[i], by_mask[j]) {
                    return None;
                }
            }
        }
        Some(Cube {
            dim: k,
            corner,
            by_mask,
            directions: directions.to_vec(),
        })
    }

    fn fill_cube(&self, order: &[usize], at: usize, by_mask: &mut Vec<Option<VertexId>>) -> bool {
        let Some(&mask) = order.get(at) else {
            return true;
        };
        let lower: Vec<VertexId> = (0..usize::BITS as usize)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| by_mask[mask ^ (1 << b)].unwrap())
            .collect();
        let used: Vec<VertexId> = by_mask.iter().flatten().copied().collect();
        let candidates: Vec<VertexId> = self
            .neighbors(lower[0])
            .iter()
            .copied()
            .filter(|c| !used.contains(c))
            .filter(|&c| lower[1..].iter().all(|&l| self.adjacent(c, l)))
            .collect();
        for c in candidates {
            by_mask[mask] = Some(c);
            if self.fill_cube(order, at + 1, by_mask) {
                return true;
            }
        }
        by_mask[mask] = None;
        false
    }

    /// All induced `k`-cubes, each listed once, ordered by sorted vertex set.
    pub fn detect_cubes(&self, k: usize) -> Vec<Cube> {
        if k > self.dim_bound {
            log::warn!(
                "detect_cubes: k = {k} exceeds dimension bound {}",
                self.dim_bound
            );
            return Vec::new();
        }
        let mut found: BTreeMap<Vec<VertexId>, Cube> = BTreeMap::new();
        for v in self.vertices() {
            let nbrs = self.neighbors(v);
            for combo in combinations(nbrs.len(), k) {
                let dirs: Vec<VertexId> = combo.iter().map(|&i| nbrs[i]).collect();
                if let Some(cube) = self.span_cube(v, &dirs) {
                    found.entry(cube.sorted_vertices()).or_insert(cube);
                }
            }
        }
        found.into_values().collect()
    }

    /// Gromov's link condition at `v`: pairwise square-spanning edge sets span cubes.
    pub fn link_is_flag(&self, v: VertexId) -> bool {
        let nbrs = self.neighbors(v).to_vec();
        let m = nbrs.len();
        let mut link = vec![vec![false; m]; m];
        for i in 0..m {
            for j in (i + 1)..m {
                let sq = self.span_cube(v, &[nbrs[i], nbrs[j]]).is_some();
                link[i][j] = sq;
                link[j][i] = sq;
            }
        }
        let mut cliques = Vec::new();
        bron_kerbosch(&link, Vec::new(), (0..m).collect(), Vec::new(), &mut cliques);
        cliques.into_iter().filter(|c| c.len() >= 3).all(|c| {
            let dirs: Vec<VertexId> = c.iter().map(|&i| nbrs[i]).collect();
            self.span_cube(v, &dirs).is_some()
        })
    }

    /// Largest cube dimension at any vertex (bounded by the degree).
    pub fn max_cube_dimension(&self) -> usize {
        let mut best = 0;
        for k in 1..=self.dim_bound + 1 {
            let any = self.vertices().any(|v| {
                let nbrs = self.neighbors(v);
                combinations(nbrs.len(), k).into_iter().any(|c| {
                    let dirs: Vec<VertexId> = c.iter().map(|&i| nbrs[i]).collect();
                    self.span_cube(v, &dirs).is_some()
                })
            });
            if !any {
                break;
            }
            best = k;
        }
        best
    }

    /// Cartesian product of skeletons; vertex names are `(a,b)`.
    pub fn product(&self, other: &CubeComplexGraph) -> CubeComplexGraph {
        let mut b = GraphBuilder::new();
        let name = |x: VertexId, y: VertexId| format!("({},{})", self.name(x), other.name(y));
        for x in self.vertices() {
            for y in other.vertices() {
                b.vertex(name(x, y));
            }
        }
        let id = |x: VertexId, y: VertexId| VertexId((x.index() * other.vertex_count() + y.index()) as u32);
        for x in self.vertices() {
            for &(p, q) in other.declared_edges() {
                b.edge(id(x, p), id(x, q)).expect("product edges are simple");
            }
        }
        for y in other.vertices() {
            for &(p, q) in self.declared_edges() {
                b.edge(id(p, y), id(q, y)).expect("product edges are simple");
            }
        }
        if let (Some(x), Some(y)) = (self.base, other.base) {
            b.set_base(id(x, y));
        }
        b.build()
            .with_dimension_bound(self.dim_bound + other.dim_bound)
    }

    /// Canonical decomposition into irreducible factors.
    ///
    /// Hyperplanes are grouped into the finest classes such that hyperplanes in
    /// different classes are pairwise transverse; each class yields one factor,
    /// obtained by collapsing every hyperplane outside the class.
    pub fn irreducible_factorization(&self) -> Result<Vec<CubeComplexGraph>> {
        let sys = crate::halfspaces::HyperplaneSystem::new(self)?;
        let h = sys.len();
        let mut parent: Vec<usize> = (0..h).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        for i in 0..h {
            for j in (i + 1)..h {
                if !sys.transverse(i, j) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..h {
            let r = find(&mut parent, i);
            classes.entry(r).or_default().push(i);
        }
        let mut classes: Vec<Vec<usize>> = classes.into_values().collect();
        classes.sort();
        if classes.is_empty() {
            return Ok(vec![self.clone()]);
        }
        Ok(classes
            .iter()
            .map(|class| sys.restriction_quotient(self, class))
            .collect())
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: Vec<usize>,
    p: Vec<usize>,
    x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let mut p = p;
    let mut x = x;
    while let Some(&v) = p.first() {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&u| adj[v][u]).collect();
        let x2 = x.iter().copied().filter(|&u| adj[v][u]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.remove(0);
        x.push(v);
    }
}
