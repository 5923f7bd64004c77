//! Lines of copies of a finite complex and the wreath-type group acting on them.
//!
//! For a finite complex `X` with diametrically opposed vertices `v, v*`, the
//! line `L[X]` glues copies `X_i` along `v_i* = v_{i+1}`. The group
//! `Z ⋉ Σ_X`, with `Σ_X` the finitely supported maps `Z -> Aut_{v,v*}(X)`,
//! acts by `(σ, τ^n)·(i, x) = (i + n, σ_{i+n}(x))`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::build;
use crate::complex::{CubeComplexGraph, EdgeId, VertexId};
use crate::error::{Error, Result};
use crate::families::{LineComplex, LinePoint};
use crate::girth::{derived_series, DerivedSeries};
use crate::groups::{lcm, FiniteGroup, GroupOps, Perm};
use crate::halfspaces::HyperplaneSystem;
use crate::space::materialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiametricPair {
    pub v: VertexId,
    pub v_star: VertexId,
    pub geodesic: Vec<VertexId>,
}

/// The first pair, in vertex-name order, at distance equal to the number of
/// hyperplanes.
pub fn find_diametric_pair(x: &CubeComplexGraph) -> Result<Option<DiametricPair>> {
    let h = HyperplaneSystem::new(x)?.len();
    let mut order: Vec<VertexId> = x.vertices().collect();
    order.sort_by(|a, b| x.name(*a).cmp(x.name(*b)));
    for &v in &order {
        let dist = x.bfs(v);
        for &w in &order {
            if w != v && dist[w.index()] == Some(h) {
                let geodesic = x.geodesic(v, w).expect("connected");
                return Ok(Some(DiametricPair { v, v_star: w, geodesic }));
            }
        }
    }
    Ok(None)
}

/// The pair `((x, y), (x*, y*))` in the product complex built by
/// [`CubeComplexGraph::product`].
pub fn product_pair(px: &DiametricPair, y: &CubeComplexGraph, py: &DiametricPair) -> (VertexId, VertexId) {
    let id = |a: VertexId, b: VertexId| VertexId((a.index() * y.vertex_count() + b.index()) as u32);
    (id(px.v, py.v), id(px.v_star, py.v_star))
}

/// A finite window of `L[X]` materialised as a complex.
#[derive(Clone, Debug)]
pub struct LineBall {
    pub line: LineComplex,
    pub lo: i64,
    pub hi: i64,
    pub graph: CubeComplexGraph,
    pub points: Vec<LinePoint>,
    pub index: HashMap<LinePoint, VertexId>,
}

impl LineBall {
    /// Copies a vertex of the ball belongs to.
    pub fn copies(&self, id: VertexId) -> Vec<i64> {
        self.line
            .copies_of(&self.points[id.index()])
            .into_iter()
            .filter(|c| (self.lo..=self.hi).contains(c))
            .collect()
    }
}

/// Copies `-r..=r` of `L[X]`; the result is checked to be median with flag links.
pub fn build_line_complex(x: &CubeComplexGraph, pair: &DiametricPair, radius_copies: usize) -> Result<LineBall> {
    let line = LineComplex::new(x.clone(), pair.v, pair.v_star)?;
    let (lo, hi) = (-(radius_copies as i64), radius_copies as i64);
    let points = line.window(lo, hi);
    let (graph, index) = materialize(&line, &points);
    graph.validate_median()?;
    if let Some(v) = graph.vertices().find(|&v| !graph.link_is_flag(v)) {
        return Err(Error::RepresentationInvalid(format!("link of `{}` is not flag", graph.name(v))));
    }
    Ok(LineBall {
        line,
        lo,
        hi,
        graph,
        points,
        index,
    })
}

/// Cap on automorphisms enumerated by [`automorphisms`].
pub const MAX_AUTOMORPHISMS: usize = 1_000_000;

/// All automorphisms of `x` with the prescribed images, as vertex permutations
/// sorted by image list.
pub fn automorphisms(x: &CubeComplexGraph, fixed: &[(VertexId, VertexId)]) -> Result<Vec<Perm>> {
    let n = x.vertex_count();
    if n == 0 {
        return Ok(vec![Perm::identity(0)]);
    }
    x.check_connected()?;
    // BFS order so every vertex after the first has an earlier neighbour
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([VertexId(0)]);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in x.neighbors(u) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                parent[w.index()] = u.index();
                queue.push_back(w);
            }
        }
    }
    let mut forced: Vec<Option<VertexId>> = vec![None; n];
    for &(a, b) in fixed {
        forced[a.index()] = Some(b);
    }
    struct Search<'a> {
        x: &'a CubeComplexGraph,
        order: Vec<VertexId>,
        parent: Vec<usize>,
        forced: Vec<Option<VertexId>>,
        image: Vec<Option<VertexId>>,
        used: Vec<bool>,
        out: Vec<Perm>,
    }
    impl Search<'_> {
        fn go(&mut self, k: usize) -> Result<()> {
            if k == self.order.len() {
                if self.out.len() >= MAX_AUTOMORPHISMS {
                    return Err(Error::Invalid(format!("more than {MAX_AUTOMORPHISMS} automorphisms")));
                }
                let images = self.image.iter().map(|i| i.unwrap().0).collect();
                self.out.push(Perm::from_images(images)?);
                return Ok(());
            }
            let u = self.order[k];
            let mut candidates: Vec<VertexId> = match self.forced[u.index()] {
                Some(b) => vec![b],
                None if k == 0 => self.x.vertices().collect(),
                None => self.x.neighbors(self.image[self.parent[u.index()]].unwrap()).to_vec(),
            };
            candidates.sort_unstable();
            for c in candidates {
                if self.used[c.index()] || self.x.degree(c) != self.x.degree(u) {
                    continue;
                }
                let consistent = self.order[..k].iter().all(|&w| {
                    self.x.adjacent(u, w) == self.x.adjacent(c, self.image[w.index()].unwrap())
                });
                if !consistent {
                    continue;
                }
                self.image[u.index()] = Some(c);
                self.used[c.index()] = true;
                self.go(k + 1)?;
                self.used[c.index()] = false;
                self.image[u.index()] = None;
            }
            Ok(())
        }
    }
    let mut s = Search {
        x,
        order,
        parent,
        forced,
        image: vec![None; n],
        used: vec![false; n],
        out: Vec::new(),
    };
    s.go(0)?;
    s.out.sort();
    Ok(s.out)
}

/// `Aut_{v,v*}(X)` as a permutation group on the vertices of `X`.
#[derive(Clone, Debug)]
pub struct FixingGroup {
    pub v: VertexId,
    pub v_star: VertexId,
    pub group: FiniteGroup,
}

/// Enumerates the automorphisms fixing both vertices of `pair` and checks
/// that they form a group generated by a greedily chosen subset.
pub fn aut_fixing_pair(x: &CubeComplexGraph, pair: &DiametricPair) -> Result<FixingGroup> {
    let all = automorphisms(x, &[(pair.v, pair.v), (pair.v_star, pair.v_star)])?;
    let n = x.vertex_count();
    let mut gens: Vec<Perm> = Vec::new();
    let mut group = FiniteGroup::trivial(n);
    for p in &all {
        if group.index_of(p).is_none() {
            gens.push(p.clone());
            group = FiniteGroup::from_generators(n, gens.clone())?;
        }
    }
    if group.order() != all.len() {
        return Err(Error::Invalid(format!(
            "automorphisms fixing the pair do not close up: {} enumerated, {} generated",
            all.len(),
            group.order()
        )));
    }
    let labels = (0..gens.len()).map(|i| format!("s{i}")).collect();
    Ok(FixingGroup {
        v: pair.v,
        v_star: pair.v_star,
        group: FiniteGroup::generate(n, gens, labels)?,
    })
}

/// Permutation of hyperplane ids induced by a vertex automorphism.
pub fn hyperplane_permutation(sys: &HyperplaneSystem, p: &Perm) -> Result<Perm> {
    let images = sys
        .hyperplanes()
        .iter()
        .map(|h| {
            let e = h.edges[0];
            let image = EdgeId::new(VertexId(p.apply(e.0.index()) as u32), VertexId(p.apply(e.1.index()) as u32));
            sys.class_of_edge(image)
                .map(|c| c as u32)
                .ok_or_else(|| Error::Invalid("map does not send edges to edges".into()))
        })
        .collect::<Result<Vec<u32>>>()?;
    Perm::from_images(images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordinateAction {
    pub hyperplanes: usize,
    pub group_order: usize,
    pub image_order: usize,
    pub injective: bool,
    /// The image is the full symmetric group on the hyperplanes.
    pub full_symmetric: bool,
    pub generator_images: Vec<Perm>,
}

impl CoordinateAction {
    pub fn is_isomorphism_onto_symmetric(&self) -> bool {
        self.injective && self.full_symmetric
    }
}

/// Action of the fixing group on the hyperplanes of `X`.
pub fn coordinate_action(x: &CubeComplexGraph, fg: &FixingGroup) -> Result<CoordinateAction> {
    let sys = HyperplaneSystem::new(x)?;
    let h = sys.len();
    let mut images = BTreeSet::new();
    for p in fg.group.elements() {
        images.insert(hyperplane_permutation(&sys, p)?);
    }
    let generator_images = fg
        .group
        .generators()
        .iter()
        .map(|p| hyperplane_permutation(&sys, p))
        .collect::<Result<Vec<_>>>()?;
    let image = FiniteGroup::from_generators(h, generator_images.clone())?;
    let factorial = (1..=h).product::<usize>();
    Ok(CoordinateAction {
        hyperplanes: h,
        group_order: fg.group.order(),
        image_order: image.order(),
        injective: images.len() == fg.group.order(),
        full_symmetric: image.order() == factorial,
        generator_images,
    })
}

/// An element `(σ, τ^n)` of `Z ⋉ Σ_X`: the non-identity components of `σ`
/// as element indices of the fixing group, and the shift `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct WreathElement {
    pub components: BTreeMap<i64, usize>,
    pub shift: i64,
}

impl WreathElement {
    pub fn shift(n: i64) -> Self {
        WreathElement {
            components: BTreeMap::new(),
            shift: n,
        }
    }

    pub fn at(index: i64, component: usize) -> Self {
        let mut components = BTreeMap::new();
        if component != 0 {
            components.insert(index, component);
        }
        WreathElement { components, shift: 0 }
    }

    pub fn component(&self, i: i64) -> usize {
        self.components.get(&i).copied().unwrap_or(0)
    }

    /// Least window containing the support, if any.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.components.keys().next()?, *self.components.keys().next_back()?))
    }
}

/// `Z ⋉ Σ_X` with its action on `L[X]`.
#[derive(Clone, Debug)]
pub struct WreathGroup {
    pub line: LineComplex,
    pub fixing: FixingGroup,
    /// Support and shift range used by [`GroupOps::sample`].
    pub window: i64,
}

impl WreathGroup {
    pub fn new(x: &CubeComplexGraph, pair: &DiametricPair, window: i64) -> Result<Self> {
        let fixing = aut_fixing_pair(x, pair)?;
        let line = LineComplex::new(x.clone(), pair.v, pair.v_star)?;
        Ok(WreathGroup { line, fixing, window })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.fixing.group
    }

    /// `(σ1, τ^m)(σ2, τ^n) = (σ1 · τ^m σ2 τ^-m, τ^{m+n})`; component `j` of the
    /// conjugate is `σ2_{j-m}`.
    pub fn multiply(&self, a: &WreathElement, b: &WreathElement) -> WreathElement {
        let g = self.group();
        let mut components = a.components.clone();
        for (&j, &s) in &b.components {
            let k = j + a.shift;
            let c = g.mul(a.component(k), s);
            if c == 0 {
                components.remove(&k);
            } else {
                components.insert(k, c);
            }
        }
        WreathElement {
            components,
            shift: a.shift + b.shift,
        }
    }

    /// `(σ, τ^n)^-1 = (τ^-n σ^-1 τ^n, τ^-n)`; component `j` is `σ_{j+n}^-1`.
    pub fn inverse(&self, a: &WreathElement) -> WreathElement {
        let g = self.group();
        WreathElement {
            components: a.components.iter().map(|(&j, &s)| (j - a.shift, g.inv(s))).collect(),
            shift: -a.shift,
        }
    }

    pub fn pow(&self, a: &WreathElement, mut k: u64) -> WreathElement {
        let mut base = a.clone();
        let mut acc = WreathElement::default();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn act(&self, a: &WreathElement, p: &LinePoint) -> LinePoint {
        let copy = p.copy + a.shift;
        let image = self.group().element(a.component(copy)).apply(p.vertex.index());
        self.line.point(copy, VertexId(image as u32))
    }

    /// Order of the commutator restricted to each copy it acts on.
    pub fn component_orders(&self, a: &WreathElement) -> Vec<u64> {
        a.components
            .values()
            .map(|&c| self.group().element(c).order())
            .collect()
    }
}

impl GroupOps for WreathGroup {
    type Elem = WreathElement;

    fn identity(&self) -> WreathElement {
        WreathElement::default()
    }

    fn mul(&self, a: &WreathElement, b: &WreathElement) -> WreathElement {
        self.multiply(a, b)
    }

    fn inv(&self, a: &WreathElement) -> WreathElement {
        self.inverse(a)
    }

    fn is_identity(&self, a: &WreathElement) -> bool {
        a.shift == 0 && a.components.is_empty()
    }

    fn elements(&self) -> Option<Vec<WreathElement>> {
        None
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> WreathElement {
        let order = self.group().order();
        let mut components = BTreeMap::new();
        for j in -self.window..=self.window {
            let c = rng.gen_range(0..order);
            if c != 0 {
                components.insert(j, c);
            }
        }
        WreathElement {
            components,
            shift: rng.gen_range(-self.window..=self.window),
        }
    }

    fn describe(&self, a: &WreathElement) -> String {
        let parts: Vec<String> = a
            .components
            .iter()
            .map(|(j, &c)| format!("{j}:{}", self.group().element(c).cycle_string()))
            .collect();
        format!("[{}] t^{}", parts.join(", "), a.shift)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WreathLawReport {
    pub aut_order: usize,
    pub fixing_order: usize,
    pub exponent: u64,
    pub pairs_tested: usize,
    pub points_queried: usize,
    pub copy_preservation_failures: usize,
    pub law_failures: usize,
    /// Least exponent killing each tested commutator, with multiplicities.
    pub observed_exponents: BTreeMap<u64, usize>,
    pub first_failure: Option<(String, String)>,
}

impl WreathLawReport {
    pub fn passed(&self) -> bool {
        self.copy_preservation_failures == 0 && self.law_failures == 0
    }
}

/// Samples pairs `(x, y)` and checks that `[x, y]` maps each copy to itself
/// and that `[x, y]^{|Aut X|}` fixes every queried point.
pub fn verify_wreath_law(
    x: &CubeComplexGraph,
    pair: &DiametricPair,
    trials: usize,
    window: i64,
    seed: u64,
) -> Result<WreathLawReport> {
    let group = WreathGroup::new(x, pair, window)?;
    let aut_order = automorphisms(x, &[])?.len();
    let exponent = aut_order as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = WreathLawReport {
        aut_order,
        fixing_order: group.group().order(),
        exponent,
        pairs_tested: 0,
        points_queried: 0,
        copy_preservation_failures: 0,
        law_failures: 0,
        observed_exponents: BTreeMap::new(),
        first_failure: None,
    };
    for _ in 0..trials {
        let a = group.sample(&mut rng);
        let b = group.sample(&mut rng);
        let c = group.mul(
            &group.mul(&group.inv(&a), &group.inv(&b)),
            &group.mul(&a, &b),
        );
        let power = group.pow(&c, exponent);
        let (lo, hi) = c.support().unwrap_or((0, 0));
        let points = group.line.window(lo - 1, hi + 1);
        let mut preserved = c.shift == 0;
        let mut killed = group.is_identity(&power);
        for p in &points {
            let q = group.act(&c, p);
            if group.line.copies_of(&q) != group.line.copies_of(p) {
                preserved = false;
            }
            if group.act(&power, p) != *p {
                killed = false;
            }
        }
        report.pairs_tested += 1;
        report.points_queried += points.len();
        if !preserved {
            report.copy_preservation_failures += 1;
        }
        if !killed {
            report.law_failures += 1;
        }
        if (!preserved || !killed) && report.first_failure.is_none() {
            report.first_failure = Some((group.describe(&a), group.describe(&b)));
        }
        let minimal = group.component_orders(&c).into_iter().fold(1, lcm);
        *report.observed_exponents.entry(minimal).or_default() += 1;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonsolvabilityReport {
    pub fixing_order: usize,
    pub derived_series: DerivedSeries,
    pub nonsolvable: bool,
    /// Consequence stated for the direct sum, not machine-checked.
    pub consequence: Option<String>,
}

pub fn nonsolvability_evidence(x: &CubeComplexGraph, pair: &DiametricPair) -> Result<NonsolvabilityReport> {
    let fg = aut_fixing_pair(x, pair)?;
    let series = derived_series(&fg.group);
    let nonsolvable = !series.solvable;
    Ok(NonsolvabilityReport {
        fixing_order: fg.group.order(),
        derived_series: series,
        nonsolvable,
        consequence: nonsolvable.then(|| {
            "the direct sum over Z of this group is not virtually solvable (stated, not machine-checked)".to_string()
        }),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WreathDemoReport {
    pub n: usize,
    pub hyperplanes: usize,
    pub diametric_distance: usize,
    pub coordinate_action: CoordinateAction,
    pub law: WreathLawReport,
    pub nonsolvability: NonsolvabilityReport,
}

impl WreathDemoReport {
    /// The full chain: the fixing group is the symmetric group, the law holds
    /// and the group is not solvable.
    pub fn chain_established(&self) -> bool {
        self.coordinate_action.is_isomorphism_onto_symmetric() && self.law.passed() && self.nonsolvability.nonsolvable
    }
}

/// `L[I^n]` end to end: fixing group, coordinate isomorphism, law and solvability.
pub fn wreath_demo(n: usize, trials: usize, window: i64, seed: u64) -> Result<WreathDemoReport> {
    if n == 0 {
        return Err(Error::Invalid("the cube dimension must be positive".into()));
    }
    let x = build::hypercube(n);
    let pair = find_diametric_pair(&x)?.expect("cubes have diametric pairs");
    let fg = aut_fixing_pair(&x, &pair)?;
    Ok(WreathDemoReport {
        n,
        hyperplanes: HyperplaneSystem::new(&x)?.len(),
        diametric_distance: pair.geodesic.len() - 1,
        coordinate_action: coordinate_action(&x, &fg)?,
        law: verify_wreath_law(&x, &pair, trials, window, seed)?,
        nonsolvability: nonsolvability_evidence(&x, &pair)?,
    })
}

/// The line complex as a space, for use with the generic routines.
pub fn line_space(x: &CubeComplexGraph, pair: &DiametricPair) -> Result<LineComplex> {
    LineComplex::new(x.clone(), pair.v, pair.v_star)
}

/// Whether `a` acts trivially on every point of copies `lo..=hi`.
pub fn acts_trivially_on(group: &WreathGroup, a: &WreathElement, lo: i64, hi: i64) -> bool {
    group
        .line
        .window(lo, hi)
        .iter()
        .all(|p| group.act(a, p) == *p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfspaces::HyperplaneSystem;

    #[test]
    fn diametric_pairs() {
        let i3 = build::hypercube(3);
        let p = find_diametric_pair(&i3).unwrap().unwrap();
        assert_eq!((i3.name(p.v), i3.name(p.v_star)), ("000", "111"));
        assert_eq!(p.geodesic.len(), 4);
        assert_eq!(find_diametric_pair(&build::star(3)).unwrap(), None);
        let (a, b) = (build::path(3), build::hypercube(2));
        let (pa, pb) = (find_diametric_pair(&a).unwrap().unwrap(), find_diametric_pair(&b).unwrap().unwrap());
        let prod = a.product(&b);
        let (v, w) = product_pair(&pa, &b, &pb);
        assert_eq!(prod.distance(v, w), Some(HyperplaneSystem::new(&prod).unwrap().len()));
    }

    #[test]
    fn line_balls() {
        let i2 = build::hypercube(2);
        let pair = find_diametric_pair(&i2).unwrap().unwrap();
        let ball = build_line_complex(&i2, &pair, 2).unwrap();
        assert_eq!(ball.graph.vertex_count(), 16);
        assert_eq!(HyperplaneSystem::new(&ball.graph).unwrap().len(), 10);
        let i1 = build::hypercube(1);
        let p1 = find_diametric_pair(&i1).unwrap().unwrap();
        let line = build_line_complex(&i1, &p1, 3).unwrap();
        assert!(crate::iso::isomorphic(&line.graph, &build::path(8)));
    }

    #[test]
    fn fixing_groups() {
        for (n, order) in [(2, 2), (3, 6), (4, 24)] {
            let x = build::hypercube(n);
            let pair = find_diametric_pair(&x).unwrap().unwrap();
            let fg = aut_fixing_pair(&x, &pair).unwrap();
            assert_eq!(fg.group.order(), order);
            assert!(coordinate_action(&x, &fg).unwrap().is_isomorphism_onto_symmetric());
        }
        let p3 = build::path(3);
        let pair = find_diametric_pair(&p3).unwrap().unwrap();
        assert_eq!(aut_fixing_pair(&p3, &pair).unwrap().group.order(), 1);
        assert_eq!(automorphisms(&build::hypercube(2), &[]).unwrap().len(), 8);
        assert_eq!(automorphisms(&build::hypercube(3), &[]).unwrap().len(), 48);
    }

    #[test]
    fn wreath_arithmetic() {
        let x = build::hypercube(2);
        let pair = find_diametric_pair(&x).unwrap().unwrap();
        let w = WreathGroup::new(&x, &pair, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (a, b) = (w.sample(&mut rng), w.sample(&mut rng));
            assert!(w.is_identity(&w.mul(&a, &w.inv(&a))));
            let ab = w.mul(&a, &b);
            for p in w.line.window(-8, 8) {
                assert_eq!(w.act(&ab, &p), w.act(&a, &w.act(&b, &p)));
            }
        }
        assert_eq!(w.mul(&WreathElement::shift(2), &WreathElement::shift(3)), WreathElement::shift(5));
        let s = WreathElement::at(0, 1);
        let p = w.line.point(1, x.id("01").unwrap());
        assert_eq!(w.act(&s, &p), p);
        assert_eq!(w.act(&WreathElement::shift(1), &p).copy, 2);
    }

    #[test]
    fn small_law_and_solvability() {
        let x = build::hypercube(2);
        let pair = find_diametric_pair(&x).unwrap().unwrap();
        let r = verify_wreath_law(&x, &pair, 50, 3, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.aut_order, 8);
        let ev = nonsolvability_evidence(&build::hypercube(3), &find_diametric_pair(&build::hypercube(3)).unwrap().unwrap()).unwrap();
        assert!(!ev.nonsolvable);
    }
}
