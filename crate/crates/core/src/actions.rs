//! Group actions by cubical automorphisms, evaluated on words.
//!
//! Words act on the left with the last letter applied first, so
//! `apply(uv, x) = apply(u, apply(v, x))`. Skewering follows the contraction
//! convention: `g` double skewers `h' ⊆ h''` when `g·h'' ⊊ h' ⊆ h''`.

use std::collections::HashSet;

use serde::Serialize;

use crate::complex::{CubeComplexGraph, VertexId};
use crate::constructions::{WreathElement, WreathGroup};
use crate::error::{Error, Result};
use crate::families::{FreeProductTree, LineComplex, Product};
use crate::format::NamedAutomorphism;
use crate::groups::{GroupOps, Perm};
use crate::halfspaces::engine::{Half, Probe};
use crate::halfspaces::{verify_descending, DescendingChain};
use crate::space::{ball, span_cube, MedianSpace};
use crate::word::{Letter, Word, WordSearch};

pub trait Action {
    type S: MedianSpace;

    fn space(&self) -> &Self::S;

    /// One flag per generator; involutions are searched as a single letter.
    fn involution_flags(&self) -> Vec<bool>;

    fn apply_letter(&self, l: Letter, v: &<Self::S as MedianSpace>::V) -> <Self::S as MedianSpace>::V;

    fn generator_count(&self) -> usize {
        self.involution_flags().len()
    }

    fn labels(&self) -> Vec<String> {
        (0..self.generator_count())
            .map(|g| Letter::new(g, false).to_char().to_string())
            .collect()
    }

    fn apply(&self, w: &Word, v: &<Self::S as MedianSpace>::V) -> <Self::S as MedianSpace>::V {
        let mut x = v.clone();
        for &l in w.letters().iter().rev() {
            x = self.apply_letter(l, &x);
        }
        x
    }

    fn apply_half(&self, w: &Word, h: &Half<<Self::S as MedianSpace>::V>) -> Half<<Self::S as MedianSpace>::V> {
        h.map(|x| self.apply(w, x))
    }
}

/// Left multiplication on the Cayley tree of a free product.
#[derive(Clone, Debug)]
pub struct TreeAction {
    pub tree: FreeProductTree,
}

impl TreeAction {
    pub fn new(tree: FreeProductTree) -> Self {
        TreeAction { tree }
    }
}

impl Action for TreeAction {
    type S = FreeProductTree;

    fn space(&self) -> &FreeProductTree {
        &self.tree
    }

    fn involution_flags(&self) -> Vec<bool> {
        self.tree.involution_flags()
    }

    fn apply_letter(&self, l: Letter, v: &Word) -> Word {
        self.tree.reduce(&Word(vec![l]).concat(v))
    }
}

/// Automorphisms of a finite complex given as vertex permutations.
#[derive(Clone, Debug)]
pub struct FiniteAction {
    pub complex: CubeComplexGraph,
    names: Vec<String>,
    maps: Vec<Perm>,
    inverses: Vec<Perm>,
}

impl FiniteAction {
    /// Every generator is checked to be an automorphism.
    pub fn new(complex: CubeComplexGraph, generators: Vec<(String, Perm)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut maps = Vec::new();
        for (name, p) in generators {
            let images: Vec<VertexId> = p.images().iter().map(|&i| VertexId(i)).collect();
            if !check_automorphism(&complex, &images)? {
                return Err(Error::Invalid(format!("`{name}` does not preserve adjacency")));
            }
            names.push(name);
            maps.push(p);
        }
        if maps.len() > crate::word::MAX_GENERATORS {
            return Err(Error::Invalid("too many generators".into()));
        }
        let inverses = maps.iter().map(Perm::inverse).collect();
        Ok(FiniteAction {
            complex,
            names,
            maps,
            inverses,
        })
    }

    pub fn from_named(complex: CubeComplexGraph, auts: &[NamedAutomorphism]) -> Result<Self> {
        let gens = auts
            .iter()
            .map(|a| Ok((a.name.clone(), Perm::from_images(a.map.iter().map(|v| v.0).collect())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(complex, gens)
    }

    pub fn generator(&self, i: usize) -> &Perm {
        &self.maps[i]
    }

    pub fn evaluate(&self, w: &Word) -> Perm {
        let mut p = Perm::identity(self.complex.vertex_count());
        for &l in w.letters() {
            let q = if l.inv { &self.inverses[l.gen as usize] } else { &self.maps[l.gen as usize] };
            p = p.compose(q);
        }
        p
    }
}

impl Action for FiniteAction {
    type S = CubeComplexGraph;

    fn space(&self) -> &CubeComplexGraph {
        &self.complex
    }

    fn involution_flags(&self) -> Vec<bool> {
        self.maps.iter().map(|p| p.order() <= 2).collect()
    }

    fn labels(&self) -> Vec<String> {
        self.names.clone()
    }

    fn apply_letter(&self, l: Letter, v: &VertexId) -> VertexId {
        let p = if l.inv { &self.inverses[l.gen as usize] } else { &self.maps[l.gen as usize] };
        VertexId(p.apply(v.index()) as u32)
    }
}

/// `Z ⋉ Σ_X` on `L[X]`: generator `a` is the shift, the remaining generators
/// are the fixing-group generators placed on copy 0.
#[derive(Clone, Debug)]
pub struct WreathAction {
    pub group: WreathGroup,
    letters: Vec<WreathElement>,
}

impl WreathAction {
    pub fn new(group: WreathGroup) -> Self {
        let mut letters = vec![WreathElement::shift(1)];
        for g in group.group().generator_indices() {
            letters.push(WreathElement::at(0, g));
        }
        WreathAction { group, letters }
    }

    /// The only generator is the shift.
    pub fn shift_only(group: WreathGroup) -> Self {
        WreathAction {
            group,
            letters: vec![WreathElement::shift(1)],
        }
    }

    pub fn element(&self, w: &Word) -> WreathElement {
        let mut acc = WreathElement::default();
        for &l in w.letters() {
            let e = &self.letters[l.gen as usize];
            let e = if l.inv { self.group.inverse(e) } else { e.clone() };
            acc = self.group.multiply(&acc, &e);
        }
        acc
    }
}

impl Action for WreathAction {
    type S = LineComplex;

    fn space(&self) -> &LineComplex {
        &self.group.line
    }

    fn involution_flags(&self) -> Vec<bool> {
        self.letters
            .iter()
            .map(|e| e.shift == 0 && self.group.is_identity(&self.group.multiply(e, e)))
            .collect()
    }

    fn apply_letter(&self, l: Letter, v: &crate::families::LinePoint) -> crate::families::LinePoint {
        let e = &self.letters[l.gen as usize];
        if l.inv {
            self.group.act(&self.group.inverse(e), v)
        } else {
            self.group.act(e, v)
        }
    }
}

/// A space with generators acting trivially.
#[derive(Clone, Debug)]
pub struct TrivialAction<S> {
    pub space: S,
    pub generators: usize,
}

impl<S: MedianSpace> Action for TrivialAction<S> {
    type S = S;

    fn space(&self) -> &S {
        &self.space
    }

    fn involution_flags(&self) -> Vec<bool> {
        vec![true; self.generators]
    }

    fn apply_letter(&self, _l: Letter, v: &S::V) -> S::V {
        v.clone()
    }
}

/// Diagonal action on a product: each generator acts on both factors.
#[derive(Clone, Debug)]
pub struct ProductAction<A: Action, B: Action> {
    pub left: A,
    pub right: B,
    space: Product<A::S, B::S>,
}

impl<A: Action, B: Action> ProductAction<A, B>
where
    A::S: Clone,
    B::S: Clone,
{
    pub fn new(left: A, right: B) -> Result<Self> {
        if left.generator_count() != right.generator_count() {
            return Err(Error::Invalid("factor actions have different numbers of generators".into()));
        }
        let space = Product::new(left.space().clone(), right.space().clone());
        Ok(ProductAction { left, right, space })
    }
}

impl<A: Action, B: Action> Action for ProductAction<A, B>
where
    Product<A::S, B::S>: MedianSpace<V = (<A::S as MedianSpace>::V, <B::S as MedianSpace>::V)>,
{
    type S = Product<A::S, B::S>;

    fn space(&self) -> &Self::S {
        &self.space
    }

    fn involution_flags(&self) -> Vec<bool> {
        self.left
            .involution_flags()
            .iter()
            .zip(self.right.involution_flags())
            .map(|(a, b)| *a && b)
            .collect()
    }

    fn labels(&self) -> Vec<String> {
        self.left.labels()
    }

    fn apply_letter(&self, l: Letter, v: &<Self::S as MedianSpace>::V) -> <Self::S as MedianSpace>::V {
        (self.left.apply_letter(l, &v.0), self.right.apply_letter(l, &v.1))
    }
}

/// Whether `map` (indexed by vertex id) preserves adjacency in both directions.
pub fn check_automorphism(g: &CubeComplexGraph, map: &[VertexId]) -> Result<bool> {
    let n = g.vertex_count();
    if map.len() != n {
        return Err(Error::NotBijective(format!("map has {} entries for {n} vertices", map.len())));
    }
    let mut hit = vec![false; n];
    for (i, v) in map.iter().enumerate() {
        if v.index() >= n || std::mem::replace(&mut hit[v.index()], true) {
            return Err(Error::NotBijective(format!("vertex `{}` is hit twice or out of range", g.name(VertexId(i as u32)))));
        }
    }
    // a bijection preserving edges and the edge count preserves non-edges too
    Ok(g.declared_edges().iter().all(|&(a, b)| g.adjacent(map[a.index()], map[b.index()])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BallCheck {
    pub automorphism: bool,
    /// Vertices within this radius had their neighbourhoods checked.
    pub radius_checked: usize,
}

/// Checks a vertex map of a lazy space on a ball, minus a margin of one.
pub fn check_automorphism_on_ball<S: MedianSpace + ?Sized>(
    space: &S,
    f: impl Fn(&S::V) -> S::V,
    radius: usize,
) -> BallCheck {
    let inner = radius.saturating_sub(1);
    let vertices = ball(space, &space.basepoint(), radius);
    let mut images = HashSet::new();
    let injective = vertices.iter().all(|v| images.insert(f(v)));
    let local = ball(space, &space.basepoint(), inner).iter().all(|v| {
        let mut mapped: Vec<S::V> = space.neighbors(v).iter().map(&f).collect();
        let mut target = space.neighbors(&f(v));
        mapped.sort();
        target.sort();
        mapped == target
    });
    BallCheck {
        automorphism: injective && local,
        radius_checked: inner,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxisCert {
    pub point: String,
    pub translation: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FixedBehavior {
    Elliptic { dimension: usize, cube: Vec<String> },
    NoFixedCubeWithin {
        radius: usize,
        translation_min: usize,
        /// Present only for spaces whose built-in actions certify axes.
        axis: Option<AxisCert>,
    },
}

/// Looks for a cube of the ball mapped to itself by `g`, lowest dimension first.
pub fn classify_fixed_behavior<A: Action>(action: &A, g: &Word, radius: usize) -> Result<FixedBehavior> {
    let space = action.space();
    let base = space.basepoint();
    let vertices = ball(space, &base, radius);
    let name = |v: &<A::S as MedianSpace>::V| space.vertex_name(v);
    let inside: HashSet<_> = vertices.iter().cloned().collect();
    if let Some(v) = vertices.iter().find(|v| action.apply(g, v) == **v) {
        return Ok(FixedBehavior::Elliptic {
            dimension: 0,
            cube: vec![name(v)],
        });
    }
    let max_dim = vertices.iter().map(|v| space.neighbors(v).len()).max().unwrap_or(0);
    for dim in 1..=max_dim.min(crate::complex::DEFAULT_DIMENSION_BOUND) {
        for v in &vertices {
            let nbrs = space.neighbors(v);
            if nbrs.len() < dim {
                continue;
            }
            for combo in crate::complex::combinations(nbrs.len(), dim) {
                let dirs: Vec<_> = combo.iter().map(|&i| nbrs[i].clone()).collect();
                let Some(mut cube) = span_cube(space, v, &dirs) else { continue };
                if !cube.iter().all(|x| inside.contains(x)) {
                    continue;
                }
                cube.sort();
                let mut image: Vec<_> = cube.iter().map(|x| action.apply(g, x)).collect();
                image.sort();
                if image == cube {
                    return Ok(FixedBehavior::Elliptic {
                        dimension: dim,
                        cube: cube.iter().map(name).collect(),
                    });
                }
            }
        }
    }
    // an orbit of the basepoint that closes up inside the ball points to a
    // finite-order element whose fixed cube lies further out
    let mut x = action.apply(g, &base);
    for _ in 0..(4 * radius + 4) {
        if x == base {
            return Err(Error::Inconclusive {
                what: format!("`{g}` has a finite orbit but no fixed cube in the ball"),
                radius,
                needed: radius + 1,
            });
        }
        if !inside.contains(&x) {
            break;
        }
        x = action.apply(g, &x);
    }
    let translation_min = vertices
        .iter()
        .map(|v| space.distance(v, &action.apply(g, v)))
        .min()
        .unwrap_or(0);
    let axis = if space.certifies_axes() {
        vertices.iter().find_map(|v| {
            let gv = action.apply(g, v);
            let d1 = space.distance(v, &gv);
            let d2 = space.distance(v, &action.apply(g, &gv));
            (d1 > 0 && d2 == 2 * d1).then(|| AxisCert {
                point: name(v),
                translation: d1,
            })
        })
    } else {
        None
    };
    Ok(FixedBehavior::NoFixedCubeWithin {
        radius,
        translation_min,
        axis,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipCert {
    pub word: Word,
    pub halfspace: String,
    pub image: String,
    /// A vertex of `h*` outside `g·h`.
    pub witness: String,
}

/// `g·h ⊊ h*`, with a witness of strictness.
pub fn flips<A: Action>(action: &A, probe: &Probe<A::S>, g: &Word, h: &Half<<A::S as MedianSpace>::V>) -> Result<Option<FlipCert>> {
    let gh = action.apply_half(g, h);
    let Some(witness) = probe.strict_subset(&gh, &h.star())? else {
        return Ok(None);
    };
    assert!(probe.disjoint(h, &gh)?, "a flipped halfspace is disjoint from its image");
    Ok(Some(FlipCert {
        word: g.clone(),
        halfspace: probe.name(h),
        image: probe.name(&gh),
        witness: probe.space().vertex_name(&witness),
    }))
}

/// First nontrivial word, in search order, flipping `h`.
pub fn find_flipper<A: Action>(
    action: &A,
    probe: &Probe<A::S>,
    h: &Half<<A::S as MedianSpace>::V>,
    max_len: usize,
) -> Result<Option<FlipCert>> {
    for w in WordSearch::new(action.involution_flags(), max_len).skip(1) {
        if let Some(cert) = flips(action, probe, &w, h)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Containment {
    pub sub: String,
    pub sup: String,
    pub strict: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkewerCert {
    pub word: Word,
    pub inner: String,
    pub outer: String,
    pub image: String,
    /// `g·h'' ⊊ h'` then `h' ⊆ h''`.
    pub transcript: Vec<Containment>,
    /// Checked only for the strong variant.
    pub strongly_separated: Option<bool>,
}

/// Checks `g·h'' ⊊ h' ⊆ h''`; the strong variant also requires `h'` and
/// `h''` to be strongly separated.
pub fn double_skewers<A: Action>(
    action: &A,
    probe: &Probe<A::S>,
    g: &Word,
    inner: &Half<<A::S as MedianSpace>::V>,
    outer: &Half<<A::S as MedianSpace>::V>,
    strong: bool,
) -> Result<Option<SkewerCert>> {
    if !probe.subset(inner, outer)? {
        return Err(Error::Invalid(format!(
            "`{}` is not contained in `{}`",
            probe.name(inner),
            probe.name(outer)
        )));
    }
    let image = action.apply_half(g, outer);
    let Some(witness) = probe.strict_subset(&image, inner)? else {
        return Ok(None);
    };
    let strongly_separated = if strong {
        let s = probe.strongly_separated(inner, outer)?;
        if !s {
            return Ok(None);
        }
        Some(s)
    } else {
        None
    };
    let name = |v: &<A::S as MedianSpace>::V| probe.space().vertex_name(v);
    Ok(Some(SkewerCert {
        word: g.clone(),
        inner: probe.name(inner),
        outer: probe.name(outer),
        image: probe.name(&image),
        transcript: vec![
            Containment {
                sub: probe.name(&image),
                sup: probe.name(inner),
                strict: true,
                witness: Some(name(&witness)),
            },
            Containment {
                sub: probe.name(inner),
                sup: probe.name(outer),
                strict: probe.strict_subset(inner, outer)?.is_some(),
                witness: probe.strict_subset(inner, outer)?.map(|w| name(&w)),
            },
        ],
        strongly_separated,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractingCert {
    pub skewer: SkewerCert,
    /// A hyperplane separating the pair, no hyperplane crossing both.
    pub separator: String,
}

/// A strong double skewer, which makes `g` contracting on the space it acts on.
pub fn contracting_certificate<A: Action>(
    action: &A,
    probe: &Probe<A::S>,
    g: &Word,
    inner: &Half<<A::S as MedianSpace>::V>,
    outer: &Half<<A::S as MedianSpace>::V>,
) -> Result<Option<ContractingCert>> {
    let Some(skewer) = double_skewers(action, probe, g, inner, outer, true)? else {
        return Ok(None);
    };
    let separator = probe
        .separator(outer, inner)?
        .expect("strongly separated halfspaces have a separator");
    Ok(Some(ContractingCert {
        skewer,
        separator: probe.name(&separator),
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorVerdict {
    pub factor: usize,
    pub certificate: Option<ContractingCert>,
}

impl<A: Action, B: Action> ProductAction<A, B> {
    /// Contracting certificates checked on each factor with its own pair.
    #[allow(clippy::type_complexity)]
    pub fn factor_certificates(
        &self,
        g: &Word,
        radius: usize,
        left: Option<(&Half<<A::S as MedianSpace>::V>, &Half<<A::S as MedianSpace>::V>)>,
        right: Option<(&Half<<B::S as MedianSpace>::V>, &Half<<B::S as MedianSpace>::V>)>,
    ) -> Result<Vec<FactorVerdict>> {
        let mut out = Vec::new();
        let lp = Probe::new(self.left.space(), radius);
        out.push(FactorVerdict {
            factor: 0,
            certificate: match left {
                Some((i, o)) => contracting_certificate(&self.left, &lp, g, i, o)?,
                None => None,
            },
        });
        let rp = Probe::new(self.right.space(), radius);
        out.push(FactorVerdict {
            factor: 1,
            certificate: match right {
                Some((i, o)) => contracting_certificate(&self.right, &rp, g, i, o)?,
                None => None,
            },
        });
        Ok(out)
    }

    /// First word double skewering the given pair on every factor.
    #[allow(clippy::type_complexity)]
    pub fn find_simultaneous_skewerer(
        &self,
        left: (&Half<<A::S as MedianSpace>::V>, &Half<<A::S as MedianSpace>::V>),
        right: (&Half<<B::S as MedianSpace>::V>, &Half<<B::S as MedianSpace>::V>),
        radius: usize,
        max_len: usize,
        strong: bool,
    ) -> Result<Option<(SkewerCert, SkewerCert)>> {
        let lp = Probe::new(self.left.space(), radius);
        let rp = Probe::new(self.right.space(), radius);
        let flags: Vec<bool> = self
            .left
            .involution_flags()
            .iter()
            .zip(self.right.involution_flags())
            .map(|(a, b)| *a && b)
            .collect();
        for w in WordSearch::new(flags, max_len).skip(1) {
            let Some(l) = double_skewers(&self.left, &lp, &w, left.0, left.1, strong)? else { continue };
            if let Some(r) = double_skewers(&self.right, &rp, &w, right.0, right.1, strong)? {
                return Ok(Some((l, r)));
            }
        }
        Ok(None)
    }
}

/// First nontrivial word double skewering `inner ⊆ outer`.
pub fn find_skewerer<A: Action>(
    action: &A,
    probe: &Probe<A::S>,
    inner: &Half<<A::S as MedianSpace>::V>,
    outer: &Half<<A::S as MedianSpace>::V>,
    max_len: usize,
    strong: bool,
) -> Result<Option<SkewerCert>> {
    for w in WordSearch::new(action.involution_flags(), max_len).skip(1) {
        if let Some(cert) = double_skewers(action, probe, &w, inner, outer, strong)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// The chains `g^i h` and `g^-i h*` for `i = 0..=m`, verified descending.
#[allow(clippy::type_complexity)]
pub fn poles_prefix<A: Action>(
    action: &A,
    probe: &Probe<A::S>,
    g: &Word,
    h: &Half<<A::S as MedianSpace>::V>,
    m: usize,
    strong: bool,
) -> Result<(DescendingChain<<A::S as MedianSpace>::V>, DescendingChain<<A::S as MedianSpace>::V>)> {
    let g_inv = g.inverse();
    let forward: Vec<_> = (0..=m).map(|i| action.apply_half(&g.pow(i as i64), h)).collect();
    let backward: Vec<_> = (0..=m).map(|i| action.apply_half(&g_inv.pow(i as i64), &h.star())).collect();
    Ok((
        verify_descending(probe, g.to_string(), forward, strong)?,
        verify_descending(probe, g_inv.to_string(), backward, strong)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EssentialityWitness {
    pub word: Word,
    pub distance: usize,
}

/// First word moving the hyperplane of `h` at least `d` away from itself.
pub fn essentiality_witness<A: Action>(
    action: &A,
    probe: &Probe<A::S>,
    h: &Half<<A::S as MedianSpace>::V>,
    d: usize,
    max_len: usize,
) -> Result<Option<EssentialityWitness>> {
    for w in WordSearch::new(action.involution_flags(), max_len) {
        let image = action.apply_half(&w, h);
        let distance = probe.hyperplane_distance(h, &image)?;
        if distance >= d {
            return Ok(Some(EssentialityWitness { word: w, distance }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;
    use crate::constructions::find_diametric_pair;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn star_rotation() -> FiniteAction {
        let g = build::star(3);
        let id = |s: &str| g.id(s).unwrap().0;
        let mut images: Vec<u32> = (0..4).collect();
        images[id("l1") as usize] = id("l2");
        images[id("l2") as usize] = id("l3");
        images[id("l3") as usize] = id("l1");
        FiniteAction::new(g, vec![("r".into(), Perm::from_images(images).unwrap())]).unwrap()
    }

    fn line_i2() -> WreathAction {
        let x = build::hypercube(2);
        let pair = find_diametric_pair(&x).unwrap().unwrap();
        WreathAction::new(WreathGroup::new(&x, &pair, 3).unwrap())
    }

    #[test]
    fn automorphism_checks() {
        let i2 = build::hypercube(2);
        let id: Vec<VertexId> = i2.vertices().collect();
        assert!(check_automorphism(&i2, &id).unwrap());
        let v = |s: &str| i2.id(s).unwrap();
        let swap = vec![v("00"), v("10"), v("01"), v("11")];
        assert!(check_automorphism(&i2, &swap).unwrap());
        let s = build::star(3);
        let c = s.id("c").unwrap();
        let l1 = s.id("l1").unwrap();
        let mut m: Vec<VertexId> = s.vertices().collect();
        m.swap(c.index(), l1.index());
        assert!(!check_automorphism(&s, &m).unwrap());
        assert!(check_automorphism(&s, &[c, c, c, c]).is_err());
        let tree = TreeAction::new(FreeProductTree::free(2));
        let check = check_automorphism_on_ball(&tree.tree, |x| tree.apply(&w("ab"), x), 4);
        assert!(check.automorphism);
    }

    #[test]
    fn fixed_behaviour() {
        let i2 = build::hypercube(2);
        let v = |s: &str| i2.id(s).unwrap().0;
        let swap = Perm::from_images(vec![v("00"), v("10"), v("01"), v("11")]).unwrap();
        let diag = FiniteAction::new(i2.clone(), vec![("s".into(), swap)]).unwrap();
        assert!(matches!(classify_fixed_behavior(&diag, &w("a"), 3).unwrap(), FixedBehavior::Elliptic { dimension: 0, .. }));
        let rot = Perm::from_images(vec![v("01"), v("11"), v("00"), v("10")]).unwrap();
        let rot = FiniteAction::new(i2, vec![("r".into(), rot)]).unwrap();
        assert!(matches!(classify_fixed_behavior(&rot, &w("a"), 3).unwrap(), FixedBehavior::Elliptic { dimension: 2, .. }));
        let tree = TreeAction::new(FreeProductTree::free(2));
        match classify_fixed_behavior(&tree, &w("a"), 4).unwrap() {
            FixedBehavior::NoFixedCubeWithin { translation_min, axis, .. } => {
                assert_eq!(translation_min, 1);
                assert!(axis.is_some());
            }
            other => panic!("{other:?}"),
        }
        match classify_fixed_behavior(&line_i2(), &w("a"), 8).unwrap() {
            FixedBehavior::NoFixedCubeWithin { translation_min, .. } => assert_eq!(translation_min, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flipping() {
        let star = star_rotation();
        let p = Probe::unbounded(&star.complex);
        let g = &star.complex;
        let leaf = Half::new(g.id("c").unwrap(), g.id("l1").unwrap());
        assert!(flips(&star, &p, &w("a"), &leaf).unwrap().is_some());
        assert!(flips(&star, &p, &Word::identity(), &leaf).unwrap().is_none());
        assert_eq!(find_flipper(&star, &p, &leaf, 3).unwrap().unwrap().word, w("a"));
        let tree = TreeAction::new(FreeProductTree::free(2));
        let tp = Probe::new(&tree.tree, 12);
        let away = Half::new(w("1"), w("a"));
        assert!(flips(&tree, &tp, &w("a"), &away).unwrap().is_none());
        let toward = away.star();
        let found = find_flipper(&tree, &tp, &toward, 3).unwrap().unwrap();
        // ga must lie between g and the root, so no word shorter than three letters flips h
        assert_eq!(found.word, w("abA"));
        let trivial = TrivialAction { space: build::star(3), generators: 1 };
        let sp = Probe::unbounded(&trivial.space);
        let h = Half::new(trivial.space.id("c").unwrap(), trivial.space.id("l1").unwrap());
        assert!(find_flipper(&trivial, &sp, &h, 4).unwrap().is_none());
    }

    #[test]
    fn skewering_and_poles() {
        let tree = TreeAction::new(FreeProductTree::free(2));
        let p = Probe::new(&tree.tree, 12);
        let outer = Half::new(w("1"), w("a"));
        let inner = Half::new(w("a"), w("aa"));
        assert!(double_skewers(&tree, &p, &w("aa"), &inner, &outer, false).unwrap().is_some());
        assert!(double_skewers(&tree, &p, &w("aa"), &inner, &outer, true).unwrap().is_none());
        let far = Half::new(w("aa"), w("aaa"));
        let cert = contracting_certificate(&tree, &p, &w("aaa"), &far, &outer).unwrap().unwrap();
        assert_eq!(cert.separator, "a|aa");
        assert!(double_skewers(&tree, &p, &w("b"), &inner, &outer, false).unwrap().is_none());
        let (fwd, back) = poles_prefix(&tree, &p, &w("aa"), &outer, 4, true).unwrap();
        assert_eq!((fwd.len(), back.len()), (5, 5));
        assert!(fwd.strongly_separated && back.strongly_separated);
        assert!(p.disjoint(&fwd.halfspaces[1], &back.halfspaces[1]).unwrap());
        let star = star_rotation();
        let sp = Probe::unbounded(&star.complex);
        let leaf = Half::new(star.complex.id("l1").unwrap(), star.complex.id("c").unwrap());
        assert!(poles_prefix(&star, &sp, &w("a"), &leaf, 2, false).is_err());
    }

    #[test]
    fn line_skewers() {
        let line = line_i2();
        let s = &line.group.line;
        let p = Probe::new(s, 40);
        let half = |copy: i64| Half::new(s.point(copy, s.base().id("00").unwrap()), s.point(copy, s.base().id("01").unwrap()));
        let (outer, inner) = (half(0), half(2));
        assert!(double_skewers(&line, &p, &w("aaa"), &inner, &outer, true).unwrap().is_some());
        let (fwd, _) = poles_prefix(&line, &p, &w("a"), &outer, 3, false).unwrap();
        assert_eq!(fwd.len(), 4);
        let ess = essentiality_witness(&line, &p, &outer, 4, 6).unwrap().unwrap();
        assert!(ess.distance >= 4);
    }

    #[test]
    fn essentiality() {
        let tree = TreeAction::new(FreeProductTree::free(2));
        let p = Probe::new(&tree.tree, 14);
        let h = Half::new(w("1"), w("a"));
        assert_eq!(essentiality_witness(&tree, &p, &h, 5, 6).unwrap().unwrap().word, w("AAAAb"));
        let star = star_rotation();
        let sp = Probe::unbounded(&star.complex);
        let leaf = Half::new(star.complex.id("c").unwrap(), star.complex.id("l1").unwrap());
        assert!(essentiality_witness(&star, &sp, &leaf, 3, 4).unwrap().is_none());
    }

    #[test]
    fn products() {
        let f2 = || TreeAction::new(FreeProductTree::free(2));
        let pa = ProductAction::new(f2(), f2()).unwrap();
        let (o1, i1) = (Half::new(w("1"), w("a")), Half::new(w("a"), w("aa")));
        let (o2, i2) = (Half::new(w("A"), w("1")), Half::new(w("1"), w("a")));
        let (l, r) = pa.find_simultaneous_skewerer((&i1, &o1), (&i2, &o2), 10, 4, false).unwrap().unwrap();
        assert_eq!(l.word, r.word);
        let triv = ProductAction::new(f2(), TrivialAction { space: FreeProductTree::free(2), generators: 2 }).unwrap();
        assert!(triv.find_simultaneous_skewerer((&i1, &o1), (&i2, &o2), 10, 4, false).unwrap().is_none());
        let i2c = build::hypercube(2);
        let fin = FiniteAction::new(i2c.clone(), vec![
            ("e".into(), Perm::identity(4)),
            ("f".into(), Perm::identity(4)),
        ]).unwrap();
        let mixed = ProductAction::new(fin, f2()).unwrap();
        let far = Half::new(w("aa"), w("aaa"));
        let verdicts = mixed.factor_certificates(&w("aaa"), 12, None, Some((&far, &o1))).unwrap();
        assert!(verdicts[0].certificate.is_none() && verdicts[1].certificate.is_some());
        let pp = Probe::new(mixed.space(), 12);
        let x0 = i2c.id("00").unwrap();
        let lifted = |h: &Half<Word>| Half::new((x0, h.from.clone()), (x0, h.to.clone()));
        assert!(!pp.strongly_separated(&lifted(&far), &lifted(&o1)).unwrap());
    }

    #[test]
    fn words_act_as_homomorphism() {
        let line = line_i2();
        let tree = TreeAction::new(FreeProductTree::free(2));
        let words: Vec<Word> = WordSearch::new(vec![false, false], 3).collect();
        for u in &words {
            for v in &words {
                let uv = u.concat(v);
                for x in ball(&tree.tree, &Word::identity(), 2) {
                    assert_eq!(tree.apply(&uv, &x), tree.apply(u, &tree.apply(v, &x)));
                }
                assert_eq!(line.element(&uv), line.group.multiply(&line.element(u), &line.element(v)));
            }
        }
    }
}
