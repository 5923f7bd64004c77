//! Ping-pong certificates for free subgroups and infinite girth.
//!
//! The space is `Y`, the disjoint union of the factor spaces, and attractor
//! sets are finite unions of halfspaces tagged by factor. Conditions that
//! quantify over every nonzero power are certified by nesting: if `g·e` lands
//! in a component `A` of the target and `g·A ⊊ A`, then `g^k·e ⊆ A` for all
//! `k ≥ 1` by induction, and likewise for `g^-1`. Powers up to `K` are also
//! checked directly so a broken nesting argument cannot hide.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::actions::{poles_prefix, Action, Containment};
use crate::error::{Error, Result};
use crate::halfspaces::engine::{Half, Probe};
use crate::halfspaces::{chain_disjointness, verify_descending, ChainVerdict, DescendingChain};
use crate::space::MedianSpace;
use crate::word::Word;

type Vx<A> = <<A as Action>::S as MedianSpace>::V;

/// A halfspace of one factor of `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Part<V> {
    pub factor: usize,
    pub half: Half<V>,
}

impl<V: Clone> Part<V> {
    pub fn new(factor: usize, half: Half<V>) -> Self {
        Part { factor, half }
    }

    pub fn star(&self) -> Self {
        Part::new(self.factor, self.half.star())
    }
}

/// The data of the free subgroup criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeCert<V> {
    pub sigma: Word,
    pub tau: Word,
    pub u_sigma: Vec<Part<V>>,
    pub u_tau: Vec<Part<V>>,
    pub x: (usize, V),
}

impl<V: Clone> FreeCert<V> {
    pub fn swapped(&self) -> Self {
        FreeCert {
            sigma: self.tau.clone(),
            tau: self.sigma.clone(),
            u_sigma: self.u_tau.clone(),
            u_tau: self.u_sigma.clone(),
            x: self.x.clone(),
        }
    }
}

/// A certificate for infinite girth. The acting elements are `σ^M` and `τ^M`;
/// `U_σ` lists `σ^N h_i, σ^-N h_i*` for each factor in turn, `U_τ` likewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PingPongCert<V> {
    pub sigma: Word,
    pub tau: Word,
    pub n: usize,
    pub m: usize,
    pub gens: Vec<Word>,
    pub u_sigma: Vec<Part<V>>,
    pub u_tau: Vec<Part<V>>,
    pub x: (usize, V),
    /// Factor permutation of each generator; always the identity here.
    pub factor_permutations: Vec<Vec<usize>>,
    pub transcript: Vec<Containment>,
}

impl<V: Clone> PingPongCert<V> {
    pub fn sigma_prime(&self) -> Word {
        self.sigma.pow(self.m as i64)
    }

    pub fn tau_prime(&self) -> Word {
        self.tau.pow(self.m as i64)
    }

    /// The free subgroup data carried by the certificate.
    pub fn free_part(&self) -> FreeCert<V> {
        FreeCert {
            sigma: self.sigma_prime(),
            tau: self.tau_prime(),
            u_sigma: self.u_sigma.clone(),
            u_tau: self.u_tau.clone(),
            x: self.x.clone(),
        }
    }

    pub fn swapped(&self) -> Self {
        PingPongCert {
            sigma: self.tau.clone(),
            tau: self.sigma.clone(),
            u_sigma: self.u_tau.clone(),
            u_tau: self.u_sigma.clone(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Checked for the finitely many objects or powers involved.
    Direct,
    /// Every nonzero power, by strict nesting of the receiving components.
    Nesting,
    /// Follows from other conditions.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: String,
    pub method: Method,
    pub outcome: Outcome,
    pub detail: Option<String>,
    pub transcript: Vec<Containment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub k: usize,
    pub radius: usize,
    pub consumed: usize,
    pub conditions: Vec<ConditionResult>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.condition == name)
    }

    fn new(k: usize, radius: usize, consumed: usize, conditions: Vec<ConditionResult>) -> Self {
        let outcome = combine(conditions.iter().map(|c| c.outcome));
        Verdict {
            outcome,
            k,
            radius,
            consumed,
            conditions,
        }
    }
}

fn combine(outcomes: impl Iterator<Item = Outcome>) -> Outcome {
    let mut out = Outcome::Pass;
    for o in outcomes {
        match o {
            Outcome::Fail => return Outcome::Fail,
            Outcome::Inconclusive => out = Outcome::Inconclusive,
            Outcome::Pass => {}
        }
    }
    out
}

enum Item<V> {
    Point(usize, V),
    Half(Part<V>),
}

struct Ctx<'a, A: Action> {
    factors: &'a [A],
    probes: Vec<Probe<'a, A::S>>,
}

impl<'a, A: Action> Ctx<'a, A> {
    fn new(factors: &'a [A], radius: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invalid("no factors".into()));
        }
        let count = factors[0].generator_count();
        if factors.iter().any(|f| f.generator_count() != count) {
            return Err(Error::Invalid("factor actions have different numbers of generators".into()));
        }
        Ok(Ctx {
            factors,
            probes: factors.iter().map(|f| Probe::new(f.space(), radius)).collect(),
        })
    }

    fn check_parts(&self, parts: &[Part<Vx<A>>]) -> Result<()> {
        for p in parts {
            if p.factor >= self.factors.len() || !self.probes[p.factor].is_edge(&p.half) {
                return Err(Error::Invalid(format!("`{}` is not a halfspace of factor {}", self.name_raw(p), p.factor)));
            }
        }
        Ok(())
    }

    fn name_raw(&self, p: &Part<Vx<A>>) -> String {
        match self.factors.get(p.factor) {
            Some(f) => format!("{}:{}", p.factor, Probe::unbounded(f.space()).name(&p.half)),
            None => format!("{}:?", p.factor),
        }
    }

    fn name(&self, p: &Part<Vx<A>>) -> String {
        format!("{}:{}", p.factor, self.probes[p.factor].name(&p.half))
    }

    fn point_name(&self, (f, v): &(usize, Vx<A>)) -> String {
        format!("{f}:{}", self.factors[*f].space().vertex_name(v))
    }

    fn item_name(&self, it: &Item<Vx<A>>) -> String {
        match it {
            Item::Point(f, v) => self.point_name(&(*f, v.clone())),
            Item::Half(p) => self.name(p),
        }
    }

    fn image(&self, w: &Word, p: &Part<Vx<A>>) -> Part<Vx<A>> {
        Part::new(p.factor, self.factors[p.factor].apply_half(w, &p.half))
    }

    fn member(&self, u: &[Part<Vx<A>>], f: usize, v: &Vx<A>) -> Option<usize> {
        u.iter()
            .position(|p| p.factor == f && self.probes[f].contains(&p.half, v))
    }

    /// A component of `u` containing `p`.
    fn receiver(&self, p: &Part<Vx<A>>, u: &[Part<Vx<A>>]) -> Result<Option<usize>> {
        for (i, q) in u.iter().enumerate() {
            if q.factor == p.factor && self.probes[p.factor].subset(&p.half, &q.half)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn disjoint(&self, p: &Part<Vx<A>>, q: &Part<Vx<A>>) -> Result<bool> {
        if p.factor != q.factor {
            return Ok(true);
        }
        self.probes[p.factor].disjoint(&p.half, &q.half)
    }

    fn landing(&self, w: &Word, it: &Item<Vx<A>>, target: &[Part<Vx<A>>]) -> Result<Option<usize>> {
        match it {
            Item::Point(f, v) => Ok(self.member(target, *f, &self.factors[*f].apply(w, v))),
            Item::Half(p) => self.receiver(&self.image(w, p), target),
        }
    }

    fn consumed(&self) -> usize {
        self.probes.iter().map(|p| p.consumed()).max().unwrap_or(0)
    }

    /// `g^k·item` lies in one component of `target` for `0 < |k| <= kmax`.
    fn powers_direct(
        &self,
        g: &Word,
        label: &str,
        items: &[Item<Vx<A>>],
        target: &[Part<Vx<A>>],
        kmax: usize,
    ) -> Result<Option<String>> {
        for k in 1..=kmax as i64 {
            for s in [k, -k] {
                let w = g.pow(s);
                for it in items {
                    if self.landing(&w, it, target)?.is_none() {
                        return Ok(Some(format!("{label}^{s} does not carry `{}` into the target", self.item_name(it))));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Every item lands in a component at `k = ±1`, and each such component is
    /// carried strictly into itself by the same power.
    fn powers_nested(
        &self,
        g: &Word,
        label: &str,
        items: &[Item<Vx<A>>],
        target: &[Part<Vx<A>>],
        transcript: &mut Vec<Containment>,
    ) -> Result<Option<String>> {
        let mut receivers = BTreeSet::new();
        for it in items {
            for s in [1i64, -1] {
                match self.landing(&g.pow(s), it, target)? {
                    Some(i) => {
                        receivers.insert((i, s));
                    }
                    None => {
                        return Ok(Some(format!("{label}^{s} does not carry `{}` into the target", self.item_name(it))))
                    }
                }
            }
        }
        for (i, s) in receivers {
            let comp = &target[i];
            let img = self.image(&g.pow(s), comp);
            match self.probes[comp.factor].strict_subset(&img.half, &comp.half)? {
                Some(w) => transcript.push(Containment {
                    sub: self.name(&img),
                    sup: self.name(comp),
                    strict: true,
                    witness: Some(self.factors[comp.factor].space().vertex_name(&w)),
                }),
                None => {
                    return Ok(Some(format!(
                        "{label}^{s}·`{}` is not strictly inside itself",
                        self.name(comp)
                    )))
                }
            }
        }
        Ok(None)
    }

    /// In pole form `U = [P_0, Q_0, P_1, Q_1, ...]`, one pair per factor:
    /// `g·Q_i* ⊆ P_i`, `g^-1·P_i* ⊆ Q_i`, `P_i ∩ Q_i = ∅` and strict nesting,
    /// so every nonzero power of `g` carries `Y - U` into `U`.
    fn complement_to_poles(
        &self,
        g: &Word,
        label: &str,
        u: &[Part<Vx<A>>],
        transcript: &mut Vec<Containment>,
    ) -> Result<Option<String>> {
        let factors: Vec<usize> = u.chunks(2).map(|c| c[0].factor).collect();
        let pole_form = u.len() == 2 * self.factors.len()
            && u.chunks(2).all(|c| c[0].factor == c[1].factor)
            && (0..self.factors.len()).all(|f| factors.contains(&f));
        if !pole_form {
            return Err(Error::Invalid("attractor set is not one pole pair per factor".into()));
        }
        let inv = g.inverse();
        for pair in u.chunks(2) {
            let (p, q) = (&pair[0], &pair[1]);
            let probe = &self.probes[p.factor];
            if !probe.disjoint(&p.half, &q.half)? {
                return Ok(Some(format!("poles `{}` and `{}` meet", self.name(p), self.name(q))));
            }
            let steps = [
                (self.image(g, &q.star()), p, false),
                (self.image(&inv, &p.star()), q, false),
                (self.image(g, p), p, true),
                (self.image(&inv, q), q, true),
            ];
            for (sub, sup, strict) in steps {
                let witness = if strict {
                    match probe.strict_subset(&sub.half, &sup.half)? {
                        Some(w) => Some(self.factors[p.factor].space().vertex_name(&w)),
                        None => {
                            return Ok(Some(format!("{label} does not nest `{}` strictly", self.name(sup))));
                        }
                    }
                } else {
                    if !probe.subset(&sub.half, &sup.half)? {
                        return Ok(Some(format!("`{}` is not inside `{}`", self.name(&sub), self.name(sup))));
                    }
                    None
                };
                transcript.push(Containment {
                    sub: self.name(&sub),
                    sup: self.name(sup),
                    strict,
                    witness,
                });
            }
        }
        Ok(None)
    }

    /// Components of `a` and their generator translates avoid `b`.
    fn translates_avoid(&self, a: &[Part<Vx<A>>], gens: &[Word], b: &[Part<Vx<A>>]) -> Result<Option<String>> {
        for p in a {
            let mut images = vec![p.clone()];
            for g in gens {
                images.push(self.image(g, p));
                images.push(self.image(&g.inverse(), p));
            }
            for img in &images {
                for q in b {
                    if !self.disjoint(img, q)? {
                        return Ok(Some(format!("`{}` meets `{}`", self.name(img), self.name(q))));
                    }
                }
            }
        }
        Ok(None)
    }
}

fn settle(condition: &str, method: Method, r: Result<Option<String>>, transcript: Vec<Containment>) -> Result<ConditionResult> {
    let (outcome, detail) = match r {
        Ok(None) => (Outcome::Pass, None),
        Ok(Some(d)) => (Outcome::Fail, Some(d)),
        Err(e) if e.is_inconclusive() => (Outcome::Inconclusive, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(ConditionResult {
        condition: condition.to_string(),
        method,
        outcome,
        detail,
        transcript,
    })
}

fn derived(condition: &str, from: &[&ConditionResult]) -> ConditionResult {
    let outcome = combine(from.iter().map(|c| c.outcome));
    let names: Vec<&str> = from.iter().map(|c| c.condition.as_str()).collect();
    ConditionResult {
        condition: condition.to_string(),
        method: Method::Derived,
        outcome,
        detail: Some(format!("from {}", names.join(", "))),
        transcript: Vec::new(),
    }
}

fn sources<V: Clone>(x: &(usize, V), u: &[Part<V>], translates: &[Part<V>]) -> Vec<Item<V>> {
    let mut items = vec![Item::Point(x.0, x.1.clone())];
    items.extend(u.iter().chain(translates).cloned().map(Item::Half));
    items
}

/// `x ∉ U_σ ∪ U_τ`, `U_σ ∩ U_τ = ∅`, and `σ^k({x} ∪ U_τ) ⊆ U_σ`,
/// `τ^k({x} ∪ U_σ) ⊆ U_τ` for every `k ≠ 0`.
pub fn check_free_cert<A: Action>(factors: &[A], cert: &FreeCert<Vx<A>>, k: usize, radius: usize) -> Result<Verdict> {
    let ctx = Ctx::new(factors, radius)?;
    ctx.check_parts(&cert.u_sigma)?;
    ctx.check_parts(&cert.u_tau)?;
    let x = &cert.x;
    let mut conditions = Vec::new();

    let r = match ctx
        .member(&cert.u_sigma, x.0, &x.1)
        .or_else(|| ctx.member(&cert.u_tau, x.0, &x.1))
    {
        Some(_) => Ok(Some(format!("`{}` lies in an attractor", ctx.point_name(x)))),
        None => Ok(None),
    };
    conditions.push(settle("basepoint_outside", Method::Direct, r, Vec::new())?);
    conditions.push(settle(
        "attractors_disjoint",
        Method::Direct,
        ctx.translates_avoid(&cert.u_sigma, &[], &cert.u_tau),
        Vec::new(),
    )?);

    for (g, label, src, target, name) in [
        (&cert.sigma, "sigma", &cert.u_tau, &cert.u_sigma, "sigma"),
        (&cert.tau, "tau", &cert.u_sigma, &cert.u_tau, "tau"),
    ] {
        let items = sources(x, src, &[]);
        conditions.push(settle(
            &format!("{name}_powers_direct"),
            Method::Direct,
            ctx.powers_direct(g, label, &items, target, k),
            Vec::new(),
        )?);
        let mut t = Vec::new();
        let r = ctx.powers_nested(g, label, &items, target, &mut t);
        conditions.push(settle(&format!("{name}_powers_nested"), Method::Nesting, r, t)?);
    }
    Ok(Verdict::new(k, radius, ctx.consumed(), conditions))
}

/// The infinite girth criterion for `σ' = σ^M`, `τ' = τ^M` and the
/// generating set: `x` avoids both attractors and all their generator
/// translates, and every nonzero power of `σ'` carries `x`, `U_τ` and its
/// translates into `U_σ` (symmetrically for `τ'`). Both the direct nesting
/// rule and the pole-form argument are checked; the verdict records each.
pub fn check_girth_cert<A: Action>(factors: &[A], cert: &PingPongCert<Vx<A>>, k: usize, radius: usize) -> Result<Verdict> {
    let ctx = Ctx::new(factors, radius)?;
    ctx.check_parts(&cert.u_sigma)?;
    ctx.check_parts(&cert.u_tau)?;
    let x = &cert.x;
    let (sp, tp) = (cert.sigma_prime(), cert.tau_prime());
    let translates = |u: &[Part<Vx<A>>]| -> Vec<Part<Vx<A>>> {
        let mut out = Vec::new();
        for p in u {
            for g in &cert.gens {
                out.push(ctx.image(g, p));
                out.push(ctx.image(&g.inverse(), p));
            }
        }
        out
    };
    let ts = translates(&cert.u_sigma);
    let tt = translates(&cert.u_tau);
    let mut conditions = Vec::new();

    let all: Vec<Part<Vx<A>>> = cert.u_sigma.iter().chain(&cert.u_tau).chain(&ts).chain(&tt).cloned().collect();
    let r = match ctx.member(&all, x.0, &x.1) {
        Some(i) => Ok(Some(format!("`{}` lies in `{}`", ctx.point_name(x), ctx.name(&all[i])))),
        None => Ok(None),
    };
    conditions.push(settle("basepoint_outside", Method::Direct, r, Vec::new())?);
    conditions.push(settle(
        "attractors_disjoint",
        Method::Direct,
        ctx.translates_avoid(&cert.u_sigma, &[], &cert.u_tau),
        Vec::new(),
    )?);

    for (g, label, src, src_t, target) in [
        (&sp, "sigma", &cert.u_tau, &tt, &cert.u_sigma),
        (&tp, "tau", &cert.u_sigma, &ts, &cert.u_tau),
    ] {
        let items = sources(x, src, src_t);
        conditions.push(settle(
            &format!("{label}_powers_direct"),
            Method::Direct,
            ctx.powers_direct(g, label, &items, target, k),
            Vec::new(),
        )?);
        let mut t = Vec::new();
        let r = ctx.powers_nested(g, label, &items, target, &mut t);
        conditions.push(settle(&format!("{label}_powers_nested"), Method::Nesting, r, t)?);
    }

    for (g, label, u) in [(&sp, "sigma", &cert.u_sigma), (&tp, "tau", &cert.u_tau)] {
        let mut t = Vec::new();
        let r = ctx.complement_to_poles(g, label, u, &mut t);
        conditions.push(settle(&format!("{label}_complement_into_poles"), Method::Nesting, r, t)?);
    }
    conditions.push(settle(
        "sigma_translates_avoid_tau",
        Method::Direct,
        ctx.translates_avoid(&cert.u_sigma, &cert.gens, &cert.u_tau),
        Vec::new(),
    )?);
    conditions.push(settle(
        "tau_translates_avoid_sigma",
        Method::Direct,
        ctx.translates_avoid(&cert.u_tau, &cert.gens, &cert.u_sigma),
        Vec::new(),
    )?);

    let find = |n: &str| conditions.iter().find(|c| c.condition == n).unwrap().clone();
    let (base, sc, tc, sa, ta) = (
        find("basepoint_outside"),
        find("sigma_complement_into_poles"),
        find("tau_complement_into_poles"),
        find("sigma_translates_avoid_tau"),
        find("tau_translates_avoid_sigma"),
    );
    // {x} ∪ U_τ ∪ γ^ε U_τ ⊆ Y - U_σ, then every power of σ' maps it into U_σ
    let s_all = derived("sigma_all_powers", &[&base, &ta, &sc]);
    let t_all = derived("tau_all_powers", &[&base, &sa, &tc]);
    conditions.push(s_all);
    conditions.push(t_all);
    Ok(Verdict::new(k, radius, ctx.consumed(), conditions))
}

#[derive(Clone, Debug, Serialize)]
pub struct DaggerChain<V> {
    pub factor: usize,
    pub chain: DescendingChain<V>,
}

/// The translated pole chains `γ^ε σ^±n h_i^(*)`, truncated at depth `m`.
#[derive(Clone, Debug, Serialize)]
pub struct DaggerList<V> {
    pub chains: Vec<DaggerChain<V>>,
}

impl<V> DaggerList<V> {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn all_strongly_separated(&self) -> bool {
        self.chains.iter().all(|c| c.chain.strongly_separated)
    }

    pub fn truncated(&self) -> bool {
        self.chains.iter().any(|c| c.chain.truncated.is_some())
    }
}

/// Verifies `2 (1 + 2k)` chains per factor: the poles of `σ` and their
/// translates by each generator and its inverse.
pub fn verify_dagger<A: Action>(
    factors: &[A],
    sigma: &Word,
    gens: &[Word],
    halfspaces: &[Half<Vx<A>>],
    m: usize,
    radius: usize,
) -> Result<DaggerList<Vx<A>>> {
    if halfspaces.len() != factors.len() {
        return Err(Error::Invalid("one halfspace per factor is required".into()));
    }
    let ctx = Ctx::new(factors, radius)?;
    let mut chains = Vec::new();
    for (f, h) in halfspaces.iter().enumerate() {
        let probe = &ctx.probes[f];
        let action = &factors[f];
        let (fwd, back) = poles_prefix(action, probe, sigma, h, m, true)?;
        let mut translated = Vec::new();
        for g in gens {
            for e in [g.clone(), g.inverse()] {
                for (base, star) in [(&fwd, ""), (&back, "*")] {
                    let hs: Vec<_> = base.halfspaces.iter().map(|k| action.apply_half(&e, k)).collect();
                    let sign = if star.is_empty() { "" } else { "-" };
                    let label = format!("{e}·{sigma}^{sign}n·h{f}{star}");
                    translated.push(verify_descending(probe, label, hs, true)?);
                }
            }
        }
        for chain in [fwd, back].into_iter().chain(translated) {
            chains.push(DaggerChain { factor: f, chain });
        }
    }
    Ok(DaggerList { chains })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildParams {
    /// Depth of the verified pole chains.
    pub depth: usize,
    pub n_max: usize,
    pub m_max: usize,
    pub radius: usize,
}

#[derive(Clone, Debug)]
pub enum Built<V> {
    Cert(PingPongCert<V>),
    NotFound { reason: String },
}

impl<V> Built<V> {
    pub fn cert(self) -> Option<PingPongCert<V>> {
        match self {
            Built::Cert(c) => Some(c),
            Built::NotFound { .. } => None,
        }
    }
}

fn poles<A: Action>(ctx: &Ctx<A>, g: &Word, halfspaces: &[Half<Vx<A>>], n: usize) -> Vec<Part<Vx<A>>> {
    let mut out = Vec::new();
    for (f, h) in halfspaces.iter().enumerate() {
        out.push(ctx.image(&g.pow(n as i64), &Part::new(f, h.clone())));
        out.push(ctx.image(&g.pow(-(n as i64)), &Part::new(f, h.star())));
    }
    out
}

/// Searches the smallest `N` for which the translated poles of `σ` at depth
/// `N` avoid the poles of `τ` and leave room for a basepoint, then the
/// smallest `M` for which `σ^M` and `τ^M` carry the complements of their
/// attractors inside them. `halfspaces[i] = (h_i, h'_i)` are the pole
/// halfspaces of `σ` and `τ` in factor `i`.
pub fn build_cert_from_poles<A: Action>(
    factors: &[A],
    sigma: &Word,
    tau: &Word,
    gens: &[Word],
    halfspaces: &[(Half<Vx<A>>, Half<Vx<A>>)],
    params: &BuildParams,
) -> Result<Built<Vx<A>>> {
    let hs: Vec<_> = halfspaces.iter().map(|p| p.0.clone()).collect();
    let ht: Vec<_> = halfspaces.iter().map(|p| p.1.clone()).collect();
    let dagger = verify_dagger(factors, sigma, gens, &hs, params.depth, params.radius)?;
    let tau_poles = verify_dagger(factors, tau, &[], &ht, params.depth, params.radius)?;
    let ctx = Ctx::new(factors, params.radius)?;

    let mut n0 = 1;
    for c in &dagger.chains {
        for d in tau_poles.chains.iter().filter(|d| d.factor == c.factor) {
            let depth = c.chain.len().min(d.chain.len());
            let probe = &ctx.probes[c.factor];
            match chain_disjointness(probe, &c.chain.halfspaces, &d.chain.halfspaces, depth)? {
                ChainVerdict::DisjointAt { index } => n0 = n0.max(index - 1),
                ChainVerdict::IntersectingThrough { m } => {
                    return Ok(Built::NotFound {
                        reason: format!(
                            "chains `{}` and `{}` meet through depth {m}",
                            c.chain.generator, d.chain.generator
                        ),
                    })
                }
            }
        }
    }

    let mut chosen = None;
    for n in n0..=params.n_max {
        let us = poles(&ctx, sigma, &hs, n);
        let ut = poles(&ctx, tau, &ht, n);
        let mut separated = ctx.translates_avoid(&us, gens, &ut)?.is_none();
        for c in us.chunks(2).chain(ut.chunks(2)) {
            separated = separated && ctx.disjoint(&c[0], &c[1])?;
        }
        if !separated {
            continue;
        }
        let mut forbidden: Vec<Part<Vx<A>>> = us.iter().chain(&ut).cloned().collect();
        for p in us.iter().chain(&ut) {
            for g in gens {
                forbidden.push(ctx.image(g, p));
                forbidden.push(ctx.image(&g.inverse(), p));
            }
        }
        let x = (0..factors.len()).find_map(|f| {
            let space = factors[f].space();
            first_in_ball(space, params.radius / 2, |v| ctx.member(&forbidden, f, v).is_none()).map(|v| (f, v))
        });
        if let Some(x) = x {
            chosen = Some((n, us, ut, x));
            break;
        }
    }
    let Some((n, us, ut, x)) = chosen else {
        return Ok(Built::NotFound {
            reason: format!("no depth N <= {} separates the translated poles", params.n_max),
        });
    };

    for m in 1..=params.m_max {
        let (sp, tp) = (sigma.pow(m as i64), tau.pow(m as i64));
        let mut transcript = Vec::new();
        if ctx.complement_to_poles(&sp, "sigma'", &us, &mut transcript)?.is_some() {
            continue;
        }
        if ctx.complement_to_poles(&tp, "tau'", &ut, &mut transcript)?.is_some() {
            continue;
        }
        return Ok(Built::Cert(PingPongCert {
            sigma: sigma.clone(),
            tau: tau.clone(),
            n,
            m,
            gens: gens.to_vec(),
            u_sigma: us,
            u_tau: ut,
            x,
            factor_permutations: gens.iter().map(|_| (0..factors.len()).collect()).collect(),
            transcript,
        }));
    }
    Ok(Built::NotFound {
        reason: format!("N = {n} found, but no power M <= {} nests the attractors", params.m_max),
    })
}

/// First vertex in breadth-first order around the basepoint satisfying `ok`.
fn first_in_ball<S: MedianSpace + ?Sized>(space: &S, r: usize, ok: impl Fn(&S::V) -> bool) -> Option<S::V> {
    let start = space.basepoint();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0)]);
    while let Some((v, d)) = queue.pop_front() {
        if ok(&v) {
            return Some(v);
        }
        if d == r {
            continue;
        }
        for u in space.neighbors(&v) {
            if seen.insert(u.clone()) {
                queue.push_back((u, d + 1));
            }
        }
    }
    None
}

/// Random nonempty reduced words in `σ', τ'`; returns the first one fixing
/// `x`, which a valid certificate rules out.
pub fn free_sanity<A: Action>(
    factors: &[A],
    cert: &PingPongCert<Vx<A>>,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> Option<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = [cert.sigma_prime(), cert.tau_prime()];
    let (f, x) = &cert.x;
    for _ in 0..samples {
        let len = rng.gen_range(1..=max_len.max(1));
        let mut letters: Vec<(usize, bool)> = Vec::with_capacity(len);
        while letters.len() < len {
            let l = (rng.gen_range(0..2), rng.gen_bool(0.5));
            if letters.last().is_some_and(|p| p.0 == l.0 && p.1 != l.1) {
                continue;
            }
            letters.push(l);
        }
        let mut w = Word::identity();
        let mut label = String::new();
        for (g, inv) in &letters {
            let piece = if *inv { base[*g].inverse() } else { base[*g].clone() };
            w = w.concat(&piece);
            label.push(match (g, inv) {
                (0, false) => 's',
                (0, true) => 'S',
                (_, false) => 't',
                (_, true) => 'T',
            });
        }
        if factors[*f].apply(&w, x) == *x {
            return Some(label);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedHalf {
    pub factor: usize,
    /// `from|to`, the side containing `to`.
    pub half: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedPoint {
    pub factor: usize,
    pub vertex: String,
}

/// The `ppcert v1` interchange form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PpCertV1 {
    pub format: String,
    pub sigma: Word,
    pub tau: Word,
    pub n: usize,
    pub m: usize,
    pub gens: Vec<Word>,
    pub basepoint: EncodedPoint,
    pub u_sigma: Vec<EncodedHalf>,
    pub u_tau: Vec<EncodedHalf>,
    pub factor_permutations: Vec<Vec<usize>>,
    /// `(sub, sup, strict)`.
    pub transcript: Vec<(String, String, bool)>,
}

pub const PPCERT_FORMAT: &str = "ppcert v1";

pub fn encode_cert<A: Action>(factors: &[A], cert: &PingPongCert<Vx<A>>) -> PpCertV1 {
    let enc = |p: &Part<Vx<A>>| EncodedHalf {
        factor: p.factor,
        half: Probe::unbounded(factors[p.factor].space()).name(&p.half),
    };
    PpCertV1 {
        format: PPCERT_FORMAT.to_string(),
        sigma: cert.sigma.clone(),
        tau: cert.tau.clone(),
        n: cert.n,
        m: cert.m,
        gens: cert.gens.clone(),
        basepoint: EncodedPoint {
            factor: cert.x.0,
            vertex: factors[cert.x.0].space().vertex_name(&cert.x.1),
        },
        u_sigma: cert.u_sigma.iter().map(enc).collect(),
        u_tau: cert.u_tau.iter().map(enc).collect(),
        factor_permutations: cert.factor_permutations.clone(),
        transcript: cert
            .transcript
            .iter()
            .map(|c| (c.sub.clone(), c.sup.clone(), c.strict))
            .collect(),
    }
}

pub fn decode_cert<A: Action>(factors: &[A], enc: &PpCertV1) -> Result<PingPongCert<Vx<A>>> {
    if enc.format != PPCERT_FORMAT {
        return Err(Error::Invalid(format!("unknown certificate format `{}`", enc.format)));
    }
    let space = |f: usize| {
        factors
            .get(f)
            .map(|a| a.space())
            .ok_or_else(|| Error::Invalid(format!("factor {f} does not exist")))
    };
    let dec = |e: &EncodedHalf| -> Result<Part<Vx<A>>> {
        let h = Probe::unbounded(space(e.factor)?)
            .parse(&e.half)
            .ok_or_else(|| Error::Invalid(format!("`{}` is not an edge of factor {}", e.half, e.factor)))?;
        Ok(Part::new(e.factor, h))
    };
    let x = space(enc.basepoint.factor)?
        .parse_vertex(&enc.basepoint.vertex)
        .ok_or_else(|| Error::Invalid(format!("unknown vertex `{}`", enc.basepoint.vertex)))?;
    Ok(PingPongCert {
        sigma: enc.sigma.clone(),
        tau: enc.tau.clone(),
        n: enc.n,
        m: enc.m,
        gens: enc.gens.clone(),
        u_sigma: enc.u_sigma.iter().map(dec).collect::<Result<_>>()?,
        u_tau: enc.u_tau.iter().map(dec).collect::<Result<_>>()?,
        x: (enc.basepoint.factor, x),
        factor_permutations: enc.factor_permutations.clone(),
        transcript: enc
            .transcript
            .iter()
            .map(|(sub, sup, strict)| Containment {
                sub: sub.clone(),
                sup: sup.clone(),
                strict: *strict,
                witness: None,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::TreeAction;
    use crate::families::FreeProductTree;
    use crate::word::Letter;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn half(from: &str, to: &str) -> Half<Word> {
        Half::new(w(from), w(to))
    }

    fn f2() -> Vec<TreeAction> {
        vec![TreeAction::new(FreeProductTree::free(2))]
    }

    fn params(radius: usize) -> BuildParams {
        BuildParams {
            depth: 6,
            n_max: 6,
            m_max: 8,
            radius,
        }
    }

    fn f2_cert(radius: usize) -> PingPongCert<Word> {
        let hs = [(half("1", "a"), half("1", "b"))];
        build_cert_from_poles(&f2(), &w("a"), &w("b"), &[w("a"), w("b")], &hs, &params(radius))
            .unwrap()
            .cert()
            .unwrap()
    }

    #[test]
    fn classical_free_pair() {
        let cert = FreeCert {
            sigma: w("a"),
            tau: w("b"),
            u_sigma: vec![Part::new(0, half("1", "a")), Part::new(0, half("1", "A"))],
            u_tau: vec![Part::new(0, half("1", "b")), Part::new(0, half("1", "B"))],
            x: (0, w("1")),
        };
        let v = check_free_cert(&f2(), &cert, 3, 10).unwrap();
        assert!(v.passed(), "{v:?}");
        assert!(check_free_cert(&f2(), &cert.swapped(), 3, 10).unwrap().passed());

        let same = FreeCert { tau: w("a"), ..cert.clone() };
        assert_eq!(check_free_cert(&f2(), &same, 3, 10).unwrap().outcome, Outcome::Fail);
        let inside = FreeCert { x: (0, w("aa")), ..cert };
        let v = check_free_cert(&f2(), &inside, 3, 10).unwrap();
        assert_eq!(v.condition("basepoint_outside").unwrap().outcome, Outcome::Fail);
    }

    #[test]
    fn builds_f2_cert() {
        let cert = f2_cert(24);
        // the a^-1 translate of a^-1 h* only clears the b poles from depth 2,
        // and σ^M Q* ⊆ P needs M >= 2N
        assert_eq!((cert.n, cert.m), (2, 4));
        assert_eq!(cert.x, (0, w("1")));
        let v = check_girth_cert(&f2(), &cert, 3, 24).unwrap();
        assert!(v.passed(), "{v:#?}");
        assert_eq!(v.condition("sigma_all_powers").unwrap().method, Method::Derived);
        let wider = check_girth_cert(&f2(), &cert, 4, 26).unwrap();
        assert!(wider.passed());
        assert!(check_girth_cert(&f2(), &cert.swapped(), 3, 24).unwrap().passed());
        assert!(check_free_cert(&f2(), &cert.free_part(), 3, 24).unwrap().passed());
        assert_eq!(free_sanity(&f2(), &cert, 1000, 8, 0), None);
    }

    #[test]
    fn small_ball_is_inconclusive() {
        let cert = f2_cert(24);
        let v = check_girth_cert(&f2(), &cert, 3, 6).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
    }

    #[test]
    fn mutations_never_pass() {
        let cert = f2_cert(24);
        let moved = PingPongCert { x: (0, w("aaa")), ..cert.clone() };
        let mut overlapping = cert.clone();
        overlapping.gens.push(w("bbb"));
        let flat = PingPongCert { m: 0, ..cert.clone() };
        for bad in [moved, overlapping, flat] {
            let v = check_girth_cert(&f2(), &bad, 3, 24).unwrap();
            assert_ne!(v.outcome, Outcome::Pass);
        }
        let overlap = {
            let mut c = cert.clone();
            c.gens.push(w("bbb"));
            check_girth_cert(&f2(), &c, 3, 24).unwrap()
        };
        assert_eq!(
            overlap.condition("sigma_translates_avoid_tau").unwrap().outcome,
            Outcome::Fail
        );
    }

    #[test]
    fn dagger_chains() {
        let hs = [half("1", "a")];
        let list = verify_dagger(&f2(), &w("a"), &[w("a"), w("b")], &hs, 3, 20).unwrap();
        assert_eq!(list.len(), 10);
        assert!(list.chains.iter().all(|c| c.chain.len() == 4));
        // consecutive a-translates share a vertex, so nothing separates them
        assert!(!list.all_strongly_separated());
        let strong = verify_dagger(&f2(), &w("aa"), &[w("a"), w("b")], &hs, 3, 30).unwrap();
        assert!(strong.all_strongly_separated());
        assert_eq!(verify_dagger(&f2(), &w("a"), &[], &hs, 3, 20).unwrap().len(), 2);
        assert!(verify_dagger(&f2(), &w("b"), &[], &hs, 3, 20).is_err());
    }

    #[test]
    fn shared_poles_not_found() {
        let hs = [(half("1", "a"), half("1", "a"))];
        let built = build_cert_from_poles(&f2(), &w("a"), &w("aa"), &[w("a"), w("b")], &hs, &params(24)).unwrap();
        assert!(matches!(built, Built::NotFound { .. }));
    }

    /// The tree action, with the two generators exchanged when `swap` is set.
    struct Swapped(TreeAction, bool);

    impl Action for Swapped {
        type S = FreeProductTree;

        fn space(&self) -> &FreeProductTree {
            self.0.space()
        }

        fn involution_flags(&self) -> Vec<bool> {
            self.0.involution_flags()
        }

        fn apply_letter(&self, l: Letter, v: &Word) -> Word {
            let gen = if self.1 { 1 - l.gen as usize } else { l.gen as usize };
            self.0.apply_letter(Letter::new(gen, l.inv), v)
        }
    }

    #[test]
    fn two_factors() {
        let factors = vec![
            Swapped(TreeAction::new(FreeProductTree::free(2)), false),
            Swapped(TreeAction::new(FreeProductTree::free(2)), true),
        ];
        // σ = a translates along the b-axis of the second factor
        let hs = [(half("1", "a"), half("1", "b")), (half("1", "b"), half("1", "a"))];
        let cert = build_cert_from_poles(&factors, &w("a"), &w("b"), &[w("a"), w("b")], &hs, &params(24))
            .unwrap()
            .cert()
            .unwrap();
        assert_eq!(cert.u_sigma.len(), 4);
        assert_eq!(cert.u_sigma[2].factor, 1);
        assert!(check_girth_cert(&factors, &cert, 3, 24).unwrap().passed());
    }

    #[test]
    fn ppcert_round_trip() {
        let cert = f2_cert(24);
        let enc = encode_cert(&f2(), &cert);
        let json = serde_json::to_string(&enc).unwrap();
        let back: PpCertV1 = serde_json::from_str(&json).unwrap();
        let dec = decode_cert(&f2(), &back).unwrap();
        assert_eq!(dec.u_sigma, cert.u_sigma);
        assert_eq!(dec.x, cert.x);
        assert!(check_girth_cert(&f2(), &dec, 3, 24).unwrap().passed());
        assert!(json.contains("\"ppcert v1\""));
    }
}
