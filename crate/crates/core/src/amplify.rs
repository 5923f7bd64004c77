//! Growing a facing triple into `n` strongly separated facing pairs.
//!
//! Start from facing `a, b, c` with `a, b` strongly separated. A flip of
//! `c*` carries `(a, b)` into `c`, giving two pairs. From `n - 1` pairs, a
//! flip `γ'` of `b*_{n-1}` carries `(a_1, b_1, a_{n-1})` into `b_{n-1}`, then
//! a flip `γ''` of `a'*_{n-1}` carries `(a'_1, b'_1)` into `a'_{n-1}`. The new
//! family keeps pairs `1..n-2` and appends `(a'_1, b'_1)` and `(a''_1, b''_1)`.

use serde::Serialize;

use crate::actions::{find_flipper, flips, Action};
use crate::error::{Error, Result};
use crate::halfspaces::engine::{Half, Probe};
use crate::space::MedianSpace;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FlipSource {
    /// Found directly by word search.
    Search,
    /// `w f w^-1`, where `f` was found by search for the base halfspace `base`.
    Conjugate { by: Word, base: String, flip: Word },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipStep {
    /// Number of pairs after this step.
    pub pairs: usize,
    pub word: Word,
    pub source: FlipSource,
    pub flipped: String,
    /// `(label, before, after)` for every halfspace the flip was applied to.
    pub moved: Vec<(String, String, String)>,
    pub claims: Vec<ClaimCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmplifyFailure {
    /// Number of pairs the failed step was meant to produce.
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FacingFamily<V> {
    #[serde(skip)]
    pub halves: Vec<(Half<V>, Half<V>)>,
    pub pairs: Vec<(String, String)>,
    /// `pair k = (w_k·a, w_k·b)`.
    pub words: Vec<Word>,
    pub transcript: Vec<FlipStep>,
    pub failure: Option<AmplifyFailure>,
}

impl<V> FacingFamily<V> {
    pub fn len(&self) -> usize {
        self.halves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halves.is_empty()
    }

    pub fn complete(&self) -> bool {
        self.failure.is_none()
    }
}

fn claim<S: MedianSpace + ?Sized>(probe: &Probe<S>, sub: &Half<S::V>, sup: &Half<S::V>, label: &str) -> Result<ClaimCheck> {
    Ok(ClaimCheck {
        claim: label.to_string(),
        holds: probe.subset(sub, sup)?,
    })
}

/// Flip search for images `w·x*` of the base halfspaces.
///
/// Flipping a halfspace at depth `D` in a tree moves the basepoint about
/// `2D`, and the construction roughly quadruples depths at each step, so
/// plain word search stops working after two pairs. Flips are invariant
/// under conjugation: if `f` flips `x*` then `w f w^-1` flips `w·x*`. Short
/// flips of the base halfspaces are searched once and transported.
struct Flipper<'p, 'a, A: Action> {
    action: &'a A,
    probe: &'p Probe<'a, A::S>,
    flip_len: usize,
    bases: Vec<Half<<A::S as MedianSpace>::V>>,
    cache: Vec<Option<Option<Word>>>,
}

impl<A: Action> Flipper<'_, '_, A> {
    fn reduce(&self, w: &Word) -> Word {
        let flags = self.action.involution_flags();
        w.reduced(|g| flags[g])
    }

    /// A flip of `w·bases[base]`, searched directly first.
    fn find(&mut self, w: &Word, base: usize) -> Result<Option<(Word, FlipSource)>> {
        let target = self.action.apply_half(w, &self.bases[base]);
        if let Some(cert) = find_flipper(self.action, self.probe, &target, self.flip_len)? {
            return Ok(Some((cert.word, FlipSource::Search)));
        }
        if self.cache[base].is_none() {
            let found = find_flipper(self.action, self.probe, &self.bases[base], self.flip_len)?.map(|c| c.word);
            self.cache[base] = Some(found);
        }
        let Some(f) = self.cache[base].clone().flatten() else {
            return Ok(None);
        };
        let g = self.reduce(&w.concat(&f).concat(&w.inverse()));
        if flips(self.action, self.probe, &g, &target)?.is_none() {
            return Err(Error::Invalid(format!(
                "conjugated flip `{g}` does not flip {}",
                self.probe.name(&target)
            )));
        }
        Ok(Some((
            g,
            FlipSource::Conjugate {
                by: w.clone(),
                base: self.probe.name(&self.bases[base]),
                flip: f,
            },
        )))
    }
}

/// Runs the construction up to `n` pairs; base flips are searched up to `flip_len`.
pub fn amplify_facing<A: Action>(
    action: &A,
    probe: &Probe<A::S>,
    triple: [&Half<<A::S as MedianSpace>::V>; 3],
    n: usize,
    flip_len: usize,
) -> Result<FacingFamily<<A::S as MedianSpace>::V>> {
    let [a, b, c] = triple;
    if n == 0 {
        return Err(Error::Invalid("at least one pair is required".into()));
    }
    if !probe.facing(&[a.clone(), b.clone(), c.clone()])? {
        return Err(Error::Invalid("the triple is not facing".into()));
    }
    if !probe.strongly_separated(a, b)? {
        return Err(Error::Invalid("the first two halfspaces are not strongly separated".into()));
    }
    // bases: a*, b*, c*
    let mut flipper = Flipper {
        action,
        probe,
        flip_len,
        bases: vec![a.star(), b.star(), c.star()],
        cache: vec![None; 3],
    };
    let name = |h: &Half<_>| probe.name(h);
    let pair = |w: &Word| (action.apply_half(w, a), action.apply_half(w, b));
    let mut words = vec![Word::identity()];
    let mut transcript = Vec::new();
    let finish = |words: Vec<Word>, transcript, failure| {
        let halves: Vec<_> = words.iter().map(pair).collect();
        FacingFamily {
            pairs: halves.iter().map(|(x, y)| (name(x), name(y))).collect(),
            halves,
            words,
            transcript,
            failure,
        }
    };
    let no_flip = |index: usize, h: &Half<_>| {
        Some(AmplifyFailure {
            index,
            reason: format!("no flip of {} within word length {flip_len}", name(h)),
        })
    };
    if n >= 2 {
        let Some((g, source)) = flipper.find(&Word::identity(), 2)? else {
            return Ok(finish(words, transcript, no_flip(2, &c.star())));
        };
        let (a2, b2) = pair(&g);
        transcript.push(FlipStep {
            pairs: 2,
            word: g.clone(),
            source,
            flipped: name(&c.star()),
            moved: vec![("a_1".into(), name(a), name(&a2)), ("b_1".into(), name(b), name(&b2))],
            claims: vec![claim(probe, &a2, c, "a_2 ⊆ c")?, claim(probe, &b2, c, "b_2 ⊆ c")?],
        });
        words.push(g);
    }
    for k in 3..=n {
        let (a1, b1) = pair(&words[0]);
        let w_last = words[k - 2].clone();
        let (a_last, b_last) = pair(&w_last);
        let Some((g1, source1)) = flipper.find(&w_last, 1)? else {
            return Ok(finish(words, transcript, no_flip(k, &b_last.star())));
        };
        let w1 = flipper.reduce(&g1.concat(&words[0]));
        let (a1p, b1p) = pair(&w1);
        let w_alp = flipper.reduce(&g1.concat(&w_last));
        let alp = action.apply_half(&w_alp, a);
        let Some((g2, source2)) = flipper.find(&w_alp, 0)? else {
            return Ok(finish(words, transcript, no_flip(k, &alp.star())));
        };
        let w2 = flipper.reduce(&g2.concat(&w1));
        let (a1pp, b1pp) = pair(&w2);
        let claims = [claim(probe, &a1p, &b_last, "a'_1 ⊆ b_{n-1}")?,
            claim(probe, &b1p, &b_last, "b'_1 ⊆ b_{n-1}")?,
            claim(probe, &a1pp, &alp, "a''_1 ⊆ a'_{n-1}")?,
            claim(probe, &b1pp, &alp, "b''_1 ⊆ a'_{n-1}")?];
        if let Some(bad) = claims.iter().find(|c| !c.holds) {
            return Err(Error::Invalid(format!("construction failed at {k} pairs: {} does not hold", bad.claim)));
        }
        transcript.push(FlipStep {
            pairs: k,
            word: g1,
            source: source1,
            flipped: name(&b_last.star()),
            moved: vec![
                ("a_1".into(), name(&a1), name(&a1p)),
                ("b_1".into(), name(&b1), name(&b1p)),
                ("a_{n-1}".into(), name(&a_last), name(&alp)),
            ],
            claims: claims[..2].to_vec(),
        });
        transcript.push(FlipStep {
            pairs: k,
            word: g2,
            source: source2,
            flipped: name(&alp.star()),
            moved: vec![
                ("a'_1".into(), name(&a1p), name(&a1pp)),
                ("b'_1".into(), name(&b1p), name(&b1pp)),
            ],
            claims: claims[2..].to_vec(),
        });
        words.truncate(k - 2);
        words.push(w1);
        words.push(w2);
    }
    let family = finish(words, transcript, None);
    let report = verify_family(probe, &family.halves)?;
    if !report.all_green() {
        return Err(Error::Invalid(format!(
            "construction produced a family failing verification: {}",
            report.failures.join("; ")
        )));
    }
    Ok(family)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    Diagonal,
    Disjoint,
    Meets,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub halfspaces: Vec<String>,
    /// Rows and columns follow `a_1, b_1, a_2, b_2, ...`.
    pub disjointness: Vec<Vec<Cell>>,
    pub strongly_separated: Vec<Option<bool>>,
    pub failures: Vec<String>,
    pub inconclusive: usize,
}

impl FamilyReport {
    pub fn all_green(&self) -> bool {
        self.failures.is_empty() && self.inconclusive == 0
    }
}

/// Pairwise disjointness of all halfspaces and strong separation of each pair.
pub fn verify_family<S: MedianSpace + ?Sized>(probe: &Probe<S>, pairs: &[(Half<S::V>, Half<S::V>)]) -> Result<FamilyReport> {
    let flat: Vec<&Half<S::V>> = pairs.iter().flat_map(|(a, b)| [a, b]).collect();
    let labels: Vec<String> = (0..flat.len())
        .map(|i| format!("{}_{}", if i % 2 == 0 { 'a' } else { 'b' }, i / 2 + 1))
        .collect();
    let mut failures = Vec::new();
    let mut inconclusive = 0;
    let mut matrix = vec![vec![Cell::Diagonal; flat.len()]; flat.len()];
    for i in 0..flat.len() {
        for j in (i + 1)..flat.len() {
            let cell = if probe.same_hyperplane(flat[i], flat[j]) {
                Cell::Meets
            } else {
                match probe.disjoint(flat[i], flat[j]) {
                    Ok(true) => Cell::Disjoint,
                    Ok(false) => Cell::Meets,
                    Err(e) if e.is_inconclusive() => Cell::Inconclusive,
                    Err(e) => return Err(e),
                }
            };
            match cell {
                Cell::Meets => failures.push(format!("{} and {} are not disjoint", labels[i], labels[j])),
                Cell::Inconclusive => inconclusive += 1,
                _ => {}
            }
            matrix[i][j] = cell;
            matrix[j][i] = cell;
        }
    }
    let mut strong = Vec::new();
    for (k, (a, b)) in pairs.iter().enumerate() {
        let verdict = match probe.strongly_separated(a, b) {
            Ok(s) => Some(s),
            Err(e) if e.is_inconclusive() => None,
            Err(e) => return Err(e),
        };
        match verdict {
            Some(false) => failures.push(format!("pair {} is not strongly separated", k + 1)),
            None => inconclusive += 1,
            _ => {}
        }
        strong.push(verdict);
    }
    Ok(FamilyReport {
        halfspaces: flat.iter().map(|h| probe.name(h)).collect(),
        disjointness: matrix,
        strongly_separated: strong,
        failures,
        inconclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::TreeAction;
    use crate::build;
    use crate::families::FreeProductTree;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn setup() -> (TreeAction, [Half<Word>; 3]) {
        let t = TreeAction::new(FreeProductTree::involutions(3));
        (t, [Half::new(w("a"), w("ab")), Half::new(w("b"), w("ba")), Half::new(w("1"), w("c"))])
    }

    #[test]
    fn base_cases() {
        let (t, [a, b, c]) = setup();
        let p = Probe::new(&t.tree, 10);
        let one = amplify_facing(&t, &p, [&a, &b, &c], 1, 4).unwrap();
        assert_eq!(one.halves, vec![(a.clone(), b.clone())]);
        let two = amplify_facing(&t, &p, [&a, &b, &c], 2, 4).unwrap();
        assert_eq!(two.len(), 2);
        assert!(verify_family(&p, &two.halves).unwrap().all_green());
        assert!(two.transcript[0].claims.iter().all(|c| c.holds));
    }

    #[test]
    fn short_search_reports_failure() {
        let (t, [a, b, c]) = setup();
        let p = Probe::new(&t.tree, 10);
        let fam = amplify_facing(&t, &p, [&a, &b, &c], 3, 1).unwrap();
        assert_eq!(fam.failure.as_ref().map(|f| f.index), Some(2));
        assert_eq!(fam.words, vec![Word::identity()]);
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        let (t, [a, _, c]) = setup();
        let p = Probe::new(&t.tree, 10);
        assert!(amplify_facing(&t, &p, [&a, &a.star(), &c], 2, 3).is_err());
        // facing but adjacent across the basepoint, hence not strongly separated
        let near = Half::new(w("1"), w("b"));
        assert!(amplify_facing(&t, &p, [&Half::new(w("1"), w("a")), &near, &c], 2, 3).is_err());
    }

    #[test]
    fn verification_flags_problems() {
        let (t, [a, b, _]) = setup();
        let p = Probe::new(&t.tree, 10);
        let r = verify_family(&p, &[(a.clone(), b.clone()), (a.star(), b.star())]).unwrap();
        assert!(!r.failures.is_empty());
        let p3 = build::path(3);
        let pp = Probe::unbounded(&p3);
        let v = |s: &str| p3.id(s).unwrap();
        let r = verify_family(&pp, &[(Half::new(v("1"), v("0")), Half::new(v("1"), v("2")))]).unwrap();
        assert_eq!(r.strongly_separated, vec![Some(false)]);
        assert!(!r.all_green());
    }

    #[test]
    fn four_pairs() {
        let (t, [a, b, c]) = setup();
        let p = Probe::new(&t.tree, 48);
        let fam = amplify_facing(&t, &p, [&a, &b, &c], 4, 5).unwrap();
        assert_eq!(p.consumed(), 44);
        assert_eq!(fam.len(), 4, "{:?} {:?}", fam.failure, fam.transcript);
        assert!(fam.complete());
        assert!(fam.transcript.iter().flat_map(|s| &s.claims).all(|c| c.holds));
        assert!(fam.transcript.iter().any(|s| matches!(s.source, FlipSource::Conjugate { .. })));
    }
}
