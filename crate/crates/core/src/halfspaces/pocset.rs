//! Abstract pocsets and the dual complex of their ultrafilters.

use std::collections::HashMap;

use crate::complex::{CubeComplexGraph, GraphBuilder, VertexId};
use crate::error::{Error, Result};
use crate::format::PocsetSpec;

/// A finite pocset on `pairs` complementary pairs. Halfspace `(i, s)` has
/// index `2i + s`; its complement is `2i + (1 - s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pocset {
    pairs: usize,
    words: usize,
    /// `le[a]` has bit `b` set iff `a ⊆ b`.
    le: Vec<Vec<u64>>,
}

/// Cap on the number of ultrafilters enumerated by [`dual_complex`].
pub const MAX_ULTRAFILTERS: usize = 1 << 20;

impl Pocset {
    pub fn new(pairs: usize, containments: &[((usize, u8), (usize, u8))]) -> Result<Self> {
        let m = 2 * pairs;
        let words = m.div_ceil(64).max(1);
        let mut le = vec![vec![0u64; words]; m];
        let set = |le: &mut Vec<Vec<u64>>, a: usize, b: usize| le[a][b / 64] |= 1 << (b % 64);
        for (a, row) in le.iter_mut().enumerate() {
            row[a / 64] |= 1 << (a % 64);
        }
        for &((i, s), (j, t)) in containments {
            if i >= pairs || j >= pairs || s > 1 || t > 1 {
                return Err(Error::PocsetInvalid(format!("containment ({i} {s}) <= ({j} {t}) is out of range")));
            }
            let (a, b) = (2 * i + s as usize, 2 * j + t as usize);
            set(&mut le, a, b);
            set(&mut le, b ^ 1, a ^ 1);
        }
        // transitive closure, Warshall over bit rows
        for k in 0..m {
            let row_k = le[k].clone();
            for a in 0..m {
                if le[a][k / 64] >> (k % 64) & 1 == 1 {
                    for (x, y) in le[a].iter_mut().zip(&row_k) {
                        *x |= y;
                    }
                }
            }
        }
        let p = Pocset { pairs, words, le };
        for a in 0..m {
            if p.le_index(a, a ^ 1) {
                return Err(Error::PocsetInvalid(format!(
                    "halfspace ({} {}) is contained in its complement",
                    a / 2,
                    a % 2
                )));
            }
            for b in (a + 1)..m {
                if p.le_index(a, b) && p.le_index(b, a) {
                    return Err(Error::PocsetInvalid(format!(
                        "halfspaces ({} {}) and ({} {}) contain each other",
                        a / 2,
                        a % 2,
                        b / 2,
                        b % 2
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn from_spec(spec: &PocsetSpec) -> Result<Self> {
        Self::new(spec.pairs.len(), &spec.containments)
    }

    /// The covering relations, enough to regenerate the order.
    pub fn to_spec(&self) -> PocsetSpec {
        let mut containments = Vec::new();
        let m = 2 * self.pairs;
        for a in 0..m {
            for b in 0..m {
                if a == b || !self.le_index(a, b) || a / 2 == b / 2 {
                    continue;
                }
                // keep one of each dual pair a <= b, b* <= a*
                if (a, b) > (b ^ 1, a ^ 1) {
                    continue;
                }
                let covered = (0..m).any(|c| c != a && c != b && self.le_index(a, c) && self.le_index(c, b));
                if !covered {
                    containments.push(((a / 2, (a % 2) as u8), (b / 2, (b % 2) as u8)));
                }
            }
        }
        PocsetSpec {
            pairs: (0..self.pairs).map(|i| format!("h{i}")).collect(),
            containments,
        }
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    fn le_index(&self, a: usize, b: usize) -> bool {
        self.le[a][b / 64] >> (b % 64) & 1 == 1
    }

    pub fn le(&self, a: (usize, u8), b: (usize, u8)) -> bool {
        self.le_index(2 * a.0 + a.1 as usize, 2 * b.0 + b.1 as usize)
    }

    /// Choice is implicit in the encoding; checks Consistency.
    pub fn is_ultrafilter(&self, choice: &[u8]) -> bool {
        choice.len() == self.pairs
            && (0..self.pairs).all(|i| {
                let a = 2 * i + choice[i] as usize;
                (0..self.pairs).all(|j| {
                    let rejected = 2 * j + 1 - choice[j] as usize;
                    !self.le_index(a, rejected)
                })
            })
    }

    /// All consistent ultrafilters, in lexicographic order of side choices.
    ///
    /// Choosing a halfspace forces every halfspace above it. In a valid pocset
    /// this never conflicts with an up-closed partial choice, so the search
    /// has no dead ends.
    pub fn ultrafilters(&self, limit: usize) -> Result<Vec<Vec<u8>>> {
        let mut out = Vec::new();
        let mut state: Vec<Option<u8>> = vec![None; self.pairs];
        self.extend(0, &mut state, &mut out, limit)?;
        Ok(out)
    }

    fn extend(&self, i: usize, state: &mut Vec<Option<u8>>, out: &mut Vec<Vec<u8>>, limit: usize) -> Result<()> {
        let Some(i) = (i..self.pairs).find(|&j| state[j].is_none()) else {
            if out.len() >= limit {
                return Err(Error::Invalid(format!("more than {limit} ultrafilters")));
            }
            out.push(state.iter().map(|s| s.unwrap()).collect());
            return Ok(());
        };
        for side in 0..2u8 {
            let a = 2 * i + side as usize;
            let mut forced = Vec::new();
            let mut ok = true;
            for (w, &word) in self.le[a].iter().enumerate().take(self.words) {
                let mut bits = word;
                while bits != 0 {
                    let b = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    match state[b / 2] {
                        None => {
                            state[b / 2] = Some((b % 2) as u8);
                            forced.push(b / 2);
                        }
                        Some(s) if s as usize != b % 2 => ok = false,
                        _ => {}
                    }
                }
            }
            debug_assert!(ok, "valid pocsets have no dead ends");
            if ok {
                self.extend(i + 1, state, out, limit)?;
            }
            for j in forced {
                state[j] = None;
            }
        }
        Ok(())
    }
}

/// The cube complex whose vertices are the ultrafilters of `p`, joined when
/// they differ in exactly one pair. Vertices are named by their side strings.
pub fn dual_complex(p: &Pocset) -> Result<CubeComplexGraph> {
    let ufs = p.ultrafilters(MAX_ULTRAFILTERS)?;
    let index: HashMap<&[u8], usize> = ufs.iter().enumerate().map(|(i, u)| (u.as_slice(), i)).collect();
    let mut b = GraphBuilder::new();
    for u in &ufs {
        let name: String = if u.is_empty() {
            "u".into()
        } else {
            u.iter().map(|&s| char::from(b'0' + s)).collect()
        };
        b.vertex(name);
    }
    let mut flipped = Vec::new();
    for (i, u) in ufs.iter().enumerate() {
        for k in 0..p.pairs() {
            flipped.clone_from(u);
            flipped[k] ^= 1;
            if let Some(&j) = index.get(flipped.as_slice()) {
                if i < j {
                    b.edge(VertexId(i as u32), VertexId(j as u32))
                        .expect("ultrafilter edges are simple");
                }
            }
        }
    }
    Ok(b.build())
}
