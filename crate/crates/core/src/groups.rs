//! Permutation groups given by generators.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Permutation of `0..n`; `p.compose(q)` applies `q` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.cycle_string())
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotBijective(format!("image list {images:?}")));
            }
        }
        Ok(Perm(images))
    }

    /// Product of disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Self {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                images[x as usize] = c[(k + 1) % c.len()];
            }
        }
        Perm::from_images(images).expect("cycles are disjoint")
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn compose(&self, first: &Perm) -> Perm {
        Perm(first.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut result = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        result
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut l: u64 = 1;
        for s in 0..self.degree() {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            l = lcm(l, len);
        }
        l
    }

    pub fn cycle_string(&self) -> String {
        let mut seen = vec![false; self.degree()];
        let mut out = String::new();
        for s in 0..self.degree() {
            if seen[s] || self.apply(s) == s {
                continue;
            }
            out.push('(');
            let mut x = s;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push_str(&x.to_string());
                x = self.apply(x);
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A finite permutation group, closed eagerly; element 0 is the identity and
/// the rest follow in breadth-first order over the generators.
#[derive(Debug)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Perm>,
    labels: Vec<String>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: OnceLock<Vec<u32>>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            labels: self.labels.clone(),
            elements: self.elements.clone(),
            index: self.index.clone(),
            table: OnceLock::new(),
        }
    }
}

pub const MAX_GROUP_ORDER: usize = 2_000_000;

impl FiniteGroup {
    pub fn generate(degree: usize, generators: Vec<Perm>, labels: Vec<String>) -> Result<Self> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::Invalid("generator degree mismatch".into()));
        }
        let labels = if labels.len() == generators.len() {
            labels
        } else {
            (0..generators.len()).map(|i| format!("g{i}")).collect()
        };
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &generators {
                let x = elements[i].compose(g);
                if !index.contains_key(&x) {
                    if elements.len() >= MAX_GROUP_ORDER {
                        return Err(Error::Invalid(format!("group order exceeds {MAX_GROUP_ORDER}")));
                    }
                    index.insert(x.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(x);
                }
            }
        }
        Ok(FiniteGroup {
            degree,
            generators,
            labels,
            elements,
            index,
            table: OnceLock::new(),
        })
    }

    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::generate(degree, generators, Vec::new())
    }

    pub fn trivial(degree: usize) -> Self {
        Self::generate(degree, Vec::new(), Vec::new()).unwrap()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Element indices of the generators.
    pub fn generator_indices(&self) -> Vec<usize> {
        self.generators.iter().map(|g| self.index[g]).collect()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    fn table(&self) -> &[u32] {
        self.table.get_or_init(|| {
            let n = self.order();
            let mut t = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    t[i * n + j] = self.index[&self.elements[i].compose(&self.elements[j])] as u32;
                }
            }
            t
        })
    }

    /// Index of `x * y` (apply `y` first).
    pub fn mul(&self, x: usize, y: usize) -> usize {
        if self.order() <= 4096 {
            self.table()[x * self.order() + y] as usize
        } else {
            self.index[&self.elements[x].compose(&self.elements[y])]
        }
    }

    pub fn inv(&self, x: usize) -> usize {
        self.index[&self.elements[x].inverse()]
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn commutator(&self, x: usize, y: usize) -> usize {
        let (xi, yi) = (self.inv(x), self.inv(y));
        self.mul(self.mul(xi, yi), self.mul(x, y))
    }

    /// Subgroup generated by commutators of elements of `sub`.
    pub fn commutator_subgroup(&self, sub: &[usize]) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut have = vec![false; self.order()];
        for &x in sub {
            for &y in sub {
                let c = self.commutator(x, y);
                if !have[c] {
                    have[c] = true;
                    gens.push(c);
                }
            }
        }
        self.closure(&gens)
    }
}

/// Abstract group operations, enough for law checking.
pub trait GroupOps {
    type Elem: Clone + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_identity(&self, a: &Self::Elem) -> bool;
    /// All elements, if the group is finite and listable.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    fn describe(&self, a: &Self::Elem) -> String;
}

impl GroupOps for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        FiniteGroup::mul(self, *a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        FiniteGroup::inv(self, *a)
    }

    fn is_identity(&self, a: &usize) -> bool {
        *a == 0
    }

    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.order()).collect())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        use rand::Rng;
        rng.gen_range(0..self.order())
    }

    fn describe(&self, a: &usize) -> String {
        self.elements[*a].cycle_string()
    }
}

/// A named entry of the small-group table.
#[derive(Clone, Debug)]
pub struct SmallGroup {
    pub name: String,
    pub group: FiniteGroup,
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let gen = Perm::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).unwrap();
    FiniteGroup::generate(n, vec![gen], vec!["r".into()]).unwrap()
}

/// Dihedral group of order `2n` acting on an `n`-gon.
pub fn dihedral(n: usize) -> FiniteGroup {
    let r = Perm::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).unwrap();
    let s = Perm::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect()).unwrap();
    FiniteGroup::generate(n, vec![r, s], vec!["r".into(), "s".into()]).unwrap()
}

pub fn symmetric(n: usize) -> FiniteGroup {
    if n < 2 {
        return FiniteGroup::trivial(n);
    }
    let t = Perm::from_cycles(n, &[&[0, 1]]);
    let c = Perm::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).unwrap();
    FiniteGroup::generate(n, vec![t, c], vec!["t".into(), "c".into()]).unwrap()
}

pub fn alternating4() -> FiniteGroup {
    let a = Perm::from_cycles(4, &[&[0, 1, 2]]);
    let b = Perm::from_cycles(4, &[&[1, 2, 3]]);
    FiniteGroup::generate(4, vec![a, b], vec!["a".into(), "b".into()]).unwrap()
}

/// Quaternion group in its regular representation.
pub fn quaternion() -> FiniteGroup {
    // element 2u + s is (-1)^s times unit u, units 1, i, j, k
    fn mul_units(a: usize, b: usize) -> (usize, usize) {
        const T: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        T[a][b]
    }
    let left = |u: usize| -> Perm {
        let images = (0..8)
            .map(|x| {
                let (v, s) = (x / 2, x % 2);
                let (w, t) = mul_units(u, v);
                (2 * w + (s ^ t)) as u32
            })
            .collect();
        Perm::from_images(images).unwrap()
    };
    FiniteGroup::generate(8, vec![left(1), left(2)], vec!["i".into(), "j".into()]).unwrap()
}

/// Elementary abelian group of order `2^k`.
pub fn elementary_abelian2(k: usize) -> FiniteGroup {
    let gens: Vec<Perm> = (0..k)
        .map(|i| Perm::from_cycles(2 * k, &[&[2 * i as u32, 2 * i as u32 + 1]]))
        .collect();
    let labels = (0..k).map(|i| format!("e{}", i + 1)).collect();
    FiniteGroup::generate(2 * k, gens, labels).unwrap()
}

/// The built-in table: cyclic, dihedral, symmetric, alternating, quaternion
/// and elementary abelian 2-groups of order at most `max_order`.
pub fn small_groups(max_order: usize) -> Vec<SmallGroup> {
    let mut out = Vec::new();
    let mut push = |name: String, group: FiniteGroup| {
        if group.order() <= max_order {
            out.push(SmallGroup { name, group });
        }
    };
    for n in 1..=max_order {
        push(format!("Z{n}"), cyclic(n));
    }
    for n in 3..=max_order / 2 {
        push(format!("D{n}"), dihedral(n));
    }
    push("S3".into(), symmetric(3));
    push("S4".into(), symmetric(4));
    push("A4".into(), alternating4());
    push("Q8".into(), quaternion());
    for k in 2..=4 {
        push(format!("Z2^{k}"), elementary_abelian2(k));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_basics() {
        let p = Perm::from_cycles(4, &[&[0, 1, 2]]);
        assert_eq!(p.order(), 3);
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(p.pow(3).is_identity());
        assert_eq!(p.cycle_string(), "(0 1 2)");
        assert!(Perm::from_images(vec![0, 0]).is_err());
        let q = Perm::from_cycles(4, &[&[0, 1]]);
        // q applied first: 0 -> 1 -> 2
        assert_eq!(p.compose(&q).apply(0), 2);
    }

    #[test]
    fn orders() {
        assert_eq!(cyclic(7).order(), 7);
        assert_eq!(dihedral(5).order(), 10);
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(symmetric(5).order(), 120);
        assert_eq!(alternating4().order(), 12);
        assert_eq!(quaternion().order(), 8);
        assert_eq!(elementary_abelian2(3).order(), 8);
        let q = quaternion();
        // exactly one involution (-1) in Q8
        let involutions = (1..8).filter(|&x| q.mul(x, x) == 0).count();
        assert_eq!(involutions, 1);
        assert!(small_groups(24).iter().all(|g| g.group.order() <= 24));
    }

    #[test]
    fn commutator_subgroups() {
        let s4 = symmetric(4);
        let all: Vec<usize> = (0..24).collect();
        assert_eq!(s4.commutator_subgroup(&all).len(), 12);
        let q = quaternion();
        assert_eq!(q.commutator_subgroup(&(0..8).collect::<Vec<_>>()).len(), 2);
    }
}
