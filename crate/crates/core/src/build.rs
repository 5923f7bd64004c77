//! Builders for the standard finite complexes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{CubeComplexGraph, GraphBuilder};

/// Skeleton of the `n`-cube; vertices are bit strings `b_1...b_n`.
pub fn hypercube(n: usize) -> CubeComplexGraph {
    assert!(n <= 16, "hypercube dimension too large");
    let mut b = GraphBuilder::new();
    let name = |x: usize| -> String {
        if n == 0 {
            "v".into()
        } else {
            (0..n).map(|i| if x >> (n - 1 - i) & 1 == 1 { '1' } else { '0' }).collect()
        }
    };
    let ids: Vec<_> = (0..1usize << n).map(|x| b.vertex(name(x))).collect();
    for x in 0..1usize << n {
        for i in 0..n {
            let y = x ^ (1 << (n - 1 - i));
            if x < y {
                b.edge(ids[x], ids[y]).unwrap();
            }
        }
    }
    let mut g = b.build();
    g.set_base(ids[0]);
    g.with_dimension_bound(n.max(crate::complex::DEFAULT_DIMENSION_BOUND))
}

/// Path with `n` vertices `0..n`.
pub fn path(n: usize) -> CubeComplexGraph {
    let mut b = GraphBuilder::new();
    let ids: Vec<_> = (0..n).map(|i| b.vertex(i.to_string())).collect();
    for w in ids.windows(2) {
        b.edge(w[0], w[1]).unwrap();
    }
    b.build()
}

/// Cycle with `n >= 3` vertices.
pub fn cycle(n: usize) -> CubeComplexGraph {
    assert!(n >= 3);
    let mut b = GraphBuilder::new();
    let ids: Vec<_> = (0..n).map(|i| b.vertex(i.to_string())).collect();
    for i in 0..n {
        b.edge(ids[i], ids[(i + 1) % n]).unwrap();
    }
    b.build()
}

/// Star with centre `c` and leaves `l1..lk`.
pub fn star(k: usize) -> CubeComplexGraph {
    let mut b = GraphBuilder::new();
    let c = b.vertex("c");
    for i in 1..=k {
        let l = b.vertex(format!("l{i}"));
        b.edge(c, l).unwrap();
    }
    let mut g = b.build();
    g.set_base(c);
    g
}

/// `P_a x P_b`, vertices named `(i,j)`.
pub fn grid(a: usize, b: usize) -> CubeComplexGraph {
    path(a).product(&path(b))
}

/// Staircase Young diagram: lattice points `i + j <= k`, named `i_j`.
pub fn staircase(k: usize) -> CubeComplexGraph {
    let mut b = GraphBuilder::new();
    for i in 0..=k {
        for j in 0..=k - i {
            b.vertex(format!("{i}_{j}"));
        }
    }
    for i in 0..=k {
        for j in 0..=k - i {
            let x = b.lookup(&format!("{i}_{j}")).unwrap();
            if i + j < k {
                let r = b.lookup(&format!("{}_{j}", i + 1)).unwrap();
                let u = b.lookup(&format!("{i}_{}", j + 1)).unwrap();
                b.edge(x, r).unwrap();
                b.edge(x, u).unwrap();
            }
        }
    }
    b.build()
}

/// Random recursive tree on `n` vertices `t0..`, deterministic in `seed`.
pub fn random_tree(n: usize, seed: u64) -> CubeComplexGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new();
    let ids: Vec<_> = (0..n).map(|i| b.vertex(format!("t{i}"))).collect();
    for i in 1..n {
        let p = rng.gen_range(0..i);
        b.edge(ids[p], ids[i]).unwrap();
    }
    b.build()
}

/// Three squares sharing the corner `c` pairwise along edges, with no 3-cube.
pub fn three_square_corner() -> CubeComplexGraph {
    CubeComplexGraph::from_edges(
        &["c", "x", "y", "z", "xy", "yz", "xz"],
        &[
            ("c", "x"),
            ("c", "y"),
            ("c", "z"),
            ("x", "xy"),
            ("y", "xy"),
            ("y", "yz"),
            ("z", "yz"),
            ("x", "xz"),
            ("z", "xz"),
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(hypercube(4).vertex_count(), 16);
        assert_eq!(hypercube(4).edge_count(), 32);
        assert_eq!(staircase(3).vertex_count(), 10);
        assert_eq!(random_tree(30, 9).edge_count(), 29);
        assert_eq!(random_tree(30, 9).names(), random_tree(30, 9).names());
        assert!(staircase(4).validate_median().unwrap().is_median);
        assert!(random_tree(40, 2).validate_median().unwrap().is_median);
    }
}
