//! Canonical labelling of small graphs.
//!
//! Individualisation-refinement: colour refinement down to an equitable
//! partition, branching on the first non-singleton cell, keeping the least
//! relabelled edge list. Twins and orbits of automorphisms found so far are
//! pruned.

use crate::complex::CubeComplexGraph;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub vertices: usize,
    pub edges: Vec<(u32, u32)>,
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    best: Option<(Vec<(u32, u32)>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

fn refine(adj: &[Vec<usize>], col: &[usize]) -> Vec<usize> {
    let mut col = col.to_vec();
    let mut classes = {
        let mut c = col.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let sig: Vec<(usize, Vec<usize>)> = (0..adj.len())
            .map(|v| {
                let mut n: Vec<usize> = adj[v].iter().map(|&u| col[u]).collect();
                n.sort_unstable();
                (col[v], n)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>)> = sig.iter().collect();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sig
            .iter()
            .map(|s| distinct.binary_search(&s).unwrap())
            .collect();
        let count = distinct.len();
        col = next;
        if count == classes {
            return col;
        }
        classes = count;
    }
}

fn orbits_of(autos: &[&Vec<usize>], n: usize) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in autos {
        for (x, &y) in a.iter().enumerate() {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

impl Search<'_> {
    fn certificate(&self, col: &[usize]) -> Vec<(u32, u32)> {
        let mut edges = Vec::new();
        for (v, nbrs) in self.adj.iter().enumerate() {
            for &u in nbrs {
                if v < u {
                    let (a, b) = (col[v] as u32, col[u] as u32);
                    edges.push((a.min(b), a.max(b)));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    fn twins(&self, u: usize, w: usize) -> bool {
        let strip = |x: usize, y: usize| -> Vec<usize> { self.adj[x].iter().copied().filter(|&z| z != y).collect() };
        strip(u, w) == strip(w, u)
    }

    fn run(&mut self, col: Vec<usize>, prefix: &mut Vec<usize>) {
        let n = self.adj.len();
        let mut sizes = vec![0usize; n];
        for &c in &col {
            sizes[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
            let cert = self.certificate(&col);
            match &self.best {
                None => self.best = Some((cert, col)),
                Some((best, lab)) => {
                    if cert == *best {
                        // vertex at position p in the best leaf maps to vertex at p here
                        let mut at = vec![0usize; n];
                        for (v, &p) in col.iter().enumerate() {
                            at[p] = v;
                        }
                        let auto: Vec<usize> = lab.iter().map(|&p| at[p]).collect();
                        if auto.iter().enumerate().any(|(i, &j)| i != j) {
                            self.autos.push(auto);
                        }
                    } else if cert < *best {
                        self.best = Some((cert, col));
                    }
                }
            }
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&v| col[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if explored.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            let fixing: Vec<&Vec<usize>> = self
                .autos
                .iter()
                .filter(|a| prefix.iter().all(|&p| a[p] == p))
                .collect();
            if !fixing.is_empty() {
                let orbit = orbits_of(&fixing, n);
                if explored.iter().any(|&u| orbit[u] == orbit[v]) {
                    continue;
                }
            }
            explored.push(v);
            let split: Vec<usize> = (0..n)
                .map(|x| 2 * col[x] + usize::from(col[x] == target && x != v))
                .collect();
            let next = refine(self.adj, &split);
            prefix.push(v);
            self.run(next, prefix);
            prefix.pop();
        }
    }
}

pub fn canonical_form(g: &CubeComplexGraph) -> CanonicalForm {
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().map(|u| u.index()).collect())
        .collect();
    let mut search = Search {
        adj: &adj,
        best: None,
        autos: Vec::new(),
    };
    let start = refine(&adj, &vec![0; n]);
    search.run(start, &mut Vec::new());
    CanonicalForm {
        vertices: n,
        edges: search.best.map(|(c, _)| c).unwrap_or_default(),
    }
}

pub fn isomorphic(a: &CubeComplexGraph, b: &CubeComplexGraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonical_form(a) == canonical_form(b)
}
