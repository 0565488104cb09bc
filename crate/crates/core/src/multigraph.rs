//! Small labeled multigraphs and patchworks on them.
//!
//! Vertices are labeled `1..=n` and edges `1..=m`. An edge is an oriented
//! triple `(tail, head, label)`; loops and parallel edges are allowed. A loop
//! contributes 2 to the degree of its vertex.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallMultigraph {
    n: usize,
    edges: Vec<(usize, usize, usize)>,
}

impl SmallMultigraph {
    /// Edges are given as `(tail, head)`; edge `i` of the slice gets label `i + 1`.
    pub fn new(n: usize, endpoints: &[(usize, usize)]) -> Result<Self> {
        for &(a, b) in endpoints {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::OutOfRange {
                    index: a.max(b),
                    max: n,
                });
            }
        }
        Ok(Self {
            n,
            edges: endpoints
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| (a, b, i + 1))
                .collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn excess(&self) -> i64 {
        self.m() as i64 - self.n as i64
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// Degrees indexed by `vertex - 1`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b, _) in &self.edges {
            deg[a - 1] += 1;
            deg[b - 1] += 1;
        }
        deg
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.0 == e.1).count()
    }

    /// Loops per vertex and multiplicities per unordered pair `(i, j)`, `i < j`,
    /// both 0-based.
    pub fn multiplicities(&self) -> (Vec<usize>, Vec<((usize, usize), usize)>) {
        let mut loops = vec![0; self.n];
        let mut pairs: Vec<((usize, usize), usize)> = Vec::new();
        for &(a, b, _) in &self.edges {
            if a == b {
                loops[a - 1] += 1;
                continue;
            }
            let key = (a.min(b) - 1, a.max(b) - 1);
            match pairs.iter_mut().find(|(k, _)| *k == key) {
                Some((_, c)) => *c += 1,
                None => pairs.push((key, 1)),
            }
        }
        pairs.sort_unstable();
        (loops, pairs)
    }

    /// No loops and no two edges joining the same pair of vertices.
    pub fn is_simple(&self) -> bool {
        let (loops, pairs) = self.multiplicities();
        loops.iter().all(|&l| l == 0) && pairs.iter().all(|&(_, c)| c == 1)
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.n);
        for &(a, b, _) in &self.edges {
            uf.union(a - 1, b - 1);
        }
        uf.count()
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_count() == 1
    }
}

/// Union-find over `0..n` with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.components -= 1;
        true
    }

    pub fn count(&self) -> usize {
        self.components
    }
}

/// A loop `(vertex, [edge])` or a double edge `(vertex pair, [edge, edge])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatchworkPart {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl PatchworkPart {
    pub fn is_loop(&self) -> bool {
        self.vertices.len() == 1
    }

    fn shares_vertex(&self, other: &Self) -> bool {
        self.vertices.iter().any(|v| other.vertices.contains(v))
    }
}

/// A set of pairwise distinct parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatchworkStruct {
    parts: Vec<PatchworkPart>,
}

impl PatchworkStruct {
    pub fn new(mut parts: Vec<PatchworkPart>) -> Result<Self> {
        parts.sort();
        if parts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("patchwork parts must be distinct".into()));
        }
        for p in &parts {
            let ok = (p.vertices.len() == 1 && p.edges.len() == 1)
                || (p.vertices.len() == 2 && p.edges.len() == 2 && p.vertices[0] != p.vertices[1]);
            if !ok {
                return Err(Error::Domain("a part is a loop or a double edge".into()));
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[PatchworkPart] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Parts sharing no vertex with any other part.
    pub fn isolated_count(&self) -> usize {
        (0..self.parts.len())
            .filter(|&i| {
                !self
                    .parts
                    .iter()
                    .enumerate()
                    .any(|(j, q)| j != i && q.shares_vertex(&self.parts[i]))
            })
            .count()
    }

    /// Whether the union of the parts is exactly `g`: every edge of `g` lies
    /// in some part, every vertex in some part, and parts agree with `g`.
    pub fn covers(&self, g: &SmallMultigraph) -> bool {
        let mut edges_seen = BTreeSet::new();
        let mut vertices_seen = BTreeSet::new();
        for p in &self.parts {
            for &e in &p.edges {
                let Some(&(a, b, _)) = g.edges().get(e.wrapping_sub(1)) else {
                    return false;
                };
                let mut ends = vec![a, b];
                ends.sort_unstable();
                ends.dedup();
                if ends != p.vertices {
                    return false;
                }
                edges_seen.insert(e);
            }
            vertices_seen.extend(p.vertices.iter().copied());
        }
        edges_seen.len() == g.m() && vertices_seen.len() == g.n()
    }
}

/// Candidate parts of `g`: every loop and every pair of parallel edges.
pub fn candidate_parts(g: &SmallMultigraph) -> Vec<PatchworkPart> {
    let mut out = Vec::new();
    let edges = g.edges();
    for (i, &(a, b, e)) in edges.iter().enumerate() {
        if a == b {
            out.push(PatchworkPart {
                vertices: vec![a],
                edges: vec![e],
            });
            continue;
        }
        for &(c, d, f) in &edges[i + 1..] {
            if c != d && a.min(b) == c.min(d) && a.max(b) == c.max(d) {
                out.push(PatchworkPart {
                    vertices: vec![a.min(b), a.max(b)],
                    edges: vec![e, f],
                });
            }
        }
    }
    out
}

/// Every patchwork whose union is `g`, as `(parts, isolated parts)` pairs.
pub fn patchworks_on(g: &SmallMultigraph) -> Vec<(usize, usize)> {
    let cands = candidate_parts(g);
    let m = g.m();
    // an edge outside every candidate cannot be covered
    let mut coverable = vec![false; m];
    for p in &cands {
        for &e in &p.edges {
            coverable[e - 1] = true;
        }
    }
    if !coverable.iter().all(|&c| c) || g.degrees().contains(&0) {
        return Vec::new();
    }
    let masks: Vec<u64> = cands
        .iter()
        .map(|p| p.edges.iter().fold(0u64, |acc, &e| acc | 1 << (e - 1)))
        .collect();
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut out = Vec::new();
    for subset in 0u64..(1u64 << cands.len()) {
        let mut covered = 0u64;
        for (i, &mask) in masks.iter().enumerate() {
            if subset >> i & 1 == 1 {
                covered |= mask;
            }
        }
        if covered != full {
            continue;
        }
        let parts = cands
            .iter()
            .enumerate()
            .filter(|(i, _)| subset >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        let pw = PatchworkStruct::new(parts).expect("candidates are distinct");
        out.push((pw.len(), pw.isolated_count()));
    }
    out
}

/// Calls `f` on every labeled multigraph with `n` vertices and `m` edges,
/// i.e. every assignment of an ordered endpoint pair to each edge label.
pub fn for_each_labeled_multigraph(n: usize, m: usize, mut f: impl FnMut(&SmallMultigraph)) {
    if n == 0 {
        if m == 0 {
            f(&SmallMultigraph { n, edges: Vec::new() });
        }
        return;
    }
    let mut g = SmallMultigraph {
        n,
        edges: (1..=m).map(|e| (1, 1, e)).collect(),
    };
    loop {
        f(&g);
        // odometer over (tail, head) pairs
        let mut i = 0;
        loop {
            if i == m {
                return;
            }
            let (a, b, _) = &mut g.edges[i];
            if *b < n {
                *b += 1;
                break;
            }
            *b = 1;
            if *a < n {
                *a += 1;
                break;
            }
            *a = 1;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_count_loops_twice() {
        let g = SmallMultigraph::new(2, &[(1, 1), (1, 2), (2, 1)]).unwrap();
        assert_eq!(g.degrees(), vec![4, 2]);
        assert_eq!(g.loop_count(), 1);
        assert!(!g.is_simple());
        assert!(g.is_connected());
        assert_eq!(g.excess(), 1);
        assert!(SmallMultigraph::new(2, &[(1, 3)]).is_err());
    }

    #[test]
    fn labeled_multigraph_count() {
        let mut count = 0;
        for_each_labeled_multigraph(3, 2, |_| count += 1);
        assert_eq!(count, 81);
        let mut empty = 0;
        for_each_labeled_multigraph(0, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }

    #[test]
    fn triple_edge_patchworks() {
        // three parallel edges: covers by 2-subsets are 3 pairs of parts and the full triple
        let g = SmallMultigraph::new(2, &[(1, 2), (2, 1), (1, 2)]).unwrap();
        let mut found = patchworks_on(&g);
        found.sort_unstable();
        assert_eq!(found, vec![(2, 0), (2, 0), (2, 0), (3, 0)]);
    }

    #[test]
    fn isolated_parts() {
        let g = SmallMultigraph::new(3, &[(1, 1), (2, 3), (3, 2)]).unwrap();
        assert_eq!(patchworks_on(&g), vec![(2, 2)]);
        let single = SmallMultigraph::new(2, &[(1, 2)]).unwrap();
        assert!(patchworks_on(&single).is_empty());
    }

    #[test]
    fn struct_validation() {
        let l = PatchworkPart {
            vertices: vec![1],
            edges: vec![1],
        };
        assert!(PatchworkStruct::new(vec![l.clone(), l.clone()]).is_err());
        let pw = PatchworkStruct::new(vec![l]).unwrap();
        let g = SmallMultigraph::new(1, &[(1, 1)]).unwrap();
        assert!(pw.covers(&g));
        assert_eq!(pw.isolated_count(), 1);
    }
}
