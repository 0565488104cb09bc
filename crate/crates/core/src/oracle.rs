//! Brute-force ground truth over all labeled simple graphs and tiny
//! labeled multigraphs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multigraph::{for_each_labeled_multigraph, SmallMultigraph, UnionFind};
use crate::series::factorial;

pub const MAX_GRAPH_VERTICES: usize = 7;
pub const MAX_GRAPH_VERTICES_OPT_IN: usize = 8;
pub const MAX_MULTIGRAPH_VERTICES: usize = 4;
pub const MAX_MULTIGRAPH_EDGES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphPredicate {
    All,
    Connected,
    /// Minimum degree at least 2 (cores).
    MinDegree2,
    /// Every connected component has more edges than vertices.
    PositiveExcessComponents,
    /// Connected with exactly one cycle.
    UnicyclicConnected,
}

impl GraphPredicate {
    pub const EVERY: [GraphPredicate; 5] = [
        GraphPredicate::All,
        GraphPredicate::Connected,
        GraphPredicate::MinDegree2,
        GraphPredicate::PositiveExcessComponents,
        GraphPredicate::UnicyclicConnected,
    ];
}

/// Counts by edge number for each requested predicate on `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCountTable {
    n: usize,
    counts: BTreeMap<GraphPredicate, Vec<u64>>,
}

impl GraphCountTable {
    fn empty(n: usize, predicates: &[GraphPredicate]) -> Self {
        let slots = n * n.saturating_sub(1) / 2 + 1;
        Self {
            n,
            counts: predicates.iter().map(|&p| (p, vec![0; slots])).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_edges(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn count(&self, predicate: GraphPredicate, m: usize) -> Option<BigUint> {
        self.counts
            .get(&predicate)
            .map(|v| BigUint::from(v.get(m).copied().unwrap_or(0)))
    }

    pub fn total(&self, predicate: GraphPredicate) -> Option<BigUint> {
        self.counts
            .get(&predicate)
            .map(|v| v.iter().map(|&c| BigUint::from(c)).sum())
    }

    pub fn predicates(&self) -> impl Iterator<Item = GraphPredicate> + '_ {
        self.counts.keys().copied()
    }

    /// Add the tallies of another chunk over the same `n` and predicates.
    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.n, other.n);
        for (p, v) in &other.counts {
            let mine = self.counts.entry(*p).or_insert_with(|| vec![0; v.len()]);
            for (a, b) in mine.iter_mut().zip(v) {
                *a += b;
            }
        }
    }
}

fn edge_list(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 1..n {
        for i in 0..j {
            out.push((i, j));
        }
    }
    out
}

struct Scanner {
    n: usize,
    edges: Vec<(usize, usize)>,
    predicates: Vec<GraphPredicate>,
}

impl Scanner {
    fn new(n: usize, predicates: &[GraphPredicate]) -> Self {
        Self {
            n,
            edges: edge_list(n),
            predicates: predicates.to_vec(),
        }
    }

    fn tally(&self, mask: u64, table: &mut GraphCountTable) {
        let n = self.n;
        let mut deg = [0u8; 16];
        let mut uf = UnionFind::new(n);
        let mut m = 0;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (a, b) = self.edges[i];
            deg[a] += 1;
            deg[b] += 1;
            uf.union(a, b);
            m += 1;
        }
        let connected = n > 0 && uf.count() == 1;
        let mut comp_vertices = [0i32; 16];
        let mut comp_edges = [0i32; 16];
        let mut need_components = false;
        for &p in &self.predicates {
            if p == GraphPredicate::PositiveExcessComponents {
                need_components = true;
            }
        }
        if need_components {
            for v in 0..n {
                comp_vertices[uf.find(v)] += 1;
            }
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                comp_edges[uf.find(self.edges[i].0)] += 1;
            }
        }
        for &p in &self.predicates {
            let hit = match p {
                GraphPredicate::All => true,
                GraphPredicate::Connected => connected,
                GraphPredicate::MinDegree2 => deg[..n].iter().all(|&d| d >= 2),
                GraphPredicate::PositiveExcessComponents => (0..n)
                    .filter(|&v| uf.find(v) == v)
                    .all(|r| comp_edges[r] > comp_vertices[r]),
                GraphPredicate::UnicyclicConnected => connected && m == n,
            };
            if hit {
                table.counts.get_mut(&p).unwrap()[m] += 1;
            }
        }
    }
}

fn check_graph_size(n: usize, allow_eight: bool) -> Result<()> {
    let cap = if allow_eight {
        MAX_GRAPH_VERTICES_OPT_IN
    } else {
        MAX_GRAPH_VERTICES
    };
    if n > cap {
        return Err(Error::CostGuard {
            what: "brute-force graph scan vertices",
            value: n as u64,
            cap: cap as u64,
        });
    }
    Ok(())
}

/// Number of edge masks for `n` vertices.
pub fn mask_count(n: usize) -> u64 {
    1u64 << (n * n.saturating_sub(1) / 2)
}

/// Scan all `2^{C(n,2)}` graphs on `n <= 7` vertices.
pub fn enum_graphs(n: usize, predicates: &[GraphPredicate]) -> Result<GraphCountTable> {
    check_graph_size(n, false)?;
    enum_graphs_chunk(n, predicates, 0..mask_count(n), false)
}

/// Scan the edge masks in `masks`; `allow_eight` lifts the cap to 8 vertices.
/// Chunks partitioning `0..mask_count(n)` merge into the full table.
pub fn enum_graphs_chunk(
    n: usize,
    predicates: &[GraphPredicate],
    masks: Range<u64>,
    allow_eight: bool,
) -> Result<GraphCountTable> {
    check_graph_size(n, allow_eight)?;
    let scanner = Scanner::new(n, predicates);
    let mut table = GraphCountTable::empty(n, predicates);
    for mask in masks.start..masks.end.min(mask_count(n)) {
        scanner.tally(mask, &mut table);
    }
    Ok(table)
}

/// Scan only graphs with exactly `m` edges (combinations of the edge set);
/// cheap enough for 8 vertices when `C(28, m)` is small.
pub fn enum_graphs_with_edges(
    n: usize,
    m: usize,
    predicates: &[GraphPredicate],
) -> Result<GraphCountTable> {
    check_graph_size(n, true)?;
    let scanner = Scanner::new(n, predicates);
    let mut table = GraphCountTable::empty(n, predicates);
    let total = scanner.edges.len();
    if m > total {
        return Ok(table);
    }
    if m == 0 {
        scanner.tally(0, &mut table);
        return Ok(table);
    }
    // Gosper's hack over m-subsets of the edge list
    let mut mask: u64 = (1u64 << m) - 1;
    let limit = 1u64 << total;
    while mask < limit {
        scanner.tally(mask, &mut table);
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MultigraphPredicate {
    All,
    /// No loops and no repeated vertex pair.
    Simple,
    MinDegree2,
    Connected,
}

/// Weighted totals `sum 1/(2^m m!)` over labeled multigraphs, per `(n, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultigraphWeights {
    totals: BTreeMap<(usize, usize), BigRational>,
    preimages: BTreeMap<(usize, usize), u64>,
}

impl MultigraphWeights {
    /// `sum 1/(2^m m!)` over matching multigraphs with `n` vertices, `m` edges.
    pub fn weight(&self, n: usize, m: usize) -> BigRational {
        self.totals.get(&(n, m)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The same total divided by `n!`, i.e. the EGF coefficient of `w^m z^n`.
    pub fn egf_coefficient(&self, n: usize, m: usize) -> BigRational {
        self.weight(n, m) / BigRational::from_integer(BigInt::from(factorial(n as u64)))
    }

    /// Number of matching labeled multigraphs.
    pub fn count(&self, n: usize, m: usize) -> u64 {
        self.preimages.get(&(n, m)).copied().unwrap_or(0)
    }
}

fn multigraph_matches(g: &SmallMultigraph, predicates: &[MultigraphPredicate]) -> bool {
    predicates.iter().all(|p| match p {
        MultigraphPredicate::All => true,
        MultigraphPredicate::Simple => g.is_simple(),
        MultigraphPredicate::MinDegree2 => g.min_degree() >= 2,
        MultigraphPredicate::Connected => g.is_connected(),
    })
}

/// All labeled multigraphs with `1 <= n <= n_max`, `0 <= m <= m_max`
/// satisfying every predicate.
pub fn enum_multigraphs(
    n_max: usize,
    m_max: usize,
    predicates: &[MultigraphPredicate],
) -> Result<MultigraphWeights> {
    if n_max > MAX_MULTIGRAPH_VERTICES {
        return Err(Error::CostGuard {
            what: "brute-force multigraph vertices",
            value: n_max as u64,
            cap: MAX_MULTIGRAPH_VERTICES as u64,
        });
    }
    if m_max > MAX_MULTIGRAPH_EDGES {
        return Err(Error::CostGuard {
            what: "brute-force multigraph edges",
            value: m_max as u64,
            cap: MAX_MULTIGRAPH_EDGES as u64,
        });
    }
    let mut totals = BTreeMap::new();
    let mut preimages = BTreeMap::new();
    for n in 1..=n_max {
        for m in 0..=m_max {
            let mut hits = 0u64;
            for_each_labeled_multigraph(n, m, |g| {
                if multigraph_matches(g, predicates) {
                    hits += 1;
                }
            });
            let denom = BigInt::from(2u32).pow(m as u32) * BigInt::from(factorial(m as u64));
            totals.insert((n, m), BigRational::new(BigInt::from(hits), denom));
            preimages.insert((n, m), hits);
        }
    }
    Ok(MultigraphWeights { totals, preimages })
}

/// Labeled multigraphs on `n` vertices with `m` edges that project onto the
/// simple graph with edge set `edges` (0-based pairs) after forgetting edge
/// labels and orientations.
pub fn preimage_count(n: usize, edges: &[(usize, usize)]) -> u64 {
    let mut target: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    target.sort_unstable();
    let mut hits = 0;
    for_each_labeled_multigraph(n, edges.len(), |g| {
        let mut got: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(a, b, _)| ((a - 1).min(b - 1), (a - 1).max(b - 1)))
            .collect();
        got.sort_unstable();
        if got == target {
            hits += 1;
        }
    });
    hits
}
