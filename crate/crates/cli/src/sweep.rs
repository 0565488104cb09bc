//! Parallel versions of the exact sweeps.

use excess_atlas_core::modular::{connected_table_mod, crt_combine, primes_for_table};
use excess_atlas_core::oracle::{enum_graphs, enum_graphs_with_edges, GraphPredicate};
use excess_atlas_core::Result;
use num_bigint::BigUint;
use rayon::prelude::*;

/// Connected counts for `(n, excess)` cells; one modular table per prime,
/// primes spread across the pool.
pub fn connected_counts(cells: &[(usize, i64)]) -> Result<Vec<BigUint>> {
    let n_max = cells.iter().map(|c| c.0).max().unwrap_or(1);
    let k_max = cells.iter().map(|c| c.1).max().unwrap_or(-1);
    let primes = primes_for_table(n_max, k_max);
    let per_prime: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|&p| {
            let table = connected_table_mod(n_max, k_max, p)?;
            Ok(cells.iter().map(|&(n, e)| table[n][(e + 1) as usize]).collect())
        })
        .collect::<Result<_>>()?;
    Ok((0..cells.len())
        .map(|i| {
            let residues: Vec<u64> = per_prime.iter().map(|r| r[i]).collect();
            crt_combine(&residues, &primes)
        })
        .collect())
}

/// Brute-force connected count with `m` edges on `n <= 8` vertices.
pub fn oracle_connected(n: usize, m: usize) -> Result<BigUint> {
    let table = if n <= 7 {
        enum_graphs(n, &[GraphPredicate::Connected])?
    } else {
        enum_graphs_with_edges(n, m, &[GraphPredicate::Connected])?
    };
    Ok(table.count(GraphPredicate::Connected, m).unwrap_or_default())
}
