use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::graph_gf::{tree_series, unicycle_series, GfPipeline};
use crate::patchworks::{core_terms, patchwork_star_at, MAX_PATCHWORK_EXCESS};
use crate::series::{rat, ExactRational};

use super::log_magnitude::LogMagnitude;

/// Contribution of all compositions with `q` parts and `r = k - max k_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionTerm {
    pub q: usize,
    pub r: usize,
    pub value: ExactRational,
    /// `|value| / |q = 1 term|`.
    pub relative: f64,
}

/// `n! [z^n] e^{-V} (l-th core term)(T)` for one `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceTerm {
    pub ell: usize,
    pub value: ExactRational,
    /// `|value| / |l = 0 slice|`.
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermMagnitudes {
    pub n: usize,
    pub k: usize,
    pub composition: Vec<CompositionTerm>,
    /// Present when the patchwork expansion is available (`k <= 3`).
    pub slices: Option<Vec<SliceTerm>>,
}

impl TermMagnitudes {
    /// `|q = 1 term| > sum_{q >= 2} |terms|`.
    pub fn first_composition_dominates(&self) -> bool {
        let first: ExactRational = self
            .composition
            .iter()
            .filter(|t| t.q == 1)
            .map(|t| t.value.abs())
            .fold(ExactRational::zero(), |a, b| a + b);
        let rest: ExactRational = self
            .composition
            .iter()
            .filter(|t| t.q >= 2)
            .map(|t| t.value.abs())
            .fold(ExactRational::zero(), |a, b| a + b);
        first > rest
    }
}

fn relative(value: &ExactRational, base: &ExactRational) -> f64 {
    if base.is_zero() {
        return f64::INFINITY;
    }
    LogMagnitude::from_rational(&value.abs()).ratio(&LogMagnitude::from_rational(&base.abs()))
}

/// Exact sizes of the terms of the composition identity for `CSG_{n,k}` and
/// of the slices of the patchwork expansion of `sg>0_k`.
pub fn term_magnitudes(n: usize, k: usize) -> Result<TermMagnitudes> {
    let pipe = GfPipeline::new(n, k)?;
    let terms = pipe.composition_terms(k)?;
    let first = terms
        .iter()
        .filter(|((q, _), _)| *q == 1)
        .map(|(_, s)| s.egf_count(n))
        .fold(ExactRational::zero(), |a, b| a + b);
    let composition = terms
        .iter()
        .map(|(&(q, r), s)| {
            let value = s.egf_count(n);
            CompositionTerm {
                q,
                r,
                relative: relative(&value, &first),
                value,
            }
        })
        .collect();
    let slices = if k <= MAX_PATCHWORK_EXCESS {
        let stars = patchwork_star_at(k, n, &rat(-1, 1))?;
        let t = tree_series(n);
        let (_, v) = unicycle_series(n);
        let e_minus_v = (-&v).exp()?;
        let values: Vec<ExactRational> = core_terms(k, n, &stars)?
            .iter()
            .map(|term| Ok(term.compose(&t)?.mul(&e_minus_v).egf_count(n)))
            .collect::<Result<_>>()?;
        let base = values[0].clone();
        Some(
            values
                .into_iter()
                .enumerate()
                .map(|(ell, value)| SliceTerm {
                    ell,
                    relative: relative(&value, &base),
                    value,
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(TermMagnitudes {
        n,
        k,
        composition,
        slices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row_for_k_one() {
        let t = term_magnitudes(12, 1).unwrap();
        assert_eq!(t.composition.len(), 1);
        assert!(t.first_composition_dominates());
        assert_eq!(t.slices.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn slices_sum_to_sgpos() {
        let t = term_magnitudes(12, 2).unwrap();
        let total = t
            .slices
            .unwrap()
            .iter()
            .fold(ExactRational::zero(), |a, s| a + &s.value);
        let pipe = GfPipeline::new(12, 2).unwrap();
        assert_eq!(total, pipe.sgpos().count(12, 2));
    }
}
