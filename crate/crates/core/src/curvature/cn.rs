//! The Θ-level obstruction family in ℂⁿ⁺¹, `n ≥ 2`: the trace-free
//! combination of the Δ-cleared second jet derivatives, divided by `Δ³`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hypersurface::ComplexGraph;
use crate::series::TruncatedSeries;

use super::hachtroudi::{independent_labels, trace_free_combination};
use super::minors::{ClearedSecondJets, LeviMinors};
use super::verdict::identical_vanishing;
use super::{ComponentLabel, ObstructionReport};

fn cleared_family_with(g: &ComplexGraph, minors: &LeviMinors) -> Result<Vec<(ComponentLabel, TruncatedSeries)>> {
    let n = g.n();
    let x = ClearedSecondJets::new(g, minors)?;
    let s = |a: usize, b: usize, c: usize, d: usize| x.get(a, b, c, d).clone();
    Ok(independent_labels(n)
        .into_iter()
        .map(|l| {
            let (k1, k2, l1, l2) = l.zero_based();
            (l, trace_free_combination(n, s, k1, k2, l1, l2))
        })
        .collect())
}

/// The `Δ³`-cleared numerators of the family; defined even where `Δ(0) = 0`.
pub fn cleared_theta_family(g: &ComplexGraph) -> Result<Vec<(ComponentLabel, TruncatedSeries)>> {
    if g.n() < 2 {
        return Err(Error::Dimension("the Θ-level family needs n ≥ 2".into()));
    }
    let minors = LeviMinors::new(g)?;
    cleared_family_with(g, &minors)
}

pub fn theta_obstruction_cn(g: &ComplexGraph) -> Result<ObstructionReport> {
    if g.n() < 2 {
        return Err(Error::Dimension(
            "the Θ-level family needs n ≥ 2; use the n = 1 obstruction".into(),
        ));
    }
    let minors = LeviMinors::new(g)?;
    if minors.det().constant_term().is_zero() {
        return Err(Error::LeviDegenerate);
    }
    let inv3 = minors.det().invert()?.pow(3);
    let cleared = cleared_family_with(g, &minors)?;
    let all_zero = cleared.iter().all(|(_, s)| s.is_zero());
    let cleared_order = cleared.iter().map(|(_, s)| s.order()).min().unwrap_or(0);
    let components: Vec<(ComponentLabel, TruncatedSeries)> =
        cleared.into_iter().map(|(l, s)| (l, &s * &inv3)).collect();
    let certified = components.iter().map(|(_, s)| s.order()).min().unwrap_or(0);
    let identical = if g.is_exact() && all_zero {
        identical_vanishing(g, cleared_order)?
    } else {
        false
    };
    Ok(ObstructionReport::from_components(
        g.n(),
        components,
        certified,
        true,
        identical,
    ))
}
