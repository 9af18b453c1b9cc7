//! Hypersurfaces in ℂ²: `AJ⁴(Θ)`, the derivation `𝒟`, and `𝒟(𝒟(AJ⁴(Θ)))`.
//!
//! With `Δ = Θ_ζΘ_{zω} − Θ_ωΘ_{zζ}` and `L = −Θ_ω ∂_ζ + Θ_ζ ∂_ω` we have
//! `𝒟 = L/Δ`, so `𝒟(P/Δᵏ) = (L(P)·Δ − k·P·L(Δ))/Δ^{k+2}`. Starting from
//! `AJ⁴ = P/Δ³`, two steps give the numerator over `Δ⁷` without any division.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hypersurface::ComplexGraph;
use crate::series::{GaussianRational, TruncatedSeries};

use super::minors::{ClearedSecondJets, LeviMinors};
use super::verdict::identical_vanishing;
use super::{ComponentLabel, ObstructionReport};

fn require_c2(g: &ComplexGraph) -> Result<()> {
    if g.n() != 1 {
        return Err(Error::Dimension(format!(
            "this obstruction is for n = 1 (got n = {}); use the n ≥ 2 family",
            g.n()
        )));
    }
    Ok(())
}

fn nondegenerate_det(minors: &LeviMinors) -> Result<&TruncatedSeries> {
    let det = minors.det();
    if det.constant_term().is_zero() {
        return Err(Error::LeviDegenerate);
    }
    Ok(det)
}

/// Numerator `P` of `AJ⁴(Θ) = P/Δ³`.
pub fn aj4_numerator(g: &ComplexGraph) -> Result<TruncatedSeries> {
    require_c2(g)?;
    let minors = LeviMinors::new(g)?;
    Ok(ClearedSecondJets::new(g, &minors)?.get(0, 0, 0, 0).clone())
}

pub fn aj4(g: &ComplexGraph) -> Result<TruncatedSeries> {
    require_c2(g)?;
    let minors = LeviMinors::new(g)?;
    let inv = nondegenerate_det(&minors)?.invert()?;
    let p = ClearedSecondJets::new(g, &minors)?.get(0, 0, 0, 0).clone();
    Ok(&p * &inv.pow(3))
}

/// `L(S) = −Θ_ω·S_ζ + Θ_ζ·S_ω`.
fn l_apply(g: &ComplexGraph, s: &TruncatedSeries) -> Result<TruncatedSeries> {
    let theta = g.theta();
    let (zeta, omega) = (g.zeta(0), g.omega());
    let a = theta.diff_index(omega)?;
    let b = theta.diff_index(zeta)?;
    Ok(&(&b * &s.diff_index(omega)?) - &(&a * &s.diff_index(zeta)?))
}

/// `𝒟(S) = (−Θ_ω/Δ)·∂S/∂ζ + (Θ_ζ/Δ)·∂S/∂ω`.
pub fn d_apply(g: &ComplexGraph, s: &TruncatedSeries) -> Result<TruncatedSeries> {
    require_c2(g)?;
    let s = s.embed(&g.vars())?;
    let minors = LeviMinors::new(g)?;
    let inv = nondegenerate_det(&minors)?.invert()?;
    Ok(&l_apply(g, &s)? * &inv)
}

/// `Δ⁷·𝒟(𝒟(AJ⁴(Θ)))`, a universal polynomial in the jets of `Θ`; defined
/// whether or not `Δ(0)` vanishes.
pub fn numerator_c2(g: &ComplexGraph) -> Result<TruncatedSeries> {
    require_c2(g)?;
    let minors = LeviMinors::new(g)?;
    let det = minors.det();
    let l_det = l_apply(g, det)?;
    let mut num = ClearedSecondJets::new(g, &minors)?.get(0, 0, 0, 0).clone();
    for k in [3, 5] {
        let lp = l_apply(g, &num)?;
        let correction = (&num * &l_det).scale(&GaussianRational::from_integer(k));
        num = &(&lp * det) - &correction;
    }
    Ok(num)
}

pub fn sphericity_obstruction_c2(g: &ComplexGraph) -> Result<ObstructionReport> {
    require_c2(g)?;
    let minors = LeviMinors::new(g)?;
    let inv = nondegenerate_det(&minors)?.invert()?;
    let num = numerator_c2(g)?;
    let obstruction = &num * &inv.pow(7);
    let certified = obstruction.order();
    let identical = if g.is_exact() && num.is_zero() {
        identical_vanishing(g, num.order())?
    } else {
        false
    };
    Ok(ObstructionReport::from_components(
        1,
        vec![(ComponentLabel::new(0, 0, 0, 0), obstruction)],
        certified,
        true,
        identical,
    ))
}
