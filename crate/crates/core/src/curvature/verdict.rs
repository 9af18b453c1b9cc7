//! Verdicts at points of `M`, and transport of cleared numerators between points.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hypersurface::{levi_matrix, recenter, signature_at, ComplexGraph, SurfacePoint};
use crate::series::{TruncatedSeries, MAX_ORDER};

use super::c2::{numerator_c2, sphericity_obstruction_c2};
use super::cn::{cleared_theta_family, theta_obstruction_cn};
use super::{ComponentLabel, ObstructionReport};

/// Orders lost between `Θ` and its cleared numerators.
fn order_loss(n: usize) -> u32 {
    if n == 1 {
        6
    } else {
        4
    }
}

/// Total-degree bound of the cleared numerators of a polynomial `Θ` of degree `d`.
///
/// Every term is a product of jets of `Θ`, a jet of order `k` having degree
/// at most `d − k`. For `n = 1` each term has 11 factors carrying 19
/// derivatives in total; for `n ≥ 2` the `Δ³`-cleared terms have `3n + 2`
/// factors carrying `6n + 3` derivatives.
pub fn cleared_degree_bound(n: usize, d: u32) -> u32 {
    let (factors, weight) = if n == 1 {
        (11, 19)
    } else {
        (3 * n as u32 + 2, 6 * n as u32 + 3)
    };
    (factors * d).saturating_sub(weight)
}

/// `Δ⁷·𝒟(𝒟(AJ⁴))` for `n = 1`, the `Δ³`-cleared family otherwise.
pub fn cleared_numerators(g: &ComplexGraph) -> Result<Vec<(ComponentLabel, TruncatedSeries)>> {
    if g.n() == 1 {
        Ok(vec![(ComponentLabel::new(0, 0, 0, 0), numerator_c2(g)?)])
    } else {
        cleared_theta_family(g)
    }
}

/// Cleared numerators of an exact graph as complete polynomials.
pub fn full_cleared_numerators(g: &ComplexGraph) -> Result<Vec<(ComponentLabel, TruncatedSeries)>> {
    if !g.is_exact() {
        return Err(Error::JetOnlyAtNonzeroPoint);
    }
    let d = g.theta().degree().unwrap_or(0);
    let needed = cleared_degree_bound(g.n(), d) + order_loss(g.n());
    if needed > MAX_ORDER {
        return Err(Error::OrderTooLarge(needed));
    }
    cleared_numerators(&g.with_order(needed))
}

/// Called once the cleared numerators of an exact graph are known to vanish
/// through `computed`: decides whether they vanish identically, recomputing
/// past the degree bound when needed.
pub(crate) fn identical_vanishing(g: &ComplexGraph, computed: u32) -> Result<bool> {
    let d = g.theta().degree().unwrap_or(0);
    let bound = cleared_degree_bound(g.n(), d);
    if bound <= computed {
        return Ok(true);
    }
    match full_cleared_numerators(g) {
        Ok(full) => Ok(full.iter().all(|(_, s)| s.is_zero())),
        Err(Error::OrderTooLarge(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Recentres at `p`, checks Levi nondegeneracy, computes the signature and
/// the obstruction at working order `order`.
pub fn pseudospherical_verdict(g: &ComplexGraph, p: &SurfacePoint, order: u32) -> Result<ObstructionReport> {
    let local = recenter(g, p)?.with_order(order);
    if levi_matrix(&local.with_order(2))?.det.constant_term().is_zero() {
        return Ok(ObstructionReport::not_applicable(g.n()));
    }
    let signature = signature_at(g, p)?;
    let mut report = if g.n() == 1 {
        sphericity_obstruction_c2(&local)?
    } else {
        theta_obstruction_cn(&local)?
    };
    report.signature = Some(signature);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportCheck {
    /// Multidegrees compared: all of total degree ≤ order.
    pub order: u32,
    pub holds: bool,
    pub mismatched: Vec<ComponentLabel>,
}

/// Compares the cleared numerators of the graph recentred at `p` with the
/// cleared numerators of the whole graph shifted to `p`, through `order`.
/// Works at Levi-degenerate points too.
pub fn numerator_transport(g: &ComplexGraph, p: &SurfacePoint, order: u32) -> Result<TransportCheck> {
    if !g.is_exact() {
        return Err(Error::JetOnlyAtNonzeroPoint);
    }
    let full = full_cleared_numerators(g)?;
    let local = cleared_numerators(&recenter(g, p)?.with_order(order + order_loss(g.n())))?;

    let vars = g.vars();
    let mut shifts = p.z().to_vec();
    shifts.extend(p.z().iter().map(|c| c.conj()));
    shifts.push(p.w().conj());
    let mut mismatched = Vec::new();
    for ((label, whole), (_, here)) in full.iter().zip(&local) {
        let whole = whole.extend_exact(whole.order().max(order));
        let subs_series: Vec<TruncatedSeries> = shifts
            .iter()
            .enumerate()
            .map(|(v, c)| {
                let x = TruncatedSeries::var(&vars, vars.name(v), whole.order())?;
                Ok(&x + &TruncatedSeries::constant(&vars, c.clone(), whole.order()))
            })
            .collect::<Result<_>>()?;
        let subs: Vec<(&str, &TruncatedSeries)> = vars
            .names()
            .iter()
            .map(String::as_str)
            .zip(subs_series.iter())
            .collect();
        let transported = whole.compose_exact(&subs)?.truncate(order);
        if transported != here.truncate(order) {
            mismatched.push(*label);
        }
    }
    Ok(TransportCheck {
        order,
        holds: mismatched.is_empty(),
        mismatched,
    })
}

#[derive(Clone, Debug)]
pub struct PropagationReport {
    pub transport_p: TransportCheck,
    pub transport_q: TransportCheck,
    pub report_p: ObstructionReport,
    pub report_q: ObstructionReport,
    /// Both verdicts vanish, or both do not.
    pub verdicts_agree: bool,
}

/// Verdicts at two Levi-nondegenerate points of an exact graph, together
/// with the numerator transport identity at each of them.
pub fn propagate_check(g: &ComplexGraph, p: &SurfacePoint, q: &SurfacePoint, order: u32) -> Result<PropagationReport> {
    if !g.is_exact() {
        return Err(Error::JetOnlyAtNonzeroPoint);
    }
    let report_p = pseudospherical_verdict(g, p, order)?;
    let report_q = pseudospherical_verdict(g, q, order)?;
    if !report_p.levi_nondegenerate || !report_q.levi_nondegenerate {
        return Err(Error::LeviDegenerate);
    }
    let transport_order = order.saturating_sub(order_loss(g.n()));
    let transport_p = numerator_transport(g, p, transport_order)?;
    let transport_q = numerator_transport(g, q, transport_order)?;
    Ok(PropagationReport {
        verdicts_agree: report_p.verdict.vanishes() == report_q.verdict.vanishes(),
        transport_p,
        transport_q,
        report_p,
        report_q,
    })
}
