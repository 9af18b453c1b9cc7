use num_traits::Zero;

use super::linalg::{solve_constant, solve_linear};
use super::{GaussianRational, Multidegree, TruncatedSeries, Vars};
use crate::error::{Error, Result};

/// Solves `F(x, y(x)) = 0` for the unknowns `y`, given `F(0, 0) = 0` and an
/// invertible Jacobian `∂F/∂y` at the origin.
///
/// The returned series live over the remaining variables of `F` (in their
/// original order) and are certified to the minimum order of the equations.
/// Newton's method doubles the number of correct degrees per step.
pub fn solve_implicit(equations: &[TruncatedSeries], unknowns: &[&str]) -> Result<Vec<TruncatedSeries>> {
    let m = unknowns.len();
    if equations.len() != m {
        return Err(Error::Dimension(format!(
            "{} equations for {m} unknowns",
            equations.len()
        )));
    }
    let Some(first) = equations.first() else {
        return Ok(Vec::new());
    };
    let vars = first.vars().clone();
    for f in equations {
        if f.vars() != &vars {
            return Err(Error::VariableMismatch {
                left: vars.names().to_vec(),
                right: f.vars().names().to_vec(),
            });
        }
        if !f.constant_term().is_zero() {
            return Err(Error::NotCentered);
        }
    }
    let unknown_idx: Vec<usize> = unknowns.iter().map(|u| vars.require(u)).collect::<Result<_>>()?;
    let params = Vars::try_new(
        vars.names()
            .iter()
            .enumerate()
            .filter(|(i, _)| !unknown_idx.contains(i))
            .map(|(_, n)| n.clone()),
    )?;
    let target_order = equations.iter().map(|f| f.order()).min().unwrap();

    let jac0: Vec<Vec<GaussianRational>> = equations
        .iter()
        .map(|f| unknown_idx.iter().map(|&j| f.coeff(&Multidegree::unit(j, 1))).collect())
        .collect();
    if solve_constant(&jac0, &vec![GaussianRational::zero(); m]).is_none() {
        return Err(Error::SingularJacobian);
    }
    if target_order == 0 {
        return Ok(vec![TruncatedSeries::zero(&params, 0); m]);
    }

    let jac: Vec<Vec<TruncatedSeries>> = equations
        .iter()
        .map(|f| unknown_idx.iter().map(|&j| f.diff_index(j)).collect())
        .collect::<Result<_>>()?;

    let mut y: Vec<TruncatedSeries> = vec![TruncatedSeries::zero(&params, 0); m];
    let mut prec = 0;
    while prec < target_order {
        prec = (2 * prec + 1).min(target_order);
        let y_ext: Vec<TruncatedSeries> = y.iter().map(|s| s.extend_exact(prec)).collect();
        let subs: Vec<(&str, &TruncatedSeries)> = unknowns.iter().copied().zip(y_ext.iter()).collect();
        let residual: Vec<TruncatedSeries> = equations
            .iter()
            .map(|f| f.truncate(prec).compose(&subs))
            .collect::<Result<_>>()?;
        // The Jacobian only needs to be correct to the degree still missing.
        let jac_order = prec.saturating_sub(prec / 2);
        let j_at: Vec<Vec<TruncatedSeries>> = jac
            .iter()
            .map(|row| {
                row.iter()
                    .map(|d| {
                        let subs_low: Vec<TruncatedSeries> = y_ext.iter().map(|s| s.truncate(jac_order)).collect();
                        let subs_low: Vec<(&str, &TruncatedSeries)> =
                            unknowns.iter().copied().zip(subs_low.iter()).collect();
                        d.truncate(jac_order).compose(&subs_low).map(|s| s.extend_exact(prec))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let delta = solve_linear(&j_at, &residual)?;
        y = y_ext.iter().zip(&delta).map(|(a, d)| a - d).collect();
    }
    Ok(y)
}
