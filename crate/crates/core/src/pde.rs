//! The second-order system `w_{z_a z_b} = Φ_{ab}(z, w, w_z)` satisfied by the
//! Segre family `z ↦ Θ(z, ζ, ω)` of a Levi-nondegenerate graph.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hypersurface::{levi_matrix, pde_vars, ComplexGraph};
use crate::series::{solve_implicit, GaussianRational, Multidegree, TruncatedSeries, Vars};

/// Symmetric family `Φ_{ab}` over `(z…, w, p…)`.
///
/// The jet variable `p_k` measures `w_{z_k}` relative to its value
/// `jet_shift[k] = Θ_{z_k}(0)` at the base point, so that every series here
/// is centred; for normalized graphs the shift is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeSystem {
    n: usize,
    phi: Vec<Vec<TruncatedSeries>>,
    jet_shift: Vec<GaussianRational>,
}

impl PdeSystem {
    /// A user-supplied system; entries must live over [`pde_vars`]`(n)` and
    /// form a symmetric `n × n` array.
    pub fn new(n: usize, phi: Vec<Vec<TruncatedSeries>>) -> Result<Self> {
        if phi.len() != n || phi.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("expected a {n}×{n} array")));
        }
        let vars = pde_vars(n);
        let phi: Vec<Vec<TruncatedSeries>> = phi
            .into_iter()
            .map(|r| r.into_iter().map(|s| s.embed(&vars)).collect())
            .collect::<Result<_>>()?;
        for a in 0..n {
            for b in 0..a {
                if phi[a][b] != phi[b][a] {
                    return Err(Error::Dimension(format!(
                        "Φ is not symmetric at ({}, {})",
                        b + 1,
                        a + 1
                    )));
                }
            }
        }
        Ok(Self {
            n,
            phi,
            jet_shift: vec![GaussianRational::zero(); n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Φ_{ab}` with zero-based indices.
    pub fn phi(&self, a: usize, b: usize) -> &TruncatedSeries {
        &self.phi[a][b]
    }

    pub fn jet_shift(&self) -> &[GaussianRational] {
        &self.jet_shift
    }

    pub fn vars(&self) -> Vars {
        pde_vars(self.n)
    }

    /// Index of `p_k` among [`PdeSystem::vars`].
    pub fn p(&self, k: usize) -> usize {
        self.n + 1 + k
    }

    pub fn order(&self) -> u32 {
        self.phi.iter().flatten().map(|s| s.order()).min().unwrap_or(0)
    }
}

/// Solves `w = Θ`, `p_k + Θ_{z_k}(0) = Θ_{z_k}` for `(ζ, ω)` and substitutes
/// into `Θ_{z_a z_b}`. Certified to two orders below the graph.
pub fn associate_system(g: &ComplexGraph) -> Result<PdeSystem> {
    let n = g.n();
    if 3 * n + 2 > crate::series::MAX_VARS {
        return Err(Error::Dimension(format!("n = {n} too large for the associated system")));
    }
    if g.order() < 2 {
        return Err(Error::OrderExhausted);
    }
    if levi_matrix(&g.with_order(2))?.det.constant_term().is_zero() {
        return Err(Error::LeviDegenerate);
    }
    let (solution, jet_shift) = solve_segre_parameters(g)?;
    let pv = pde_vars(n);
    let tvars = g.vars();
    let subs: Vec<(&str, &TruncatedSeries)> = (0..=n).map(|k| tvars.name(n + k)).zip(solution.iter()).collect();
    let mut phi: Vec<Vec<TruncatedSeries>> = vec![Vec::with_capacity(n); n];
    for a in 0..n {
        for b in 0..n {
            let entry = if b < a {
                phi[b][a].clone()
            } else {
                g.theta().diff_many(&[g.z(a), g.z(b)])?.compose(&subs)?.embed(&pv)?
            };
            phi[a].push(entry);
        }
    }
    Ok(PdeSystem { n, phi, jet_shift })
}

/// `(ζ₁…ζ_n, ω)` as series in `(z, w, p)`, and the jet shift `Θ_z(0)`.
pub fn solve_segre_parameters(g: &ComplexGraph) -> Result<(Vec<TruncatedSeries>, Vec<GaussianRational>)> {
    let n = g.n();
    let tvars = g.vars();
    let pv = pde_vars(n);
    let mut names: Vec<String> = tvars.names().to_vec();
    names.push(pv.name(n).to_string());
    names.extend(pv.names()[n + 1..].iter().cloned());
    let ext = Vars::try_new(names)?;
    let theta = g.theta().embed(&ext)?;
    let order = theta.order();
    let w = TruncatedSeries::var(&ext, pv.name(n), order)?;
    let mut equations = vec![&theta - &w];
    let mut jet_shift = Vec::with_capacity(n);
    for k in 0..n {
        let theta_z = theta.diff_index(g.z(k))?;
        let shift = theta_z.constant_term();
        let p = TruncatedSeries::var(&ext, pv.name(n + 1 + k), order)?;
        let rhs = &p + &TruncatedSeries::constant(&ext, shift.clone(), order);
        equations.push(&theta_z - &rhs);
        jet_shift.push(shift);
    }
    let unknowns: Vec<&str> = (0..=n).map(|k| tvars.name(n + k)).collect();
    let solution = solve_implicit(&equations, &unknowns).map_err(|e| match e {
        Error::SingularJacobian => Error::LeviDegenerate,
        other => other,
    })?;
    let solution = solution.into_iter().map(|s| s.embed(&pv)).collect::<Result<Vec<_>>>()?;
    Ok((solution, jet_shift))
}

/// Substitutes the Segre family into `s(z, w, p)`: returns
/// `s(z, Θ(z, ζ, ω), Θ_z(z, ζ, ω) − Θ_z(0))` over the graph's variables.
pub fn along_graph(g: &ComplexGraph, s: &TruncatedSeries, jet_shift: &[GaussianRational]) -> Result<TruncatedSeries> {
    let n = g.n();
    let pv = pde_vars(n);
    let tvars = g.vars();
    let order = g.order().min(s.order() + 1);
    let theta = g.theta().truncate(order);
    let mut images = Vec::with_capacity(2 * n + 1);
    for k in 0..n {
        images.push(TruncatedSeries::var(&tvars, tvars.name(k), order)?);
    }
    images.push(theta.clone());
    for k in 0..n {
        let tz = theta.diff_index(g.z(k))?;
        images.push(&tz - &TruncatedSeries::constant(&tvars, jet_shift[k].clone(), tz.order()));
    }
    let subs: Vec<(&str, &TruncatedSeries)> = pv.names().iter().map(String::as_str).zip(images.iter()).collect();
    s.compose(&subs)
}

/// Coefficient helper for tests and reports: `Φ_{ab}` at a monomial given by exponents.
pub fn phi_coeff(sys: &PdeSystem, a: usize, b: usize, exps: &[u32]) -> GaussianRational {
    sys.phi(a, b).coeff(&Multidegree::from_exponents(exps))
}
