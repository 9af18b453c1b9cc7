//! Real hypersurfaces `M ⊂ ℂ^{n+1}` through their complexified graphing
//! function `w = Θ(z, ζ, ω)`, where `ζ`, `ω` stand for the conjugates of
//! `z`, `w` treated as independent variables.

use std::sync::OnceLock;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::linalg::MinorCache;
use crate::series::{solve_implicit, GaussianRational, Multidegree, TruncatedSeries, Vars};

/// Largest supported CR dimension (keeps `2n + 1` variables within one series).
pub const MAX_DIM: usize = 7;

fn cached(slot: &'static OnceLock<Vec<Vars>>, build: fn(usize) -> Vars, n: usize) -> Vars {
    assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
    slot.get_or_init(|| (1..=MAX_DIM).map(build).collect())[n - 1].clone()
}

fn indexed(base: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![base.to_string()]
    } else {
        (1..=n).map(|k| format!("{base}{k}")).collect()
    }
}

/// `(z…, zeta…, omega)`; unsuffixed names when `n = 1`.
pub fn theta_vars(n: usize) -> Vars {
    static SLOT: OnceLock<Vec<Vars>> = OnceLock::new();
    cached(
        &SLOT,
        |n| {
            let mut v = indexed("z", n);
            v.extend(indexed("zeta", n));
            v.push("omega".into());
            Vars::new(v)
        },
        n,
    )
}

/// `(x…, y…, u)` for the real graph `v = ψ(x, y, u)`.
pub fn real_vars(n: usize) -> Vars {
    static SLOT: OnceLock<Vec<Vars>> = OnceLock::new();
    cached(
        &SLOT,
        |n| {
            let mut v = indexed("x", n);
            v.extend(indexed("y", n));
            v.push("u".into());
            Vars::new(v)
        },
        n,
    )
}

/// `(z…, w, p…)`, with `p_k` standing for `∂w/∂z_k`.
pub fn pde_vars(n: usize) -> Vars {
    static SLOT: OnceLock<Vec<Vars>> = OnceLock::new();
    cached(
        &SLOT,
        |n| {
            let mut v = indexed("z", n);
            v.push("w".into());
            v.extend(indexed("p", n));
            Vars::new(v)
        },
        n,
    )
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::Dimension(format!("n = {n} outside 1..={MAX_DIM}")))
    }
}

/// `v = ψ(x, y, u)` with real coefficients, `ψ(0) = 0` and vanishing first-order part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealGraph {
    n: usize,
    psi: TruncatedSeries,
    exact: bool,
}

impl RealGraph {
    /// `psi` must live over [`real_vars`]`(n)`. `exact` declares it a complete polynomial.
    pub fn new(n: usize, psi: TruncatedSeries, exact: bool) -> Result<Self> {
        check_dim(n)?;
        let psi = psi.embed(&real_vars(n))?;
        if let Some((m, c)) = psi.terms().find(|(_, c)| !c.is_real()) {
            return Err(Error::NotReal(format!("coefficient {c} at {m:?}")));
        }
        if let Some((m, _)) = psi.terms().find(|(m, _)| m.total() <= 1) {
            return Err(Error::NotNormalized(format!(
                "ψ has a term of degree {} at {m:?}",
                m.total()
            )));
        }
        Ok(Self { n, psi, exact })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn psi(&self) -> &TruncatedSeries {
        &self.psi
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }
}

/// Complexified graph `w = Θ(z, ζ, ω)`.
///
/// Graphs built by [`ComplexGraph::new`] or [`complexify`] are normalized,
/// `Θ = ω + O(2)`. Recentred graphs are only centred, `Θ(0) = 0`: their
/// linear part generally involves `z` and `ζ` as well.
///
/// When `exact` is set, `theta` is a complete polynomial (its order is at
/// least its degree) and may be shifted to arbitrary points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexGraph {
    n: usize,
    theta: TruncatedSeries,
    exact: bool,
}

impl ComplexGraph {
    pub fn new(n: usize, theta: TruncatedSeries, exact: bool) -> Result<Self> {
        let g = Self::centered(n, theta, exact)?;
        let vars = theta_vars(n);
        for (m, c) in g.theta.terms().filter(|(m, _)| m.total() <= 1) {
            if *m != Multidegree::unit(2 * n, 1) || !c.is_one() {
                return Err(Error::NotNormalized(format!(
                    "linear term {c}*{} (expected exactly omega)",
                    vars.name((0..vars.len()).find(|&v| m.exponent(v) > 0).unwrap_or(0))
                )));
            }
        }
        if g.theta.order() >= 1 && g.theta.coeff(&Multidegree::unit(2 * n, 1)).is_zero() {
            return Err(Error::NotNormalized("missing omega term".into()));
        }
        Ok(g)
    }

    /// Only requires `Θ(0) = 0`.
    pub fn centered(n: usize, theta: TruncatedSeries, exact: bool) -> Result<Self> {
        check_dim(n)?;
        let theta = theta.embed(&theta_vars(n))?;
        if !theta.constant_term().is_zero() {
            return Err(Error::NotNormalized("Θ(0) ≠ 0".into()));
        }
        if exact && theta.degree().is_some_and(|d| d > theta.order()) {
            return Err(Error::NotNormalized("exact graph truncated below its degree".into()));
        }
        Ok(Self { n, theta, exact })
    }

    /// The model quadric `Θ = ω + 2i(−z₁ζ₁ − ⋯ − z_kζ_k + z_{k+1}ζ_{k+1} + ⋯ + z_nζ_n)`.
    pub fn heisenberg(n: usize, k: usize, order: u32) -> Result<Self> {
        check_dim(n)?;
        if k > n {
            return Err(Error::Dimension(format!("k = {k} exceeds n = {n}")));
        }
        let vars = theta_vars(n);
        let two_i = GaussianRational::from_parts((0, 1), (2, 1));
        let mut terms = vec![(Multidegree::unit(2 * n, 1), GaussianRational::one())];
        for j in 0..n {
            let c = if j < k { -&two_i } else { two_i.clone() };
            terms.push((Multidegree::unit(j, 1).add(&Multidegree::unit(n + j, 1)), c));
        }
        Self::new(n, TruncatedSeries::from_terms(&vars, order.max(2), terms), true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> &TruncatedSeries {
        &self.theta
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn order(&self) -> u32 {
        self.theta.order()
    }

    pub fn vars(&self) -> Vars {
        theta_vars(self.n)
    }

    pub fn z(&self, k: usize) -> usize {
        k
    }

    pub fn zeta(&self, k: usize) -> usize {
        self.n + k
    }

    pub fn omega(&self) -> usize {
        2 * self.n
    }

    /// Same graph at truncation order `order`. Exact graphs stay exact as
    /// long as the order does not cut below the polynomial degree.
    pub fn with_order(&self, order: u32) -> Self {
        if order > MAX_THETA_ORDER {
            panic!("order {order} too large");
        }
        let deg = self.theta.degree().unwrap_or(0);
        if self.exact && order >= deg {
            Self {
                n: self.n,
                theta: self.theta.extend_exact(order),
                exact: true,
            }
        } else {
            Self {
                n: self.n,
                theta: self.theta.truncate(order),
                exact: self.exact && order >= deg,
            }
        }
    }

    /// `Θ̄(ζ, z, Θ(z, ζ, ω)) − ω`, which vanishes (to the graph's order)
    /// exactly when `Θ` describes a real hypersurface.
    pub fn reality_residual(&self) -> Result<TruncatedSeries> {
        let vars = self.vars();
        let conj = self.theta.conj_coeffs();
        let mut swapped: Vec<TruncatedSeries> = Vec::with_capacity(2 * self.n + 1);
        for k in 0..self.n {
            swapped.push(TruncatedSeries::var(&vars, vars.name(self.zeta(k)), self.order())?);
        }
        for k in 0..self.n {
            swapped.push(TruncatedSeries::var(&vars, vars.name(self.z(k)), self.order())?);
        }
        let subs: Vec<(&str, &TruncatedSeries)> = vars.names()[..2 * self.n]
            .iter()
            .map(String::as_str)
            .zip(swapped.iter())
            .chain(std::iter::once((vars.name(self.omega()), &self.theta)))
            .collect();
        let back = conj.compose(&subs)?;
        let omega = TruncatedSeries::var(&vars, vars.name(self.omega()), back.order())?;
        back.try_sub(&omega)
    }

    /// Exact value `Θ(z, ζ, ω)`; requires an exact graph unless the point is the origin.
    pub fn eval(
        &self,
        z: &[GaussianRational],
        zeta: &[GaussianRational],
        omega: &GaussianRational,
    ) -> Result<GaussianRational> {
        let at_origin = z.iter().chain(zeta).all(Zero::is_zero) && omega.is_zero();
        if !self.exact && !at_origin {
            return Err(Error::JetOnlyAtNonzeroPoint);
        }
        let mut pt: Vec<GaussianRational> = z.to_vec();
        pt.extend_from_slice(zeta);
        pt.push(omega.clone());
        Ok(self.theta.eval(&pt))
    }
}

/// Upper bound on the working order of a graph (series orders are bytes).
const MAX_THETA_ORDER: u32 = crate::series::MAX_ORDER;

/// A point of `M` with exact coordinates, verified on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfacePoint {
    z: Vec<GaussianRational>,
    w: GaussianRational,
}

impl SurfacePoint {
    pub fn origin(n: usize) -> Self {
        Self {
            z: vec![GaussianRational::zero(); n],
            w: GaussianRational::zero(),
        }
    }

    /// Checks `w = Θ(z, z̄, w̄)` exactly.
    pub fn new(g: &ComplexGraph, z: Vec<GaussianRational>, w: GaussianRational) -> Result<Self> {
        if z.len() != g.n() {
            return Err(Error::Dimension(format!(
                "point has {} z-coordinates, graph has n = {}",
                z.len(),
                g.n()
            )));
        }
        let zbar: Vec<GaussianRational> = z.iter().map(GaussianRational::conj).collect();
        let value = g.eval(&z, &zbar, &w.conj())?;
        if value != w {
            return Err(Error::PointNotOnSurface(format!("Θ(z, z̄, w̄) = {value}, but w = {w}")));
        }
        Ok(Self { z, w })
    }

    /// Finds the point of `M` over `(z, Re w = u)` when `Θ` is affine in `ω`,
    /// which covers rigid graphs and the model quadrics.
    pub fn over(g: &ComplexGraph, z: Vec<GaussianRational>, u: BigRational) -> Result<Self> {
        if !g.is_exact() {
            return Err(Error::JetOnlyAtNonzeroPoint);
        }
        let omega = g.omega();
        if g.theta().terms().any(|(m, _)| m.exponent(omega) > 1) {
            return Err(Error::PointNotOnSurface(
                "Θ is not affine in ω; give w explicitly".into(),
            ));
        }
        let zbar: Vec<GaussianRational> = z.iter().map(GaussianRational::conj).collect();
        let mut pt: Vec<GaussianRational> = z.clone();
        pt.extend(zbar);
        // Θ(z, z̄, ω) = a + b·ω
        let (mut a, mut b) = (GaussianRational::zero(), GaussianRational::zero());
        for (m, c) in g.theta().terms() {
            let mut t = c.clone();
            for (v, x) in pt.iter().enumerate() {
                let e = m.exponent(v);
                if e > 0 {
                    t *= &x.pow(e);
                }
            }
            if m.exponent(omega) == 1 {
                b += &t;
            } else {
                a += &t;
            }
        }
        // u + i·v = a + b·(u − i·v)  ⇒  i·v·(1 + b) = a + (b − 1)·u
        let u_g = GaussianRational::real(u.clone());
        let one = GaussianRational::one();
        let denom = &GaussianRational::i() * &(&one + &b);
        if denom.is_zero() {
            return Err(Error::PointNotOnSurface("ω-coefficient equals −1".into()));
        }
        let v = &(&a + &(&(&b - &one) * &u_g)) / &denom;
        if !v.is_real() {
            return Err(Error::PointNotOnSurface(format!(
                "no real v over this z (solution {v})"
            )));
        }
        let w = GaussianRational::new(u, v.re().clone());
        Self::new(g, z, w)
    }

    pub fn z(&self) -> &[GaussianRational] {
        &self.z
    }

    pub fn w(&self) -> &GaussianRational {
        &self.w
    }

    pub fn is_origin(&self) -> bool {
        self.z.iter().all(Zero::is_zero) && self.w.is_zero()
    }

    /// `(z − z_other, w − w_other)`, the coordinates of `self` after recentring at `other`.
    pub fn translate(&self, other: &SurfacePoint) -> (Vec<GaussianRational>, GaussianRational) {
        let z = self.z.iter().zip(&other.z).map(|(a, b)| a - b).collect();
        (z, &self.w - &other.w)
    }
}

/// Complexifies `v = ψ(x, y, u)`: substitutes `x = (z+ζ)/2`, `y = (z−ζ)/(2i)`,
/// `u = (w+ω)/2`, `v = (w−ω)/(2i)` and solves for `w − ω`.
pub fn complexify(g: &RealGraph) -> Result<ComplexGraph> {
    let n = g.n();
    let order = g.psi().order();
    let cvars = theta_vars(n);
    let mut names: Vec<String> = cvars.names().to_vec();
    names.push("s".into());
    let ext = Vars::try_new(names)?;
    let var = |name: &str| TruncatedSeries::var(&ext, name, order);
    let half = GaussianRational::from_ratio(1, 2);
    let inv_two_i = GaussianRational::from_parts((0, 1), (-1, 2));
    let rvars = real_vars(n);
    let mut subs_series = Vec::with_capacity(2 * n + 1);
    for k in 0..n {
        let z = var(cvars.name(k))?;
        let zeta = var(cvars.name(n + k))?;
        subs_series.push((&z + &zeta).scale(&half));
    }
    for k in 0..n {
        let z = var(cvars.name(k))?;
        let zeta = var(cvars.name(n + k))?;
        subs_series.push((&z - &zeta).scale(&inv_two_i));
    }
    let s = var("s")?;
    let omega = var(cvars.name(2 * n))?;
    subs_series.push(&omega + &s.scale(&half));
    let subs: Vec<(&str, &TruncatedSeries)> = rvars
        .names()
        .iter()
        .map(String::as_str)
        .zip(subs_series.iter())
        .collect();
    let psi_c = g.psi().compose(&subs)?;
    let equation = &s.scale(&inv_two_i) - &psi_c;
    let solved = solve_implicit(std::slice::from_ref(&equation), &["s"])?;
    let s_sol = solved.into_iter().next().unwrap().embed(&cvars)?;
    let omega_c = TruncatedSeries::var(&cvars, cvars.name(2 * n), order)?;
    let theta = &omega_c + &s_sol;

    let u_free = g.psi().terms().all(|(m, _)| m.exponent(2 * n) == 0);
    let exact = g.is_exact() && (u_free || polynomial_solution(g, &s_sol)?);
    ComplexGraph::new(n, theta, exact)
}

/// Checks whether the solved `w − ω` is an exact polynomial root of the
/// complexified equation (possible only when it stops well short of the order).
fn polynomial_solution(g: &RealGraph, s_sol: &TruncatedSeries) -> Result<bool> {
    let deg_s = s_sol.degree().unwrap_or(0);
    let deg_psi = g.psi().degree().unwrap_or(0);
    if deg_s >= s_sol.order() {
        return Ok(false);
    }
    let big = deg_psi.max(1).saturating_mul(deg_s.max(1)).max(deg_s);
    if big > crate::series::MAX_ORDER {
        return Ok(false);
    }
    let n = g.n();
    let cvars = theta_vars(n);
    let s = s_sol.extend_exact(big);
    let half = GaussianRational::from_ratio(1, 2);
    let inv_two_i = GaussianRational::from_parts((0, 1), (-1, 2));
    let var = |k: usize| TruncatedSeries::var(&cvars, cvars.name(k), big);
    let mut subs_series = Vec::new();
    for k in 0..n {
        subs_series.push((&var(k)? + &var(n + k)?).scale(&half));
    }
    for k in 0..n {
        subs_series.push((&var(k)? - &var(n + k)?).scale(&inv_two_i));
    }
    subs_series.push(&var(2 * n)? + &s.scale(&half));
    let rvars = real_vars(n);
    let subs: Vec<(&str, &TruncatedSeries)> = rvars
        .names()
        .iter()
        .map(String::as_str)
        .zip(subs_series.iter())
        .collect();
    let psi_c = g.psi().extend_exact(big).compose(&subs)?;
    Ok((&s.scale(&inv_two_i) - &psi_c).is_zero())
}

/// `Θ′(z′, ζ′, ω′) = Θ(z′ + z_p, ζ′ + z̄_p, ω′ + w̄_p) − w_p`.
pub fn recenter(g: &ComplexGraph, p: &SurfacePoint) -> Result<ComplexGraph> {
    if p.z.len() != g.n() {
        return Err(Error::Dimension("point and graph dimensions differ".into()));
    }
    if p.is_origin() {
        return Ok(g.clone());
    }
    if !g.is_exact() {
        return Err(Error::JetOnlyAtNonzeroPoint);
    }
    // Re-verify membership: the point may have been built for another graph.
    let p = SurfacePoint::new(g, p.z.clone(), p.w.clone())?;
    let vars = g.vars();
    let n = g.n();
    let order = g.order();
    let mut shifts: Vec<GaussianRational> = p.z.clone();
    shifts.extend(p.z.iter().map(GaussianRational::conj));
    shifts.push(p.w.conj());
    let subs_series: Vec<TruncatedSeries> = shifts
        .iter()
        .enumerate()
        .map(|(v, c)| {
            let x = TruncatedSeries::var(&vars, vars.name(v), order)?;
            Ok(&x + &TruncatedSeries::constant(&vars, c.clone(), order))
        })
        .collect::<Result<_>>()?;
    let subs: Vec<(&str, &TruncatedSeries)> = vars
        .names()
        .iter()
        .map(String::as_str)
        .zip(subs_series.iter())
        .collect();
    let shifted = g.theta().compose_exact(&subs)?;
    let theta = &shifted - &TruncatedSeries::constant(&vars, p.w.clone(), order);
    ComplexGraph::centered(n, theta, true)
}

/// Levi matrix rows `∂/∂t̄ (Θ, Θ_{z₁}, …, Θ_{z_n})` with `t̄ = (ζ₁, …, ζ_n, ω)`, and its determinant `Δ`.
#[derive(Clone, Debug)]
pub struct LeviData {
    pub matrix: Vec<Vec<TruncatedSeries>>,
    pub det: TruncatedSeries,
}

/// Row generators `(Θ, Θ_{z₁}, …, Θ_{z_n})`.
pub fn row_generators(g: &ComplexGraph) -> Result<Vec<TruncatedSeries>> {
    let mut rows = vec![g.theta().clone()];
    for k in 0..g.n() {
        rows.push(g.theta().diff_index(g.z(k))?);
    }
    Ok(rows)
}

/// Column variables `t̄ = (ζ₁, …, ζ_n, ω)` as indices.
pub fn column_vars(g: &ComplexGraph) -> Vec<usize> {
    let mut cols: Vec<usize> = (0..g.n()).map(|k| g.zeta(k)).collect();
    cols.push(g.omega());
    cols
}

pub fn levi_matrix(g: &ComplexGraph) -> Result<LeviData> {
    let gens = row_generators(g)?;
    let cols = column_vars(g);
    let matrix: Vec<Vec<TruncatedSeries>> = gens
        .iter()
        .map(|r| cols.iter().map(|&c| r.diff_index(c)).collect())
        .collect::<Result<_>>()?;
    let det = MinorCache::new(&matrix).det();
    Ok(LeviData { matrix, det })
}

/// `Δ` at `p` is the constant term of `Δ` for the graph recentred at `p`.
pub fn levi_det_at(g: &ComplexGraph, p: &SurfacePoint) -> Result<GaussianRational> {
    let local = recenter(g, p)?.with_order(2);
    Ok(levi_matrix(&local)?.det.constant_term())
}

pub fn is_levi_nondegenerate(g: &ComplexGraph, p: &SurfacePoint) -> Result<bool> {
    Ok(!levi_det_at(g, p)?.is_zero())
}

/// Hermitian Levi form at `p`, up to a positive real factor, in the basis of
/// `∂/∂z_k` lifted to the complex tangent space.
pub fn levi_form_at(g: &ComplexGraph, p: &SurfacePoint) -> Result<Vec<Vec<GaussianRational>>> {
    let local = recenter(g, p)?.with_order(2);
    let n = g.n();
    let th = local.theta();
    let coeff = |exps: &[(usize, u32)]| {
        let mut md = Multidegree::ZERO;
        for &(v, e) in exps {
            md = md.add(&Multidegree::unit(v, e));
        }
        th.coeff(&md)
    };
    let theta_omega = coeff(&[(local.omega(), 1)]);
    if theta_omega.is_zero() {
        return Err(Error::NotReal("Θ_ω vanishes at the point".into()));
    }
    // Phase making the form Hermitian: multiplier m with m / m̄ = −conj(Θ_ω).
    let t = -&theta_omega.conj();
    let one = GaussianRational::one();
    let m = if t == -&one {
        &GaussianRational::i() * &(&one - &t)
    } else {
        &one + &t
    };
    let mut form = vec![vec![GaussianRational::zero(); n]; n];
    let a_k_conj: Vec<GaussianRational> = (0..n).map(|k| coeff(&[(local.z(k), 1)]).conj()).collect();
    for j in 0..n {
        for k in 0..n {
            let th_zz = coeff(&[(local.z(j), 1), (local.zeta(k), 1)]);
            let th_zw = coeff(&[(local.z(j), 1), (local.omega(), 1)]);
            let b = -&(&th_zz + &(&th_zw * &a_k_conj[k]));
            form[j][k] = &m * &b;
        }
    }
    for j in 0..n {
        for k in 0..n {
            if form[j][k] != form[k][j].conj() {
                return Err(Error::NotReal("Levi form is not Hermitian".into()));
            }
        }
    }
    Ok(form)
}

/// `(k, n − k)` inertia of the Levi form at `p`, normalized so `k ≤ n − k`.
pub fn signature_at(g: &ComplexGraph, p: &SurfacePoint) -> Result<(usize, usize)> {
    let form = levi_form_at(g, p)?;
    let n = form.len();
    // Real symmetric realization [[S, −T], [T, S]] of S + iT.
    let mut a = vec![vec![BigRational::zero(); 2 * n]; 2 * n];
    for j in 0..n {
        for k in 0..n {
            let s = form[j][k].re().clone();
            let t = form[j][k].im().clone();
            a[j][k] = s.clone();
            a[n + j][n + k] = s;
            a[j][n + k] = -t.clone();
            a[n + j][k] = t;
        }
    }
    let (neg, pos) = symmetric_inertia(a).ok_or(Error::LeviDegenerate)?;
    let (neg, pos) = (neg / 2, pos / 2);
    Ok((neg.min(pos), neg.max(pos)))
}

/// Inertia `(negative, positive)` of a nonsingular rational symmetric matrix
/// by congruence pivoting; `None` if it is singular.
pub fn symmetric_inertia(mut a: Vec<Vec<BigRational>>) -> Option<(usize, usize)> {
    let (mut neg, mut pos) = (0, 0);
    while !a.is_empty() {
        let size = a.len();
        let piv = match (0..size).find(|&i| !a[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let (i, j) = (0..size)
                    .flat_map(|i| (0..size).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero())?;
                // Replace e_i by e_i + e_j: the new diagonal entry is 2·a_ij.
                for k in 0..size {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..size {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        let d = a[piv][piv].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let rest: Vec<usize> = (0..size).filter(|&k| k != piv).collect();
        let next: Vec<Vec<BigRational>> = rest
            .iter()
            .map(|&r| {
                rest.iter()
                    .map(|&c| &a[r][c] - &(&a[r][piv] * &a[piv][c] / &d))
                    .collect()
            })
            .collect();
        a = next;
    }
    Some((neg, pos))
}

/// Sampling lattice: every real coordinate (`x_k`, `y_k`, `u`) ranges over
/// `step·j` for integers `lower ≤ j ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    pub step: BigRational,
    pub lower: i64,
    pub upper: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocusSample {
    /// `(x…, y…, u, v)` with `v` solved numerically.
    pub coords: Vec<f64>,
    pub abs_delta: f64,
    pub flagged: bool,
}

/// Floating-point scan of `|Δ|` over lattice points of `M`; points with
/// `|Δ| < tol` are flagged as near the Levi-degenerate locus. Advisory only.
pub fn levi_locus_sample(g: &ComplexGraph, grid: &LatticeSpec, tol: f64) -> Result<Vec<LocusSample>> {
    if !g.is_exact() {
        return Err(Error::JetOnlyAtNonzeroPoint);
    }
    if grid.lower > grid.upper {
        return Err(Error::EmptyGrid);
    }
    let n = g.n();
    let axes = 2 * n + 1;
    let step = crate::series::ratio_to_f64(&grid.step);
    let levels: Vec<f64> = (grid.lower..=grid.upper).map(|j| j as f64 * step).collect();
    let gens = row_generators(g)?;
    let cols = column_vars(g);
    let entries: Vec<Vec<TruncatedSeries>> = gens
        .iter()
        .map(|r| cols.iter().map(|&c| r.diff_index(c)).collect())
        .collect::<Result<_>>()?;
    let theta_omega = g.theta().diff_index(g.omega())?;

    let mut out = Vec::new();
    let mut idx = vec![0usize; axes];
    loop {
        let coords: Vec<f64> = idx.iter().map(|&i| levels[i]).collect();
        let z: Vec<Complex64> = (0..n).map(|k| Complex64::new(coords[k], coords[n + k])).collect();
        let u = coords[2 * n];
        if let Some(v) = solve_v(g, &theta_omega, &z, u) {
            let w = Complex64::new(u, v);
            let mut pt: Vec<Complex64> = z.clone();
            pt.extend(z.iter().map(|c| c.conj()));
            pt.push(w.conj());
            let m: Vec<Vec<Complex64>> = entries
                .iter()
                .map(|row| row.iter().map(|e| e.eval_f64(&pt)).collect())
                .collect();
            let abs_delta = det_f64(m).norm();
            let mut c = coords.clone();
            c.push(v);
            out.push(LocusSample {
                coords: c,
                abs_delta,
                flagged: abs_delta < tol,
            });
        }
        // Odometer over all axes.
        let mut a = 0;
        loop {
            if a == axes {
                return Ok(out);
            }
            idx[a] += 1;
            if idx[a] < levels.len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

/// Gauss–Newton in the single real unknown `v` for `w − Θ(z, z̄, w̄) = 0`.
fn solve_v(g: &ComplexGraph, theta_omega: &TruncatedSeries, z: &[Complex64], u: f64) -> Option<f64> {
    let mut v = 0.0;
    let point = |v: f64| {
        let mut pt: Vec<Complex64> = z.to_vec();
        pt.extend(z.iter().map(|c| c.conj()));
        pt.push(Complex64::new(u, -v));
        pt
    };
    for _ in 0..60 {
        let pt = point(v);
        let w = Complex64::new(u, v);
        let r = w - g.theta().eval_f64(&pt);
        let i = Complex64::new(0.0, 1.0);
        let dr = i + i * theta_omega.eval_f64(&pt);
        let denom = dr.norm_sqr();
        if denom < 1e-300 {
            return None;
        }
        let step = (dr.conj() * r).re / denom;
        v -= step;
        if step.abs() < 1e-14 * (1.0 + v.abs()) {
            break;
        }
    }
    let w = Complex64::new(u, v);
    let r = w - g.theta().eval_f64(&point(v));
    (r.norm() < 1e-9 * (1.0 + v.abs())).then_some(v)
}

fn det_f64(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let Some(p) = (c..n).max_by(|&a, &b| m[a][c].norm().total_cmp(&m[b][c].norm())) else {
            break;
        };
        if m[p][c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                let t = m[c][k];
                m[r][k] -= f * t;
            }
        }
    }
    det
}
