//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sphericity_core::hypersurface::{theta_vars, ComplexGraph, SurfacePoint};
use sphericity_core::{GaussianRational, Multidegree, TruncatedSeries};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_parts((re, 1), (im, 1))
}

pub fn q(num: i64, den: i64) -> GaussianRational {
    GaussianRational::from_ratio(num, den)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Small random Gaussian rational with denominators up to 4.
pub fn small_gaussian(r: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::from_parts(
        (r.gen_range(-3..=3), r.gen_range(1..=4)),
        (r.gen_range(-3..=3), r.gen_range(1..=4)),
    )
}

pub fn mono(exps: &[u32]) -> Multidegree {
    Multidegree::from_exponents(exps)
}

/// `Θ = ω + 2i·Σ_k ε_k z_kζ_k + 2i·h(z, ζ)` where `h` is a random Hermitian
/// polynomial (`h_{ab} = conj(h_{ba})`) with monomials of total degree in
/// `min_deg..=max_deg`. Such rigid graphs are real and exactly polynomial.
pub fn random_rigid_graph(
    r: &mut ChaCha8Rng,
    n: usize,
    signs: &[i64],
    min_deg: u32,
    max_deg: u32,
    terms: usize,
    order: u32,
) -> ComplexGraph {
    let vars = theta_vars(n);
    let two_i = g(0, 2);
    let mut all: Vec<(Multidegree, GaussianRational)> = vec![(Multidegree::unit(2 * n, 1), GaussianRational::one())];
    for (k, &s) in signs.iter().enumerate() {
        all.push((
            Multidegree::unit(k, 1).add(&Multidegree::unit(n + k, 1)),
            &two_i * &GaussianRational::from_integer(s),
        ));
    }
    for _ in 0..terms {
        let deg = r.gen_range(min_deg..=max_deg);
        // Split deg between z and ζ exponents.
        let mut zexp = vec![0u32; n];
        let mut zetaexp = vec![0u32; n];
        for _ in 0..deg {
            let v = r.gen_range(0..2 * n);
            if v < n {
                zexp[v] += 1;
            } else {
                zetaexp[v - n] += 1;
            }
        }
        let c = small_gaussian(r);
        let mut a = zexp.clone();
        a.extend(&zetaexp);
        a.push(0);
        let mut b = zetaexp.clone();
        b.extend(&zexp);
        b.push(0);
        let (ma, mb) = (Multidegree::from_exponents(&a), Multidegree::from_exponents(&b));
        if ma == mb {
            all.push((ma, &two_i * &GaussianRational::real(c.re().clone())));
        } else {
            all.push((ma, &two_i * &c));
            all.push((mb, &two_i * &c.conj()));
        }
    }
    let theta = TruncatedSeries::from_terms(&vars, order, all);
    ComplexGraph::new(n, theta, true).expect("rigid graph is normalized")
}

/// Image of the model sphere under `(z, w) ↦ (α·z, λ·w + f(z))`:
/// `Θ = ω + f(z) − f̄(ζ) + 2i·(λ/|α|²)·Σ ε_k z_kζ_k`, with `f` a polynomial
/// of degree `2..=max_deg` (no linear part).
pub fn sphere_image(
    r: &mut ChaCha8Rng,
    n: usize,
    signs: &[i64],
    max_deg: u32,
    terms: usize,
    order: u32,
) -> ComplexGraph {
    let vars = theta_vars(n);
    let scale = GaussianRational::from_ratio(r.gen_range(1..=5), r.gen_range(1..=5));
    let mut all: Vec<(Multidegree, GaussianRational)> = vec![(Multidegree::unit(2 * n, 1), GaussianRational::one())];
    for (k, &s) in signs.iter().enumerate() {
        let c = &(&g(0, 2) * &scale) * &GaussianRational::from_integer(s);
        all.push((Multidegree::unit(k, 1).add(&Multidegree::unit(n + k, 1)), c));
    }
    for _ in 0..terms {
        let deg = r.gen_range(2..=max_deg);
        let mut e = vec![0u32; 2 * n + 1];
        for _ in 0..deg {
            e[r.gen_range(0..n)] += 1;
        }
        let c = small_gaussian(r);
        // f(z) and −f̄(ζ)
        let mut e_bar = vec![0u32; 2 * n + 1];
        for k in 0..n {
            e_bar[n + k] = e[k];
        }
        all.push((Multidegree::from_exponents(&e), c.clone()));
        all.push((Multidegree::from_exponents(&e_bar), -&c.conj()));
    }
    ComplexGraph::new(n, TruncatedSeries::from_terms(&vars, order, all), true).expect("normalized image")
}

/// Random rational point of a graph affine in `ω`.
pub fn random_point(r: &mut ChaCha8Rng, graph: &ComplexGraph) -> SurfacePoint {
    let z: Vec<GaussianRational> = (0..graph.n())
        .map(|_| {
            GaussianRational::from_parts(
                (r.gen_range(-2..=2), r.gen_range(1..=3)),
                (r.gen_range(-2..=2), r.gen_range(1..=3)),
            )
        })
        .collect();
    let u = rat(r.gen_range(-3..=3), r.gen_range(1..=3));
    SurfacePoint::over(graph, z, u).expect("point over a rigid graph")
}

/// Derivative of a series by the multi-index `(j on z_k …)` given as a list of variable indices.
pub fn d(s: &TruncatedSeries, vars: &[usize]) -> TruncatedSeries {
    s.diff_many(vars).unwrap()
}

pub fn sum(items: impl IntoIterator<Item = TruncatedSeries>) -> TruncatedSeries {
    let mut it = items.into_iter();
    let first = it.next().unwrap();
    it.fold(first, |a, b| &a + &b)
}

pub fn factorial(k: u32) -> GaussianRational {
    GaussianRational::from_integer((1..=k as i64).product())
}

/// Determinant by the Leibniz permutation formula.
pub fn leibniz_det(m: &[Vec<TruncatedSeries>]) -> TruncatedSeries {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc: Option<TruncatedSeries> = None;
    permutations(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let mut t = m[0][p[0]].clone();
        for i in 1..n {
            t = &t * &m[i][p[i]];
        }
        if inversions % 2 == 1 {
            t = t.neg();
        }
        acc = Some(match acc.take() {
            None => t,
            Some(a) => &a + &t,
        });
    });
    acc.unwrap()
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Literal expression tree for the ℂ² formulas, evaluated on truncated series.
#[derive(Clone, Debug)]
pub enum Expr {
    /// `∂^{j+k+l}Θ / ∂z^j ∂ζ^k ∂ω^l`
    Jet(u32, u32, u32),
    Int(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, theta: &TruncatedSeries) -> TruncatedSeries {
        match self {
            Expr::Jet(j, k, l) => {
                let mut vars = vec![0; *j as usize];
                vars.extend(std::iter::repeat_n(1, *k as usize));
                vars.extend(std::iter::repeat_n(2, *l as usize));
                theta.diff_many(&vars).unwrap()
            }
            Expr::Int(c) => TruncatedSeries::constant(theta.vars(), (*c).into(), theta.order()),
            Expr::Add(a, b) => &a.eval(theta) + &b.eval(theta),
            Expr::Sub(a, b) => &a.eval(theta) - &b.eval(theta),
            Expr::Mul(a, b) => &a.eval(theta) * &b.eval(theta),
            Expr::Div(a, b) => &a.eval(theta) * &b.eval(theta).invert().unwrap(),
        }
    }
}

pub fn jet(j: u32, k: u32, l: u32) -> Expr {
    Expr::Jet(j, k, l)
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(o))
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(o))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(o))
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, o: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(o))
    }
}

fn det2(a: Expr, b: Expr, c: Expr, d: Expr) -> Expr {
    a * d - b * c
}

/// `Θ_ζ Θ_{zω} − Θ_ω Θ_{zζ}`
pub fn levi_det_expr() -> Expr {
    det2(jet(0, 1, 0), jet(0, 0, 1), jet(1, 1, 0), jet(1, 0, 1))
}

/// The AJ⁴ display, term by term.
pub fn aj4_expr() -> Expr {
    let z = || jet(0, 1, 0); // Θ_ζ
    let w = || jet(0, 0, 1); // Θ_ω
    let delta = levi_det_expr;
    let two = || Expr::Int(2);
    let brace = jet(2, 2, 0) * (w() * w() * delta()) - two() * jet(2, 1, 1) * (z() * w() * delta())
        + jet(2, 0, 2) * (z() * z() * delta())
        + jet(2, 1, 0)
            * (z() * z() * det2(w(), jet(0, 0, 2), jet(1, 0, 1), jet(1, 0, 2))
                - two() * z() * w() * det2(w(), jet(0, 1, 1), jet(1, 0, 1), jet(1, 1, 1))
                + w() * w() * det2(w(), jet(0, 2, 0), jet(1, 0, 1), jet(1, 2, 0)))
        + jet(2, 0, 1)
            * (Expr::Int(0) - z() * z() * det2(z(), jet(0, 0, 2), jet(1, 1, 0), jet(1, 0, 2))
                + two() * z() * w() * det2(z(), jet(0, 1, 1), jet(1, 1, 0), jet(1, 1, 1))
                - w() * w() * det2(z(), jet(0, 2, 0), jet(1, 1, 0), jet(1, 2, 0)));
    brace / (delta() * delta() * delta())
}

/// `𝒟(S) = (−Θ_ω/Δ)·∂S/∂ζ + (Θ_ζ/Δ)·∂S/∂ω`, with the coefficients taken
/// from the expression tree.
pub fn oracle_d(theta: &TruncatedSeries, s: &TruncatedSeries) -> TruncatedSeries {
    let a = (Expr::Int(0) - jet(0, 0, 1)) / levi_det_expr();
    let b = jet(0, 1, 0) / levi_det_expr();
    &(&a.eval(theta) * &s.diff_index(1).unwrap()) + &(&b.eval(theta) * &s.diff_index(2).unwrap())
}

/// `𝒟(𝒟(AJ⁴(Θ)))` assembled from the literal display.
pub fn oracle_c2_obstruction(theta: &TruncatedSeries) -> TruncatedSeries {
    let aj = aj4_expr().eval(theta);
    oracle_d(theta, &oracle_d(theta, &aj))
}

/// The Θ-level family for `n ≥ 2` assembled literally: nested sums over
/// `μ, ν, τ, ℓ₃, ℓ₄`, minors by replacing a column and expanding with the
/// Leibniz formula, `1/Δ³` by series inversion. Indices zero-based.
pub fn oracle_theta_component(graph: &ComplexGraph, k1: usize, k2: usize, l1: usize, l2: usize) -> TruncatedSeries {
    let n = graph.n();
    let theta = graph.theta();
    let tbar: Vec<usize> = (0..n).map(|k| n + k).chain(std::iter::once(2 * n)).collect();
    let gens: Vec<TruncatedSeries> = std::iter::once(theta.clone())
        .chain((0..n).map(|k| d(theta, &[k])))
        .collect();
    let matrix: Vec<Vec<TruncatedSeries>> = gens
        .iter()
        .map(|r| tbar.iter().map(|&c| d(r, &[c])).collect())
        .collect();
    let delta = leibniz_det(&matrix);
    let vars = theta.vars().clone();
    let order = matrix[1][0].order();
    let with_column = |col: usize, column: Vec<TruncatedSeries>| {
        let mut m = matrix.clone();
        for (r, entry) in column.into_iter().enumerate() {
            m[r][col] = entry;
        }
        leibniz_det(&m)
    };
    let unit = |mu: usize, l: usize| {
        with_column(
            mu,
            (0..=n)
                .map(|r| {
                    if r == 1 + l {
                        TruncatedSeries::one(&vars, order)
                    } else {
                        TruncatedSeries::zero(&vars, order)
                    }
                })
                .collect(),
        )
    };
    let second = |tau: usize, mu: usize, nu: usize| {
        with_column(tau, gens.iter().map(|gr| d(gr, &[tbar[mu], tbar[nu]])).collect())
    };
    let brace = |a: usize, b: usize, mu: usize, nu: usize| {
        let four = d(theta, &[a, b, tbar[mu], tbar[nu]]);
        let mut acc = &delta * &four;
        for tau in 0..=n {
            let three = d(theta, &[a, b, tbar[tau]]);
            acc = &acc - &(&second(tau, mu, nu) * &three);
        }
        acc
    };
    let delta_fn = |a: usize, b: usize| if a == b { 1i64 } else { 0 };
    let c1 = GaussianRational::from_ratio(1, n as i64 + 2);
    let c2 = GaussianRational::from_ratio(1, (n as i64 + 1) * (n as i64 + 2));
    let mut total = TruncatedSeries::zero(&vars, 0);
    let mut first = true;
    for mu in 0..=n {
        for nu in 0..=n {
            let mut inner = &(&unit(mu, l1) * &unit(nu, l2)) * &brace(k1, k2, mu, nu);
            for l3 in 0..n {
                let blocks = [
                    (delta_fn(k1, l1), unit(mu, l3), unit(nu, l2), brace(l3, k2, mu, nu)),
                    (delta_fn(k1, l2), unit(mu, l1), unit(nu, l3), brace(l3, k2, mu, nu)),
                    (delta_fn(k2, l1), unit(mu, l3), unit(nu, l2), brace(k1, l3, mu, nu)),
                    (delta_fn(k2, l2), unit(mu, l1), unit(nu, l3), brace(k1, l3, mu, nu)),
                ];
                for (dl, a, b, br) in blocks {
                    if dl != 0 {
                        inner = &inner - &(&(&a * &b) * &br).scale(&c1);
                    }
                }
            }
            let weight = delta_fn(k1, l1) * delta_fn(k2, l2) + delta_fn(k2, l1) * delta_fn(k1, l2);
            if weight != 0 {
                for l3 in 0..n {
                    for l4 in 0..n {
                        let t = &(&unit(mu, l3) * &unit(nu, l4)) * &brace(l3, l4, mu, nu);
                        inner = &inner + &t.scale(&(&c2 * &GaussianRational::from_integer(weight)));
                    }
                }
            }
            total = if first { inner } else { &total + &inner };
            first = false;
        }
    }
    let inv = delta.invert().unwrap();
    &total * &(&(&inv * &inv) * &inv)
}

pub fn is_zero_coeff(c: &GaussianRational) -> bool {
    c.is_zero()
}
