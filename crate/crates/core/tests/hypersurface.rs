mod common;

use common::*;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use sphericity_core::hypersurface::*;
use sphericity_core::{Error, GaussianRational, Multidegree, TruncatedSeries};

fn real_poly(n: usize, order: u32, terms: &[(&[u32], i64)]) -> TruncatedSeries {
    TruncatedSeries::from_terms(
        &real_vars(n),
        order,
        terms
            .iter()
            .map(|(e, c)| (Multidegree::from_exponents(e), GaussianRational::from_integer(*c))),
    )
}

fn theta_poly(n: usize, order: u32, terms: &[(&[u32], GaussianRational)]) -> TruncatedSeries {
    TruncatedSeries::from_terms(
        &theta_vars(n),
        order,
        terms.iter().map(|(e, c)| (Multidegree::from_exponents(e), c.clone())),
    )
}

#[test]
fn complexify_heisenberg_c2() {
    let psi = real_poly(1, 8, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1)]);
    let graph = complexify(&RealGraph::new(1, psi, true).unwrap()).unwrap();
    let expected = theta_poly(1, 8, &[(&[0, 0, 1], g(1, 0)), (&[1, 1, 0], g(0, 2))]);
    assert_eq!(graph.theta(), &expected);
    assert!(graph.is_exact());
    assert!(graph.reality_residual().unwrap().is_zero());
}

#[test]
fn complexify_signature_one_one() {
    let psi = real_poly(
        2,
        6,
        &[
            (&[2, 0, 0, 0, 0], -1),
            (&[0, 0, 2, 0, 0], -1),
            (&[0, 2, 0, 0, 0], 1),
            (&[0, 0, 0, 2, 0], 1),
        ],
    );
    let graph = complexify(&RealGraph::new(2, psi, true).unwrap()).unwrap();
    let expected = theta_poly(
        2,
        6,
        &[
            (&[0, 0, 0, 0, 1], g(1, 0)),
            (&[1, 0, 1, 0, 0], g(0, -2)),
            (&[0, 1, 0, 1, 0], g(0, 2)),
        ],
    );
    assert_eq!(graph.theta(), &expected);
    assert!(graph.theta().terms().all(|(m, _)| m.total() <= 2));
}

#[test]
fn complexify_quartic_perturbation() {
    // ψ = |z|² + |z|⁴
    let psi = real_poly(
        1,
        8,
        &[
            (&[2, 0, 0], 1),
            (&[0, 2, 0], 1),
            (&[4, 0, 0], 1),
            (&[2, 2, 0], 2),
            (&[0, 4, 0], 1),
        ],
    );
    let graph = complexify(&RealGraph::new(1, psi, true).unwrap()).unwrap();
    let expected = theta_poly(
        1,
        8,
        &[(&[0, 0, 1], g(1, 0)), (&[1, 1, 0], g(0, 2)), (&[2, 2, 0], g(0, 2))],
    );
    assert_eq!(graph.theta(), &expected);
    assert!(graph.is_exact());
}

#[test]
fn complexify_non_rigid_graph_is_real() {
    // ψ = x² + y² + x·u + u²·y: the solution is a genuine series in ω.
    let psi = real_poly(
        1,
        7,
        &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[1, 0, 1], 1), (&[0, 1, 2], 1)],
    );
    let g = complexify(&RealGraph::new(1, psi, false).unwrap()).unwrap();
    assert!(!g.is_exact());
    let res = g.reality_residual().unwrap();
    assert!(res.is_zero());
    assert!(res.order() >= 6);
    assert_eq!(g.theta().coeff_of(&[0, 0, 1]), GaussianRational::one());
    assert!(g.theta().terms().filter(|(m, _)| m.total() == 1).count() == 1);
}

#[test]
fn complexify_rejects_unnormalized_input() {
    let psi = real_poly(1, 4, &[(&[1, 0, 0], 1)]);
    assert!(matches!(RealGraph::new(1, psi, true), Err(Error::NotNormalized(_))));
    let complex_coeff = TruncatedSeries::from_terms(&real_vars(1), 4, vec![(mono(&[2, 0, 0]), g(0, 1))]);
    assert!(matches!(RealGraph::new(1, complex_coeff, true), Err(Error::NotReal(_))));
}

#[test]
fn heisenberg_round_trip_all_signatures() {
    for n in 1..=3 {
        for k in 0..=n / 2 {
            let g = ComplexGraph::heisenberg(n, k, 6).unwrap();
            assert!(g.reality_residual().unwrap().is_zero());
            assert!(g.theta().terms().all(|(m, _)| m.total() <= 2));
        }
    }
}

#[test]
fn recenter_heisenberg_example() {
    let g = ComplexGraph::heisenberg(1, 0, 6).unwrap();
    let p = SurfacePoint::new(&g, vec![g_(1, 0)], g_(0, 1)).unwrap();
    let local = recenter(&g, &p).unwrap();
    let expected = theta_poly(
        1,
        6,
        &[
            (&[0, 0, 1], g_(1, 0)),
            (&[1, 0, 0], g_(0, 2)),
            (&[0, 1, 0], g_(0, 2)),
            (&[1, 1, 0], g_(0, 2)),
        ],
    );
    assert_eq!(local.theta(), &expected);
    assert_eq!(recenter(&g, &SurfacePoint::origin(1)).unwrap(), g);
}

fn g_(re: i64, im: i64) -> GaussianRational {
    g(re, im)
}

#[test]
fn recenter_rejects_points_off_the_surface() {
    let g = ComplexGraph::heisenberg(1, 0, 6).unwrap();
    assert!(matches!(
        SurfacePoint::new(&g, vec![g_(1, 0)], g_(0, 0)),
        Err(Error::PointNotOnSurface(_))
    ));
}

#[test]
fn recenter_rejects_jet_only_graphs() {
    let psi = real_poly(1, 6, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[1, 0, 1], 1)]);
    let jet = complexify(&RealGraph::new(1, psi, false).unwrap()).unwrap();
    let exact = ComplexGraph::heisenberg(1, 0, 6).unwrap();
    let p = SurfacePoint::new(&exact, vec![g_(1, 0)], g_(0, 1)).unwrap();
    assert!(matches!(
        recenter(&jet, &p),
        Err(Error::JetOnlyAtNonzeroPoint) | Err(Error::PointNotOnSurface(_))
    ));
    assert!(recenter(&jet, &SurfacePoint::origin(1)).is_ok());
}

/// `∂^α Θ(p)` computed by differentiating and evaluating the polynomial.
fn jet_at(theta: &TruncatedSeries, alpha: &[u32], point: &[GaussianRational]) -> GaussianRational {
    let mut s = theta.clone();
    for (v, &a) in alpha.iter().enumerate() {
        for _ in 0..a {
            s = s.diff_index(v).unwrap();
        }
    }
    s.eval(point)
}

#[test]
fn observation_identity_on_random_cubics() {
    let mut r = rng(61);
    for n in 1..=2 {
        let g = random_rigid_graph(&mut r, n, &vec![1; n], 3, 3, 3, 6);
        let p = random_point(&mut r, &g);
        let local = recenter(&g, &p).unwrap();
        let mut point: Vec<GaussianRational> = p.z().to_vec();
        point.extend(p.z().iter().map(|c| c.conj()));
        point.push(p.w().conj());
        assert!(local.theta().constant_term().is_zero());
        // Every multi-index of total degree 1..=4.
        let nv = 2 * n + 1;
        let mut alpha = vec![0u32; nv];
        loop {
            let tot: u32 = alpha.iter().sum();
            if (1..=4).contains(&tot) {
                let at_origin = jet_at(local.theta(), &alpha, &vec![GaussianRational::zero(); nv]);
                assert_eq!(at_origin, jet_at(g.theta(), &alpha, &point), "α = {alpha:?}");
            }
            let mut i = 0;
            while i < nv {
                alpha[i] += 1;
                if alpha[i] <= 4 {
                    break;
                }
                alpha[i] = 0;
                i += 1;
            }
            if i == nv {
                break;
            }
        }
    }
}

#[test]
fn recentering_is_a_groupoid_action() {
    let mut r = rng(62);
    let g = random_rigid_graph(&mut r, 1, &[1], 3, 3, 3, 6);
    let p = random_point(&mut r, &g);
    let q = random_point(&mut r, &g);
    let at_p = recenter(&g, &p).unwrap();
    let (dz, dw) = q.translate(&p);
    let q_from_p = SurfacePoint::new(&at_p, dz, dw).unwrap();
    assert_eq!(
        recenter(&at_p, &q_from_p).unwrap().theta(),
        recenter(&g, &q).unwrap().theta()
    );
}

#[test]
fn levi_examples() {
    let h = ComplexGraph::heisenberg(1, 0, 6).unwrap();
    let d = levi_matrix(&h).unwrap().det;
    assert_eq!(d.len(), 1);
    assert_eq!(d.constant_term(), g(0, -2));

    let h2 = ComplexGraph::heisenberg(2, 0, 6).unwrap();
    let d2 = levi_matrix(&h2).unwrap().det;
    assert_eq!(d2.len(), 1);
    // Rows (0,0,1), (2i,0,0), (0,2i,0): determinant (2i)² = −4.
    assert_eq!(d2.constant_term(), g(-4, 0));

    let flat = ComplexGraph::new(1, theta_poly(1, 6, &[(&[0, 0, 1], g(1, 0))]), true).unwrap();
    assert!(levi_matrix(&flat).unwrap().det.is_zero());
}

#[test]
fn n1_determinant_matches_two_by_two_formula() {
    let mut r = rng(63);
    let g = random_rigid_graph(&mut r, 1, &[1], 3, 5, 5, 8);
    let d = levi_matrix(&g).unwrap().det;
    assert_eq!(d, levi_det_expr().eval(g.theta()));
}

#[test]
fn nondegeneracy_examples() {
    let h = ComplexGraph::heisenberg(1, 0, 6).unwrap();
    let mut r = rng(64);
    for _ in 0..3 {
        let p = random_point(&mut r, &h);
        assert!(is_levi_nondegenerate(&h, &p).unwrap());
    }
    let quartic = ComplexGraph::new(
        1,
        theta_poly(1, 8, &[(&[0, 0, 1], g(1, 0)), (&[2, 2, 0], g(0, 2))]),
        true,
    )
    .unwrap();
    assert!(!is_levi_nondegenerate(&quartic, &SurfacePoint::origin(1)).unwrap());
    let p = SurfacePoint::over(&quartic, vec![g(1, 0)], BigRational::zero()).unwrap();
    assert_eq!(p.w().im(), &BigRational::one());
    assert!(is_levi_nondegenerate(&quartic, &p).unwrap());
}

#[test]
fn heisenberg_signatures() {
    assert_eq!(
        signature_at(&ComplexGraph::heisenberg(1, 0, 4).unwrap(), &SurfacePoint::origin(1)).unwrap(),
        (0, 1)
    );
    assert_eq!(
        signature_at(&ComplexGraph::heisenberg(2, 0, 4).unwrap(), &SurfacePoint::origin(2)).unwrap(),
        (0, 2)
    );
    assert_eq!(
        signature_at(&ComplexGraph::heisenberg(2, 1, 4).unwrap(), &SurfacePoint::origin(2)).unwrap(),
        (1, 1)
    );
    assert_eq!(
        signature_at(&ComplexGraph::heisenberg(3, 1, 4).unwrap(), &SurfacePoint::origin(3)).unwrap(),
        (1, 2)
    );
}

/// Characteristic polynomial coefficients `c_0 = 1, …, c_m` of `det(λI − A)`
/// by the Faddeev–LeVerrier recursion.
fn char_poly(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let m = a.len();
    let id = |i: usize, j: usize| {
        if i == j {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    };
    let mul = |x: &[Vec<BigRational>], y: &[Vec<BigRational>]| -> Vec<Vec<BigRational>> {
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..m).fold(BigRational::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![BigRational::one()];
    let mut mk: Vec<Vec<BigRational>> = (0..m).map(|i| (0..m).map(|j| id(i, j)).collect()).collect();
    for k in 1..=m {
        let am = mul(a, &mk);
        let trace = (0..m).fold(BigRational::zero(), |acc, i| acc + &am[i][i]);
        let c = -trace / BigRational::from_integer((k as i64).into());
        coeffs.push(c.clone());
        mk = (0..m)
            .map(|i| (0..m).map(|j| &am[i][j] + &c * id(i, j)).collect())
            .collect();
    }
    coeffs
}

fn sign_changes(seq: &[BigRational]) -> usize {
    let signs: Vec<bool> = seq.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Inertia of a real symmetric matrix via Descartes' rule on its
/// characteristic polynomial (exact for real-rooted polynomials).
fn descartes_inertia(a: &[Vec<BigRational>]) -> (usize, usize) {
    let c = char_poly(a);
    let m = a.len();
    // p(λ) = Σ c_k λ^{m−k}; coefficients in descending powers are c itself.
    let pos = sign_changes(&c);
    let flipped: Vec<BigRational> = c
        .iter()
        .enumerate()
        .map(|(k, x)| if (m - k) % 2 == 1 { -x.clone() } else { x.clone() })
        .collect();
    let neg = sign_changes(&flipped);
    (neg, pos)
}

#[test]
fn signature_matches_characteristic_polynomial_oracle() {
    let mut r = rng(65);
    for trial in 0..6 {
        let n = 2 + trial % 2;
        let signs: Vec<i64> = (0..n).map(|_| if r.gen_bool(0.5) { 1 } else { -1 }).collect();
        let g = random_rigid_graph(&mut r, n, &signs, 3, 3, 3, 6);
        let p = random_point(&mut r, &g);
        if !is_levi_nondegenerate(&g, &p).unwrap() {
            continue;
        }
        let h = levi_form_at(&g, &p).unwrap();
        // Real realization [[S, −T], [T, S]] of H = S + iT.
        let mut a = vec![vec![BigRational::zero(); 2 * n]; 2 * n];
        for j in 0..n {
            for k in 0..n {
                a[j][k] = h[j][k].re().clone();
                a[n + j][n + k] = h[j][k].re().clone();
                a[j][n + k] = -h[j][k].im().clone();
                a[n + j][k] = h[j][k].im().clone();
            }
        }
        let (neg, pos) = descartes_inertia(&a);
        if neg + pos < 2 * n {
            continue;
        }
        let (lo, hi) = (neg.min(pos) / 2, neg.max(pos) / 2);
        assert_eq!(signature_at(&g, &p).unwrap(), (lo, hi));
    }
}

#[test]
fn signature_refuses_degenerate_points() {
    let quartic = ComplexGraph::new(
        1,
        theta_poly(1, 8, &[(&[0, 0, 1], g(1, 0)), (&[2, 2, 0], g(0, 2))]),
        true,
    )
    .unwrap();
    assert!(matches!(
        signature_at(&quartic, &SurfacePoint::origin(1)),
        Err(Error::LeviDegenerate)
    ));
}

fn lattice(lo: i64, hi: i64) -> LatticeSpec {
    LatticeSpec {
        step: rat(1, 2),
        lower: lo,
        upper: hi,
    }
}

#[test]
fn locus_sampling_examples() {
    let h = ComplexGraph::heisenberg(1, 0, 4).unwrap();
    let samples = levi_locus_sample(&h, &lattice(-2, 2), 1e-9).unwrap();
    assert_eq!(samples.len(), 125);
    assert!(samples.iter().all(|s| !s.flagged && (s.abs_delta - 2.0).abs() < 1e-9));

    let quartic = ComplexGraph::new(
        1,
        theta_poly(1, 8, &[(&[0, 0, 1], g(1, 0)), (&[2, 2, 0], g(0, 2))]),
        true,
    )
    .unwrap();
    let samples = levi_locus_sample(&quartic, &lattice(-1, 1), 1e-9).unwrap();
    let flagged: Vec<_> = samples.iter().filter(|s| s.flagged).collect();
    assert!(!flagged.is_empty());
    assert!(flagged.iter().all(|s| s.coords[0] == 0.0 && s.coords[1] == 0.0));

    let flat = ComplexGraph::new(1, theta_poly(1, 4, &[(&[0, 0, 1], g(1, 0))]), true).unwrap();
    assert!(levi_locus_sample(&flat, &lattice(-1, 1), 1e-9)
        .unwrap()
        .iter()
        .all(|s| s.flagged));

    assert!(matches!(
        levi_locus_sample(&h, &lattice(1, 0), 1e-9),
        Err(Error::EmptyGrid)
    ));
}

#[test]
fn surface_point_over_solves_for_v() {
    let h = ComplexGraph::heisenberg(1, 0, 4).unwrap();
    let p = SurfacePoint::over(&h, vec![g(1, 1)], rat(1, 3)).unwrap();
    // v = |z|² for the model sphere.
    assert_eq!(p.w(), &GaussianRational::new(rat(1, 3), rat(2, 1)));
}
