//! Flatness condition for second-order systems `w_{z_a z_b} = Φ_{ab}(z, w, p)`.

use crate::error::Result;
use crate::pde::PdeSystem;
use crate::series::{GaussianRational, TruncatedSeries};

use super::{ComponentLabel, ObstructionReport};

/// Trace-free combination
///
/// `S^{k₁k₂}_{ℓ₁ℓ₂} − 1/(n+2) Σ_{ℓ₃}(δ_{k₁ℓ₁}S^{ℓ₃k₂}_{ℓ₃ℓ₂} + δ_{k₁ℓ₂}S^{ℓ₃k₂}_{ℓ₁ℓ₃} + δ_{k₂ℓ₁}S^{k₁ℓ₃}_{ℓ₃ℓ₂} + δ_{k₂ℓ₂}S^{k₁ℓ₃}_{ℓ₁ℓ₃})
///  + 1/((n+1)(n+2)) (δ_{k₁ℓ₁}δ_{k₂ℓ₂} + δ_{k₂ℓ₁}δ_{k₁ℓ₂}) Σ_{ℓ₃ℓ₄} S^{ℓ₃ℓ₄}_{ℓ₃ℓ₄}`
///
/// of a family `S^{k₁k₂}_{ℓ₁ℓ₂}` (zero-based indices) standing for
/// `∂²Φ_{k₁k₂}/∂p_{ℓ₁}∂p_{ℓ₂}` or any Δ-cleared multiple of it.
pub fn trace_free_combination<F>(n: usize, s: F, k1: usize, k2: usize, l1: usize, l2: usize) -> TruncatedSeries
where
    F: Fn(usize, usize, usize, usize) -> TruncatedSeries,
{
    let delta = |a: usize, b: usize| a == b;
    let mut acc = s(k1, k2, l1, l2);
    let mut middle: Option<TruncatedSeries> = None;
    let mut push = |t: TruncatedSeries| {
        middle = Some(match middle.take() {
            None => t,
            Some(m) => &m + &t,
        });
    };
    for l3 in 0..n {
        if delta(k1, l1) {
            push(s(l3, k2, l3, l2));
        }
        if delta(k1, l2) {
            push(s(l3, k2, l1, l3));
        }
        if delta(k2, l1) {
            push(s(k1, l3, l3, l2));
        }
        if delta(k2, l2) {
            push(s(k1, l3, l1, l3));
        }
    }
    if let Some(m) = middle {
        let c = GaussianRational::from_ratio(1, n as i64 + 2);
        acc = &acc - &m.scale(&c);
    }
    let weight = delta(k1, l1) as i64 * delta(k2, l2) as i64 + delta(k2, l1) as i64 * delta(k1, l2) as i64;
    if weight != 0 {
        let mut trace: Option<TruncatedSeries> = None;
        for l3 in 0..n {
            for l4 in 0..n {
                let t = s(l3, l4, l3, l4);
                trace = Some(match trace {
                    None => t,
                    Some(a) => &a + &t,
                });
            }
        }
        let c = GaussianRational::from_ratio(weight, (n as i64 + 1) * (n as i64 + 2));
        acc = &acc + &trace.unwrap().scale(&c);
    }
    acc
}

/// Labels `(k₁ ≤ k₂, ℓ₁ ≤ ℓ₂)`, one-based; the combination is symmetric in
/// each pair, so these cover every component.
pub fn independent_labels(n: usize) -> Vec<ComponentLabel> {
    let mut out = Vec::new();
    for k1 in 0..n {
        for k2 in k1..n {
            for l1 in 0..n {
                for l2 in l1..n {
                    out.push(ComponentLabel::new(k1, k2, l1, l2));
                }
            }
        }
    }
    out
}

/// Flatness components of a second-order system. For `n ≥ 2` these are the
/// trace-free combinations of `∂²Φ_{k₁k₂}/∂p_{ℓ₁}∂p_{ℓ₂}`; for `n = 1` that
/// combination vanishes identically and the single component is `∂⁴Φ/∂p⁴`.
pub fn hachtroudi_components(sys: &PdeSystem) -> Result<Vec<(ComponentLabel, TruncatedSeries)>> {
    let n = sys.n();
    if n == 1 {
        let p = sys.p(0);
        let d4 = sys.phi(0, 0).diff_many(&[p, p, p, p])?;
        return Ok(vec![(ComponentLabel::new(0, 0, 0, 0), d4)]);
    }
    let mut second = vec![None; n * n * n * n];
    for a in 0..n {
        for b in a..n {
            for c in 0..n {
                for d in c..n {
                    let v = sys.phi(a, b).diff_many(&[sys.p(c), sys.p(d)])?;
                    for (x, y) in [(a, b), (b, a)] {
                        for (u, w) in [(c, d), (d, c)] {
                            second[((x * n + y) * n + u) * n + w] = Some(v.clone());
                        }
                    }
                }
            }
        }
    }
    let s = |a: usize, b: usize, c: usize, d: usize| second[((a * n + b) * n + c) * n + d].clone().unwrap();
    Ok(independent_labels(n)
        .into_iter()
        .map(|l| {
            let (k1, k2, l1, l2) = l.zero_based();
            (l, trace_free_combination(n, s, k1, k2, l1, l2))
        })
        .collect())
}

/// Report for a second-order system. Integrability is not checked.
pub fn hachtroudi_flatness(sys: &PdeSystem) -> Result<ObstructionReport> {
    let components = hachtroudi_components(sys)?;
    let certified = components.iter().map(|(_, s)| s.order()).min().unwrap_or(0);
    let mut report = ObstructionReport::from_components(sys.n(), components, certified, true, false);
    report
        .notes
        .push("integrability of the system is not verified".to_string());
    Ok(report)
}
