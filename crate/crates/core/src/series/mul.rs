//! Truncated products.
//!
//! Both factors are scaled to Gaussian integers by a common denominator, the
//! convolution runs over machine integers when the bound allows it (falling
//! back to `BigInt`), and the scaled result is reduced once per output term.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use super::{GaussianRational, Multidegree, Term};

struct Scaled<T> {
    den: BigInt,
    coeffs: Vec<(Multidegree, T, T)>,
    real: bool,
}

fn common_denominator(terms: &[Term]) -> BigInt {
    let mut den = BigInt::one();
    for (_, c) in terms {
        for part in [c.re(), c.im()] {
            if !part.denom().is_one() {
                den = den.lcm(part.denom());
            }
        }
    }
    den
}

fn scale_part(r: &BigRational, den: &BigInt) -> BigInt {
    if r.is_zero() {
        BigInt::zero()
    } else {
        r.numer() * (den / r.denom())
    }
}

fn scale_big(terms: &[Term]) -> Scaled<BigInt> {
    let den = common_denominator(terms);
    let coeffs = terms
        .iter()
        .map(|(m, c)| (*m, scale_part(c.re(), &den), scale_part(c.im(), &den)))
        .collect();
    Scaled {
        den,
        coeffs,
        real: terms.iter().all(|(_, c)| c.is_real()),
    }
}

fn to_small(big: &Scaled<BigInt>) -> Option<(Scaled<i64>, u64)> {
    let mut max = 0u64;
    let mut coeffs = Vec::with_capacity(big.coeffs.len());
    for (m, re, im) in &big.coeffs {
        let re = re.to_i64()?;
        let im = im.to_i64()?;
        max = max.max(re.unsigned_abs()).max(im.unsigned_abs());
        coeffs.push((*m, re, im));
    }
    Some((
        Scaled {
            den: big.den.clone(),
            coeffs,
            real: big.real,
        },
        max,
    ))
}

fn finish<I>(acc: I, den: &BigInt, order: u32) -> Vec<Term>
where
    I: IntoIterator<Item = (Multidegree, BigInt, BigInt)>,
{
    let mut out: Vec<Term> = acc
        .into_iter()
        .filter(|(m, re, im)| m.total() <= order && !(re.is_zero() && im.is_zero()))
        .map(|(m, re, im)| {
            (
                m,
                GaussianRational::new(BigRational::new(re, den.clone()), BigRational::new(im, den.clone())),
            )
        })
        .collect();
    out.sort_unstable_by_key(|a| a.0);
    out
}

/// Index ranges of `terms` grouped by total degree: `starts[d]..starts[d+1]`.
fn degree_starts(terms: &[(Multidegree, impl Sized, impl Sized)], order: u32) -> Vec<usize> {
    let mut starts = Vec::with_capacity(order as usize + 2);
    for d in 0..=order + 1 {
        starts.push(terms.partition_point(|t| t.0.total() < d));
    }
    starts
}

pub(crate) fn mul_terms(a: &[Term], b: &[Term], order: u32) -> Vec<Term> {
    let a_end = a.partition_point(|t| t.0.total() <= order);
    let b_end = b.partition_point(|t| t.0.total() <= order);
    let (a, b) = (&a[..a_end], &b[..b_end]);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() == 1 && a[0].0 == Multidegree::ZERO {
        return scalar_times(&a[0].1, b);
    }
    if b.len() == 1 && b[0].0 == Multidegree::ZERO {
        return scalar_times(&b[0].1, a);
    }

    let sa = scale_big(a);
    let sb = scale_big(b);
    let den = &sa.den * &sb.den;
    if let (Some((ia, ma)), Some((ib, mb))) = (to_small(&sa), to_small(&sb)) {
        let bound = (ma as u128)
            .checked_mul(mb as u128)
            .and_then(|p| p.checked_mul(2 * a.len().min(b.len()) as u128));
        if bound.is_some_and(|p| p < i128::MAX as u128) {
            return mul_small(&ia, &ib, order, &den);
        }
    }
    mul_big(&sa, &sb, order, &den)
}

fn scalar_times(k: &GaussianRational, terms: &[Term]) -> Vec<Term> {
    terms.iter().map(|(m, c)| (*m, c * k)).collect()
}

fn mul_small(a: &Scaled<i64>, b: &Scaled<i64>, order: u32, den: &BigInt) -> Vec<Term> {
    let starts = degree_starts(&b.coeffs, order);
    let mut acc: FxHashMap<Multidegree, (i128, i128)> = FxHashMap::default();
    let real = a.real && b.real;
    for (ma, ar, ai) in &a.coeffs {
        let room = order - ma.total();
        let (ar, ai) = (*ar as i128, *ai as i128);
        for (mb, br, bi) in &b.coeffs[..starts[room as usize + 1]] {
            let (br, bi) = (*br as i128, *bi as i128);
            let e = acc.entry(ma.add(mb)).or_insert((0, 0));
            if real {
                e.0 += ar * br;
            } else {
                e.0 += ar * br - ai * bi;
                e.1 += ar * bi + ai * br;
            }
        }
    }
    finish(
        acc.into_iter()
            .map(|(m, (re, im))| (m, BigInt::from(re), BigInt::from(im))),
        den,
        order,
    )
}

fn mul_big(a: &Scaled<BigInt>, b: &Scaled<BigInt>, order: u32, den: &BigInt) -> Vec<Term> {
    let starts = degree_starts(&b.coeffs, order);
    let mut acc: FxHashMap<Multidegree, (BigInt, BigInt)> = FxHashMap::default();
    let real = a.real && b.real;
    for (ma, ar, ai) in &a.coeffs {
        let room = order - ma.total();
        for (mb, br, bi) in &b.coeffs[..starts[room as usize + 1]] {
            let e = acc.entry(ma.add(mb)).or_default();
            e.0 += ar * br;
            if !real {
                e.0 -= ai * bi;
                e.1 += ar * bi;
                e.1 += ai * br;
            }
        }
    }
    finish(acc.into_iter().map(|(m, (re, im))| (m, re, im)), den, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &[Term], b: &[Term], order: u32) -> Vec<Term> {
        let mut acc: FxHashMap<Multidegree, GaussianRational> = FxHashMap::default();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let m = ma.add(mb);
                if m.total() <= order {
                    *acc.entry(m).or_default() += &(ca * cb);
                }
            }
        }
        let mut out: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_unstable_by_key(|a| a.0);
        out
    }

    fn t(exps: &[u32], c: GaussianRational) -> Term {
        (Multidegree::from_exponents(exps), c)
    }

    #[test]
    fn small_path_matches_naive() {
        let a = vec![
            t(&[0, 0], GaussianRational::from_ratio(1, 3)),
            t(&[1, 0], GaussianRational::from_parts((2, 5), (-1, 7))),
            t(&[1, 1], GaussianRational::i()),
        ];
        let b = vec![
            t(&[0, 1], GaussianRational::from_ratio(-3, 4)),
            t(&[2, 0], GaussianRational::from_parts((0, 1), (5, 6))),
        ];
        assert_eq!(mul_terms(&a, &b, 3), naive(&a, &b, 3));
        assert_eq!(mul_terms(&a, &b, 1), naive(&a, &b, 1));
    }

    #[test]
    fn big_path_matches_naive() {
        let huge = GaussianRational::from_parts((i64::MAX, 3), (i64::MIN + 1, 7));
        let a = vec![t(&[0, 1], huge.clone()), t(&[1, 0], huge.conj())];
        let b = vec![
            t(&[0, 1], huge.clone()),
            t(&[2, 0], GaussianRational::from_ratio(1, 11)),
        ];
        assert_eq!(mul_terms(&a, &b, 4), naive(&a, &b, 4));
    }
}
