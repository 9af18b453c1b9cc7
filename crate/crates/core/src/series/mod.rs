//! Exact truncated multivariate power series over ℚ(i).
//!
//! A [`TruncatedSeries`] stores the coefficients of every monomial of total
//! degree at most `order`; everything above that degree is unknown. Binary
//! operations truncate to the smaller of the two orders, differentiation
//! lowers the order by one, so the `order` of any derived quantity is exactly
//! the degree up to which its coefficients are certified.
//!
//! Terms are kept in a sorted `Vec` (graded-lexicographic order) with zero
//! coefficients removed, which makes equality of series structural.

mod gaussian;
pub mod linalg;
mod mul;
mod multidegree;
mod solve;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

pub use gaussian::{ratio_to_f64, GaussianRational};
pub use multidegree::Multidegree;
pub use solve::solve_implicit;

use crate::error::{Error, Result};

/// Largest number of variables a series may carry (one byte per exponent in a `u128`).
pub const MAX_VARS: usize = 16;
/// Largest truncation order (and exponent) representable.
pub const MAX_ORDER: u32 = 255;

/// Ordered list of variable names shared by a family of series.
#[derive(Clone)]
pub struct Vars(Arc<[String]>);

impl Vars {
    /// Panics when more than [`MAX_VARS`] names are given or a name repeats.
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::try_new(names).expect("invalid variable list")
    }

    pub fn try_new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len()));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Parse(format!("duplicate variable `{a}`")));
            }
        }
        Ok(Self(names.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub(crate) type Term = (Multidegree, GaussianRational);

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: Vars,
    order: u32,
    terms: Vec<Term>,
}

impl TruncatedSeries {
    pub fn zero(vars: &Vars, order: u32) -> Self {
        assert!(order <= MAX_ORDER, "order {order} too large");
        Self {
            vars: vars.clone(),
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &Vars, c: GaussianRational, order: u32) -> Self {
        Self::monomial(vars, Multidegree::ZERO, c, order)
    }

    pub fn one(vars: &Vars, order: u32) -> Self {
        Self::constant(vars, GaussianRational::one(), order)
    }

    pub fn monomial(vars: &Vars, md: Multidegree, c: GaussianRational, order: u32) -> Self {
        let mut s = Self::zero(vars, order);
        if !c.is_zero() && md.total() <= order {
            s.terms.push((md, c));
        }
        s
    }

    /// The coordinate function `name`.
    pub fn var(vars: &Vars, name: &str, order: u32) -> Result<Self> {
        let i = vars.require(name)?;
        Ok(Self::monomial(
            vars,
            Multidegree::unit(i, 1),
            GaussianRational::one(),
            order,
        ))
    }

    /// Builds a series from arbitrary terms: repeated multidegrees are summed,
    /// zero coefficients and degrees above `order` are dropped.
    pub fn from_terms<I>(vars: &Vars, order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Multidegree, GaussianRational)>,
    {
        let mut acc: FxHashMap<Multidegree, GaussianRational> = FxHashMap::default();
        for (md, c) in terms {
            if md.total() <= order {
                *acc.entry(md).or_default() += &c;
            }
        }
        Self::from_map(vars, order, acc)
    }

    pub(crate) fn from_map(vars: &Vars, order: u32, map: FxHashMap<Multidegree, GaussianRational>) -> Self {
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|(md, c)| md.total() <= order && !c.is_zero())
            .collect();
        terms.sort_unstable_by_key(|a| a.0);
        Self {
            vars: vars.clone(),
            order,
            terms,
        }
    }

    /// Terms must already be sorted, nonzero and within `order`.
    pub(crate) fn from_sorted(vars: &Vars, order: u32, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(m, c)| m.total() <= order && !c.is_zero()));
        Self {
            vars: vars.clone(),
            order,
            terms,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Truncation order: coefficients are certified for total degree ≤ order.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &GaussianRational)> {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, md: &Multidegree) -> GaussianRational {
        match self.terms.binary_search_by(|t| t.0.cmp(md)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => GaussianRational::zero(),
        }
    }

    pub fn coeff_of(&self, exps: &[u32]) -> GaussianRational {
        self.coeff(&Multidegree::from_exponents(exps))
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Multidegree::ZERO)
    }

    /// Largest total degree among stored terms.
    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|t| t.0.total())
    }

    /// Smallest nonzero term in graded-lexicographic order.
    pub fn leading_low_term(&self) -> Option<(&Multidegree, &GaussianRational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    /// Drops every term above `order` (no-op if `order` is not smaller).
    pub fn truncate(&self, order: u32) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let end = self.terms.partition_point(|t| t.0.total() <= order);
        Self::from_sorted(&self.vars, order, self.terms[..end].to_vec())
    }

    /// Re-labels the truncation order upward. Sound only when `self` is a
    /// polynomial known exactly (all coefficients above the old order are zero).
    pub fn extend_exact(&self, order: u32) -> Self {
        assert!(order <= MAX_ORDER, "order {order} too large");
        if order <= self.order {
            return self.truncate(order);
        }
        Self {
            vars: self.vars.clone(),
            order,
            terms: self.terms.clone(),
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        Ok(Self::from_sorted(
            &self.vars,
            order,
            mul::mul_terms(&self.terms, &other.terms, order),
        ))
    }

    fn merge(&self, other: &Self, subtract: bool) -> Self {
        let order = self.order.min(other.order);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().take_while(|t| t.0.total() <= order).peekable();
        let mut b = other.terms.iter().take_while(|t| t.0.total() <= order).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (m, c) = b.next().unwrap();
                    out.push((*m, if subtract { -c } else { c.clone() }));
                }
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    std::cmp::Ordering::Less => out.push(a.next().unwrap().clone()),
                    std::cmp::Ordering::Greater => {
                        let (m, c) = b.next().unwrap();
                        out.push((*m, if subtract { -c } else { c.clone() }));
                    }
                    std::cmp::Ordering::Equal => {
                        let (m, c) = a.next().unwrap();
                        let (_, d) = b.next().unwrap();
                        let s = if subtract { c - d } else { c + d };
                        if !s.is_zero() {
                            out.push((*m, s));
                        }
                    }
                },
            }
        }
        Self::from_sorted(&self.vars, order, out)
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars, self.order);
        }
        Self {
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.vars, self.order);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse by Newton iteration `b ← b + b(1 − a·b)`,
    /// doubling the certified precision at every step.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let mut b = Self::constant(&self.vars, c0.inv()?, 0);
        let mut prec = 0;
        while prec < self.order {
            prec = (2 * prec + 1).min(self.order);
            let a = self.truncate(prec);
            let b_ext = b.extend_exact(prec);
            let residual = &Self::one(&self.vars, prec) - &(&a * &b_ext);
            b = &b_ext + &(&b_ext * &residual);
        }
        Ok(b.extend_exact(self.order))
    }

    /// Formal partial derivative; the certified order drops by one.
    pub fn diff(&self, var: &str) -> Result<Self> {
        let v = self.vars.require(var)?;
        self.diff_index(v)
    }

    pub fn diff_index(&self, v: usize) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::OrderExhausted);
        }
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = m.exponent(v);
                m.dec(v).map(|d| (d, c * &GaussianRational::from_integer(e as i64)))
            })
            .filter(|(d, _)| d.total() < self.order)
            .collect();
        terms.sort_unstable_by_key(|a| a.0);
        Ok(Self::from_sorted(&self.vars, self.order - 1, terms))
    }

    /// Mixed partial derivative, one variable index per differentiation.
    pub fn diff_many(&self, vars: &[usize]) -> Result<Self> {
        let mut s = self.clone();
        for &v in vars {
            s = s.diff_index(v)?;
        }
        Ok(s)
    }

    /// Complex-conjugates every coefficient.
    pub fn conj_coeffs(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    /// Re-labels the variables positionally (same count).
    pub fn relabel(&self, vars: &Vars) -> Result<Self> {
        if vars.len() != self.vars.len() {
            return Err(Error::VariableMismatch {
                left: self.vars.names().to_vec(),
                right: vars.names().to_vec(),
            });
        }
        Ok(Self {
            vars: vars.clone(),
            order: self.order,
            terms: self.terms.clone(),
        })
    }

    /// Moves the series into `target`, whose names must include every
    /// variable of `self` that actually occurs.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index(n)).collect();
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut md = Multidegree::ZERO;
            for (v, tgt) in map.iter().enumerate() {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                let t = tgt.ok_or_else(|| Error::UnknownVariable(self.vars.name(v).to_string()))?;
                md = md.add(&Multidegree::unit(t, e));
            }
            out.push((md, c.clone()));
        }
        Ok(Self::from_terms(target, self.order, out))
    }

    /// Substitutes series for variables. Every substituted series must live
    /// over one common variable list (the result's), and variables of `self`
    /// that are not substituted are carried over by name.
    ///
    /// Substituted series must have zero constant term: a constant shift of a
    /// truncated series would mix unknown high-degree coefficients into the
    /// low-degree ones. Use [`TruncatedSeries::compose_exact`] for polynomials.
    pub fn compose(&self, subs: &[(&str, &TruncatedSeries)]) -> Result<Self> {
        self.compose_impl(subs, false)
    }

    /// Like [`TruncatedSeries::compose`], but treats `self` as an exact
    /// polynomial so constant shifts are allowed.
    pub fn compose_exact(&self, subs: &[(&str, &TruncatedSeries)]) -> Result<Self> {
        self.compose_impl(subs, true)
    }

    fn compose_impl(&self, subs: &[(&str, &TruncatedSeries)], allow_const: bool) -> Result<Self> {
        let Some((_, first)) = subs.first() else {
            return Ok(self.clone());
        };
        let target = first.vars.clone();
        let mut order = self.order;
        for (name, s) in subs {
            if s.vars != target {
                return Err(Error::VariableMismatch {
                    left: target.names().to_vec(),
                    right: s.vars.names().to_vec(),
                });
            }
            if !allow_const && !s.constant_term().is_zero() {
                return Err(Error::ConstantShift(name.to_string()));
            }
            self.vars.require(name)?;
            order = order.min(s.order);
        }
        let shifted = subs.iter().any(|(_, s)| !s.constant_term().is_zero());

        // Each variable of self is either substituted (index into subs) or
        // passed through to a target variable.
        enum Slot {
            Sub(usize),
            Pass(usize),
        }
        let mut slots = Vec::with_capacity(self.nvars());
        for name in self.vars.names() {
            if let Some(j) = subs.iter().position(|(n, _)| n == name) {
                slots.push(Slot::Sub(j));
            } else {
                slots.push(Slot::Pass(usize::MAX));
            }
        }
        for (v, slot) in slots.iter_mut().enumerate() {
            if let Slot::Pass(t) = slot {
                let used = self.terms.iter().any(|(m, _)| m.exponent(v) > 0);
                *t = match target.index(self.vars.name(v)) {
                    Some(i) => i,
                    None if !used => usize::MAX,
                    None => return Err(Error::UnknownVariable(self.vars.name(v).to_string())),
                };
            }
        }

        // Group terms by the exponents of substituted variables.
        let mut groups: FxHashMap<Multidegree, Vec<Term>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut key = Multidegree::ZERO;
            let mut pass = Multidegree::ZERO;
            for (v, slot) in slots.iter().enumerate() {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                match *slot {
                    Slot::Sub(j) => key = key.add(&Multidegree::unit(j, e)),
                    Slot::Pass(t) => pass = pass.add(&Multidegree::unit(t, e)),
                }
            }
            if !shifted && key.total() + pass.total() > order {
                continue;
            }
            groups.entry(key).or_default().push((pass, c.clone()));
        }

        let sub_series: Vec<TruncatedSeries> = subs.iter().map(|(_, s)| s.truncate(order)).collect();
        let mut memo: FxHashMap<Multidegree, TruncatedSeries> = FxHashMap::default();
        let mut keys: Vec<Multidegree> = groups.keys().copied().collect();
        keys.sort_unstable();
        let mut acc: FxHashMap<Multidegree, GaussianRational> = FxHashMap::default();
        for key in keys {
            let coeff = Self::from_terms(&target, order, groups.remove(&key).unwrap());
            let prod = power_product(&key, &sub_series, &target, order, &mut memo);
            let term = &coeff * &prod;
            for (m, c) in term.terms {
                *acc.entry(m).or_default() += &c;
            }
        }
        Ok(Self::from_map(&target, order, acc))
    }

    /// Exact evaluation at a point (one value per variable). Meaningful only
    /// for exact polynomials; callers enforce that.
    pub fn eval(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars());
        let max_deg = self.degree().unwrap_or(0) as usize;
        let powers: Vec<Vec<GaussianRational>> = point
            .iter()
            .map(|x| {
                let mut p = vec![GaussianRational::one()];
                for k in 1..=max_deg {
                    let next = &p[k - 1] * x;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, pw) in powers.iter().enumerate() {
                let e = m.exponent(v) as usize;
                if e > 0 {
                    t = &t * &pw[e];
                }
            }
            acc += &t;
        }
        acc
    }

    /// Floating-point evaluation (advisory use only).
    pub fn eval_f64(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_f64();
            for (v, x) in point.iter().enumerate() {
                let e = m.exponent(v);
                if e > 0 {
                    t *= x.powu(e);
                }
            }
            acc += t;
        }
        acc
    }
}

fn power_product(
    key: &Multidegree,
    subs: &[TruncatedSeries],
    target: &Vars,
    order: u32,
    memo: &mut FxHashMap<Multidegree, TruncatedSeries>,
) -> TruncatedSeries {
    if key.total() == 0 {
        return TruncatedSeries::one(target, order);
    }
    if let Some(p) = memo.get(key) {
        return p.clone();
    }
    let j = (0..subs.len()).find(|&j| key.exponent(j) > 0).unwrap();
    let rest = key.dec(j).unwrap();
    let prev = power_product(&rest, subs, target, order, memo);
    let p = &prev * &subs[j];
    memo.insert(*key, p.clone());
    p
}

// Operator forms panic on variable mismatch; the `try_*` methods return errors.
impl<'a> std::ops::Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_add(rhs).expect("series variable mismatch")
    }
}

impl<'a> std::ops::Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_sub(rhs).expect("series variable mismatch")
    }
}

impl<'a> std::ops::Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_mul(rhs).expect("series variable mismatch")
    }
}

impl std::ops::Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::neg(self)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = (0..self.nvars())
                .filter(|&v| m.exponent(v) > 0)
                .map(|v| match m.exponent(v) {
                    1 => self.vars.name(v).to_string(),
                    e => format!("{}^{}", self.vars.name(v), e),
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{c}*{}", mono.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({})", self.order + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vars {
        Vars::new(["x", "y"])
    }

    fn x(order: u32) -> TruncatedSeries {
        TruncatedSeries::var(&xy(), "x", order).unwrap()
    }

    fn y(order: u32) -> TruncatedSeries {
        TruncatedSeries::var(&xy(), "y", order).unwrap()
    }

    fn c(k: i64, order: u32) -> TruncatedSeries {
        TruncatedSeries::constant(&xy(), k.into(), order)
    }

    #[test]
    fn add_examples() {
        let one_plus_x = &c(1, 6) + &x(6);
        assert_eq!(&one_plus_x + &x(6), &c(1, 6) + &x(6).scale(&2.into()));
        assert_eq!(&one_plus_x + &TruncatedSeries::zero(&xy(), 6), one_plus_x);
        let cancel = &x(6) - &x(6);
        assert!(cancel.is_zero());
        assert_eq!(cancel.len(), 0);
    }

    #[test]
    fn add_takes_min_order() {
        assert_eq!((&x(3) + &y(7)).order(), 3);
    }

    #[test]
    fn mismatched_vars_error() {
        let other = TruncatedSeries::var(&Vars::new(["x", "z"]), "x", 4).unwrap();
        assert!(matches!(x(4).try_add(&other), Err(Error::VariableMismatch { .. })));
        assert!(matches!(x(4).try_mul(&other), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn mul_examples() {
        let p = &(&c(1, 6) + &x(6)) * &(&c(1, 6) - &x(6));
        assert_eq!(p, &c(1, 6) - &x(6).pow(2));
        let a = &c(3, 6) + &(&x(6) * &y(6));
        assert_eq!(&a * &c(1, 6), a);
        // x^N · x vanishes at order N.
        assert!((&x(5).pow(5) * &x(5)).is_zero());
    }

    #[test]
    fn geometric_series() {
        let inv = (&c(1, 6) - &x(6)).invert().unwrap();
        let expected = TruncatedSeries::from_terms(
            &xy(),
            6,
            (0..=6).map(|k| (Multidegree::unit(0, k), GaussianRational::one())),
        );
        assert_eq!(inv, expected);
    }

    #[test]
    fn invert_constant_and_zero() {
        let k = TruncatedSeries::constant(&xy(), GaussianRational::from_parts((0, 1), (2, 1)), 4);
        assert_eq!(
            k.invert().unwrap().constant_term(),
            GaussianRational::from_parts((0, 1), (-1, 2))
        );
        assert_eq!(x(4).invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn double_inverse() {
        // a = 1 + x + 3y^2
        let a = &(&c(1, 8) + &x(8)) + &y(8).pow(2).scale(&3.into());
        assert_eq!(a.invert().unwrap().invert().unwrap(), a);
        assert_eq!(&a * &a.invert().unwrap(), c(1, 8));
    }

    #[test]
    fn diff_examples() {
        let x2y = &x(5).pow(2) * &y(5);
        assert_eq!(x2y.diff("x").unwrap(), (&x(5) * &y(5)).scale(&2.into()).truncate(4));
        assert!(c(7, 5).diff("x").unwrap().is_zero());
        assert_eq!(x2y.diff("x").unwrap().order(), 4);
        assert_eq!(x2y.diff("t"), Err(Error::UnknownVariable("t".into())));
        assert_eq!(c(1, 0).diff("x"), Err(Error::OrderExhausted));
    }

    #[test]
    fn compose_square() {
        let t_vars = Vars::new(["t"]);
        let t = TruncatedSeries::var(&t_vars, "t", 6).unwrap();
        let sub = &t + &t.pow(2);
        let res = x(6).pow(2).compose(&[("x", &sub)]).unwrap();
        let expected = &(&t.pow(2) + &t.pow(3).scale(&2.into())) + &t.pow(4);
        assert_eq!(res, expected);
    }

    #[test]
    fn compose_identity() {
        let a = &(&c(2, 5) + &x(5).pow(3)) + &(&x(5) * &y(5));
        assert_eq!(a.compose(&[("x", &x(5)), ("y", &y(5))]).unwrap(), a);
        assert_eq!(a.compose(&[("x", &x(5))]).unwrap(), a);
    }

    #[test]
    fn compose_rejects_constant_shift() {
        let shift = &x(4) + &c(1, 4);
        assert_eq!(
            x(4).pow(2).compose(&[("x", &shift)]),
            Err(Error::ConstantShift("x".into()))
        );
        // Exact polynomial shift: (x+1)^2.
        let r = x(4).pow(2).compose_exact(&[("x", &shift)]).unwrap();
        assert_eq!(r, &(&x(4).pow(2) + &x(4).scale(&2.into())) + &c(1, 4));
    }

    #[test]
    fn eval_polynomial() {
        let a = &(&x(4) * &y(4)) + &c(3, 4);
        let v = a.eval(&[GaussianRational::i(), GaussianRational::i()]);
        assert_eq!(v, GaussianRational::from_integer(2));
    }

    #[test]
    fn embed_into_superset() {
        let big = Vars::new(["a", "y", "x"]);
        let e = (&x(3) * &y(3)).embed(&big).unwrap();
        assert_eq!(e.coeff_of(&[0, 1, 1]), GaussianRational::one());
        assert!(x(3).embed(&Vars::new(["y"])).is_err());
    }

    #[test]
    fn display_is_readable() {
        let a = &x(3).scale(&GaussianRational::i()) + &c(1, 3);
        assert_eq!(a.to_string(), "1 + i*x + O(4)");
    }
}
