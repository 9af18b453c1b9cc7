use std::cmp::Ordering;
use std::fmt;

use super::{MAX_ORDER, MAX_VARS};

/// Exponent vector packed one byte per variable into a `u128`.
///
/// Variable 0 occupies the most significant byte, so comparing packed words
/// is lexicographic comparison of exponent tuples. Together with the cached
/// total degree this gives graded-lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Multidegree {
    total: u32,
    packed: u128,
}

#[inline]
fn shift(var: usize) -> u32 {
    debug_assert!(var < MAX_VARS);
    8 * (MAX_VARS - 1 - var) as u32
}

impl Multidegree {
    pub const ZERO: Multidegree = Multidegree { total: 0, packed: 0 };

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut md = Self::ZERO;
        for (v, &e) in exps.iter().enumerate() {
            assert!(e <= MAX_ORDER, "exponent {e} too large");
            md.packed |= (e as u128) << shift(v);
            md.total += e;
        }
        assert!(md.total <= MAX_ORDER, "total degree too large");
        md
    }

    /// `x_var^exp`.
    pub fn unit(var: usize, exp: u32) -> Self {
        assert!(exp <= MAX_ORDER);
        Self {
            total: exp,
            packed: (exp as u128) << shift(var),
        }
    }

    #[inline]
    pub fn total(&self) -> u32 {
        self.total
    }

    #[inline]
    pub fn exponent(&self, var: usize) -> u32 {
        ((self.packed >> shift(var)) & 0xff) as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|v| self.exponent(v)).collect()
    }

    /// Sum of exponents. Caller guarantees the result stays within `MAX_ORDER`.
    #[inline]
    pub fn add(&self, other: &Self) -> Self {
        Self {
            total: self.total + other.total,
            packed: self.packed + other.packed,
        }
    }

    /// Lowers the exponent of `var` by one; `None` if it is already zero.
    #[inline]
    pub fn dec(&self, var: usize) -> Option<Self> {
        if self.exponent(var) == 0 {
            return None;
        }
        Some(Self {
            total: self.total - 1,
            packed: self.packed - (1u128 << shift(var)),
        })
    }

    pub fn with_exponent(&self, var: usize, exp: u32) -> Self {
        let old = self.exponent(var);
        let packed = (self.packed & !(0xffu128 << shift(var))) | ((exp as u128) << shift(var));
        Self {
            total: self.total - old + exp,
            packed,
        }
    }

    /// True when every exponent is at most the matching one in `other`.
    pub fn divides(&self, other: &Self, nvars: usize) -> bool {
        (0..nvars).all(|v| self.exponent(v) <= other.exponent(v))
    }
}

impl Ord for Multidegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total.cmp(&other.total).then(self.packed.cmp(&other.packed))
    }
}

impl PartialOrd for Multidegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut last = 0;
        for v in 0..MAX_VARS {
            if self.exponent(v) != 0 {
                last = v + 1;
            }
        }
        write!(f, "{:?}", self.exponents(last))
    }
}
