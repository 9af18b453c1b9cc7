//! Modified Levi determinants.
//!
//! `Δ^μ_{[0_{1+ℓ}]}` is `Δ` with column `μ` replaced by the unit column
//! having its 1 in row `1+ℓ`; `Δ^τ_{[t̄^μ t̄^ν]}` is `Δ` with column `τ`
//! replaced by `∂²/∂t̄_μ∂t̄_ν` of the row generators `(Θ, Θ_{z₁}, …, Θ_{z_n})`.
//! Indices here are zero-based: rows `0..=n`, columns `0..=n` with column
//! `n` standing for `ω`.

use crate::error::{Error, Result};
use crate::hypersurface::{column_vars, row_generators, ComplexGraph};
use crate::series::linalg::MinorCache;
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Replacement {
    /// Unit column with its 1 in the given row.
    UnitColumn(usize),
    /// Second derivative of the row generators in the two given column variables.
    SecondDerivativeColumn(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MinorSpec {
    pub replaced_column: usize,
    pub replacement: Replacement,
}

impl MinorSpec {
    pub fn unit(column: usize, l: usize) -> Self {
        Self {
            replaced_column: column,
            replacement: Replacement::UnitColumn(1 + l),
        }
    }

    pub fn second(column: usize, mu: usize, nu: usize) -> Self {
        Self {
            replaced_column: column,
            replacement: Replacement::SecondDerivativeColumn(mu, nu),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let ok = self.replaced_column <= n
            && match self.replacement {
                Replacement::UnitColumn(r) => r <= n,
                Replacement::SecondDerivativeColumn(a, b) => a <= n && b <= n,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension(format!("minor {self:?} out of range for n = {n}")))
        }
    }
}

/// Levi matrix of a graph with all cofactors, evaluated once and shared.
pub struct LeviMinors {
    n: usize,
    generators: Vec<TruncatedSeries>,
    columns: Vec<usize>,
    matrix: Vec<Vec<TruncatedSeries>>,
    det: TruncatedSeries,
    cofactors: Vec<Vec<TruncatedSeries>>,
}

impl LeviMinors {
    pub fn new(g: &ComplexGraph) -> Result<Self> {
        let generators = row_generators(g)?;
        let columns = column_vars(g);
        let matrix: Vec<Vec<TruncatedSeries>> = generators
            .iter()
            .map(|r| columns.iter().map(|&c| r.diff_index(c)).collect())
            .collect::<Result<_>>()?;
        let mut cache = MinorCache::new(&matrix);
        let det = cache.det();
        let size = matrix.len();
        let cofactors = (0..size)
            .map(|r| (0..size).map(|c| cache.cofactor(r, c)).collect())
            .collect();
        Ok(Self {
            n: g.n(),
            generators,
            columns,
            matrix,
            det,
            cofactors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn det(&self) -> &TruncatedSeries {
        &self.det
    }

    pub fn matrix(&self) -> &[Vec<TruncatedSeries>] {
        &self.matrix
    }

    /// Variable index of column `c`.
    pub fn column_var(&self, c: usize) -> usize {
        self.columns[c]
    }

    pub fn cofactor(&self, r: usize, c: usize) -> &TruncatedSeries {
        &self.cofactors[r][c]
    }

    /// `Δ^μ_{[0_{1+ℓ}]}`, by expansion along the replaced column.
    pub fn unit_minor(&self, mu: usize, l: usize) -> &TruncatedSeries {
        &self.cofactors[1 + l][mu]
    }

    /// `Δ^τ_{[t̄^μ t̄^ν]}`, by expansion along the replaced column.
    pub fn second_minor(&self, tau: usize, mu: usize, nu: usize) -> Result<TruncatedSeries> {
        let vars = [self.columns[mu], self.columns[nu]];
        let mut acc: Option<TruncatedSeries> = None;
        for (r, g) in self.generators.iter().enumerate() {
            let t = &g.diff_many(&vars)? * &self.cofactors[r][tau];
            acc = Some(match acc {
                None => t,
                Some(a) => &a + &t,
            });
        }
        Ok(acc.expect("at least one row"))
    }

    /// Any minor by literally building the modified matrix and taking its
    /// determinant. Slow; kept as an independent route.
    pub fn minor_by_replacement(&self, spec: &MinorSpec) -> Result<TruncatedSeries> {
        spec.validate(self.n)?;
        let mut m = self.matrix.clone();
        let sample = &self.matrix[0][0];
        for (r, row) in m.iter_mut().enumerate() {
            row[spec.replaced_column] = match spec.replacement {
                Replacement::UnitColumn(one_row) => {
                    if r == one_row {
                        TruncatedSeries::one(sample.vars(), sample.order())
                    } else {
                        TruncatedSeries::zero(sample.vars(), sample.order())
                    }
                }
                Replacement::SecondDerivativeColumn(a, b) => {
                    self.generators[r].diff_many(&[self.columns[a], self.columns[b]])?
                }
            };
        }
        Ok(MinorCache::new(&m).det())
    }

    pub fn minor(&self, spec: &MinorSpec) -> Result<TruncatedSeries> {
        spec.validate(self.n)?;
        match spec.replacement {
            Replacement::UnitColumn(r) => Ok(self.cofactors[r][spec.replaced_column].clone()),
            Replacement::SecondDerivativeColumn(a, b) => self.second_minor(spec.replaced_column, a, b),
        }
    }
}

/// The Δ-cleared second jet derivatives
/// `X^{k₁k₂}_{ℓ₁ℓ₂} = Σ_{μν} Δ^μ_{[0_{1+ℓ₁}]} Δ^ν_{[0_{1+ℓ₂}]} {Δ·Θ_{z_{k₁}z_{k₂}t̄_μt̄_ν} − Σ_τ Δ^τ_{[t̄^μt̄^ν]}·Θ_{z_{k₁}z_{k₂}t̄_τ}}`,
/// indexed `[k1][k2][l1][l2]` (zero-based, symmetric in each pair).
pub struct ClearedSecondJets {
    n: usize,
    values: Vec<TruncatedSeries>,
}

impl ClearedSecondJets {
    pub fn new(g: &ComplexGraph, minors: &LeviMinors) -> Result<Self> {
        let n = g.n();
        let size = n + 1;
        let theta = g.theta();
        // Δ^τ_{[t̄^μ t̄^ν]} for μ ≤ ν.
        let mut second = vec![vec![Vec::new(); size]; size];
        for mu in 0..size {
            for nu in mu..size {
                for tau in 0..size {
                    second[mu][nu].push(minors.second_minor(tau, mu, nu)?);
                }
            }
        }
        let mut values = vec![None; n * n * n * n];
        for k1 in 0..n {
            for k2 in k1..n {
                let zz = theta.diff_many(&[g.z(k1), g.z(k2)])?;
                let third: Vec<TruncatedSeries> = (0..size)
                    .map(|t| zz.diff_index(minors.column_var(t)))
                    .collect::<Result<_>>()?;
                // Braces B_{μν}, symmetric.
                let mut brace = vec![vec![None; size]; size];
                for mu in 0..size {
                    for nu in mu..size {
                        let fourth = third[mu].diff_index(minors.column_var(nu))?;
                        let mut b = minors.det() * &fourth;
                        for tau in 0..size {
                            b = &b - &(&second[mu][nu][tau] * &third[tau]);
                        }
                        brace[nu][mu] = Some(b.clone());
                        brace[mu][nu] = Some(b);
                    }
                }
                let brace: Vec<Vec<TruncatedSeries>> = brace
                    .into_iter()
                    .map(|r| r.into_iter().map(Option::unwrap).collect())
                    .collect();
                // Y_{ℓ₁ ν} = Σ_μ Δ^μ_{ℓ₁} B_{μν}
                let y: Vec<Vec<TruncatedSeries>> = (0..n)
                    .map(|l1| {
                        (0..size)
                            .map(|nu| sum((0..size).map(|mu| minors.unit_minor(mu, l1) * &brace[mu][nu])))
                            .collect()
                    })
                    .collect();
                for l1 in 0..n {
                    for l2 in l1..n {
                        let x = sum((0..size).map(|nu| minors.unit_minor(nu, l2) * &y[l1][nu]));
                        for (a, b) in [(k1, k2), (k2, k1)] {
                            for (c, d) in [(l1, l2), (l2, l1)] {
                                values[((a * n + b) * n + c) * n + d] = Some(x.clone());
                            }
                        }
                    }
                }
            }
        }
        Ok(Self {
            n,
            values: values.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn get(&self, k1: usize, k2: usize, l1: usize, l2: usize) -> &TruncatedSeries {
        let n = self.n;
        &self.values[((k1 * n + k2) * n + l1) * n + l2]
    }
}

fn sum<I: Iterator<Item = TruncatedSeries>>(mut it: I) -> TruncatedSeries {
    let first = it.next().expect("nonempty sum");
    it.fold(first, |acc, t| &acc + &t)
}
