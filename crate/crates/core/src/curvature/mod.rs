//! Sphericity obstructions: the ℂ² expression `𝒟(𝒟(AJ⁴(Θ)))`, the flatness
//! condition for the associated second-order system, the Θ-level family in
//! ℂⁿ⁺¹, verdicts at points, and transport of cleared numerators.

mod c2;
mod cn;
mod hachtroudi;
mod minors;
mod verdict;

use std::fmt;

use crate::series::{GaussianRational, Multidegree, TruncatedSeries, Vars};

pub use c2::{aj4, aj4_numerator, d_apply, numerator_c2, sphericity_obstruction_c2};
pub use cn::{cleared_theta_family, theta_obstruction_cn};
pub use hachtroudi::{hachtroudi_components, hachtroudi_flatness, independent_labels, trace_free_combination};
pub use minors::{ClearedSecondJets, LeviMinors, MinorSpec, Replacement};
pub use verdict::{
    cleared_degree_bound, cleared_numerators, full_cleared_numerators, numerator_transport, propagate_check,
    pseudospherical_verdict, PropagationReport, TransportCheck,
};

/// Component index `(k₁, k₂, ℓ₁, ℓ₂)`, stored one-based as displayed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentLabel {
    pub k1: usize,
    pub k2: usize,
    pub l1: usize,
    pub l2: usize,
}

impl ComponentLabel {
    /// From zero-based indices.
    pub fn new(k1: usize, k2: usize, l1: usize, l2: usize) -> Self {
        Self {
            k1: k1 + 1,
            k2: k2 + 1,
            l1: l1 + 1,
            l2: l2 + 1,
        }
    }

    pub fn zero_based(&self) -> (usize, usize, usize, usize) {
        (self.k1 - 1, self.k2 - 1, self.l1 - 1, self.l2 - 1)
    }
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.k1, self.k2, self.l1, self.l2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every component vanishes through the given total degree.
    VanishesToOrder(u32),
    /// Smallest nonzero coefficient, graded-lexicographically, over all components.
    NonzeroAt {
        component: ComponentLabel,
        multidegree: Multidegree,
        coefficient: GaussianRational,
    },
    NotApplicableLeviDegenerate,
}

impl Verdict {
    pub fn vanishes(&self) -> bool {
        matches!(self, Verdict::VanishesToOrder(_))
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub n: usize,
    /// Variables of the component series.
    pub vars: Option<Vars>,
    pub components: Vec<(ComponentLabel, TruncatedSeries)>,
    pub certified_order: u32,
    pub levi_nondegenerate: bool,
    pub signature: Option<(usize, usize)>,
    pub verdict: Verdict,
    /// Set only for exact inputs whose cleared numerators were computed past
    /// their degree bound and found identically zero.
    pub certified_identical: bool,
    pub notes: Vec<String>,
}

impl ObstructionReport {
    pub(crate) fn from_components(
        n: usize,
        components: Vec<(ComponentLabel, TruncatedSeries)>,
        certified_order: u32,
        levi_nondegenerate: bool,
        certified_identical: bool,
    ) -> Self {
        let components: Vec<(ComponentLabel, TruncatedSeries)> = components
            .into_iter()
            .map(|(l, s)| (l, s.truncate(certified_order)))
            .collect();
        let mut best: Option<(ComponentLabel, Multidegree, GaussianRational)> = None;
        for (label, s) in &components {
            if let Some((m, c)) = s.leading_low_term() {
                if best.as_ref().is_none_or(|(_, bm, _)| m < bm) {
                    best = Some((*label, *m, c.clone()));
                }
            }
        }
        let verdict = match best {
            None => Verdict::VanishesToOrder(certified_order),
            Some((component, multidegree, coefficient)) => Verdict::NonzeroAt {
                component,
                multidegree,
                coefficient,
            },
        };
        let vars = components.first().map(|(_, s)| s.vars().clone());
        Self {
            n,
            vars,
            components,
            certified_order,
            levi_nondegenerate,
            signature: None,
            certified_identical: certified_identical && verdict.vanishes(),
            verdict,
            notes: Vec::new(),
        }
    }

    pub(crate) fn not_applicable(n: usize) -> Self {
        Self {
            n,
            vars: None,
            components: Vec::new(),
            certified_order: 0,
            levi_nondegenerate: false,
            signature: None,
            verdict: Verdict::NotApplicableLeviDegenerate,
            certified_identical: false,
            notes: vec!["Levi determinant vanishes at the point".to_string()],
        }
    }
}
