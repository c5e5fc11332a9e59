//! Stability decisions at the level of dimension vectors.
//!
//! Every quantifier over subdimension vectors runs over the box
//! `0 <= e <= d` in lexicographic order, so witnesses are deterministic.
//! The slope condition `mu(e) >= mu(d - e)` is evaluated as `theta(e) >= 0`,
//! which is equivalent whenever `theta(d) = 0` and both slopes are defined.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::vector::{DimensionVector, StabilityParameter};

/// Partition of `{e : 0 <= e <= d}` by the sign of `theta(e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BSets {
    pub plus: Vec<DimensionVector>,
    pub minus: Vec<DimensionVector>,
    pub zero: Vec<DimensionVector>,
}

impl BSets {
    pub fn total(&self) -> usize {
        self.plus.len() + self.minus.len() + self.zero.len()
    }
}

pub fn b_sets(q: &Quiver, d: &DimensionVector, theta: &StabilityParameter) -> Result<BSets> {
    theta.check_against(q, d)?;
    let mut sets = BSets {
        plus: Vec::new(),
        minus: Vec::new(),
        zero: Vec::new(),
    };
    for e in d.subvectors() {
        match theta.pairing(&e).signum() {
            1 => sets.plus.push(e),
            -1 => sets.minus.push(e),
            _ => sets.zero.push(e),
        }
    }
    Ok(sets)
}

/// Proper nonzero subdimension vectors `0 < e < d`, lexicographically.
pub(crate) fn proper_subvectors(d: &DimensionVector) -> impl Iterator<Item = DimensionVector> + '_ {
    d.subvectors().filter(move |e| !e.is_zero() && e != d)
}

/// `mu(e) = theta(e) / |e|`; `None` for `e = 0`.
pub fn slope(theta: &StabilityParameter, e: &DimensionVector) -> Option<Ratio<i64>> {
    match e.total() {
        0 => None,
        total => Some(Ratio::new(theta.pairing(e), total)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoprimeCheck {
    pub coprime: bool,
    /// Lexicographically first `0 < e < d` with `theta(e) = 0`.
    pub witness: Option<DimensionVector>,
}

/// `theta(e) != 0` for every `0 < e < d`.
pub fn is_theta_coprime(
    q: &Quiver,
    d: &DimensionVector,
    theta: &StabilityParameter,
) -> Result<CoprimeCheck> {
    theta.check_against(q, d)?;
    let witness = proper_subvectors(d).find(|e| theta.pairing(e) == 0);
    Ok(CoprimeCheck {
        coprime: witness.is_none(),
        witness,
    })
}

/// A subdimension vector violating strong ample stability.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongViolation {
    pub subdimension: DimensionVector,
    /// `<e, d - e>`, which is at least -1 for a violation.
    pub euler_form: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongAmpleCheck {
    pub holds: bool,
    pub violations: Vec<StrongViolation>,
}

/// `<e, d - e> <= -2` for every `0 < e < d` with `mu(e) >= mu(d - e)`.
pub fn is_strongly_amply_stable(
    q: &Quiver,
    d: &DimensionVector,
    theta: &StabilityParameter,
) -> Result<StrongAmpleCheck> {
    theta.check_against(q, d)?;
    q.topological_order()?;
    let mut violations = Vec::new();
    for e in proper_subvectors(d).filter(|e| theta.pairing(e) >= 0) {
        let rest = e.complement_in(d).expect("e <= d");
        let form = q.euler_form(&e, &rest)?;
        if form > -2 {
            violations.push(StrongViolation {
                subdimension: e,
                euler_form: form,
            });
        }
    }
    Ok(StrongAmpleCheck {
        holds: violations.is_empty(),
        violations,
    })
}

/// Three-valued answer for properties that are only partially decidable here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ternary {
    Yes,
    Unknown,
    No,
}

impl fmt::Display for Ternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ternary::Yes => "yes",
            Ternary::Unknown => "unknown",
            Ternary::No => "no",
        })
    }
}

/// The individual standing hypotheses on `(Q, d, theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assumption {
    Acyclic,
    PairingZero,
    Indivisible,
    Coprime,
    StronglyAmplyStable,
    AmplyStable,
}

impl Assumption {
    pub fn name(self) -> &'static str {
        match self {
            Assumption::Acyclic => "acyclic",
            Assumption::PairingZero => "pairing_zero",
            Assumption::Indivisible => "indivisible",
            Assumption::Coprime => "coprime",
            Assumption::StronglyAmplyStable => "strongly_amply_stable",
            Assumption::AmplyStable => "amply_stable",
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub check: Assumption,
    pub vector: DimensionVector,
    /// The offending value: `<e, d - e>` for strong ample stability, the gcd
    /// for divisibility, `theta(e)` for coprimality.
    pub value: i64,
}

/// Aggregated verdict on the standing hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssumptionsReport {
    pub acyclic: bool,
    /// Arrow indices of an oriented cycle when `acyclic` is false.
    pub cycle: Option<Vec<usize>>,
    pub pairing_zero: bool,
    pub pairing: i64,
    pub indivisible: bool,
    /// Sufficient for semistable = stable.
    pub coprime: bool,
    pub strongly_amply_stable: bool,
    pub amply_stable: Ternary,
    pub failing_witnesses: Vec<Witness>,
}

impl AssumptionsReport {
    /// Whether every checkable hypothesis holds, with ample stability
    /// certified through the strong criterion.
    pub fn all_hold(&self) -> bool {
        self.acyclic
            && self.pairing_zero
            && self.indivisible
            && self.coprime
            && self.strongly_amply_stable
            && self.amply_stable == Ternary::Yes
    }

    pub fn holds(&self, assumption: Assumption) -> bool {
        match assumption {
            Assumption::Acyclic => self.acyclic,
            Assumption::PairingZero => self.pairing_zero,
            Assumption::Indivisible => self.indivisible,
            Assumption::Coprime => self.coprime,
            Assumption::StronglyAmplyStable => self.strongly_amply_stable,
            Assumption::AmplyStable => self.amply_stable == Ternary::Yes,
        }
    }

    pub fn witness_for(&self, assumption: Assumption) -> Option<&Witness> {
        self.failing_witnesses.iter().find(|w| w.check == assumption)
    }

    /// Fails with `AssumptionViolated` naming the first listed assumption
    /// that does not hold.
    pub fn require(&self, assumptions: &[Assumption]) -> Result<()> {
        for &assumption in assumptions {
            if !self.holds(assumption) {
                let witness = match assumption {
                    Assumption::Acyclic => self
                        .cycle
                        .as_ref()
                        .map(|c| c.iter().map(|&a| a as i64).collect()),
                    _ => self
                        .witness_for(assumption)
                        .map(|w| w.vector.values().to_vec()),
                };
                return Err(Error::AssumptionViolated {
                    assumption: assumption.name().to_owned(),
                    witness,
                });
            }
        }
        Ok(())
    }

    pub fn failed(&self) -> Vec<Assumption> {
        [
            Assumption::Acyclic,
            Assumption::PairingZero,
            Assumption::Indivisible,
            Assumption::Coprime,
            Assumption::StronglyAmplyStable,
        ]
        .into_iter()
        .filter(|&a| !self.holds(a))
        .collect()
    }
}

/// Checks acyclicity, indivisibility, coprimality and strong ample stability.
///
/// Ample stability is reported `Yes` exactly when the strong criterion holds
/// and `Unknown` otherwise.
pub fn assumptions_report(
    q: &Quiver,
    d: &DimensionVector,
    theta: &StabilityParameter,
) -> Result<AssumptionsReport> {
    d.check_on(q)?;
    theta.check_on(q)?;
    let (acyclic, cycle) = match q.topological_order() {
        Ok(_) => (true, None),
        Err(Error::CyclicQuiver { cycle }) => (false, Some(cycle)),
        Err(other) => return Err(other),
    };
    let mut failing_witnesses = Vec::new();

    let gcd = d.gcd();
    let indivisible = gcd == 1;
    if !indivisible && gcd > 1 {
        let reduced = DimensionVector::new(d.values().iter().map(|v| v / gcd).collect())?;
        failing_witnesses.push(Witness {
            check: Assumption::Indivisible,
            vector: reduced,
            value: gcd,
        });
    }

    let pairing = theta.pairing(d);
    let pairing_zero = pairing == 0;

    let coprime = if pairing_zero {
        let check = is_theta_coprime(q, d, theta)?;
        if let Some(e) = check.witness {
            failing_witnesses.push(Witness {
                check: Assumption::Coprime,
                vector: e,
                value: 0,
            });
        }
        check.coprime
    } else {
        false
    };

    let strongly_amply_stable = if pairing_zero && acyclic {
        let check = is_strongly_amply_stable(q, d, theta)?;
        failing_witnesses.extend(check.violations.into_iter().map(|v| Witness {
            check: Assumption::StronglyAmplyStable,
            vector: v.subdimension,
            value: v.euler_form,
        }));
        check.holds
    } else {
        false
    };

    let amply_stable = if strongly_amply_stable {
        Ternary::Yes
    } else {
        Ternary::Unknown
    };

    Ok(AssumptionsReport {
        acyclic,
        cycle,
        pairing_zero,
        pairing,
        indivisible,
        coprime,
        strongly_amply_stable,
        amply_stable,
        failing_witnesses,
    })
}

/// `1 - <d, d>`, the expected dimension of the moduli space.
pub fn moduli_dimension(q: &Quiver, d: &DimensionVector) -> Result<i64> {
    Ok(1 - q.euler_form(d, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[i64]) -> DimensionVector {
        DimensionVector::new(v.to_vec()).unwrap()
    }

    fn theta(v: &[i64]) -> StabilityParameter {
        StabilityParameter::new(v.to_vec())
    }

    fn three_vertex() -> Quiver {
        Quiver::with_numbered_vertices(3, [(0, 1), (1, 2), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn b_sets_on_kronecker() {
        let sets = b_sets(&Quiver::kronecker(2), &dv(&[1, 1]), &theta(&[1, -1])).unwrap();
        assert_eq!(sets.plus, [dv(&[1, 0])]);
        assert_eq!(sets.minus, [dv(&[0, 1])]);
        assert_eq!(sets.zero, [dv(&[0, 0]), dv(&[1, 1])]);
    }

    #[test]
    fn b_sets_for_zero_parameter() {
        let d = dv(&[2, 1]);
        let sets = b_sets(&Quiver::kronecker(2), &d, &theta(&[0, 0])).unwrap();
        assert!(sets.plus.is_empty() && sets.minus.is_empty());
        assert_eq!(sets.zero.len(), 6);
    }

    #[test]
    fn b_sets_three_vertex_membership() {
        let sets = b_sets(&three_vertex(), &dv(&[1, 1, 1]), &theta(&[2, 1, -3])).unwrap();
        assert!(sets.plus.contains(&dv(&[1, 1, 0])));
    }

    #[test]
    fn b_sets_require_zero_pairing() {
        assert_eq!(
            b_sets(&Quiver::kronecker(2), &dv(&[1, 1]), &theta(&[1, 0])),
            Err(Error::PairingNonzero { pairing: 1 })
        );
    }

    #[test]
    fn coprimality_examples() {
        let k = Quiver::kronecker(2);
        assert!(is_theta_coprime(&k, &dv(&[1, 1]), &theta(&[1, -1])).unwrap().coprime);
        let check = is_theta_coprime(&k, &dv(&[2, 2]), &theta(&[1, -1])).unwrap();
        assert!(!check.coprime);
        assert_eq!(check.witness, Some(dv(&[1, 1])));
        assert!(
            is_theta_coprime(&three_vertex(), &dv(&[1, 1, 1]), &theta(&[2, 1, -3]))
                .unwrap()
                .coprime
        );
    }

    #[test]
    fn strong_ample_stability_examples() {
        let q = three_vertex();
        let d = dv(&[1, 1, 1]);
        assert!(is_strongly_amply_stable(&q, &d, &theta(&[2, 1, -3])).unwrap().holds);

        let check = is_strongly_amply_stable(&q, &d, &theta(&[2, -1, -1])).unwrap();
        assert!(!check.holds);
        assert_eq!(
            check.violations,
            [StrongViolation {
                subdimension: dv(&[1, 0, 1]),
                euler_form: -1
            }]
        );

        assert!(
            is_strongly_amply_stable(&Quiver::kronecker(2), &dv(&[1, 1]), &theta(&[1, -1]))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn strong_ample_stability_needs_acyclic_quiver() {
        let q = Quiver::with_numbered_vertices(2, [(0, 1), (1, 0)]).unwrap();
        assert!(matches!(
            is_strongly_amply_stable(&q, &dv(&[1, 1]), &theta(&[1, -1])),
            Err(Error::CyclicQuiver { .. })
        ));
    }

    #[test]
    fn report_for_canonical_parameter() {
        let q = three_vertex();
        let d = dv(&[1, 1, 1]);
        let report = assumptions_report(&q, &d, &q.canonical_stability(&d).unwrap()).unwrap();
        assert!(report.all_hold());
        assert!(report.failing_witnesses.is_empty());
        assert_eq!(report.amply_stable, Ternary::Yes);
    }

    #[test]
    fn report_when_strong_criterion_fails() {
        let report = assumptions_report(&three_vertex(), &dv(&[1, 1, 1]), &theta(&[2, -1, -1])).unwrap();
        assert!(report.acyclic && report.indivisible && report.coprime);
        assert!(!report.strongly_amply_stable);
        assert_eq!(report.amply_stable, Ternary::Unknown);
        assert_eq!(
            report.witness_for(Assumption::StronglyAmplyStable).unwrap().vector,
            dv(&[1, 0, 1])
        );
        assert_eq!(report.failed(), [Assumption::StronglyAmplyStable]);
        assert!(matches!(
            report.require(&[Assumption::Coprime, Assumption::StronglyAmplyStable]),
            Err(Error::AssumptionViolated { ref assumption, .. }) if assumption == "strongly_amply_stable"
        ));
    }

    #[test]
    fn report_on_loop_quiver() {
        let q = Quiver::with_numbered_vertices(1, [(0, 0)]).unwrap();
        let report = assumptions_report(&q, &dv(&[1]), &theta(&[0])).unwrap();
        assert!(!report.acyclic);
        assert_eq!(report.cycle, Some(vec![0]));
        assert!(!report.strongly_amply_stable);
    }

    #[test]
    fn report_flags_divisibility_with_witness() {
        let report = assumptions_report(&Quiver::kronecker(2), &dv(&[2, 2]), &theta(&[1, -1])).unwrap();
        assert!(!report.indivisible);
        assert_eq!(report.witness_for(Assumption::Indivisible).unwrap().vector, dv(&[1, 1]));
        assert!(!report.coprime);
    }

    #[test]
    fn slope_is_exact() {
        let t = theta(&[2, -1, -1]);
        assert_eq!(slope(&t, &dv(&[1, 1, 0])), Some(Ratio::new(1, 2)));
        assert_eq!(slope(&t, &dv(&[0, 0, 0])), None);
    }

    #[test]
    fn moduli_dimension_of_three_vertex_example() {
        assert_eq!(moduli_dimension(&three_vertex(), &dv(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(moduli_dimension(&Quiver::kronecker(2), &dv(&[1, 1])).unwrap(), 1);
    }
}
