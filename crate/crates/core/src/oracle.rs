//! Brute-force stability oracle over small prime fields.
//!
//! Representations are enumerated point by point and every subrepresentation
//! is listed, so King (semi)stability is decided by definition.  Over a
//! finite field this is evidence for the statements it checks, not a proof:
//! semistability is insensitive to the field, and stability is only taken at
//! face value when the dimension vector is `theta`-coprime.

use std::collections::HashSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cohomology::RationalRepresentation;
use crate::error::{Error, Result};
use crate::field::{advance, enumerate_subspaces, FpMatrix, PrimeField, Subspace};
use crate::framing::{double_frame, minimal_framing_scale};
use crate::quiver::{Path, Quiver};
use crate::stability::is_theta_coprime;
use crate::vector::{DimensionVector, StabilityParameter};

/// Default cap on enumerated objects per verification.
pub const DEFAULT_BUDGET: u128 = 1_000_000;
/// Default seed for the sampling fallback.
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Default number of sampled points when exhaustive enumeration is too large.
pub const DEFAULT_SAMPLE_SIZE: u64 = 10_000;

/// A point of `Rep(Q, d)(F_p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteFieldRepresentation {
    pub field: PrimeField,
    pub dims: DimensionVector,
    pub arrow_matrices: Vec<FpMatrix>,
}

impl FiniteFieldRepresentation {
    pub fn new(
        q: &Quiver,
        field: PrimeField,
        dims: DimensionVector,
        arrow_matrices: Vec<FpMatrix>,
    ) -> Result<Self> {
        dims.check_on(q)?;
        if arrow_matrices.len() != q.arrow_count() {
            return Err(Error::QuiverMismatch(format!(
                "{} arrow matrices for {} arrows",
                arrow_matrices.len(),
                q.arrow_count()
            )));
        }
        for (a, (arrow, m)) in q.arrows().iter().zip(&arrow_matrices).enumerate() {
            let expected = (dims[arrow.target] as usize, dims[arrow.source] as usize);
            if m.shape() != expected {
                return Err(Error::QuiverMismatch(format!(
                    "arrow {a} has a {:?} matrix, expected {expected:?}",
                    m.shape()
                )));
            }
            if m.entries().iter().any(|&x| x >= field.order()) {
                return Err(Error::QuiverMismatch(format!(
                    "arrow {a} has entries outside 0..{}",
                    field.order()
                )));
            }
        }
        Ok(Self {
            field,
            dims,
            arrow_matrices,
        })
    }

    pub fn zero(q: &Quiver, field: PrimeField, dims: DimensionVector) -> Result<Self> {
        let matrices = q
            .arrows()
            .iter()
            .map(|a| FpMatrix::zeros(dims[a.target] as usize, dims[a.source] as usize))
            .collect();
        Self::new(q, field, dims, matrices)
    }

    /// Uniformly random arrow matrices.
    pub fn random<R: Rng + ?Sized>(
        q: &Quiver,
        field: PrimeField,
        dims: DimensionVector,
        rng: &mut R,
    ) -> Result<Self> {
        let matrices = q
            .arrows()
            .iter()
            .map(|a| {
                let (r, c) = (dims[a.target] as usize, dims[a.source] as usize);
                let data = (0..r * c).map(|_| rng.gen_range(0..field.order())).collect();
                FpMatrix::from_entries(r, c, data)
            })
            .collect();
        Self::new(q, field, dims, matrices)
    }

    /// `M_{a_l} ... M_{a_1}` for the path `a_1 ... a_l`.
    pub fn path_matrix(&self, path: &Path) -> FpMatrix {
        let start = self.dims[path.source] as usize;
        path.arrows.iter().fold(FpMatrix::identity(start), |acc, &a| {
            self.arrow_matrices[a].mul(&self.field, &acc)
        })
    }

    fn ambient(&self, v: usize) -> usize {
        self.dims[v] as usize
    }
}

/// A subrepresentation `(U_i)` together with its dimension vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubRepresentation {
    pub subspaces: Vec<Subspace>,
    pub dims: DimensionVector,
}

impl SubRepresentation {
    fn from_subspaces(subspaces: Vec<Subspace>) -> Self {
        let dims = DimensionVector::from_raw(subspaces.iter().map(|s| s.dim() as i64).collect());
        Self { subspaces, dims }
    }
}

fn is_closed(q: &Quiver, m: &FiniteFieldRepresentation, subspaces: &[&Subspace]) -> bool {
    q.arrows().iter().enumerate().all(|(k, a)| {
        let target = subspaces[a.target];
        subspaces[a.source]
            .basis()
            .iter()
            .all(|u| target.contains(&m.field, &m.arrow_matrices[k].apply(&m.field, u)))
    })
}

/// Number of subspace tuples the enumeration has to visit.
pub fn subspace_tuple_count(m: &FiniteFieldRepresentation) -> u128 {
    m.dims
        .values()
        .iter()
        .try_fold(1u128, |acc, &d| {
            crate::field::subspace_count(d as u32, m.field.order()).and_then(|c| acc.checked_mul(c))
        })
        .unwrap_or(u128::MAX)
}

/// Iterator over all subrepresentations, in lexicographic order of the
/// subspace tuple (first vertex slowest, subspaces in echelon order).
pub struct Subrepresentations<'a> {
    quiver: &'a Quiver,
    rep: &'a FiniteFieldRepresentation,
    candidates: Vec<Vec<Subspace>>,
    counter: Vec<usize>,
    exhausted: bool,
}

impl Iterator for Subrepresentations<'_> {
    type Item = SubRepresentation;

    fn next(&mut self) -> Option<SubRepresentation> {
        while !self.exhausted {
            let tuple: Vec<&Subspace> = self
                .counter
                .iter()
                .zip(&self.candidates)
                .map(|(&k, c)| &c[k])
                .collect();
            let closed = is_closed(self.quiver, self.rep, &tuple);
            let found = closed.then(|| {
                SubRepresentation::from_subspaces(tuple.into_iter().cloned().collect())
            });
            self.step();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

impl Subrepresentations<'_> {
    fn step(&mut self) {
        for k in (0..self.counter.len()).rev() {
            self.counter[k] += 1;
            if self.counter[k] < self.candidates[k].len() {
                return;
            }
            self.counter[k] = 0;
        }
        self.exhausted = true;
    }
}

/// Lists every `(U_i)` with `M_a(U_{s(a)}) ⊆ U_{t(a)}`, including `0` and `M`.
pub fn enumerate_subrepresentations<'a>(
    q: &'a Quiver,
    m: &'a FiniteFieldRepresentation,
    budget: u128,
) -> Result<Subrepresentations<'a>> {
    m.dims.check_on(q)?;
    let required = subspace_tuple_count(m);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let candidates: Vec<Vec<Subspace>> = (0..q.vertex_count())
        .map(|v| enumerate_subspaces(&m.field, m.ambient(v)))
        .collect();
    Ok(Subrepresentations {
        quiver: q,
        rep: m,
        counter: vec![0; candidates.len()],
        candidates,
        exhausted: false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub semistable: bool,
    /// Stability over `F_p`; see [`StabilityVerdict::stable_is_geometric`].
    pub stable: bool,
    /// First subrepresentation with `theta > 0`, or if there is none and the
    /// representation is not stable, the first proper nonzero one with
    /// `theta = 0`.
    pub destabilizing_subrep: Option<SubRepresentation>,
    /// Whether the dimension vector is `theta`-coprime, in which case
    /// semistable and stable agree over every field extension.
    pub stable_is_geometric: bool,
}

/// Decides King (semi)stability by listing all subrepresentations.
pub fn king_stability(
    q: &Quiver,
    m: &FiniteFieldRepresentation,
    theta: &StabilityParameter,
    budget: u128,
) -> Result<StabilityVerdict> {
    theta.check_against(q, &m.dims)?;
    let mut unstable_witness = None;
    let mut zero_witness = None;
    for sub in enumerate_subrepresentations(q, m, budget)? {
        let value = theta.pairing(&sub.dims);
        if value > 0 {
            unstable_witness = Some(sub);
            break;
        }
        if value == 0 && zero_witness.is_none() && !sub.dims.is_zero() && sub.dims != m.dims {
            zero_witness = Some(sub);
        }
    }
    let semistable = unstable_witness.is_none();
    let stable = semistable && zero_witness.is_none();
    let stable_is_geometric = is_theta_coprime(q, &m.dims, theta)?.coprime;
    Ok(StabilityVerdict {
        semistable,
        stable,
        destabilizing_subrep: unstable_witness.or(zero_witness),
        stable_is_geometric,
    })
}

/// The smallest subrepresentation containing `v` at vertex `at`.
pub fn cyclic_subrepresentation(
    q: &Quiver,
    m: &FiniteFieldRepresentation,
    at: usize,
    v: &[u64],
) -> SubRepresentation {
    let field = &m.field;
    let mut spaces: Vec<Subspace> = (0..q.vertex_count())
        .map(|w| Subspace::zero(m.ambient(w)))
        .collect();
    spaces[at] = Subspace::span(field, m.ambient(at), &[v.to_vec()]);
    loop {
        let mut changed = false;
        for (k, a) in q.arrows().iter().enumerate() {
            let images: Vec<Vec<u64>> = spaces[a.source]
                .basis()
                .iter()
                .map(|u| m.arrow_matrices[k].apply(field, u))
                .collect();
            let grown = spaces[a.target].sum(field, &Subspace::span(field, m.ambient(a.target), &images));
            if grown != spaces[a.target] {
                spaces[a.target] = grown;
                changed = true;
            }
        }
        if !changed {
            return SubRepresentation::from_subspaces(spaces);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeVerdict {
    pub semistable: bool,
    pub subrepresentation_count: usize,
    pub cyclic_count: usize,
}

/// Semistability decided independently of [`enumerate_subrepresentations`]:
/// every subrepresentation is a sum of cyclic ones, so the subrepresentations
/// are generated by closing the cyclic ones under sums.
pub fn semistability_via_cyclic_closures(
    q: &Quiver,
    m: &FiniteFieldRepresentation,
    theta: &StabilityParameter,
    budget: u128,
) -> Result<LatticeVerdict> {
    theta.check_against(q, &m.dims)?;
    let field = &m.field;
    let vectors: u128 = m
        .dims
        .values()
        .iter()
        .map(|&d| (field.order() as u128).saturating_pow(d as u32))
        .sum();
    if vectors > budget {
        return Err(Error::BudgetExceeded {
            required: vectors,
            budget,
        });
    }

    let mut cyclic: Vec<Vec<Subspace>> = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for at in 0..q.vertex_count() {
        let n = m.ambient(at);
        let mut v = vec![0u64; n];
        while advance(&mut v, field.order()) {
            let sub = cyclic_subrepresentation(q, m, at, &v).subspaces;
            if seen_cyclic.insert(sub.clone()) {
                cyclic.push(sub);
            }
        }
    }

    let zero: Vec<Subspace> = (0..q.vertex_count())
        .map(|w| Subspace::zero(m.ambient(w)))
        .collect();
    let mut all: HashSet<Vec<Subspace>> = HashSet::new();
    all.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(current) = frontier.pop() {
        for c in &cyclic {
            let sum: Vec<Subspace> = current.iter().zip(c).map(|(a, b)| a.sum(field, b)).collect();
            if all.len() as u128 > budget {
                return Err(Error::BudgetExceeded {
                    required: all.len() as u128,
                    budget,
                });
            }
            if all.insert(sum.clone()) {
                frontier.push(sum);
            }
        }
    }

    let semistable = all.iter().all(|spaces| {
        let dims = DimensionVector::from_raw(spaces.iter().map(|s| s.dim() as i64).collect());
        theta.pairing(&dims) <= 0
    });
    Ok(LatticeVerdict {
        semistable,
        subrepresentation_count: all.len(),
        cyclic_count: cyclic.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleOptions {
    pub budget: u128,
    pub seed: u64,
    pub sample_size: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
            sample_size: DEFAULT_SAMPLE_SIZE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverageMode {
    Exhaustive,
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceFailure {
    /// Arrow matrices of the framed representation `(v, M, phi)`.
    pub point: Vec<FpMatrix>,
    /// `M` stable, `v != 0` and `phi != 0`.
    pub expected: bool,
    pub framed_stable: bool,
    pub framed_semistable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub field_order: u64,
    pub framing_scale: i64,
    pub total_points: u128,
    pub instances_checked: u64,
    pub mode: CoverageMode,
    pub below_minimal_scale: bool,
    pub failures: Vec<EquivalenceFailure>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks, point by point over `F_p`, that for `(v, M, phi)` in
/// `Rep(Qbar, dbar)` the three conditions
/// `thetabar`-stable, `thetabar`-semistable, and
/// (`M` `theta`-stable, `v != 0`, `phi != 0`) agree.
#[allow(clippy::too_many_arguments)]
pub fn verify_double_framing_equivalence(
    q: &Quiver,
    d: &DimensionVector,
    theta: &StabilityParameter,
    i: usize,
    j: usize,
    scale: i64,
    field: PrimeField,
    options: &OracleOptions,
) -> Result<EquivalenceReport> {
    let framing = double_frame(q, d, theta, i, j, scale)?;
    let coprime = is_theta_coprime(q, d, theta)?;
    if !coprime.coprime {
        return Err(Error::AssumptionViolated {
            assumption: "coprime".to_owned(),
            witness: coprime.witness.map(|w| w.values().to_vec()),
        });
    }
    let below_minimal_scale = scale < minimal_framing_scale(q, d, theta)?;

    let framed = &framing.framed_quiver;
    let dbar = &framing.framed_dimension;
    let thetabar = &framing.framed_stability;
    let shapes: Vec<(usize, usize)> = framed
        .arrows()
        .iter()
        .map(|a| (dbar[a.target] as usize, dbar[a.source] as usize))
        .collect();
    let entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let total_points = (field.order() as u128)
        .checked_pow(entries as u32)
        .unwrap_or(u128::MAX);

    let probe = FiniteFieldRepresentation::zero(framed, field, dbar.clone())?;
    let per_point = subspace_tuple_count(&probe);
    if per_point > options.budget {
        return Err(Error::BudgetExceeded {
            required: per_point,
            budget: options.budget,
        });
    }

    let base_arrows = q.arrow_count();
    let source_arrow = framing.source_arrow();
    let sink_arrow = framing.sink_arrow();

    let check = |values: &[u64]| -> Result<Option<EquivalenceFailure>> {
        let mut matrices = Vec::with_capacity(shapes.len());
        let mut offset = 0;
        for &(r, c) in &shapes {
            matrices.push(FpMatrix::from_entries(r, c, values[offset..offset + r * c].to_vec()));
            offset += r * c;
        }
        let point = FiniteFieldRepresentation::new(framed, field, dbar.clone(), matrices)?;
        let verdict = king_stability(framed, &point, thetabar, options.budget)?;
        let base = FiniteFieldRepresentation::new(
            q,
            field,
            d.clone(),
            point.arrow_matrices[..base_arrows].to_vec(),
        )?;
        let base_verdict = king_stability(q, &base, theta, options.budget)?;
        let v_nonzero = !point.arrow_matrices[source_arrow].is_zero();
        let phi_nonzero = !point.arrow_matrices[sink_arrow].is_zero();
        let expected = base_verdict.stable && v_nonzero && phi_nonzero;
        if verdict.stable == expected && verdict.semistable == expected {
            Ok(None)
        } else {
            Ok(Some(EquivalenceFailure {
                point: point.arrow_matrices,
                expected,
                framed_stable: verdict.stable,
                framed_semistable: verdict.semistable,
            }))
        }
    };

    let mut failures = Vec::new();
    let mut instances_checked = 0u64;
    let mode = if total_points <= options.budget {
        let mut values = vec![0u64; entries];
        loop {
            instances_checked += 1;
            failures.extend(check(&values)?);
            if !advance(&mut values, field.order()) {
                break;
            }
        }
        CoverageMode::Exhaustive
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let samples = (options.sample_size as u128).min(options.budget) as u64;
        for _ in 0..samples {
            let values: Vec<u64> = (0..entries).map(|_| rng.gen_range(0..field.order())).collect();
            instances_checked += 1;
            failures.extend(check(&values)?);
        }
        CoverageMode::Sampled { seed: options.seed }
    };

    Ok(EquivalenceReport {
        field_order: field.order(),
        framing_scale: scale,
        total_points,
        instances_checked,
        mode,
        below_minimal_scale,
        failures,
    })
}

/// Evaluation of the path function `f_p(N) = N_p` on representations that
/// are one-dimensional at both ends of `p`.
pub trait PathSemiInvariant {
    type Scalar;

    fn path_semiinvariant(&self, q: &Quiver, path: &Path) -> Result<Self::Scalar>;
}

fn check_thin_ends(dims: &DimensionVector, path: &Path) -> Result<()> {
    let (s, t) = (dims[path.source], dims[path.target]);
    if s == 1 && t == 1 {
        Ok(())
    } else {
        Err(Error::NotThinAtEndpoints {
            source_dim: s,
            target_dim: t,
        })
    }
}

impl PathSemiInvariant for FiniteFieldRepresentation {
    type Scalar = u64;

    fn path_semiinvariant(&self, q: &Quiver, path: &Path) -> Result<u64> {
        self.dims.check_on(q)?;
        Path::new(q, path.source, path.arrows.clone())?;
        check_thin_ends(&self.dims, path)?;
        Ok(self.path_matrix(path).get(0, 0))
    }
}

impl PathSemiInvariant for RationalRepresentation {
    type Scalar = BigRational;

    fn path_semiinvariant(&self, q: &Quiver, path: &Path) -> Result<BigRational> {
        self.dims.check_on(q)?;
        Path::new(q, path.source, path.arrows.clone())?;
        check_thin_ends(&self.dims, path)?;
        Ok(self.path_matrix(path).get(0, 0).clone())
    }
}

pub fn path_semiinvariant<R: PathSemiInvariant>(m: &R, q: &Quiver, path: &Path) -> Result<R::Scalar> {
    m.path_semiinvariant(q, path)
}

/// An element `(g_i)` of `prod_i GL(d_i, F_p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub components: Vec<FpMatrix>,
}

impl GroupElement {
    pub fn identity(dims: &DimensionVector) -> Self {
        Self {
            components: dims.values().iter().map(|&d| FpMatrix::identity(d as usize)).collect(),
        }
    }

    /// Identity except `lambda * id` at `vertex`.
    pub fn scaling(field: &PrimeField, dims: &DimensionVector, vertex: usize, lambda: u64) -> Self {
        let mut g = Self::identity(dims);
        let n = dims[vertex] as usize;
        let mut m = FpMatrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, lambda % field.order());
        }
        g.components[vertex] = m;
        g
    }

    /// Uniform invertible components, by rejection sampling.
    pub fn random<R: Rng + ?Sized>(field: &PrimeField, dims: &DimensionVector, rng: &mut R) -> Self {
        let components = dims
            .values()
            .iter()
            .map(|&d| {
                let n = d as usize;
                loop {
                    let data = (0..n * n).map(|_| rng.gen_range(0..field.order())).collect();
                    let m = FpMatrix::from_entries(n, n, data);
                    if m.rank(field) == n {
                        break m;
                    }
                }
            })
            .collect();
        Self { components }
    }

    pub fn is_invertible(&self, field: &PrimeField) -> bool {
        self.components.iter().all(|m| m.rank(field) == m.rows())
    }

    /// `(g . M)_a = g_{t(a)} M_a g_{s(a)}^{-1}`.
    pub fn act(&self, q: &Quiver, m: &FiniteFieldRepresentation) -> Result<FiniteFieldRepresentation> {
        let field = &m.field;
        let inverses: Vec<FpMatrix> = self
            .components
            .iter()
            .map(|g| {
                g.inverse(field)
                    .ok_or_else(|| Error::QuiverMismatch("group element is not invertible".to_owned()))
            })
            .collect::<Result<_>>()?;
        let matrices = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                self.components[a.target]
                    .mul(field, &m.arrow_matrices[k])
                    .mul(field, &inverses[a.source])
            })
            .collect();
        FiniteFieldRepresentation::new(q, m.field, m.dims.clone(), matrices)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightCheck {
    pub passed: bool,
    pub before: u64,
    pub after: u64,
    pub expected: u64,
}

/// Checks `f_p(g . M) = g_{t(p)} g_{s(p)}^{-1} f_p(M)`.
pub fn verify_semiinvariant_weight(
    q: &Quiver,
    m: &FiniteFieldRepresentation,
    path: &Path,
    g: &GroupElement,
) -> Result<WeightCheck> {
    let field = &m.field;
    let before = m.path_semiinvariant(q, path)?;
    let moved = g.act(q, m)?;
    let after = moved.path_semiinvariant(q, path)?;
    let gt = g.components[path.target].get(0, 0);
    let gs_inv = field
        .inv(g.components[path.source].get(0, 0))
        .expect("invertible component");
    let expected = field.mul(field.mul(gt, gs_inv), before);
    Ok(WeightCheck {
        passed: after == expected,
        before,
        after,
        expected,
    })
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

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn kronecker_rep(a: u64, b: u64) -> (Quiver, FiniteFieldRepresentation) {
        let q = Quiver::kronecker(2);
        let m = FiniteFieldRepresentation::new(
            &q,
            f(2),
            dv(&[1, 1]),
            vec![FpMatrix::scalar(a), FpMatrix::scalar(b)],
        )
        .unwrap();
        (q, m)
    }

    #[test]
    fn kronecker_subrepresentations() {
        let (q, m) = kronecker_rep(1, 1);
        let dims: Vec<DimensionVector> = enumerate_subrepresentations(&q, &m, DEFAULT_BUDGET)
            .unwrap()
            .map(|s| s.dims)
            .collect();
        assert_eq!(dims, [dv(&[0, 0]), dv(&[0, 1]), dv(&[1, 1])]);
    }

    #[test]
    fn zero_representation_has_every_tuple() {
        let q = Quiver::kronecker(2);
        let m = FiniteFieldRepresentation::zero(&q, f(2), dv(&[1, 1])).unwrap();
        assert_eq!(enumerate_subrepresentations(&q, &m, DEFAULT_BUDGET).unwrap().count(), 4);
    }

    #[test]
    fn point_with_plane_has_five_subrepresentations() {
        let q = Quiver::with_numbered_vertices(1, []).unwrap();
        let m = FiniteFieldRepresentation::zero(&q, f(2), dv(&[2])).unwrap();
        assert_eq!(enumerate_subrepresentations(&q, &m, DEFAULT_BUDGET).unwrap().count(), 5);
    }

    #[test]
    fn enumeration_respects_budget() {
        let q = Quiver::with_numbered_vertices(1, []).unwrap();
        let m = FiniteFieldRepresentation::zero(&q, f(2), dv(&[3])).unwrap();
        assert_eq!(
            enumerate_subrepresentations(&q, &m, 10).err(),
            Some(Error::BudgetExceeded {
                required: 16,
                budget: 10
            })
        );
    }

    #[test]
    fn king_stability_examples() {
        let (q, m) = kronecker_rep(1, 0);
        let verdict = king_stability(&q, &m, &theta(&[1, -1]), DEFAULT_BUDGET).unwrap();
        assert!(verdict.stable && verdict.semistable);
        assert!(verdict.destabilizing_subrep.is_none());

        let (q, m) = kronecker_rep(0, 0);
        let verdict = king_stability(&q, &m, &theta(&[1, -1]), DEFAULT_BUDGET).unwrap();
        assert!(!verdict.semistable && !verdict.stable);
        assert_eq!(verdict.destabilizing_subrep.unwrap().dims, dv(&[1, 0]));

        let (q, m) = kronecker_rep(1, 1);
        let verdict = king_stability(&q, &m, &theta(&[0, 0]), DEFAULT_BUDGET).unwrap();
        assert!(verdict.semistable && !verdict.stable);
        assert_eq!(verdict.destabilizing_subrep.unwrap().dims, dv(&[0, 1]));
        assert!(!verdict.stable_is_geometric);
    }

    #[test]
    fn king_stability_checks_pairing() {
        let (q, m) = kronecker_rep(1, 1);
        assert_eq!(
            king_stability(&q, &m, &theta(&[1, 0]), DEFAULT_BUDGET).unwrap_err(),
            Error::PairingNonzero { pairing: 1 }
        );
    }

    #[test]
    fn cyclic_closure_agrees_with_enumeration_on_planes() {
        // both arrows land in the line spanned by e1: (2, 1) destabilises but
        // no single cyclic subrepresentation does
        let q = Quiver::kronecker(2);
        let m = FiniteFieldRepresentation::new(
            &q,
            f(2),
            dv(&[2, 2]),
            vec![
                FpMatrix::from_entries(2, 2, vec![1, 0, 0, 0]),
                FpMatrix::from_entries(2, 2, vec![0, 1, 0, 0]),
            ],
        )
        .unwrap();
        let t = theta(&[1, -1]);
        let brute = king_stability(&q, &m, &t, DEFAULT_BUDGET).unwrap();
        let lattice = semistability_via_cyclic_closures(&q, &m, &t, DEFAULT_BUDGET).unwrap();
        assert!(!brute.semistable);
        assert!(!lattice.semistable);
        assert_eq!(
            lattice.subrepresentation_count,
            enumerate_subrepresentations(&q, &m, DEFAULT_BUDGET).unwrap().count()
        );
    }

    #[test]
    fn double_framing_on_kronecker() {
        let q = Quiver::kronecker(2);
        for p in [2, 3] {
            let report = verify_double_framing_equivalence(
                &q,
                &dv(&[1, 1]),
                &theta(&[1, -1]),
                0,
                1,
                2,
                f(p),
                &OracleOptions::default(),
            )
            .unwrap();
            assert!(report.passed());
            assert_eq!(report.instances_checked, p.pow(4));
            assert_eq!(report.mode, CoverageMode::Exhaustive);
            assert!(!report.below_minimal_scale);
        }
    }

    #[test]
    fn double_framing_below_minimal_scale_is_labelled() {
        let q = Quiver::kronecker(2);
        let report = verify_double_framing_equivalence(
            &q,
            &dv(&[1, 1]),
            &theta(&[1, -1]),
            0,
            1,
            1,
            f(2),
            &OracleOptions::default(),
        )
        .unwrap();
        assert!(report.below_minimal_scale);
    }

    #[test]
    fn double_framing_samples_beyond_budget() {
        let q = Quiver::kronecker(2);
        let options = OracleOptions {
            budget: 50,
            seed: 7,
            sample_size: 20,
        };
        let report = verify_double_framing_equivalence(
            &q,
            &dv(&[1, 1]),
            &theta(&[1, -1]),
            0,
            1,
            2,
            f(3),
            &options,
        )
        .unwrap();
        assert_eq!(report.mode, CoverageMode::Sampled { seed: 7 });
        assert_eq!(report.instances_checked, 20);
        assert!(report.passed());
    }

    #[test]
    fn double_framing_requires_coprimality() {
        let q = Quiver::kronecker(2);
        let err = verify_double_framing_equivalence(
            &q,
            &dv(&[2, 2]),
            &theta(&[1, -1]),
            0,
            1,
            2,
            f(2),
            &OracleOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::AssumptionViolated { ref assumption, .. } if assumption == "coprime"));
    }

    #[test]
    fn semiinvariant_of_three_vertex_thin_representation() {
        let q = Quiver::with_numbered_vertices(3, [(0, 1), (1, 2), (1, 2), (0, 2)]).unwrap();
        let field = f(5);
        let values = [2u64, 3, 4, 1];
        let m = FiniteFieldRepresentation::new(
            &q,
            field,
            dv(&[1, 1, 1]),
            values.iter().map(|&x| FpMatrix::scalar(x)).collect(),
        )
        .unwrap();
        let path = Path::new(&q, 0, vec![0, 1]).unwrap();
        assert_eq!(m.path_semiinvariant(&q, &path).unwrap(), (2 * 3) % 5);
        assert_eq!(m.path_semiinvariant(&q, &Path::trivial(1)).unwrap(), 1);

        let ones = FiniteFieldRepresentation::new(
            &q,
            field,
            dv(&[1, 1, 1]),
            vec![FpMatrix::scalar(1); 4],
        )
        .unwrap();
        for p in q.paths_from(0).unwrap() {
            assert_eq!(ones.path_semiinvariant(&q, &p).unwrap(), 1);
        }
    }

    #[test]
    fn semiinvariant_needs_thin_endpoints() {
        let q = Quiver::kronecker(1);
        let m = FiniteFieldRepresentation::zero(&q, f(2), dv(&[2, 1])).unwrap();
        let path = Path::arrow(&q, 0).unwrap();
        assert_eq!(
            m.path_semiinvariant(&q, &path).unwrap_err(),
            Error::NotThinAtEndpoints {
                source_dim: 2,
                target_dim: 1
            }
        );
    }

    #[test]
    fn weight_law_for_identity_and_scaling() {
        let q = Quiver::with_numbered_vertices(3, [(0, 1), (1, 2), (1, 2), (0, 2)]).unwrap();
        let field = f(5);
        let d = dv(&[1, 1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = FiniteFieldRepresentation::random(&q, field, d.clone(), &mut rng).unwrap();
        let path = Path::new(&q, 0, vec![0, 2]).unwrap();

        let id = verify_semiinvariant_weight(&q, &m, &path, &GroupElement::identity(&d)).unwrap();
        assert!(id.passed);
        assert_eq!(id.before, id.after);

        let g = GroupElement::scaling(&field, &d, path.target, 3);
        let scaled = verify_semiinvariant_weight(&q, &m, &path, &g).unwrap();
        assert!(scaled.passed);
        assert_eq!(scaled.after, field.mul(3, scaled.before));
    }

    #[test]
    fn weight_law_through_a_fat_middle_vertex() {
        let q = Quiver::linear(3);
        let field = f(3);
        let d = dv(&[1, 2, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let path = Path::new(&q, 0, vec![0, 1]).unwrap();
        for _ in 0..20 {
            let m = FiniteFieldRepresentation::random(&q, field, d.clone(), &mut rng).unwrap();
            let g = GroupElement::random(&field, &d, &mut rng);
            assert!(verify_semiinvariant_weight(&q, &m, &path, &g).unwrap().passed);
        }
    }
}
