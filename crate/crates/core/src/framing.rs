//! Double framing of a quiver datum and its reduction to a datum that is
//! thin at the two marked vertices.
//!
//! Framing `(Q, d, theta)` at vertices `i`, `j` adjoins a source `0` with an
//! arrow `0 -> i` and a sink `inf` with an arrow `j -> inf`.  The framed
//! vertex order is always `(0, Q_0, inf)`, and the framed arrows are the
//! arrows of `Q` followed by `0 -> i` and `j -> inf`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{Path, Quiver};
use crate::stability::{assumptions_report, b_sets, Assumption, AssumptionsReport, BSets, Ternary};
use crate::vector::{DimensionVector, StabilityParameter};

/// Framing scale used when none is requested.
pub const DEFAULT_FRAMING_SCALE: i64 = 2;

/// The doubly framed datum `(Qbar, dbar, thetabar)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramingResult {
    pub framed_quiver: Quiver,
    pub framed_dimension: DimensionVector,
    pub framed_stability: StabilityParameter,
    pub framing_scale: i64,
    /// Framing vertices `(i, j)` as indices into the base quiver.
    pub framed_at: (usize, usize),
    pub base_quiver: Quiver,
    pub base_dimension: DimensionVector,
    pub base_stability: StabilityParameter,
}

impl FramingResult {
    /// Index of the new source `0` in the framed quiver.
    pub fn source_vertex(&self) -> usize {
        0
    }

    /// Index of the new sink `inf` in the framed quiver.
    pub fn sink_vertex(&self) -> usize {
        self.base_quiver.vertex_count() + 1
    }

    /// Index in the framed quiver of base vertex `k`.
    pub fn base_vertex(&self, k: usize) -> usize {
        k + 1
    }

    /// Index of the arrow `0 -> i`.
    pub fn source_arrow(&self) -> usize {
        self.base_quiver.arrow_count()
    }

    /// Index of the arrow `j -> inf`.
    pub fn sink_arrow(&self) -> usize {
        self.base_quiver.arrow_count() + 1
    }

    /// Splits a framed vertex function into `(a, e, b)`.
    pub fn split<'a>(&self, values: &'a [i64]) -> (i64, &'a [i64], i64) {
        let n = self.base_quiver.vertex_count();
        (values[0], &values[1..=n], values[n + 1])
    }
}

/// Returns a name not used by `q`, trying `base`, `base'`, `base''`, ...
fn fresh_name(q: &Quiver, base: &str, taken: &[String]) -> String {
    let mut name = base.to_owned();
    while q.contains_vertex(&name) || taken.contains(&name) {
        name.push('\'');
    }
    name
}

fn check_vertex(q: &Quiver, v: usize) -> Result<()> {
    if v < q.vertex_count() {
        Ok(())
    } else {
        Err(Error::UnknownVertex(format!("#{v}")))
    }
}

/// Builds `(Qbar, dbar, thetabar)` with `dbar = (1, d, 1)` and
/// `thetabar = (1, N theta, -1)`.
pub fn double_frame(
    q: &Quiver,
    d: &DimensionVector,
    theta: &StabilityParameter,
    i: usize,
    j: usize,
    scale: i64,
) -> Result<FramingResult> {
    theta.check_against(q, d)?;
    check_vertex(q, i)?;
    check_vertex(q, j)?;
    if scale < 1 {
        return Err(Error::InvalidScale);
    }
    let n = q.vertex_count();
    let zero = fresh_name(q, "0", &[]);
    let inf = fresh_name(q, "∞", std::slice::from_ref(&zero));

    let mut names = Vec::with_capacity(n + 2);
    names.push(zero);
    names.extend(q.vertex_names().iter().cloned());
    names.push(inf);

    let mut arrows: Vec<(usize, usize)> = q
        .arrows()
        .iter()
        .map(|a| (a.source + 1, a.target + 1))
        .collect();
    arrows.push((0, i + 1));
    arrows.push((j + 1, n + 1));
    let framed_quiver = Quiver::from_indices(names, arrows)?;

    let mut dims = Vec::with_capacity(n + 2);
    dims.push(1);
    dims.extend_from_slice(d.values());
    dims.push(1);

    let mut weights = Vec::with_capacity(n + 2);
    weights.push(1);
    weights.extend(theta.values().iter().map(|t| scale * t));
    weights.push(-1);

    Ok(FramingResult {
        framed_quiver,
        framed_dimension: DimensionVector::new(dims)?,
        framed_stability: StabilityParameter::new(weights),
        framing_scale: scale,
        framed_at: (i, j),
        base_quiver: q.clone(),
        base_dimension: d.clone(),
        base_stability: theta.clone(),
    })
}

/// Whether `sign(a + N theta(e) - b) = sign(theta(e))` for all `0 <= e <= d`
/// with `theta(e) != 0` and all `a, b` in `{0, 1}`.
pub fn framing_scale_separates(
    d: &DimensionVector,
    theta: &StabilityParameter,
    scale: i64,
) -> bool {
    d.subvectors()
        .map(|e| theta.pairing(&e))
        .filter(|&t| t != 0)
        .all(|t| {
            [(0, 0), (0, 1), (1, 0), (1, 1)]
                .iter()
                .all(|&(a, b)| (a + scale * t - b).signum() == t.signum())
        })
}

/// The least framing scale `N >= 1` for which [`framing_scale_separates`]
/// holds, found by exhaustive check.
///
/// The answer is 2 whenever some subdimension vector has `|theta(e)| = 1` and
/// 1 when every nonzero value has absolute value at least 2.  When
/// `theta(e) = 0` throughout the quantifier is vacuous and 2 is returned.
pub fn minimal_framing_scale(
    q: &Quiver,
    d: &DimensionVector,
    theta: &StabilityParameter,
) -> Result<i64> {
    theta.check_against(q, d)?;
    if d.subvectors().all(|e| theta.pairing(&e) == 0) {
        return Ok(DEFAULT_FRAMING_SCALE);
    }
    let scale = (1..)
        .find(|&n| framing_scale_separates(d, theta, n))
        .expect("scale 2 always separates integer parameters");
    Ok(scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    fn of(value: i64) -> Self {
        match value.signum() {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            _ => Sign::Zero,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "B+",
            Sign::Minus => "B-",
            Sign::Zero => "B0",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BSetDiscrepancy {
    /// Framed subdimension vector `(a, e, b)`.
    pub vector: DimensionVector,
    /// Class predicted from the base partition, `None` if `e` is missing from it.
    pub predicted: Option<Sign>,
    /// Class from the sign of `thetabar`.
    pub actual: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FramedBSetsReport {
    pub passed: bool,
    pub checked: usize,
    /// All discrepancies, in lexicographic order of the framed vector.
    pub discrepancies: Vec<BSetDiscrepancy>,
}

impl FramedBSetsReport {
    pub fn first_discrepancy(&self) -> Option<&BSetDiscrepancy> {
        self.discrepancies.first()
    }
}

/// Compares the partition of `{0 <= ebar <= dbar}` by the sign of `thetabar`
/// with the one assembled from the base partition:
///
/// * `e` in `B0(theta)`: `(1,e,0)` in `B+`, `(0,e,1)` in `B-`, `(0,e,0)` and `(1,e,1)` in `B0`;
/// * `e` in `B+(theta)` (resp. `B-`): all four `(a,e,b)` in `B+` (resp. `B-`).
pub fn compare_framed_b_sets(f: &FramingResult, base: &BSets) -> FramedBSetsReport {
    let mut class: HashMap<&[i64], Sign> = HashMap::new();
    for (set, sign) in [
        (&base.plus, Sign::Plus),
        (&base.minus, Sign::Minus),
        (&base.zero, Sign::Zero),
    ] {
        for e in set {
            class.insert(e.values(), sign);
        }
    }

    let mut checked = 0;
    let mut discrepancies = Vec::new();
    for framed in f.framed_dimension.subvectors() {
        checked += 1;
        let actual = Sign::of(f.framed_stability.pairing(&framed));
        let (a, e, b) = f.split(framed.values());
        let predicted = class.get(e).map(|&sign| match sign {
            Sign::Zero => Sign::of(a - b),
            other => other,
        });
        if predicted != Some(actual) {
            discrepancies.push(BSetDiscrepancy {
                vector: framed,
                predicted,
                actual,
            });
        }
    }
    FramedBSetsReport {
        passed: discrepancies.is_empty(),
        checked,
        discrepancies,
    }
}

/// Runs [`compare_framed_b_sets`] against the base partition of `f`'s own datum.
pub fn framed_b_sets_report(f: &FramingResult) -> Result<FramedBSetsReport> {
    let base = b_sets(&f.base_quiver, &f.base_dimension, &f.base_stability)?;
    Ok(compare_framed_b_sets(f, &base))
}

/// `dbar` is amply stable for `thetabar` iff `d_i > 1` and `d_j > 1`
/// (for a base datum satisfying the standing hypotheses).
pub fn framed_ample_stability(q: &Quiver, d: &DimensionVector, i: usize, j: usize) -> Result<bool> {
    d.check_on(q)?;
    check_vertex(q, i)?;
    check_vertex(q, j)?;
    Ok(d[i] > 1 && d[j] > 1)
}

/// Ample stability of the framed datum given the base report.
///
/// A thin framing vertex forces `No` (the locus `v = 0` or `phi = 0` is a
/// divisor); otherwise the answer inherits the base verdict.
pub fn framed_amply_stable(base: &AssumptionsReport, d: &DimensionVector, i: usize, j: usize) -> Ternary {
    if d[i] <= 1 || d[j] <= 1 {
        Ternary::No
    } else if base.amply_stable == Ternary::Yes {
        Ternary::Yes
    } else {
        Ternary::Unknown
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionCase {
    /// `d_i > 1` and `d_j > 1`: keep the framed datum.
    BothBig,
    /// `d_i > 1`, `d_j = 1`: drop `inf`.
    SourceThin,
    /// `d_i = 1`, `d_j > 1`: drop `0`.
    TargetThin,
    /// `d_i = d_j = 1`: keep the base datum.
    BothThin,
}

impl ReductionCase {
    pub fn tag(self) -> &'static str {
        match self {
            ReductionCase::BothBig => "both_big",
            ReductionCase::SourceThin => "source_thin",
            ReductionCase::TargetThin => "target_thin",
            ReductionCase::BothThin => "both_thin",
        }
    }
}

impl fmt::Display for ReductionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The reduced datum `(Q', d', theta')` with marked vertices `i'`, `j'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub case: ReductionCase,
    pub reduced_quiver: Quiver,
    pub reduced_dimension: DimensionVector,
    pub reduced_stability: StabilityParameter,
    /// `(i', j')` as indices into the reduced quiver.
    pub marked_vertices: (usize, usize),
    /// `(q_0, q_inf)` as paths `0 -> i'` and `j' -> inf` in the framed quiver.
    pub connecting_paths: (Path, Path),
    /// Index in the framed quiver of each reduced vertex.
    pub vertex_embedding: Vec<usize>,
    /// Index in the framed quiver of each reduced arrow.
    pub arrow_embedding: Vec<usize>,
    pub base_quiver: Quiver,
    pub base_marked: (usize, usize),
}

/// Hypotheses the reduction relies on and can check.
const REDUCTION_ASSUMPTIONS: [Assumption; 4] = [
    Assumption::Acyclic,
    Assumption::PairingZero,
    Assumption::Indivisible,
    Assumption::Coprime,
];

/// Reduces the framed datum to one that is thin at the marked vertices.
pub fn reduce(f: &FramingResult) -> Result<ReductionResult> {
    let report = assumptions_report(&f.base_quiver, &f.base_dimension, &f.base_stability)?;
    report.require(&REDUCTION_ASSUMPTIONS)?;

    let q = &f.base_quiver;
    let d = &f.base_dimension;
    let theta = &f.base_stability;
    let (i, j) = f.framed_at;
    let n = q.vertex_count();
    let big_source = d[i] > 1;
    let big_target = d[j] > 1;
    let total = d.total();
    let weight = (total + 1) * f.framing_scale;
    let zero = f.source_vertex();
    let inf = f.sink_vertex();
    let framed = &f.framed_quiver;

    let (case, vertices, marked_framed, connecting, stability) = match (big_source, big_target) {
        (true, true) => (
            ReductionCase::BothBig,
            (0..n + 2).collect::<Vec<_>>(),
            (zero, inf),
            (Path::trivial(zero), Path::trivial(inf)),
            f.framed_stability.values().to_vec(),
        ),
        (true, false) => {
            let mut s = vec![total];
            s.extend(theta.values().iter().map(|t| weight * t - 1));
            (
                ReductionCase::SourceThin,
                (0..n + 1).collect(),
                (zero, f.base_vertex(j)),
                (Path::trivial(zero), Path::arrow(framed, f.sink_arrow())?),
                s,
            )
        }
        (false, true) => {
            let mut s: Vec<i64> = theta.values().iter().map(|t| weight * t + 1).collect();
            s.push(-total);
            (
                ReductionCase::TargetThin,
                (1..n + 2).collect(),
                (f.base_vertex(i), inf),
                (Path::arrow(framed, f.source_arrow())?, Path::trivial(inf)),
                s,
            )
        }
        (false, false) => (
            ReductionCase::BothThin,
            (1..n + 1).collect(),
            (f.base_vertex(i), f.base_vertex(j)),
            (
                Path::arrow(framed, f.source_arrow())?,
                Path::arrow(framed, f.sink_arrow())?,
            ),
            theta.values().to_vec(),
        ),
    };

    let (reduced_quiver, arrow_embedding) = framed.full_subquiver(&vertices);
    let position = |v: usize| vertices.iter().position(|&w| w == v).expect("marked vertex kept");
    let reduced_dimension =
        DimensionVector::new(vertices.iter().map(|&v| f.framed_dimension[v]).collect())?;

    Ok(ReductionResult {
        case,
        reduced_quiver,
        reduced_dimension,
        reduced_stability: StabilityParameter::new(stability),
        marked_vertices: (position(marked_framed.0), position(marked_framed.1)),
        connecting_paths: connecting,
        vertex_embedding: vertices,
        arrow_embedding,
        base_quiver: q.clone(),
        base_marked: (i, j),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    pub passed: bool,
    pub pairing: i64,
    pub thin_at_marked: bool,
    pub reduced_path_count: Option<u64>,
    pub base_path_count: Option<u64>,
}

/// Checks `theta'(d') = 0`, `d'_{i'} = d'_{j'} = 1` and
/// `p_{Q'}(i', j') = p_Q(i, j)`.
pub fn verify_reduction_pairing(r: &ReductionResult) -> ReductionCheck {
    let pairing = r.reduced_stability.pairing(&r.reduced_dimension);
    let (ip, jp) = r.marked_vertices;
    let thin_at_marked = r.reduced_dimension.values().get(ip) == Some(&1)
        && r.reduced_dimension.values().get(jp) == Some(&1);
    let reduced_path_count = r
        .reduced_quiver
        .path_count_matrix()
        .ok()
        .map(|p| p.get(ip, jp));
    let base_path_count = r
        .base_quiver
        .path_count_matrix()
        .ok()
        .map(|p| p.get(r.base_marked.0, r.base_marked.1));
    let passed = pairing == 0
        && r.reduced_stability.len() == r.reduced_dimension.len()
        && thin_at_marked
        && reduced_path_count.is_some()
        && reduced_path_count == base_path_count;
    ReductionCheck {
        passed,
        pairing,
        thin_at_marked,
        reduced_path_count,
        base_path_count,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathCorrespondence {
    pub bijective: bool,
    pub reduced_paths: usize,
    pub framed_paths: usize,
}

/// Checks that `p -> q_inf p q_0` maps the paths `i' -> j'` of the reduced
/// quiver bijectively onto the paths `0 -> inf` of the framed quiver.
pub fn check_path_correspondence(f: &FramingResult, r: &ReductionResult) -> Result<PathCorrespondence> {
    let (ip, jp) = r.marked_vertices;
    let (q0, qinf) = &r.connecting_paths;
    let reduced = r.reduced_quiver.paths_between(ip, jp)?;
    let framed: BTreeSet<Path> = f
        .framed_quiver
        .paths_between(f.source_vertex(), f.sink_vertex())?
        .into_iter()
        .collect();
    let mut images = BTreeSet::new();
    for p in &reduced {
        let lifted = p.map(&r.vertex_embedding, &r.arrow_embedding);
        images.insert(q0.concat(&lifted)?.concat(qinf)?);
    }
    Ok(PathCorrespondence {
        bijective: images.len() == reduced.len() && images == framed,
        reduced_paths: reduced.len(),
        framed_paths: framed.len(),
    })
}
