//! Dimension formulas for global sections on quiver moduli, the first
//! Hochschild cohomology of the path algebra, and exact Hom/Ext of concrete
//! representations.
//!
//! The sheaf-theoretic inputs (vanishing of higher cohomology of
//! `U_i^v (x) U_j` under strong ample stability) are hypotheses here, never
//! computed; every result that depends on them says so.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::quiver::{Path, PathCountMatrix, Quiver};
use crate::stability::{assumptions_report, AssumptionsReport};
use crate::vector::{DimensionVector, StabilityParameter};

/// `dim Hom(U_i, U_j) = p(i, j)` for all vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndomorphismDimensions {
    pub table: PathCountMatrix,
    /// `dim End(U)`, the dimension of the path algebra.
    pub total: u64,
    /// Whether the standing hypotheses were verified (through the strong
    /// criterion) rather than merely assumed.
    pub hypotheses_verified: bool,
    pub warnings: Vec<String>,
}

pub fn endomorphism_dimensions(
    q: &Quiver,
    d: &DimensionVector,
    report: Option<&AssumptionsReport>,
) -> Result<EndomorphismDimensions> {
    d.check_on(q)?;
    let table = q.path_count_matrix()?;
    let mut warnings = Vec::new();
    let hypotheses_verified = match report {
        Some(r) if r.all_hold() => true,
        Some(r) => {
            let failed: Vec<&str> = r.failed().iter().map(|a| a.name()).collect();
            warnings.push(format!(
                "standing hypotheses not verified ({}); the table is the path-algebra side only",
                failed.join(", ")
            ));
            false
        }
        None => {
            warnings.push("standing hypotheses not checked".to_owned());
            false
        }
    };
    Ok(EndomorphismDimensions {
        total: table.total(),
        table,
        hypotheses_verified,
        warnings,
    })
}

/// Label of a basis vector in the presentation of the vector fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisLabel {
    /// The trivial path `e_i`.
    Vertex(usize),
    /// A path from `s(a)` to `t(a)` in the summand of arrow `a`.
    ArrowPath { arrow: usize, path: Path },
}

/// The sequence `k -> (+)_i e_i kQ e_i -> (+)_a e_{t(a)} kQ e_{s(a)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentPresentation {
    /// `(sum_i p(i, i)) x 1`, all ones.
    pub phi: Vec<Vec<i64>>,
    /// `(sum_a p(s(a), t(a))) x (sum_i p(i, i))`.
    pub psi: Vec<Vec<i64>>,
    pub vertex_labels: Vec<BasisLabel>,
    pub arrow_labels: Vec<BasisLabel>,
}

impl TangentPresentation {
    pub fn psi_matrix(&self) -> RationalMatrix {
        integer_matrix(&self.psi, self.vertex_labels.len())
    }

    pub fn phi_matrix(&self) -> RationalMatrix {
        integer_matrix(&self.phi, 1)
    }

    pub fn psi_rank(&self) -> usize {
        self.psi_matrix().rank()
    }

    /// `dim coker(psi)`.
    pub fn cokernel_dim(&self) -> usize {
        self.arrow_labels.len() - self.psi_rank()
    }

    /// Whether `psi * phi = 0`.
    pub fn composite_vanishes(&self) -> bool {
        (&self.psi_matrix() * &self.phi_matrix()).is_zero()
    }
}

fn integer_matrix(rows: &[Vec<i64>], cols: usize) -> RationalMatrix {
    let flat: Vec<i64> = rows.iter().flatten().copied().collect();
    RationalMatrix::from_integers(rows.len(), cols, &flat)
}

fn check_presentation_input(q: &Quiver, d: &DimensionVector) -> Result<()> {
    d.check_on(q)?;
    q.topological_order()?;
    let components = q.connected_components();
    if components > 1 {
        return Err(Error::DisconnectedQuiver { components });
    }
    if let Some(v) = d.values().iter().position(|&x| x < 1) {
        return Err(Error::UnsupportedDimensionVector(format!(
            "vertex `{}` has dimension 0; full support is required",
            q.vertex_name(v)
        )));
    }
    Ok(())
}

/// Builds `phi(z) = z sum_i e_i` and `psi(z_i) = ((z_{t(a)} - z_{s(a)}) a)_a`
/// in the path bases.
pub fn tangent_presentation(
    q: &Quiver,
    d: &DimensionVector,
    theta: &StabilityParameter,
) -> Result<TangentPresentation> {
    theta.check_against(q, d)?;
    check_presentation_input(q, d)?;
    let n = q.vertex_count();
    let vertex_labels: Vec<BasisLabel> = (0..n).map(BasisLabel::Vertex).collect();
    let phi = vec![vec![1]; n];

    let mut psi = Vec::new();
    let mut arrow_labels = Vec::new();
    for (a, arrow) in q.arrows().iter().enumerate() {
        for path in q.paths_between(arrow.source, arrow.target)? {
            let mut row = vec![0i64; n];
            if path.arrows == [a] {
                row[arrow.target] += 1;
                row[arrow.source] -= 1;
            }
            psi.push(row);
            arrow_labels.push(BasisLabel::ArrowPath { arrow: a, path });
        }
    }
    Ok(TangentPresentation {
        phi,
        psi,
        vertex_labels,
        arrow_labels,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VectorFields {
    /// `dim H^0(X, T_X)` as `dim coker(psi)`.
    pub dim: usize,
    /// False when the hypotheses were overridden; the value is then only the
    /// formula, not a statement about the moduli space.
    pub reliable: bool,
    pub warnings: Vec<String>,
}

/// Dimension of the space of global vector fields on the moduli space.
///
/// Requires the standing hypotheses with strong ample stability; with
/// `override_assumptions` the formula value is returned flagged unreliable.
pub fn vector_fields_dim(
    q: &Quiver,
    d: &DimensionVector,
    theta: &StabilityParameter,
    override_assumptions: bool,
) -> Result<VectorFields> {
    let presentation = tangent_presentation(q, d, theta)?;
    let report = assumptions_report(q, d, theta)?;
    let mut warnings = Vec::new();
    let reliable = report.all_hold();
    if !reliable {
        let failed: Vec<&str> = report.failed().iter().map(|a| a.name()).collect();
        if !override_assumptions {
            let first = report.failed()[0];
            report.require(&[first])?;
        }
        warnings.push(format!(
            "UNRELIABLE: hypotheses overridden ({}); the value is the formula only and need not equal the true dimension",
            failed.join(", ")
        ));
    }
    Ok(VectorFields {
        dim: presentation.cokernel_dim(),
        reliable,
        warnings,
    })
}

/// `dim HH^1(kQ) = sum_a p(s(a), t(a)) - #Q_0 + c`, with `c` the number of
/// connected components (the dimension of the centre), read off the exact
/// sequence `0 -> k^c -> (+)_i k -> (+)_a e_{t(a)} kQ e_{s(a)} -> HH^1 -> 0`.
pub fn hochschild1_dim(q: &Quiver) -> Result<u64> {
    let p = q.path_count_matrix()?;
    let arrow_paths: u64 = q.arrows().iter().map(|a| p.get(a.source, a.target)).sum();
    let centre = q.connected_components() as u64;
    Ok(arrow_paths + centre - q.vertex_count() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyCheck {
    pub passed: bool,
    pub vector_fields: usize,
    pub hochschild1: u64,
    pub reliable: bool,
}

/// Compares `dim coker(psi)` with `dim HH^1(kQ)`.
pub fn consistency_hh1_vs_vector_fields(
    q: &Quiver,
    d: &DimensionVector,
    theta: &StabilityParameter,
    override_assumptions: bool,
) -> Result<ConsistencyCheck> {
    let fields = vector_fields_dim(q, d, theta, override_assumptions)?;
    let hh1 = hochschild1_dim(q)?;
    Ok(ConsistencyCheck {
        passed: fields.dim as u64 == hh1,
        vector_fields: fields.dim,
        hochschild1: hh1,
        reliable: fields.reliable,
    })
}

/// A representation over the rationals: one `d_{t(a)} x d_{s(a)}` matrix per arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRepresentation {
    pub dims: DimensionVector,
    pub arrow_matrices: Vec<RationalMatrix>,
}

impl RationalRepresentation {
    pub fn new(q: &Quiver, dims: DimensionVector, arrow_matrices: Vec<RationalMatrix>) -> Result<Self> {
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
        }
        Ok(Self {
            dims,
            arrow_matrices,
        })
    }

    /// The simple representation at `v`.
    pub fn simple(q: &Quiver, v: usize) -> Result<Self> {
        let mut dims = vec![0; q.vertex_count()];
        *dims
            .get_mut(v)
            .ok_or_else(|| Error::UnknownVertex(format!("#{v}")))? = 1;
        Self::zero(q, DimensionVector::new(dims)?)
    }

    /// All arrow maps zero.
    pub fn zero(q: &Quiver, dims: DimensionVector) -> Result<Self> {
        let matrices = q
            .arrows()
            .iter()
            .map(|a| RationalMatrix::zeros(dims[a.target] as usize, dims[a.source] as usize))
            .collect();
        Self::new(q, dims, matrices)
    }

    /// `M_{a_l} ... M_{a_1}` for the path `a_1 ... a_l`.
    pub fn path_matrix(&self, path: &Path) -> RationalMatrix {
        let start = self.dims[path.source] as usize;
        path.arrows
            .iter()
            .fold(RationalMatrix::identity(start), |acc, &a| &self.arrow_matrices[a] * &acc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomExtResult {
    pub hom_dim: usize,
    pub ext_dim: usize,
    /// Kernel basis; each element is one `N_i x M_i` matrix per vertex.
    pub hom_basis: Vec<Vec<RationalMatrix>>,
}

/// `Hom` and `Ext^1` as kernel and cokernel of
/// `(+)_i Hom(M_i, N_i) -> (+)_a Hom(M_{s(a)}, N_{t(a)})`,
/// `f -> (f_{t(a)} M_a - N_a f_{s(a)})_a`.
pub fn hom_ext(q: &Quiver, m: &RationalRepresentation, n: &RationalRepresentation) -> Result<HomExtResult> {
    for rep in [m, n] {
        if rep.dims.len() != q.vertex_count() || rep.arrow_matrices.len() != q.arrow_count() {
            return Err(Error::QuiverMismatch(
                "representation does not live on the given quiver".to_owned(),
            ));
        }
    }
    let mdim = |v: usize| m.dims[v] as usize;
    let ndim = |v: usize| n.dims[v] as usize;

    let mut var_offset = Vec::with_capacity(q.vertex_count());
    let mut vars = 0;
    for v in 0..q.vertex_count() {
        var_offset.push(vars);
        vars += ndim(v) * mdim(v);
    }
    let var = |v: usize, r: usize, c: usize| var_offset[v] + r * mdim(v) + c;

    let mut eq_offset = Vec::with_capacity(q.arrow_count());
    let mut eqs = 0;
    for a in q.arrows() {
        eq_offset.push(eqs);
        eqs += ndim(a.target) * mdim(a.source);
    }

    let mut matrix = RationalMatrix::zeros(eqs, vars);
    for (k, a) in q.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let ma = &m.arrow_matrices[k];
        let na = &n.arrow_matrices[k];
        for r in 0..ndim(t) {
            for c in 0..mdim(s) {
                let row = eq_offset[k] + r * mdim(s) + c;
                // (f_t M_a)[r, c] = sum_l f_t[r, l] M_a[l, c]
                for l in 0..mdim(t) {
                    let col = var(t, r, l);
                    let value = matrix.get(row, col) + ma.get(l, c);
                    matrix.set(row, col, value);
                }
                // (N_a f_s)[r, c] = sum_l N_a[r, l] f_s[l, c]
                for l in 0..ndim(s) {
                    let col = var(s, l, c);
                    let value = matrix.get(row, col) - na.get(r, l);
                    matrix.set(row, col, value);
                }
            }
        }
    }

    let rank = matrix.rank();
    let hom_basis = matrix
        .kernel_basis()
        .into_iter()
        .map(|v| {
            (0..q.vertex_count())
                .map(|w| {
                    let rows: Vec<Vec<BigRational>> = (0..ndim(w))
                        .map(|r| (0..mdim(w)).map(|c| v[var(w, r, c)].clone()).collect())
                        .collect();
                    if rows.is_empty() {
                        RationalMatrix::zeros(0, mdim(w))
                    } else {
                        RationalMatrix::from_rows(rows)
                    }
                })
                .collect()
        })
        .collect();
    Ok(HomExtResult {
        hom_dim: vars - rank,
        ext_dim: eqs - rank,
        hom_basis,
    })
}

/// The indecomposable projective `P_i`: `(P_i)_j` has the paths `i -> j` as
/// basis, and an arrow `a` sends a path `p` to `a p`.
pub fn projective_representation(q: &Quiver, i: usize) -> Result<RationalRepresentation> {
    Ok(projective_with_basis(q, i)?.0)
}

/// [`projective_representation`] together with the path basis at each vertex.
pub fn projective_with_basis(q: &Quiver, i: usize) -> Result<(RationalRepresentation, Vec<Vec<Path>>)> {
    if i >= q.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{i}")));
    }
    let mut basis: Vec<Vec<Path>> = vec![Vec::new(); q.vertex_count()];
    for p in q.paths_from(i)? {
        basis[p.target].push(p);
    }
    let position: HashMap<&Path, usize> = basis
        .iter()
        .flat_map(|paths| paths.iter().enumerate().map(|(k, p)| (p, k)))
        .collect();
    let dims = DimensionVector::new(basis.iter().map(|b| b.len() as i64).collect())?;
    let one = BigRational::from_integer(BigInt::one());
    let matrices = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            let mut m = RationalMatrix::zeros(basis[arrow.target].len(), basis[arrow.source].len());
            for (col, p) in basis[arrow.source].iter().enumerate() {
                let extended = p
                    .concat(&Path::arrow(q, a).expect("arrow index in range"))
                    .expect("arrow starts where the path ends");
                m.set(position[&extended], col, one.clone());
            }
            m
        })
        .collect();
    let rep = RationalRepresentation::new(q, dims, matrices)?;
    Ok((rep, basis))
}

impl HomExtResult {
    /// Checks that each basis element really is a morphism `M -> N`.
    pub fn basis_is_morphisms(&self, q: &Quiver, m: &RationalRepresentation, n: &RationalRepresentation) -> bool {
        self.hom_basis.iter().all(|f| {
            q.arrows().iter().enumerate().all(|(k, a)| {
                let lhs = &f[a.target] * &m.arrow_matrices[k];
                let rhs = &n.arrow_matrices[k] * &f[a.source];
                lhs == rhs
            })
        })
    }
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
    fn endomorphism_table_of_three_vertex_quiver() {
        let q = three_vertex();
        let d = dv(&[1, 1, 1]);
        let report = assumptions_report(&q, &d, &q.canonical_stability(&d).unwrap()).unwrap();
        let end = endomorphism_dimensions(&q, &d, Some(&report)).unwrap();
        assert_eq!(end.total, 9);
        assert_eq!(end.table.get(1, 2), 2);
        assert!(end.hypotheses_verified);
        assert!(end.warnings.is_empty());
    }

    #[test]
    fn endomorphism_table_without_arrows_is_identity() {
        let q = Quiver::with_numbered_vertices(4, []).unwrap();
        let end = endomorphism_dimensions(&q, &dv(&[1, 2, 3, 4]), None).unwrap();
        assert_eq!(end.total, 4);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(end.table.get(i, j), u64::from(i == j));
            }
        }
        assert!(!end.hypotheses_verified);
    }

    #[test]
    fn kronecker_presentation() {
        let t = tangent_presentation(&Quiver::kronecker(2), &dv(&[1, 1]), &theta(&[1, -1])).unwrap();
        assert_eq!(t.psi.len(), 4);
        assert_eq!(t.psi, [vec![-1, 1], vec![0, 0], vec![0, 0], vec![-1, 1]]);
        assert_eq!(t.psi_rank(), 1);
        assert_eq!(t.cokernel_dim(), 3);
        assert!(t.composite_vanishes());
    }

    #[test]
    fn point_presentation() {
        let q = Quiver::with_numbered_vertices(1, []).unwrap();
        let t = tangent_presentation(&q, &dv(&[1]), &theta(&[0])).unwrap();
        assert_eq!(t.phi, [vec![1]]);
        assert!(t.psi.is_empty());
        assert_eq!(t.cokernel_dim(), 0);
    }

    #[test]
    fn three_vertex_presentation() {
        let q = three_vertex();
        let d = dv(&[1, 1, 1]);
        let t = tangent_presentation(&q, &d, &q.canonical_stability(&d).unwrap()).unwrap();
        assert_eq!(t.arrow_labels.len(), 8);
        assert_eq!(t.psi_rank(), 2);
    }

    #[test]
    fn presentation_preconditions() {
        let disconnected = Quiver::with_numbered_vertices(2, []).unwrap();
        assert_eq!(
            tangent_presentation(&disconnected, &dv(&[1, 1]), &theta(&[0, 0])).unwrap_err(),
            Error::DisconnectedQuiver { components: 2 }
        );
        assert!(matches!(
            tangent_presentation(&Quiver::kronecker(2), &dv(&[1, 0]), &theta(&[0, 5])),
            Err(Error::UnsupportedDimensionVector(_))
        ));
        let cyclic = Quiver::with_numbered_vertices(2, [(0, 1), (1, 0)]).unwrap();
        assert!(matches!(
            tangent_presentation(&cyclic, &dv(&[1, 1]), &theta(&[1, -1])),
            Err(Error::CyclicQuiver { .. })
        ));
    }

    #[test]
    fn vector_fields_examples() {
        let q = three_vertex();
        let d = dv(&[1, 1, 1]);
        let fields = vector_fields_dim(&q, &d, &theta(&[2, 1, -3]), false).unwrap();
        assert_eq!(fields.dim, 6);
        assert!(fields.reliable);

        let kron = vector_fields_dim(&Quiver::kronecker(2), &dv(&[1, 1]), &theta(&[1, -1]), false).unwrap();
        assert_eq!(kron.dim, 3);
    }

    #[test]
    fn vector_fields_refuse_without_strong_ample_stability() {
        let q = three_vertex();
        let d = dv(&[1, 1, 1]);
        let err = vector_fields_dim(&q, &d, &theta(&[2, -1, -1]), false).unwrap_err();
        assert_eq!(
            err,
            Error::AssumptionViolated {
                assumption: "strongly_amply_stable".into(),
                witness: Some(vec![1, 0, 1])
            }
        );
        let forced = vector_fields_dim(&q, &d, &theta(&[2, -1, -1]), true).unwrap();
        assert_eq!(forced.dim, 6);
        assert!(!forced.reliable);
        assert!(forced.warnings[0].starts_with("UNRELIABLE"));
    }

    #[test]
    fn hochschild_examples() {
        assert_eq!(hochschild1_dim(&three_vertex()).unwrap(), 6);
        assert_eq!(hochschild1_dim(&Quiver::linear(2)).unwrap(), 0);
        assert_eq!(hochschild1_dim(&Quiver::kronecker(2)).unwrap(), 3);
        assert_eq!(hochschild1_dim(&Quiver::with_numbered_vertices(3, []).unwrap()).unwrap(), 0);
    }

    #[test]
    fn consistency_examples() {
        let q = three_vertex();
        let d = dv(&[1, 1, 1]);
        let check = consistency_hh1_vs_vector_fields(&q, &d, &theta(&[2, 1, -3]), false).unwrap();
        assert!(check.passed);
        assert_eq!((check.vector_fields, check.hochschild1), (6, 6));
        let check =
            consistency_hh1_vs_vector_fields(&Quiver::kronecker(2), &dv(&[1, 1]), &theta(&[1, -1]), false).unwrap();
        assert_eq!((check.vector_fields, check.hochschild1), (3, 3));
    }

    #[test]
    fn consistency_on_a2_needs_override() {
        // d = (1, 1) on A_2 has <e, d - e> = -1 > -2, so the strong criterion fails.
        let q = Quiver::linear(2);
        let d = dv(&[1, 1]);
        assert!(consistency_hh1_vs_vector_fields(&q, &d, &theta(&[1, -1]), false).is_err());
        let check = consistency_hh1_vs_vector_fields(&q, &d, &theta(&[1, -1]), true).unwrap();
        assert!(check.passed);
        assert_eq!((check.vector_fields, check.hochschild1), (0, 0));
    }

    #[test]
    fn kronecker_projectives() {
        let q = Quiver::kronecker(2);
        let p1 = projective_representation(&q, 0).unwrap();
        let p2 = projective_representation(&q, 1).unwrap();
        assert_eq!(p1.dims, dv(&[1, 2]));
        assert_eq!(p2.dims, dv(&[0, 1]));
        assert_eq!(p1.arrow_matrices[0], RationalMatrix::from_integers(2, 1, &[1, 0]));
        assert_eq!(p1.arrow_matrices[1], RationalMatrix::from_integers(2, 1, &[0, 1]));
        let result = hom_ext(&q, &p2, &p1).unwrap();
        assert_eq!((result.hom_dim, result.ext_dim), (2, 0));
        assert!(result.basis_is_morphisms(&q, &p2, &p1));
    }

    #[test]
    fn projective_dims_follow_path_counts() {
        let q = three_vertex();
        assert_eq!(projective_representation(&q, 0).unwrap().dims, dv(&[1, 1, 3]));
        let sink = projective_representation(&q, 2).unwrap();
        assert_eq!(sink, RationalRepresentation::simple(&q, 2).unwrap());
    }

    #[test]
    fn simple_representations() {
        let q = Quiver::linear(2);
        let s1 = RationalRepresentation::simple(&q, 0).unwrap();
        let s2 = RationalRepresentation::simple(&q, 1).unwrap();
        let end = hom_ext(&q, &s2, &s2).unwrap();
        assert_eq!((end.hom_dim, end.ext_dim), (1, 0));
        let ext = hom_ext(&q, &s1, &s2).unwrap();
        assert_eq!((ext.hom_dim, ext.ext_dim), (0, 1));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let q = Quiver::linear(2);
        let bad = RationalRepresentation::new(&q, dv(&[1, 1]), vec![RationalMatrix::zeros(2, 1)]);
        assert!(matches!(bad, Err(Error::QuiverMismatch(_))));
        let other = RationalRepresentation::simple(&Quiver::kronecker(2), 0).unwrap();
        let s = RationalRepresentation::simple(&q, 0).unwrap();
        assert!(matches!(hom_ext(&q, &s, &other), Err(Error::QuiverMismatch(_))));
    }
}
