//! Machine-readable reports and their plain-text rendering.
//!
//! The JSON form is the [`Report`] struct serialized as is; unknown fields are
//! rejected on the way back in, so deserializing a report checks it against
//! the schema.  Every number printed in the text form also occurs in the JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::spec::ArrowSpec;

pub const SCHEMA_VERSION: u32 = 1;

/// Statements the analyses rely on but never compute.
pub const ASSUMED_NOT_VERIFIED: [&str; 2] = [
    "higher cohomology of the universal representation terms vanishes on the moduli space",
    "global vector fields are computed by the cokernel of the tangent presentation",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input: InputSummary,
    pub assumptions: AssumptionsSummary,
    pub hypotheses: Hypotheses,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimensions: Option<Dimensions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<FramingSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    pub verifications: Vec<Verification>,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSummary {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub vertex_count: usize,
    pub arrow_count: usize,
    pub dimension: Vec<i64>,
    pub stability: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSummary {
    pub assumption: String,
    pub vector: Vec<i64>,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssumptionsSummary {
    pub acyclic: bool,
    pub cycle: Option<Vec<usize>>,
    pub pairing: i64,
    pub pairing_zero: bool,
    pub gcd: i64,
    pub indivisible: bool,
    pub coprime: bool,
    pub strongly_amply_stable: bool,
    /// `yes`, `unknown` or `no`.
    pub amply_stable: String,
    pub witnesses: Vec<WitnessSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hypotheses {
    pub verified: Vec<String>,
    pub failed: Vec<String>,
    /// Checked but neither confirmed nor refuted.
    pub undecided: Vec<String>,
    pub assumed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Refusal {
    pub assumption: String,
    pub witness: Option<Vec<i64>>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFieldsSummary {
    pub value: Option<usize>,
    pub reliable: bool,
    pub refusal: Option<Refusal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dimensions {
    pub moduli_dim: i64,
    /// `dim Hom(U_i, U_j)`, row `i`, column `j`; absent for cyclic quivers.
    pub endomorphism_table: Option<Vec<Vec<u64>>>,
    pub endomorphism_total: Option<u64>,
    pub hh1: Option<u64>,
    pub vector_fields: VectorFieldsSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscrepancySummary {
    pub vector: Vec<i64>,
    pub predicted: Option<String>,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BSetSummary {
    pub passed: bool,
    pub checked: usize,
    pub discrepancies: Vec<DiscrepancySummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramingSummary {
    pub i: String,
    pub j: String,
    pub scale: i64,
    pub minimal_scale: i64,
    pub below_minimal_scale: bool,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub dimension: Vec<i64>,
    pub stability: Vec<i64>,
    pub framed_amply_stable: String,
    pub b_sets: BSetSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSummary {
    pub source: String,
    pub target: String,
    /// Arrow indices in the framed quiver.
    pub arrows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionSummary {
    pub case: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub dimension: Vec<i64>,
    pub stability: Vec<i64>,
    pub marked: [String; 2],
    pub connecting_paths: [PathSummary; 2],
    pub pairing: i64,
    pub thin_at_marked: bool,
    pub reduced_path_count: Option<u64>,
    pub base_path_count: Option<u64>,
    pub path_bijection: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSummary {
    pub prime: u64,
    pub budget: u64,
    pub seed: u64,
    /// `exhaustive` or `sampled`.
    pub mode: String,
    pub total_points: u128,
    pub points_checked: u64,
    pub failures: usize,
    /// Arrow matrices (row-major entries) of the first failing points.
    pub failure_examples: Vec<Vec<Vec<u64>>>,
    pub weight_checks: usize,
    pub weight_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verification {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn arrows(list: &[ArrowSpec]) -> String {
    let parts: Vec<String> = list.iter().map(|a| format!("{}->{}", a.from, a.to)).collect();
    parts.join(" ")
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_input(&mut out);
        self.render_assumptions(&mut out);
        if let Some(d) = &self.dimensions {
            render_dimensions(&mut out, d);
        }
        if let Some(f) = &self.framing {
            render_framing(&mut out, f);
        }
        if let Some(r) = &self.reduction {
            render_reduction(&mut out, r);
        }
        if let Some(o) = &self.oracle {
            render_oracle(&mut out, o);
        }
        if !self.verifications.is_empty() {
            out.push_str("checks:\n");
            for v in &self.verifications {
                let status = if v.passed { "pass" } else { "FAIL" };
                let _ = writeln!(out, "  {}: {status} ({})", v.name, v.detail);
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }

    fn render_input(&self, out: &mut String) {
        let i = &self.input;
        let _ = writeln!(
            out,
            "quiver: {} vertices [{}], {} arrows [{}]",
            i.vertex_count,
            i.vertices.join(" "),
            i.arrow_count,
            arrows(&i.arrows)
        );
        let _ = writeln!(out, "dimension vector: {}", vector(&i.dimension));
        let _ = writeln!(out, "stability: {}", vector(&i.stability));
    }

    fn render_assumptions(&self, out: &mut String) {
        let a = &self.assumptions;
        out.push_str("assumptions:\n");
        let _ = writeln!(out, "  acyclic: {}", yes_no(a.acyclic));
        let _ = writeln!(out, "  indivisible: {}", yes_no(a.indivisible));
        let _ = writeln!(out, "  coprime: {}", yes_no(a.coprime));
        let _ = writeln!(out, "  strongly amply stable: {}", yes_no(a.strongly_amply_stable));
        let _ = writeln!(out, "  amply stable: {}", a.amply_stable);
        for w in &a.witnesses {
            let _ = writeln!(
                out,
                "  witness for {}: {} (value {})",
                w.assumption,
                vector(&w.vector),
                w.value
            );
        }
        let h = &self.hypotheses;
        if !h.verified.is_empty() {
            let _ = writeln!(out, "verified: {}", h.verified.join(", "));
        }
        if !h.failed.is_empty() {
            let _ = writeln!(out, "failed: {}", h.failed.join(", "));
        }
        if !h.undecided.is_empty() {
            let _ = writeln!(out, "undecided: {}", h.undecided.join(", "));
        }
        for s in &h.assumed {
            let _ = writeln!(out, "assumed, not computed: {s}");
        }
    }
}

fn render_dimensions(out: &mut String, d: &Dimensions) {
    let _ = writeln!(out, "moduli dimension: {}", d.moduli_dim);
    if let (Some(table), Some(total)) = (&d.endomorphism_table, d.endomorphism_total) {
        let _ = writeln!(out, "endomorphism algebra dimension: {total}");
        for row in table {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
    }
    if let Some(hh1) = d.hh1 {
        let _ = writeln!(out, "first Hochschild cohomology: {hh1}");
    }
    let v = &d.vector_fields;
    match (&v.value, &v.refusal) {
        (Some(value), _) if v.reliable => {
            let _ = writeln!(out, "vector fields: {value}");
        }
        (Some(value), _) => {
            let _ = writeln!(out, "vector fields: {value} (UNRELIABLE, hypotheses overridden)");
        }
        (None, Some(r)) => {
            let _ = writeln!(out, "vector fields: refused, {}", r.message);
        }
        (None, None) => {
            let _ = writeln!(out, "vector fields: not computed");
        }
    }
}

fn render_framing(out: &mut String, f: &FramingSummary) {
    let _ = writeln!(
        out,
        "framing at {} and {} with scale {} (minimal {})",
        f.i, f.j, f.scale, f.minimal_scale
    );
    let _ = writeln!(out, "  framed vertices: [{}]", f.vertices.join(" "));
    let _ = writeln!(out, "  framed arrows: [{}]", arrows(&f.arrows));
    let _ = writeln!(out, "  framed dimension: {}", vector(&f.dimension));
    let _ = writeln!(out, "  framed stability: {}", vector(&f.stability));
    let _ = writeln!(out, "  framed amply stable: {}", f.framed_amply_stable);
    let _ = writeln!(
        out,
        "  sign partition {}: {} subdimension vectors checked, {} discrepancies",
        if f.b_sets.passed { "matches" } else { "differs" },
        f.b_sets.checked,
        f.b_sets.discrepancies.len()
    );
    for d in &f.b_sets.discrepancies {
        let _ = writeln!(
            out,
            "    {}: predicted {}, actual {}",
            vector(&d.vector),
            d.predicted.as_deref().unwrap_or("none"),
            d.actual
        );
    }
}

fn render_reduction(out: &mut String, r: &ReductionSummary) {
    let _ = writeln!(out, "reduction case: {}", r.case);
    let _ = writeln!(out, "  reduced vertices: [{}]", r.vertices.join(" "));
    let _ = writeln!(out, "  reduced arrows: [{}]", arrows(&r.arrows));
    let _ = writeln!(out, "  reduced dimension: {}", vector(&r.dimension));
    let _ = writeln!(out, "  reduced stability: {}", vector(&r.stability));
    let _ = writeln!(out, "  marked vertices: {} {}", r.marked[0], r.marked[1]);
    for p in &r.connecting_paths {
        let parts: Vec<String> = p.arrows.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "  connecting path {} -> {}: [{}]", p.source, p.target, parts.join(" "));
    }
    let _ = writeln!(out, "  reduced pairing: {}", r.pairing);
    if let (Some(a), Some(b)) = (r.reduced_path_count, r.base_path_count) {
        let _ = writeln!(out, "  paths between marked vertices: {a} reduced, {b} base");
    }
}

fn render_oracle(out: &mut String, o: &OracleSummary) {
    let _ = writeln!(
        out,
        "oracle over F_{} ({}, budget {}, seed {})",
        o.prime, o.mode, o.budget, o.seed
    );
    let _ = writeln!(
        out,
        "{}/{} points verified, {} failures",
        o.points_checked, o.total_points, o.failures
    );
    let _ = writeln!(
        out,
        "weight law: {} checks, {} failures",
        o.weight_checks, o.weight_failures
    );
}
