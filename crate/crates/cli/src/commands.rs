//! The four subcommands and their exit codes.
//!
//! 0 means every hypothesis and check passed, 1 means a hypothesis or a
//! verification failed (the report is still produced), 2 means the input
//! could not be used.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use quiver_moduli::cohomology::{endomorphism_dimensions, hochschild1_dim, vector_fields_dim};
use quiver_moduli::field::PrimeField;
use quiver_moduli::framing::{
    check_path_correspondence, double_frame, framed_amply_stable, framed_b_sets_report,
    minimal_framing_scale, reduce, verify_reduction_pairing, FramingResult, ReductionResult,
};
use quiver_moduli::oracle::{
    verify_double_framing_equivalence, verify_semiinvariant_weight, CoverageMode,
    FiniteFieldRepresentation, GroupElement, OracleOptions, DEFAULT_BUDGET, DEFAULT_SAMPLE_SIZE,
    DEFAULT_SEED,
};
use quiver_moduli::stability::moduli_dimension;
use quiver_moduli::{assumptions_report, Assumption, AssumptionsReport, Error, Quiver};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{
    AssumptionsSummary, BSetSummary, Dimensions, DiscrepancySummary, FramingSummary, Hypotheses,
    InputSummary, OracleSummary, PathSummary, ReductionSummary, Refusal, Report,
    VectorFieldsSummary, Verification, WitnessSummary, ASSUMED_NOT_VERIFIED, SCHEMA_VERSION,
};
use crate::spec::{self, ArrowSpec, ParsedSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Default prime for the oracle.
pub const DEFAULT_PRIME: u64 = 2;
/// Random representations drawn for the weight-law checks.
const WEIGHT_ROUNDS: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "qmod", version, about = "Stability, framing and dimension checks for quiver moduli")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the standing hypotheses and compute the dimension formulas.
    Analyze { spec: PathBuf },
    /// Build the doubly framed datum and compare sign partitions.
    Frame {
        /// Path to the JSON quiver description.
        spec: PathBuf,
        /// Source framing vertex (defaults to the input's framing block).
        i: Option<String>,
        /// Target framing vertex.
        j: Option<String>,
    },
    /// Reduce the framed datum to one thin at the marked vertices.
    Reduce {
        spec: PathBuf,
        i: Option<String>,
        j: Option<String>,
    },
    /// Brute-force the framed stability equivalence over a prime field.
    Verify { spec: PathBuf },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Framing scale N (defaults to the input file, then to the minimal scale).
    #[arg(long, global = true)]
    pub scale: Option<i64>,
    /// Field order for verify (a prime, default 2).
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Cap on enumerated points and subrepresentation candidates.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Seed for sampled verification.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Report the vector-field formula even when its hypotheses fail.
    #[arg(long, global = true)]
    pub override_assumptions: bool,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

impl Outcome {
    fn input_error(message: impl std::fmt::Display) -> Self {
        Self {
            exit_code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            report: None,
        }
    }
}

pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            Outcome {
                exit_code: if code == 0 { EXIT_OK } else { EXIT_INPUT },
                stdout,
                stderr,
                report: None,
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let path = match &cli.command {
        Command::Analyze { spec } | Command::Frame { spec, .. } | Command::Reduce { spec, .. } | Command::Verify { spec } => spec,
    };
    let spec = match spec::load(path) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(e),
    };
    let flags = &cli.flags;
    let result = match &cli.command {
        Command::Analyze { .. } => analyze(&spec, flags),
        Command::Frame { i, j, .. } => frame(&spec, flags, i.as_deref(), j.as_deref()),
        Command::Reduce { i, j, .. } => reduce_command(&spec, flags, i.as_deref(), j.as_deref()),
        Command::Verify { .. } => verify(&spec, flags),
    };
    let report = match result {
        Ok(r) => r,
        Err(message) => return Outcome::input_error(message),
    };
    let json = report.to_json();
    if let Some(out) = &flags.out {
        if let Err(e) = std::fs::write(out, format!("{json}\n")) {
            return Outcome::input_error(format!("cannot write {}: {e}", out.display()));
        }
    }
    let stdout = if flags.json { format!("{json}\n") } else { report.render_text() };
    Outcome {
        exit_code: report.exit_code,
        stdout,
        stderr: String::new(),
        report: Some(report),
    }
}

type CommandResult = Result<Report, String>;

fn arrow_specs(q: &Quiver) -> Vec<ArrowSpec> {
    q.arrows()
        .iter()
        .map(|a| ArrowSpec {
            from: q.vertex_name(a.source).to_owned(),
            to: q.vertex_name(a.target).to_owned(),
        })
        .collect()
}

fn summarize_assumptions(r: &AssumptionsReport, spec: &ParsedSpec) -> AssumptionsSummary {
    AssumptionsSummary {
        acyclic: r.acyclic,
        cycle: r.cycle.clone(),
        pairing: r.pairing,
        pairing_zero: r.pairing_zero,
        gcd: spec.dimension.gcd(),
        indivisible: r.indivisible,
        coprime: r.coprime,
        strongly_amply_stable: r.strongly_amply_stable,
        amply_stable: r.amply_stable.to_string(),
        witnesses: r
            .failing_witnesses
            .iter()
            .map(|w| WitnessSummary {
                assumption: w.check.name().to_owned(),
                vector: w.vector.values().to_vec(),
                value: w.value,
            })
            .collect(),
    }
}

fn hypotheses(r: &AssumptionsReport) -> Hypotheses {
    let all = [
        Assumption::Acyclic,
        Assumption::PairingZero,
        Assumption::Indivisible,
        Assumption::Coprime,
        Assumption::StronglyAmplyStable,
        Assumption::AmplyStable,
    ];
    let names = |f: &dyn Fn(Assumption) -> bool| -> Vec<String> {
        all.iter().filter(|&&a| f(a)).map(|a| a.name().to_owned()).collect()
    };
    Hypotheses {
        verified: names(&|a| r.holds(a)),
        failed: names(&|a| a != Assumption::AmplyStable && !r.holds(a)),
        undecided: names(&|a| a == Assumption::AmplyStable && !r.holds(a)),
        assumed: ASSUMED_NOT_VERIFIED.iter().map(|s| (*s).to_owned()).collect(),
    }
}

fn base_report(command: &str, spec: &ParsedSpec) -> Result<(Report, AssumptionsReport), String> {
    let r = assumptions_report(&spec.quiver, &spec.dimension, &spec.stability).map_err(|e| e.to_string())?;
    let q = &spec.quiver;
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: command.to_owned(),
        input: InputSummary {
            vertices: q.vertex_names().to_vec(),
            arrows: arrow_specs(q),
            vertex_count: q.vertex_count(),
            arrow_count: q.arrow_count(),
            dimension: spec.dimension.values().to_vec(),
            stability: spec.stability.values().to_vec(),
        },
        assumptions: summarize_assumptions(&r, spec),
        hypotheses: hypotheses(&r),
        dimensions: None,
        framing: None,
        reduction: None,
        oracle: None,
        verifications: Vec::new(),
        warnings: Vec::new(),
        exit_code: EXIT_OK,
    };
    Ok((report, r))
}

fn refusal(e: &Error) -> Refusal {
    let (assumption, witness) = match e {
        Error::AssumptionViolated { assumption, witness } => (assumption.clone(), witness.clone()),
        Error::CyclicQuiver { cycle } => (
            Assumption::Acyclic.name().to_owned(),
            Some(cycle.iter().map(|&a| a as i64).collect()),
        ),
        Error::DisconnectedQuiver { .. } => ("connected".to_owned(), None),
        Error::UnsupportedDimensionVector(_) => ("full_support".to_owned(), None),
        _ => ("input".to_owned(), None),
    };
    Refusal {
        assumption,
        witness,
        message: e.to_string(),
    }
}

fn resolve_vertex(spec: &ParsedSpec, name: &str) -> Result<usize, String> {
    spec.vertex(name).ok_or_else(|| format!("unknown vertex `{name}`"))
}

fn framing_vertices(spec: &ParsedSpec, i: Option<&str>, j: Option<&str>) -> Result<(usize, usize), String> {
    let block = spec.file.framing.as_ref();
    let i = i.or(block.map(|b| b.i.as_str()));
    let j = j.or(block.map(|b| b.j.as_str()));
    match (i, j) {
        (Some(i), Some(j)) => Ok((resolve_vertex(spec, i)?, resolve_vertex(spec, j)?)),
        _ => Err("framing vertices missing: pass I and J or add a framing block to the spec".to_owned()),
    }
}

fn framing_scale(spec: &ParsedSpec, flags: &Flags) -> Result<i64, String> {
    let explicit = flags.scale.or(spec.file.framing.as_ref().and_then(|b| b.scale));
    match explicit {
        Some(n) if n < 1 => Err(format!("framing scale must be at least 1, got {n}")),
        Some(n) => Ok(n),
        None => minimal_framing_scale(&spec.quiver, &spec.dimension, &spec.stability).map_err(|e| e.to_string()),
    }
}

fn build_framing(
    spec: &ParsedSpec,
    flags: &Flags,
    i: Option<&str>,
    j: Option<&str>,
) -> Result<FramingResult, String> {
    let (i, j) = framing_vertices(spec, i, j)?;
    let scale = framing_scale(spec, flags)?;
    double_frame(&spec.quiver, &spec.dimension, &spec.stability, i, j, scale).map_err(|e| e.to_string())
}

fn framing_summary(f: &FramingResult, base: &AssumptionsReport) -> Result<FramingSummary, String> {
    let q = &f.base_quiver;
    let minimal = minimal_framing_scale(q, &f.base_dimension, &f.base_stability).map_err(|e| e.to_string())?;
    let b = framed_b_sets_report(f).map_err(|e| e.to_string())?;
    let (i, j) = f.framed_at;
    Ok(FramingSummary {
        i: q.vertex_name(i).to_owned(),
        j: q.vertex_name(j).to_owned(),
        scale: f.framing_scale,
        minimal_scale: minimal,
        below_minimal_scale: f.framing_scale < minimal,
        vertices: f.framed_quiver.vertex_names().to_vec(),
        arrows: arrow_specs(&f.framed_quiver),
        dimension: f.framed_dimension.values().to_vec(),
        stability: f.framed_stability.values().to_vec(),
        framed_amply_stable: framed_amply_stable(base, &f.base_dimension, i, j).to_string(),
        b_sets: BSetSummary {
            passed: b.passed,
            checked: b.checked,
            discrepancies: b
                .discrepancies
                .iter()
                .map(|d| DiscrepancySummary {
                    vector: d.vector.values().to_vec(),
                    predicted: d.predicted.map(|s| s.to_string()),
                    actual: d.actual.to_string(),
                })
                .collect(),
        },
    })
}

fn b_set_verification(f: &FramingSummary) -> Verification {
    let detail = match f.b_sets.discrepancies.first() {
        None => format!("{} subdimension vectors agree", f.b_sets.checked),
        Some(d) => format!(
            "{} discrepancies, first at ({})",
            f.b_sets.discrepancies.len(),
            d.vector.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
        ),
    };
    Verification {
        name: "framed_sign_partition".to_owned(),
        passed: f.b_sets.passed,
        detail,
    }
}

fn reduction_summary(f: &FramingResult, r: &ReductionResult) -> Result<ReductionSummary, String> {
    let check = verify_reduction_pairing(r);
    let correspondence = check_path_correspondence(f, r).map_err(|e| e.to_string())?;
    let rq = &r.reduced_quiver;
    let fq = &f.framed_quiver;
    let path = |p: &quiver_moduli::Path| PathSummary {
        source: fq.vertex_name(p.source).to_owned(),
        target: fq.vertex_name(p.target).to_owned(),
        arrows: p.arrows.clone(),
    };
    Ok(ReductionSummary {
        case: r.case.tag().to_owned(),
        vertices: rq.vertex_names().to_vec(),
        arrows: arrow_specs(rq),
        dimension: r.reduced_dimension.values().to_vec(),
        stability: r.reduced_stability.values().to_vec(),
        marked: [
            rq.vertex_name(r.marked_vertices.0).to_owned(),
            rq.vertex_name(r.marked_vertices.1).to_owned(),
        ],
        connecting_paths: [path(&r.connecting_paths.0), path(&r.connecting_paths.1)],
        pairing: check.pairing,
        thin_at_marked: check.thin_at_marked,
        reduced_path_count: check.reduced_path_count,
        base_path_count: check.base_path_count,
        path_bijection: correspondence.bijective && check.passed,
    })
}

fn reduction_verification(r: &ReductionSummary) -> Verification {
    Verification {
        name: "reduced_datum".to_owned(),
        passed: r.pairing == 0 && r.thin_at_marked && r.path_bijection,
        detail: format!(
            "pairing {}, thin at marked vertices: {}, path bijection: {}",
            r.pairing, r.thin_at_marked, r.path_bijection
        ),
    }
}

fn refusal_verification(name: &str, e: &Error) -> Verification {
    Verification {
        name: name.to_owned(),
        passed: false,
        detail: format!("refused: {e}"),
    }
}

fn finish(mut report: Report, hypotheses_matter: bool, base: &AssumptionsReport) -> Report {
    let checks_pass = report.verifications.iter().all(|v| v.passed);
    let ok = checks_pass && (!hypotheses_matter || base.all_hold());
    report.exit_code = if ok { EXIT_OK } else { EXIT_FAILED };
    report
}

pub fn analyze(spec: &ParsedSpec, flags: &Flags) -> CommandResult {
    let (mut report, base) = base_report("analyze", spec)?;
    let (q, d, theta) = (&spec.quiver, &spec.dimension, &spec.stability);

    let moduli_dim = moduli_dimension(q, d).map_err(|e| e.to_string())?;
    let (table, total, hh1) = if base.acyclic {
        let endo = endomorphism_dimensions(q, d, Some(&base)).map_err(|e| e.to_string())?;
        let hh1 = hochschild1_dim(q).map_err(|e| e.to_string())?;
        report.warnings.extend(endo.warnings);
        (Some(endo.table.rows()), Some(endo.total), Some(hh1))
    } else {
        (None, None, None)
    };
    let vector_fields = match vector_fields_dim(q, d, theta, flags.override_assumptions) {
        Ok(v) => {
            report.warnings.extend(v.warnings);
            VectorFieldsSummary {
                value: Some(v.dim),
                reliable: v.reliable,
                refusal: None,
            }
        }
        Err(e) => VectorFieldsSummary {
            value: None,
            reliable: false,
            refusal: Some(refusal(&e)),
        },
    };
    if let (Some(v), Some(h)) = (vector_fields.value, hh1) {
        report.verifications.push(Verification {
            name: "vector_fields_match_hh1".to_owned(),
            passed: v as u64 == h,
            detail: format!("cokernel dimension {v}, Hochschild dimension {h}"),
        });
    }
    report.dimensions = Some(Dimensions {
        moduli_dim,
        endomorphism_table: table,
        endomorphism_total: total,
        hh1,
        vector_fields,
    });

    if spec.file.framing.is_some() {
        let framing = build_framing(spec, flags, None, None)?;
        let summary = framing_summary(&framing, &base)?;
        report.verifications.push(b_set_verification(&summary));
        report.framing = Some(summary);
        match reduce(&framing) {
            Ok(r) => {
                let summary = reduction_summary(&framing, &r)?;
                report.verifications.push(reduction_verification(&summary));
                report.reduction = Some(summary);
            }
            Err(e) => report.warnings.push(format!("reduction skipped: {e}")),
        }
    }
    Ok(finish(report, true, &base))
}

pub fn frame(spec: &ParsedSpec, flags: &Flags, i: Option<&str>, j: Option<&str>) -> CommandResult {
    let (mut report, base) = base_report("frame", spec)?;
    let framing = build_framing(spec, flags, i, j)?;
    let summary = framing_summary(&framing, &base)?;
    if summary.below_minimal_scale {
        report.warnings.push(format!(
            "scale {} is below the minimal separating scale {}",
            summary.scale, summary.minimal_scale
        ));
    }
    report.verifications.push(b_set_verification(&summary));
    report.framing = Some(summary);
    Ok(finish(report, false, &base))
}

pub fn reduce_command(spec: &ParsedSpec, flags: &Flags, i: Option<&str>, j: Option<&str>) -> CommandResult {
    let (mut report, base) = base_report("reduce", spec)?;
    let framing = build_framing(spec, flags, i, j)?;
    report.framing = Some(framing_summary(&framing, &base)?);
    match reduce(&framing) {
        Ok(r) => {
            let summary = reduction_summary(&framing, &r)?;
            report.verifications.push(reduction_verification(&summary));
            report.reduction = Some(summary);
        }
        Err(e @ Error::AssumptionViolated { .. }) => {
            report.verifications.push(refusal_verification("reduction", &e));
        }
        Err(e) => return Err(e.to_string()),
    }
    Ok(finish(report, false, &base))
}

pub fn verify(spec: &ParsedSpec, flags: &Flags) -> CommandResult {
    let (mut report, base) = base_report("verify", spec)?;
    if spec.file.framing.is_none() {
        return Err("verify needs a framing block in the spec".to_owned());
    }
    let framing = build_framing(spec, flags, None, None)?;
    let summary = framing_summary(&framing, &base)?;
    if summary.below_minimal_scale {
        report.warnings.push(format!(
            "scale {} is below the minimal separating scale {}",
            summary.scale, summary.minimal_scale
        ));
    }
    report.framing = Some(summary);

    let block = spec.file.oracle.clone().unwrap_or_default();
    let prime = flags.prime.or(block.prime).unwrap_or(DEFAULT_PRIME);
    let field = PrimeField::new(prime).map_err(|e| e.to_string())?;
    let budget = flags.budget.or(block.budget).unwrap_or(DEFAULT_BUDGET as u64);
    let seed = flags.seed.or(block.seed).unwrap_or(DEFAULT_SEED);
    let options = OracleOptions {
        budget: budget as u128,
        seed,
        sample_size: DEFAULT_SAMPLE_SIZE,
    };

    let (i, j) = framing.framed_at;
    let equivalence = match verify_double_framing_equivalence(
        &spec.quiver,
        &spec.dimension,
        &spec.stability,
        i,
        j,
        framing.framing_scale,
        field,
        &options,
    ) {
        Ok(r) => r,
        Err(e @ Error::AssumptionViolated { .. }) => {
            report.verifications.push(refusal_verification("framed_stability_equivalence", &e));
            return Ok(finish(report, false, &base));
        }
        Err(Error::BudgetExceeded { required, budget }) => {
            return Err(format!(
                "a single point has {required} subrepresentation candidates, above the budget {budget}; raise --budget"
            ))
        }
        Err(e) => return Err(e.to_string()),
    };
    if let CoverageMode::Sampled { seed } = equivalence.mode {
        report.warnings.push(format!(
            "{} points exceed the budget {budget}; checked {} random points (seed {seed})",
            equivalence.total_points, equivalence.instances_checked
        ));
    }
    report.verifications.push(Verification {
        name: "framed_stability_equivalence".to_owned(),
        passed: equivalence.passed(),
        detail: format!(
            "{} points, {} failures",
            equivalence.instances_checked,
            equivalence.failures.len()
        ),
    });

    let (weight_checks, weight_failures) = weight_law(&framing, field, seed).map_err(|e| e.to_string())?;
    report.verifications.push(Verification {
        name: "semiinvariant_weight".to_owned(),
        passed: weight_failures == 0,
        detail: format!("{weight_checks} checks, {weight_failures} failures"),
    });

    report.oracle = Some(OracleSummary {
        prime,
        budget,
        seed,
        mode: match equivalence.mode {
            CoverageMode::Exhaustive => "exhaustive",
            CoverageMode::Sampled { .. } => "sampled",
        }
        .to_owned(),
        total_points: equivalence.total_points,
        points_checked: equivalence.instances_checked,
        failures: equivalence.failures.len(),
        failure_examples: equivalence
            .failures
            .iter()
            .take(3)
            .map(|f| f.point.iter().map(|m| m.entries().to_vec()).collect())
            .collect(),
        weight_checks,
        weight_failures,
    });
    Ok(finish(report, false, &base))
}

/// Weight law for every path `0 -> inf` on random framed representations.
fn weight_law(framing: &FramingResult, field: PrimeField, seed: u64) -> quiver_moduli::Result<(usize, usize)> {
    let q = &framing.framed_quiver;
    let d = &framing.framed_dimension;
    let paths = q.paths_between(framing.source_vertex(), framing.sink_vertex())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checks, mut failures) = (0, 0);
    for _ in 0..WEIGHT_ROUNDS {
        let m = FiniteFieldRepresentation::random(q, field, d.clone(), &mut rng)?;
        let g = GroupElement::random(&field, d, &mut rng);
        for path in &paths {
            checks += 1;
            if !verify_semiinvariant_weight(q, &m, path, &g)?.passed {
                failures += 1;
            }
        }
    }
    Ok((checks, failures))
}
