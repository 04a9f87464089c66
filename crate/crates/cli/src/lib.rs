//! Orchestration behind the `veeverify` binary: check selection, running a
//! plan against a configuration, exit codes and human-readable rendering.

use std::fmt::Write as _;
use std::str::FromStr;

use veeverify_core::identity::{self, LAMBDA_DIRECTIONS};
use veeverify_core::report::{ConfigSummary, RunReport, Witness};
use veeverify_core::{wdvv, CheckReport, Configuration, Error, NumericOptions, Rat, Result, Verdict};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckName {
    MainExact,
    MainNumeric,
    Eigen,
    Vee,
    Wdvv,
    Flat,
    ScalarM,
    LambdaInvariance,
}

impl CheckName {
    /// Every check, in the order `--all` runs them.
    pub const ALL: [CheckName; 8] = [
        CheckName::MainExact,
        CheckName::MainNumeric,
        CheckName::Eigen,
        CheckName::Vee,
        CheckName::Wdvv,
        CheckName::Flat,
        CheckName::ScalarM,
        CheckName::LambdaInvariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::MainExact => identity::MAIN_EXACT,
            CheckName::MainNumeric => identity::MAIN_NUMERIC,
            CheckName::Eigen => identity::EIGEN,
            CheckName::Vee => wdvv::VEE,
            CheckName::Wdvv => wdvv::WDVV,
            CheckName::Flat => wdvv::FLAT,
            CheckName::ScalarM => identity::SCALAR_M,
            CheckName::LambdaInvariance => identity::LAMBDA_INVARIANCE,
        }
    }

    pub fn is_sampled(self) -> bool {
        matches!(self, CheckName::MainNumeric | CheckName::Eigen | CheckName::Wdvv | CheckName::Flat)
    }
}

impl FromStr for CheckName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        CheckName::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let known: Vec<_> = CheckName::ALL.iter().map(|c| c.name()).collect();
            format!("unknown check {s:?} (expected one of {})", known.join(", "))
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunPlan {
    pub checks: Vec<CheckName>,
    pub options: NumericOptions,
    pub emit_matrices: bool,
}

impl RunPlan {
    pub fn new(checks: Vec<CheckName>, options: NumericOptions) -> Result<Self> {
        if checks.is_empty() {
            return Err(Error::InvalidParameter("no checks selected".into()));
        }
        if options.samples == 0 && checks.iter().any(|c| c.is_sampled()) {
            return Err(Error::InvalidParameter("--samples must be at least 1 for sampled checks".into()));
        }
        if !(options.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("--tol must be positive, got {}", options.tol)));
        }
        if options.precision < 2 {
            return Err(Error::InvalidParameter(format!("--precision must be at least 2 bits, got {}", options.precision)));
        }
        Ok(RunPlan { checks, options, emit_matrices: false })
    }

    pub fn with_matrices(mut self, emit: bool) -> Self {
        self.emit_matrices = emit;
        self
    }
}

fn run_one(config: &Configuration, check: CheckName, plan: &RunPlan) -> Result<CheckReport> {
    let opts = &plan.options;
    let frame = config.frame();
    match check {
        CheckName::MainExact => Ok(identity::main_identity_exact(config)),
        CheckName::MainNumeric => identity::main_identity_numeric(config, opts),
        CheckName::Eigen => identity::eigen_numeric(config, opts),
        CheckName::Vee => wdvv::vee_condition_exact(config, plan.emit_matrices),
        CheckName::Wdvv => wdvv::wdvv_numeric_in(config, frame, opts, plan.emit_matrices),
        CheckName::Flat => wdvv::flat_connection_numeric_in(config, frame, opts, plan.emit_matrices),
        CheckName::ScalarM => Ok(identity::scalar_mass_check(config)),
        CheckName::LambdaInvariance => identity::lambda_invariance(config, opts.seed, LAMBDA_DIRECTIONS),
    }
}

/// Run the plan's checks in order.
pub fn run(config: &Configuration, plan: &RunPlan) -> Result<RunReport> {
    let checks = plan.checks.iter().map(|&c| run_one(config, c, plan)).collect::<Result<Vec<_>>>()?;
    Ok(RunReport { configuration: ConfigSummary::of(config), checks })
}

/// 1 if anything failed, otherwise 3 if anything was inconclusive, else 0.
pub fn exit_code(report: &RunReport) -> i32 {
    let verdicts = || report.checks.iter().map(|c| c.verdict);
    if verdicts().any(|v| v == Verdict::Fail) {
        EXIT_FAIL
    } else if verdicts().any(|v| v == Verdict::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    }
}

/// Machine-readable record printed for invalid input.
pub fn error_record(e: &Error) -> String {
    serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string()
}

/// Parse `3`, `-1/2` and similar.
pub fn parse_rat(s: &str) -> std::result::Result<Rat, String> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: veeverify_core::field::Int = num.trim().parse().map_err(|_| format!("not a rational: {s:?}"))?;
    let den: veeverify_core::field::Int = den.trim().parse().map_err(|_| format!("not a rational: {s:?}"))?;
    if den == 0.into() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rat::new(num, den))
}

fn qjson(q: &veeverify_core::json::QElemJson, radicand: &veeverify_core::json::RatJson) -> String {
    let r = |x: &veeverify_core::json::RatJson| {
        if x.den == "1" {
            x.num.clone()
        } else {
            format!("{}/{}", x.num, x.den)
        }
    };
    let (a, b) = (r(&q.0), r(&q.1));
    if b == "0" {
        a
    } else if a == "0" {
        format!("{b}·√{}", r(radicand))
    } else {
        format!("{a} + {b}·√{}", r(radicand))
    }
}

fn witness_summary(w: &Witness, radicand: &veeverify_core::json::RatJson) -> String {
    match w {
        Witness::Class { pivot, plane, class, residual } => format!(
            "pivot {pivot}, plane {:?}, class {class:?}, residue {}",
            plane.members,
            qjson(residual, radicand)
        ),
        Witness::Plane { pivot, plane, residual, .. } => {
            format!("pivot {pivot}, plane {:?}, sum {}", plane.members, qjson(residual, radicand))
        }
        Witness::Sample { sample, point, pair, .. } => {
            let coords: Vec<String> = point.iter().map(|c| format!("{:.6}", c.0)).collect();
            let pair = pair.map(|[i, j]| format!(", indices ({i}, {j})")).unwrap_or_default();
            format!("sample {sample} at ({}){pair}", coords.join(", "))
        }
        Witness::Direction { lambda, reference, .. } => {
            format!("direction gives λ = {} instead of {}", qjson(lambda, radicand), qjson(reference, radicand))
        }
        Witness::Component { component, members } => {
            format!("component {component} (members {members:?}) has a non-scalar mass operator")
        }
    }
}

/// One line of configuration metadata, then one line per check.
pub fn render_human(report: &RunReport) -> String {
    let c = &report.configuration;
    let mut out = String::new();
    let mu = c.mu.as_ref().map(|m| qjson(m, &c.radicand)).unwrap_or_else(|| "not scalar".into());
    let _ = writeln!(
        out,
        "{}: {} members, ambient {}, span {}, λ = {}, μ = {}, S = {}, {} component(s)",
        if c.name.is_empty() { "configuration" } else { &c.name },
        c.members,
        c.ambient_dim,
        c.span_dim,
        qjson(&c.lambda, &c.radicand),
        mu,
        qjson(&c.s, &c.radicand),
        c.components
    );
    for check in &report.checks {
        let mark = match check.verdict {
            Verdict::Pass => "✓",
            Verdict::Fail => "✗",
            Verdict::Inconclusive => "?",
        };
        let _ = write!(out, "{mark} {:<18} {}", check.check, check.verdict);
        if let Some(n) = &check.numeric {
            let _ = write!(out, "  max residual {:.3e} (tol {:.1e}, {} samples", n.max_residual.0, n.tol.0, n.samples);
            if let Some(hi) = &n.escalated_residual {
                let _ = write!(out, ", escalated {:.3e}", hi.0);
            }
            out.push(')');
        }
        if let Some(w) = &check.witness {
            let _ = write!(out, "  [{}]", witness_summary(w, &c.radicand));
        }
        out.push('\n');
    }
    out
}
