//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the console.
//! A criterion whose literal wording is mathematically unattainable is
//! still printed as FAIL; the run only succeeds if such a failure matches a
//! documented conflict *and* its counter-evidence is confirmed here.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode, Stdio};
use std::time::{Duration, Instant};

use serde_json::Value;
use veeverify_core::families::{coxeter, deformed_a, deformed_c, Family};
use veeverify_core::field::{rat, QElem, Rat};
use veeverify_core::identity::{
    constant_s, cot_sum, eigen_residual, lambda_invariance, main_identity_exact, main_identity_numeric,
};
use veeverify_core::numeric::{SampleMode, Sampler};
use veeverify_core::report::Witness;
use veeverify_core::wdvv::{f_matrix, fd_cross_check, flat_connection_numeric, gram_g, vee_condition_exact, wdvv_numeric};
use veeverify_core::{build_config, Configuration, NumericOptions, Verdict};

const WDVV_TOL: f64 = 1e-8;
const FLAT_TOL: f64 = 1e-9;
const EIGEN_TOL: f64 = 1e-8;
const COT_REL_TOL: f64 = 1e-8;
const NEGATIVE_MIN_RESIDUAL: f64 = 1e-3;
const FD_TOL: f64 = 1e-3;
const FD_STEP: f64 = 1e-2;
const GRAM_REL_TOL: f64 = 1e-12;
const EXACT_TIME_LIMIT: Duration = Duration::from_secs(1);
const LAMBDA_DIRECTIONS: usize = 50;
const EIGEN_POINTS: usize = 100;
const CROSS_PAIRS: usize = 20;

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
    /// Reason a failure is expected, with its counter-evidence already confirmed.
    documented: Option<String>,
}

fn mults(pairs: &[(&str, Rat)]) -> BTreeMap<String, Rat> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn suite() -> Vec<Configuration> {
    let mut out = vec![
        coxeter(Family::A, 2, &mults(&[("all", rat(1, 1))])).unwrap(),
        coxeter(Family::A, 3, &mults(&[("all", rat(2, 1))])).unwrap(),
        coxeter(Family::B, 2, &mults(&[("short", rat(1, 1)), ("long", rat(2, 1))])).unwrap(),
        coxeter(Family::B, 3, &mults(&[("short", rat(3, 1)), ("long", rat(1, 2))])).unwrap(),
        coxeter(Family::D, 4, &mults(&[("all", rat(1, 1))])).unwrap(),
        coxeter(Family::G2, 2, &mults(&[("short", rat(1, 1)), ("long", rat(3, 1))])).unwrap(),
    ];
    for n in [2, 3] {
        for m in [rat(2, 1), rat(3, 1), rat(1, 2)] {
            out.push(deformed_a(n, m).unwrap());
        }
    }
    for (n, m, l) in [(1, 1, 1), (1, 3, 1), (2, 2, 1), (2, 3, 0)] {
        out.push(deformed_c(n, rat(m, 1), rat(l, 1)).unwrap());
    }
    out
}

fn a2_plane(m: [i64; 3]) -> Configuration {
    let h = QElem::new(rat(0, 1), rat(1, 2), rat(3, 1)).unwrap();
    let half = QElem::from_rat(rat(1, 2));
    let members = vec![
        (vec![QElem::one(), QElem::zero()], rat(m[0], 1)),
        (vec![half.clone(), h.clone()], rat(m[1], 1)),
        (vec![-&half, h], rat(m[2], 1)),
    ];
    build_config(2, rat(3, 1), members, vec![rat(1, 1), rat(1, 10)]).unwrap()
}

fn failures(list: &[String]) -> String {
    list.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
}

fn criterion_1(configs: &[Configuration]) -> Outcome {
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for c in configs {
        let start = Instant::now();
        let r = main_identity_exact(c);
        let took = start.elapsed();
        slowest = slowest.max(took);
        if !r.verdict.is_pass() {
            bad.push(format!("{} failed", c.name()));
        }
        if took >= EXACT_TIME_LIMIT {
            bad.push(format!("{} took {took:?}", c.name()));
        }
    }
    Outcome {
        id: 1,
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{} exact certificates pass, slowest {slowest:.2?}", configs.len())
        } else {
            failures(&bad)
        },
        documented: None,
    }
}

fn criterion_2(configs: &[Configuration]) -> Outcome {
    let opts = NumericOptions::default().with_tol(WDVV_TOL);
    let flat_opts = NumericOptions::default().with_tol(FLAT_TOL);
    let mut bad = Vec::new();
    let (mut worst_w, mut worst_f) = (0.0f64, 0.0f64);
    for c in configs {
        if !vee_condition_exact(c, false).map(|r| r.verdict.is_pass()).unwrap_or(false) {
            bad.push(format!("{} vee", c.name()));
        }
        match wdvv_numeric(c, &opts) {
            Ok(r) if r.verdict.is_pass() => worst_w = worst_w.max(r.max_residual().unwrap()),
            other => bad.push(format!("{} wdvv {:?}", c.name(), other.map(|r| r.verdict))),
        }
        if c.is_scalar().is_some() {
            match flat_connection_numeric(c, &flat_opts) {
                Ok(r) if r.verdict.is_pass() => worst_f = worst_f.max(r.max_residual().unwrap()),
                other => bad.push(format!("{} flat {:?}", c.name(), other.map(|r| r.verdict))),
            }
        }
    }
    Outcome {
        id: 2,
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("vee exact, wdvv (max {worst_w:.1e} < {WDVV_TOL:.0e}), flat (max {worst_f:.1e} < {FLAT_TOL:.0e}) on all")
        } else {
            failures(&bad)
        },
        documented: None,
    }
}

fn criterion_3(configs: &[Configuration]) -> Outcome {
    let mut bad = Vec::new();
    let (mut worst_eigen, mut worst_cot) = (0.0f64, 0.0f64);
    for c in configs {
        let points = Sampler::for_config(c, SampleMode::Trig, 1, 1000).points(EIGEN_POINTS).unwrap();
        let s = constant_s(c).to_f64();
        for p in &points {
            let r = eigen_residual(c, &p.coords).unwrap();
            worst_eigen = worst_eigen.max(r);
            if !(r < EIGEN_TOL) {
                bad.push(format!("{} eigen residual {r:.2e}", c.name()));
                break;
            }
            // the pure cot sum is the constant S itself (ordered pairs, no sign flip)
            let rel = (cot_sum(c, &p.coords) - s).abs() / s.abs().max(1.0);
            worst_cot = worst_cot.max(rel);
            if !(rel < COT_REL_TOL) {
                bad.push(format!("{} cot sum off by {rel:.2e}", c.name()));
                break;
            }
        }
    }
    Outcome {
        id: 3,
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("eigen residual max {worst_eigen:.1e} over {EIGEN_POINTS} points each; cot sum = S within {worst_cot:.1e} relative")
        } else {
            failures(&bad)
        },
        documented: None,
    }
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for m in [2, 3] {
        let got = deformed_a(2, rat(m, 1)).unwrap().is_scalar();
        if got != Some(QElem::from_int(2 * m + 1)) {
            bad.push(format!("A_deformed2(m={m}) mu {got:?}"));
        }
    }
    for (m, l) in [(1, 1), (3, 1)] {
        let got = deformed_c(1, rat(m, 1), rat(l, 1)).unwrap().is_scalar();
        if got != Some(QElem::from_int(4 * m + 2)) {
            bad.push(format!("C_deformed2(m={m},l={l}) mu {got:?}"));
        }
    }
    Outcome {
        id: 4,
        pass: bad.is_empty(),
        detail: if bad.is_empty() { "mu = 5, 7 (A_deformed2) and 6, 14 (C_deformed2) exactly".into() } else { failures(&bad) },
        documented: None,
    }
}

fn criterion_5(configs: &[Configuration]) -> Outcome {
    let mut bad = Vec::new();
    for (i, c) in configs.iter().enumerate() {
        match lambda_invariance(c, i as u64, LAMBDA_DIRECTIONS) {
            Ok(r) if r.verdict.is_pass() => {}
            other => bad.push(format!("{} {:?}", c.name(), other.map(|r| r.verdict))),
        }
    }
    for m in [rat(2, 1), rat(3, 1), rat(1, 2)] {
        let expected = rat(2, 1) * (&m + rat(1, 1)) * (&m + rat(1, 1));
        let got = deformed_a(2, m.clone()).unwrap().lambda_eig();
        if got != QElem::from_rat(expected.clone()) {
            bad.push(format!("A_deformed2(m={m}) lambda {got} != {expected}"));
        }
    }
    Outcome {
        id: 5,
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{LAMBDA_DIRECTIONS} directions each agree exactly; lambda = 2(m+1)^2 for A_deformed2")
        } else {
            failures(&bad)
        },
        documented: None,
    }
}

/// B_2 with `e_1 + e_2` moved to `e_1 + (1 + 1/100) e_2`.
fn jittered_b2() -> Configuration {
    let b2 = coxeter(Family::B, 2, &mults(&[("short", rat(1, 1)), ("long", rat(1, 1))])).unwrap();
    let mut members: Vec<_> = b2.members().iter().map(|m| (m.vector.clone(), m.multiplicity.clone())).collect();
    let k = members.iter().position(|(v, _)| v[0] == v[1]).unwrap();
    members[k].0[1] = &members[k].0[1] + &QElem::from_rat(rat(1, 100));
    build_config(2, rat(0, 1), members, b2.direction().to_vec()).unwrap()
}

fn broken_a3() -> Configuration {
    let a3 = coxeter(Family::A, 3, &mults(&[("all", rat(1, 1))])).unwrap();
    let mut members: Vec<_> = a3.members().iter().map(|m| (m.vector.clone(), m.multiplicity.clone())).collect();
    members[0].1 = rat(2, 1);
    build_config(4, rat(0, 1), members, a3.direction().to_vec()).unwrap()
}

fn criterion_6() -> Outcome {
    let opts = NumericOptions::default();
    let broken = a2_plane([1, 1, 2]);
    let exact = main_identity_exact(&broken);
    let exact_ok = exact.verdict == Verdict::Fail && matches!(exact.witness, Some(Witness::Class { .. }));
    let numeric = main_identity_numeric(&broken, &opts).unwrap();
    let numeric_ok = numeric.verdict == Verdict::Fail && numeric.max_residual().unwrap() > NEGATIVE_MIN_RESIDUAL;
    let wdvv = wdvv_numeric(&broken, &opts).unwrap();
    let wdvv_ok = wdvv.verdict == Verdict::Fail;
    let jitter_ok = main_identity_exact(&jittered_b2()).verdict == Verdict::Fail;
    let mut detail = format!(
        "A2(1,1,2): main-exact {} (class witness), main-numeric {} (residual {:.2e}), wdvv {} (residual {:.1e}); jittered B2 main-exact {}",
        exact.verdict,
        numeric.verdict,
        numeric.max_residual().unwrap(),
        wdvv.verdict,
        wdvv.max_residual().unwrap(),
        if jitter_ok { "fail" } else { "pass" }
    );
    let mut documented = None;
    if exact_ok && numeric_ok && jitter_ok && !wdvv_ok {
        // In a two-dimensional span x_1 G^{-1}F_1 + x_2 G^{-1}F_2 = Id, so the
        // only commutator vanishes identically. Confirm that this is what
        // happened, and that a rank-3 break is caught.
        let a3 = broken_a3();
        let rank3 = wdvv_numeric(&a3, &opts).unwrap();
        let flat = flat_connection_numeric(&broken, &opts).unwrap();
        if broken.span_dim() == 2 && wdvv.max_residual().unwrap() < 1e-12 && rank3.verdict == Verdict::Fail && flat.verdict == Verdict::Fail {
            detail.push_str(&format!(
                "; flat on A2(1,1,2) {} ({:.2e}); rank-3 broken A3 wdvv {} ({:.2e})",
                flat.verdict,
                flat.max_residual().unwrap(),
                rank3.verdict,
                rank3.max_residual().unwrap()
            ));
            documented = Some("WDVV is automatic in a 2-dimensional span; A2(1,1,2) cannot fail it".to_string());
        }
    }
    Outcome { id: 6, pass: exact_ok && numeric_ok && wdvv_ok && jitter_ok, detail, documented }
}

fn criterion_7(configs: &[Configuration]) -> Outcome {
    let mut bad = Vec::new();
    let (mut worst_fd, mut worst_g) = (0.0f64, 0.0f64);
    let mut pairs = 0;
    let mut index = 0u64;
    while pairs < CROSS_PAIRS {
        let c = &configs[pairs % configs.len()];
        let sampler = Sampler::for_config(c, SampleMode::Rational, 77, 1000);
        let x = sampler.point(index).unwrap().coords;
        index += 1;
        // the stencil must not cross a hyperplane; draw again if it would
        let Ok(dev) = fd_cross_check(c, &x, FD_STEP) else {
            if index > 10_000 {
                bad.push("no admissible points".into());
                break;
            }
            continue;
        };
        pairs += 1;
        worst_fd = worst_fd.max(dev);
        if !(dev < FD_TOL) {
            bad.push(format!("{} fd deviation {dev:.2e}", c.name()));
        }
        let f = f_matrix(c, &x, &x).unwrap();
        let g = gram_g(c).unwrap();
        for (fr, gr) in f.entries.iter().zip(&g.entries) {
            for (a, b) in fr.iter().zip(gr) {
                let b = b.to_f64();
                let rel = (a - b).abs() / b.abs().max(1.0);
                worst_g = worst_g.max(rel);
                if !(rel <= GRAM_REL_TOL) {
                    bad.push(format!("{} F_x vs G {rel:.2e}", c.name()));
                }
            }
        }
    }
    Outcome {
        id: 7,
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{CROSS_PAIRS} pairs: fd deviation max {worst_fd:.1e}, |F_x - G| max {worst_g:.1e} relative")
        } else {
            failures(&bad)
        },
        documented: None,
    }
}

fn cli(args: &[&str], stdin: Option<&[u8]>) -> (Option<i32>, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_veeverify"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    {
        use std::io::Write;
        let mut pipe = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    let report_args = ["check", "--all", "--family", "C_deformed", "--rank", "2", "--m", "2", "--l", "1", "--seed", "5", "--format", "json"];
    let (c1, a) = cli(&report_args, None);
    let (_, b) = cli(&report_args, None);
    if a != b || a.is_empty() {
        bad.push("reports differ between identical runs".to_string());
    }
    if c1 != Some(0) {
        bad.push(format!("pass case exit {c1:?}"));
    }
    let (gen_code, generated) = cli(&["generate", "--family", "A_deformed", "--rank", "2", "--m", "2"], None);
    let (pipe_code, _) = cli(&["check", "--all", "-"], Some(generated.as_bytes()));
    if gen_code != Some(0) || pipe_code != Some(0) {
        bad.push(format!("generate | check exit {gen_code:?}/{pipe_code:?}"));
    }
    let (neg, _) = cli(&["check", "--checks", "main-exact", &fixture("broken_a2.json")], None);
    if neg != Some(1) {
        bad.push(format!("negative control exit {neg:?}"));
    }
    let (malformed, _) = cli(&["check", "--all", &fixture("malformed.json")], None);
    if malformed != Some(2) {
        bad.push(format!("malformed exit {malformed:?}"));
    }
    // force a near-tolerance case: tolerance at half the double-precision residual
    let base = ["check", "--checks", "main-numeric", "--family", "A", "--rank", "2", "--samples", "20", "--format", "json"];
    let (_, first) = cli(&base, None);
    let r = serde_json::from_str::<Value>(&first).ok().and_then(|v| v["checks"][0]["numeric"]["max_residual"].as_f64());
    match r {
        Some(r) if r > 0.0 => {
            let tol = format!("{:e}", r / 2.0);
            let (code, _) = cli(&[&base[..], &["--tol", &tol]].concat(), None);
            if code != Some(3) {
                bad.push(format!("near-tolerance exit {code:?}"));
            }
        }
        other => bad.push(format!("could not read residual: {other:?}")),
    }
    Outcome {
        id: 8,
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "byte-identical reports; exits 0 (pass), 1 (negative control), 2 (malformed), 3 (near tolerance)".into()
        } else {
            failures(&bad)
        },
        documented: None,
    }
}

fn main() -> ExitCode {
    let configs = suite();
    let outcomes = [
        criterion_1(&configs),
        criterion_2(&configs),
        criterion_3(&configs),
        criterion_4(),
        criterion_5(&configs),
        criterion_6(),
        criterion_7(&configs),
        criterion_8(),
    ];
    let mut ok = true;
    println!("acceptance suite ({} configurations)", configs.len());
    for o in &outcomes {
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} — {}", o.id, o.detail);
        if !o.pass {
            match &o.documented {
                Some(reason) => println!("    documented conflict: {reason}"),
                None => ok = false,
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("{passed}/{} criteria pass", outcomes.len());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
