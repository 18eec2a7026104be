//! The `ctx` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 I/O failure,
//! 64 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{self, BoundConstants, BoundCurvePoint};
use crate::error::Error;
use crate::format::significant;
use crate::hilbert::{context_probabilities, ket_0a, ket_a0, ket_aa, phi0, StateVector};
use crate::linalg::{inner, CVector, Complex};
use crate::montecarlo::{estimate, sample_context, write_records, Context, EstimateReport};
use crate::optimizer::{self, FrontierPoint, OptimizerConfig};
use crate::spectral::{aa_overlaps, build_pi_s, nu_basis, to_nu, NU_EIGENVALUES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// CSV header written by `curve`.
pub const CURVE_HEADER: &str = "p_s,frontier,bound_eq19,bound_eq24";

/// Significant digits of every CSV number.
pub const CSV_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "ctx",
    version,
    about = "Quantum bounds on the four-outcome consistency paradox"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the orthogonality statements, P_WW(a,a), the Π_S spectrum and the landmark constants
    Verify {
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Export the frontier and the two analytic bounds as CSV
    Curve {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        ps_min: f64,
        #[arg(long, default_value_t = 0.12, allow_negative_numbers = true)]
        ps_max: f64,
        #[arg(long, default_value_t = 121)]
        points: usize,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CurveMode::Both)]
        mode: CurveMode,
    },
    /// Report the critical error sum and the frontier zero
    Critical,
    /// Minimize P_WW(a,a) at a fixed error sum
    Optimize {
        #[arg(long = "p-s", allow_negative_numbers = true)]
        p_s: f64,
        /// Search the whole state space instead of the one-angle family
        #[arg(long)]
        full_space: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// Sample the four measurement contexts and test the inequality
    Simulate {
        #[arg(long, value_enum, default_value_t = StateChoice::Phi0)]
        state: StateChoice,
        /// Four product-basis amplitudes `a+bi`, comma separated (custom state)
        #[arg(long, allow_hyphen_values = true)]
        amplitudes: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write every shot as `context,outcome1,outcome2`
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveMode {
    Bounds,
    Frontier,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateChoice {
    Phi0,
    Nu1,
    Nu2,
    Nu3,
    Custom,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify { inject_fault } => cmd_verify(inject_fault, out),
        Command::Curve {
            ps_min,
            ps_max,
            points,
            out: path,
            mode,
        } => cmd_curve(ps_min, ps_max, points, path.as_deref(), mode, out),
        Command::Critical => cmd_critical(out),
        Command::Optimize {
            p_s,
            full_space,
            seed,
            restarts,
        } => cmd_optimize(p_s, full_space, seed, restarts, out),
        Command::Simulate {
            state,
            amplitudes,
            shots,
            seed,
            export,
        } => cmd_simulate(
            state,
            amplitudes.as_deref(),
            shots,
            seed,
            export.as_deref(),
            out,
            err,
        ),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: Option<&Path>, e: std::io::Error) -> Self {
        let target = path.map_or("stdout".to_string(), |p| p.display().to_string());
        Self {
            code: EXIT_IO,
            message: format!("cannot write {target}: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::usage(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

struct Check {
    passed: bool,
    line: String,
}

fn check(passed: bool, line: String) -> Check {
    Check { passed, line }
}

fn verification_checks(inject_fault: bool) -> Vec<Check> {
    let phi = phi0();
    let probs = context_probabilities(&phi);
    let mut checks = vec![
        check(
            probs.p_wf_a0 <= 1e-14,
            format!(
                "statement 1: P_WF(a,0) = {:.3e} (expected 0)",
                probs.p_wf_a0
            ),
        ),
        check(
            probs.p_fw_0a <= 1e-14,
            format!(
                "statement 2: P_FW(0,a) = {:.3e} (expected 0)",
                probs.p_fw_0a
            ),
        ),
        check(
            probs.p_ff_11 <= 1e-14,
            format!(
                "statement 3: P_FF(1,1) = {:.3e} (expected 0)",
                probs.p_ff_11
            ),
        ),
    ];

    let p_ww = probs.p_ww_aa + if inject_fault { 1e-6 } else { 0.0 };
    checks.push(check(
        (p_ww - 1.0 / 12.0).abs() <= 1e-12,
        format!("P_WW(a,a) = {p_ww:.10} (expected 1/12)"),
    ));

    let spectrum = build_pi_s().spectral_decomposition();
    match spectrum {
        Ok(d) => {
            let eig_ok = d
                .eigenvalues
                .iter()
                .zip(NU_EIGENVALUES)
                .all(|(a, b)| (a - b).abs() <= 1e-12);
            let eigenvalues: Vec<String> =
                d.eigenvalues.iter().map(|x| format!("{x:.12}")).collect();
            checks.push(check(
                eig_ok,
                format!(
                    "Π_S eigenvalues = ({}) (expected 0, 1/2, 1, 3/2)",
                    eigenvalues.join(", ")
                ),
            ));
            let min_overlap = d
                .eigenvectors
                .iter()
                .zip(nu_basis().iter())
                .map(|(v, b)| inner(v, b.amplitudes()).map_or(0.0, |z| z.norm()))
                .fold(f64::INFINITY, f64::min);
            checks.push(check(
                min_overlap >= 1.0 - 1e-10,
                format!("Π_S eigenvectors match φ₀, ν₁, ν₂, ν₃: min |overlap| = {min_overlap:.12}"),
            ));
        }
        Err(e) => checks.push(check(false, format!("Π_S eigendecomposition failed: {e}"))),
    }

    let c = to_nu(&ket_aa());
    let coeff_err = c
        .as_array()
        .iter()
        .zip(aa_overlaps())
        .map(|(z, w)| (z - Complex::new(w, 0.0)).norm())
        .fold(0.0, f64::max);
    checks.push(check(
        coeff_err <= 1e-12,
        format!(
            "|a,a⟩ coefficients = ({:.10}, {:.10}, {:.10}, {:.10}) (expected -1/(2√3), 0, 1/2, √(2/3))",
            c.c0.re, c.c1.re, c.c2.re, c.c3.re
        ),
    ));

    let k = BoundConstants::reference();
    let pcr = bounds::critical_p_s();
    let ordered =
        pcr < 3.0 / 28.0 && 3.0 / 28.0 < k.ps_tight && k.ps_tight < k.ps_frontier_zero + 1e-6;
    checks.push(check(
        ordered && (pcr - k.p_cr).abs() <= 5e-4,
        format!(
            "constants: P_cr = {pcr:.6} < 3/28 = {:.6} < 1/(5+√17) = {:.6}",
            3.0 / 28.0,
            k.ps_tight
        ),
    ));

    // the three outcome states themselves
    let overlap = inner(ket_a0().amplitudes(), ket_0a().amplitudes()).map_or(f64::NAN, |z| z.re);
    checks.push(check(
        (overlap - 0.5).abs() <= 1e-14,
        format!("⟨a,0|0,a⟩ = {overlap:.10} (expected 1/2)"),
    ));
    checks
}

fn cmd_verify(inject_fault: bool, out: &mut dyn Write) -> CmdResult {
    let checks = verification_checks(inject_fault);
    let io = |e| Failure::io(None, e);
    for c in &checks {
        writeln!(
            out,
            "[{}] {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.line
        )
        .map_err(io)?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        writeln!(out, "all {} checks passed", checks.len()).map_err(io)?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "{failed} of {} checks failed", checks.len()).map_err(io)?;
        Ok(EXIT_VERIFY_FAILED)
    }
}

/// Evenly spaced grid including both end points.
fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

/// CSV text of the curve. Columns not computed in the chosen mode are
/// left empty.
fn curve_csv(
    ps_min: f64,
    ps_max: f64,
    points: usize,
    mode: CurveMode,
) -> std::result::Result<String, Failure> {
    if !(0.0 <= ps_min && ps_min < ps_max && ps_max <= optimizer::MAX_P_S) {
        return Err(Failure::usage(format!(
            "need 0 <= ps-min < ps-max <= 1.5, got {ps_min} and {ps_max}"
        )));
    }
    if points < 2 {
        return Err(Failure::usage("need at least 2 points"));
    }
    let grid = linspace(ps_min, ps_max, points);
    let frontier = match mode {
        CurveMode::Bounds => None,
        _ => Some(optimizer::frontier_sweep(
            &grid,
            &OptimizerConfig::default(),
        )?),
    };
    let mut csv = String::with_capacity(64 * (points + 1));
    csv.push_str(CURVE_HEADER);
    csv.push('\n');
    for (i, &p) in grid.iter().enumerate() {
        let f = frontier.as_ref().map_or(String::new(), |pts| {
            significant(pts[i].p_ww_min, CSV_DIGITS)
        });
        let (b19, b24) = if mode == CurveMode::Frontier {
            (String::new(), String::new())
        } else {
            let row = BoundCurvePoint::at(p);
            (
                significant(row.separate, CSV_DIGITS),
                significant(row.tightened, CSV_DIGITS),
            )
        };
        csv.push_str(&format!("{},{f},{b19},{b24}\n", significant(p, CSV_DIGITS)));
    }
    Ok(csv)
}

fn cmd_curve(
    ps_min: f64,
    ps_max: f64,
    points: usize,
    path: Option<&Path>,
    mode: CurveMode,
    out: &mut dyn Write,
) -> CmdResult {
    let csv = curve_csv(ps_min, ps_max, points, mode)?;
    match path {
        Some(p) => {
            let mut file = File::create(p).map_err(|e| Failure::io(Some(p), e))?;
            file.write_all(csv.as_bytes())
                .and_then(|_| file.flush())
                .map_err(|e| Failure::io(Some(p), e))?;
        }
        None => out
            .write_all(csv.as_bytes())
            .map_err(|e| Failure::io(None, e))?,
    }
    Ok(EXIT_OK)
}

fn cmd_critical(out: &mut dyn Write) -> CmdResult {
    let cfg = OptimizerConfig::default();
    let k = BoundConstants::reference();
    let pcr_bound = bounds::critical_p_s();
    let pcr_frontier = optimizer::critical_p_s_numeric(&cfg)?;
    let zero = optimizer::frontier_zero(&cfg)?;
    let tight = bounds::ps_tight();
    let lines = [
        format!(
            "P_cr (bound) = {pcr_bound:.4} ± 5e-4 ({}; reference {})",
            significant(pcr_bound, CSV_DIGITS),
            k.p_cr
        ),
        format!(
            "P_cr (frontier) = {pcr_frontier:.4} ± 5e-4 ({}; reference {})",
            significant(pcr_frontier, CSV_DIGITS),
            k.p_cr
        ),
        format!(
            "frontier zero = {} (reference 0.1096 ± 1e-4; tightened bound valid up to {})",
            significant(zero, CSV_DIGITS),
            k.tightened_bound_limit
        ),
        format!(
            "1/(5+sqrt(17)) = {tight:.6} ({}; reference {})",
            significant(tight, CSV_DIGITS),
            k.ps_frontier_zero
        ),
    ];
    for l in lines {
        writeln!(out, "{l}").map_err(|e| Failure::io(None, e))?;
    }
    Ok(EXIT_OK)
}

fn write_point(fp: &FrontierPoint, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "p_s = {}", significant(fp.p_s, CSV_DIGITS))?;
    writeln!(
        out,
        "min P_WW(a,a) = {}",
        significant(fp.p_ww_min, CSV_DIGITS)
    )?;
    writeln!(
        out,
        "theta = {} (sin theta = {})",
        significant(fp.theta_opt, CSV_DIGITS),
        significant(fp.theta_opt.sin(), CSV_DIGITS)
    )?;
    for (i, c) in fp.argmin.as_array().iter().enumerate() {
        writeln!(
            out,
            "c{i} = {} {} {}i",
            significant(c.re, CSV_DIGITS),
            if c.im < 0.0 { '-' } else { '+' },
            significant(c.im.abs(), CSV_DIGITS)
        )?;
    }
    writeln!(out, "converged = {}", fp.converged)
}

fn cmd_optimize(
    p_s: f64,
    full_space: bool,
    seed: u64,
    restarts: usize,
    out: &mut dyn Write,
) -> CmdResult {
    let cfg = OptimizerConfig {
        seed,
        restarts,
        ..OptimizerConfig::default()
    };
    let fp = if full_space {
        optimizer::frontier_full_space(p_s, &cfg)?
    } else {
        optimizer::frontier_theta_family(p_s, &cfg)?
    };
    writeln!(
        out,
        "mode = {}",
        if full_space {
            "full-space"
        } else {
            "theta-family"
        }
    )
    .and_then(|_| write_point(&fp, out))
    .map_err(|e| Failure::io(None, e))?;
    Ok(EXIT_OK)
}

/// Parses four comma-separated complex amplitudes such as `0.5+0.5i`.
fn parse_amplitudes(text: &str) -> std::result::Result<CVector, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Failure::usage(format!(
            "expected 4 comma-separated amplitudes, got {}",
            parts.len()
        )));
    }
    let values = parts
        .iter()
        .map(|s| {
            Complex::from_str(s).map_err(|_| Failure::usage(format!("malformed amplitude '{s}'")))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    CVector::new(values).map_err(Failure::from)
}

fn choose_state(
    choice: StateChoice,
    amplitudes: Option<&str>,
    err: &mut dyn Write,
) -> std::result::Result<StateVector, Failure> {
    let [phi, nu1, nu2, nu3] = nu_basis();
    match (choice, amplitudes) {
        (StateChoice::Custom, Some(text)) => {
            let (psi, deviation) = StateVector::normalize(parse_amplitudes(text)?)?;
            if deviation > crate::hilbert::NORMALIZATION_TOL {
                let _ = writeln!(
                    err,
                    "warning: amplitudes renormalized (|norm - 1| = {deviation:.3e})"
                );
            }
            Ok(psi.with_label("custom"))
        }
        (StateChoice::Custom, None) => Err(Failure::usage("--state custom requires --amplitudes")),
        (_, Some(_)) => Err(Failure::usage(
            "--amplitudes is only valid with --state custom",
        )),
        (StateChoice::Phi0, None) => Ok(phi),
        (StateChoice::Nu1, None) => Ok(nu1),
        (StateChoice::Nu2, None) => Ok(nu2),
        (StateChoice::Nu3, None) => Ok(nu3),
    }
}

fn write_report(
    name: &str,
    seed: u64,
    psi: &StateVector,
    r: &EstimateReport,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let exact = context_probabilities(psi);
    let e = &r.estimates;
    writeln!(out, "state = {name}")?;
    writeln!(out, "shots per context = {}", r.shots_per_context)?;
    writeln!(out, "seed = {seed}")?;
    let rows = [
        ("P_WF(a,0)", e.p_wf_a0, r.std_errors[0], exact.p_wf_a0),
        ("P_FW(0,a)", e.p_fw_0a, r.std_errors[1], exact.p_fw_0a),
        ("P_FF(1,1)", e.p_ff_11, r.std_errors[2], exact.p_ff_11),
        ("P_WW(a,a)", e.p_ww_aa, r.std_errors[3], exact.p_ww_aa),
    ];
    for (label, p, se, x) in rows {
        writeln!(out, "{label} = {p:.6} ± {se:.6} (exact {x:.6})")?;
    }
    writeln!(out, "P_S = {:.6} (exact {:.6})", e.p_sum(), exact.p_sum())?;
    writeln!(
        out,
        "slack = P_WW(a,a) - P_S = {:.6} (exact {:.6})",
        r.slack_estimate,
        exact.slack()
    )?;
    writeln!(out, "slack z = {:.3}", r.slack_z)?;
    let verdict = if r.slack_z > 5.0 {
        "inequality violated (z > 5)"
    } else if r.slack_estimate > 0.0 {
        "positive slack, not significant at z > 5"
    } else {
        "no violation observed"
    };
    writeln!(out, "verdict = {verdict}")
}

fn cmd_simulate(
    choice: StateChoice,
    amplitudes: Option<&str>,
    shots: usize,
    seed: u64,
    export: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let psi = choose_state(choice, amplitudes, err)?;
    let report = estimate(&psi, shots, seed)?;
    let name = format!("{choice:?}").to_lowercase();
    write_report(&name, seed, &psi, &report, out).map_err(|e| Failure::io(None, e))?;

    if let Some(path) = export {
        let file = File::create(path).map_err(|e| Failure::io(Some(path), e))?;
        let mut w = BufWriter::new(file);
        for context in Context::ALL {
            let records = sample_context(&psi, context, shots, seed)?;
            write_records(&records, &mut w).map_err(|e| Failure::io(Some(path), e))?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["ctx"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn verify_passes() {
        let (code, out, _) = run_capture(&["verify"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("P_WW(a,a) = 0.0833333333 (expected 1/12)"));
        assert!(!out.contains("[FAIL]"));
    }

    #[test]
    fn verify_fault_injection_fails() {
        let (code, out, _) = run_capture(&["verify", "--inject-fault"]);
        assert_eq!(code, EXIT_VERIFY_FAILED);
        assert!(out.contains("[FAIL] P_WW(a,a)"));
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["curve", "--points", "1"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&["curve", "--ps-min", "0.2", "--ps-max", "0.1"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_capture(&["curve", "--ps-max", "2"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&["simulate", "--state", "custom"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_capture(&["simulate", "--state", "custom", "--amplitudes", "1,x,0,0"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_capture(&["simulate", "--shots", "10"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["optimize", "--p-s", "-1"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn curve_bounds_mode_leaves_frontier_empty() {
        let csv = curve_csv(0.0, 0.1, 3, CurveMode::Bounds).ok().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CURVE_HEADER);
        assert_eq!(lines[1], "0,,0.0833333333333,0.0833333333333");
        assert!(lines[3].starts_with("0.100000000000,,"));
    }

    #[test]
    fn amplitude_parsing() {
        let v = parse_amplitudes("1, 0.5+0.5i, -1i, 0").ok().unwrap();
        assert_eq!(v[1], Complex::new(0.5, 0.5));
        assert_eq!(v[2], Complex::new(0.0, -1.0));
        assert!(parse_amplitudes("1,2,3").is_err());
    }

    #[test]
    fn simulate_custom_state_warns_on_renormalization() {
        let (code, out, err) = run_capture(&[
            "simulate",
            "--state",
            "custom",
            "--amplitudes",
            "1,1,1,0",
            "--shots",
            "1000",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(err.contains("warning: amplitudes renormalized"));
        assert!(out.contains("P_FF(1,1) = 0.000000"));
    }
}
