//! Run configurations and the command entry points behind the CLI binary.
//!
//! Every command produces a deterministic JSON report (sorted keys, exact
//! rationals as strings, floats only in spectrum output) embedding the
//! configuration echo, the crate version, and the coefficient ring, so a run
//! can be reproduced from its own artifact. Eigenvalue tables additionally
//! render as CSV with header index,eigenvalue,converged_flag,residual_bound.

use crate::exact::{format_gaussian, Coeff, EPoly, Energy, GaussianRational, Rational};
use crate::gfunction::{
    build_g_from_solution, check_derivative_conditions, sweep_family_full, uniqueness_report_for,
    Verdict,
};
use crate::series::{
    ode4_residual_with, solve_system, A1Form, InitialConditions, ModelParams, PowerSeries,
    SeriesError, SystemSolution,
};
use crate::spectrum::{
    bargmann_norm_diag, converged_spectrum_full, spectrum_vs_gscan_with, BargmannNormDiag,
    ConvergedSpectrum, NormWeighting, Parity, SpectrumError,
};
use serde_json::{json, Value};
use thiserror::Error;

// ---- Errors and exit codes ----

/// Failure classes aligned with the exit-code contract: usage errors exit 2,
/// everything else that stops a run exits 1. A run that completes but
/// falsifies its claim is not an error; it reports ok = false.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Computation(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 2,
            RunError::Computation(_) => 1,
        }
    }
}

impl From<SeriesError> for RunError {
    fn from(e: SeriesError) -> Self {
        match &e {
            SeriesError::OrderTooSmall { .. } | SeriesError::SingularRecurrence => {
                RunError::Usage(e.to_string())
            }
            _ => RunError::Computation(e.to_string()),
        }
    }
}

impl From<SpectrumError> for RunError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::TruncationTooSmall { .. } | SpectrumError::BadTruncationPair { .. } => {
                RunError::Usage(e.to_string())
            }
            SpectrumError::Series(inner) => inner.into(),
            other => RunError::Computation(other.to_string()),
        }
    }
}

// ---- Configuration ----

#[derive(Clone, Debug)]
pub struct VerifyGConfig {
    pub params: ModelParams,
    pub order: usize,
    /// Corrupt one interior series coefficient before assembling the family,
    /// to prove the pipeline can fail.
    pub inject_fault: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyOde4Config {
    pub params: ModelParams,
    pub order: usize,
    /// Use the rejected reading of the a₁ bracket instead of the standard one.
    pub a1_variant: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityChoice {
    Even,
    Odd,
    Both,
}

impl ParityChoice {
    pub fn to_block(self) -> Option<Parity> {
        match self {
            ParityChoice::Even => Some(Parity::Even),
            ParityChoice::Odd => Some(Parity::Odd),
            ParityChoice::Both => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ParityChoice::Even => "even",
            ParityChoice::Odd => "odd",
            ParityChoice::Both => "both",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumConfig {
    pub params: ModelParams,
    pub cutoffs: (usize, usize),
    pub tol: f64,
    pub parity: ParityChoice,
}

/// Inclusive rational grid lo..hi with `count` equally spaced points.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: Rational,
    pub hi: Rational,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<Rational> {
        match self.count {
            0 => vec![],
            1 => vec![self.lo.clone()],
            _ => {
                let step = (&self.hi - &self.lo)
                    / Rational::from_integer(((self.count - 1) as i64).into());
                (0..self.count)
                    .map(|k| &self.lo + &step * Rational::from_integer((k as i64).into()))
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub params: ModelParams,
    pub order: usize,
    pub cutoffs: (usize, usize),
    pub tol: f64,
    pub z0: GaussianRational,
    pub grid: GridSpec,
    /// Scan with the non-vanishing control conditions (1,1,1,0) instead of
    /// the canonical even ones.
    pub control_ics: bool,
}

/// "A,B" with A < B, e.g. "500,600".
pub fn parse_cutoffs(s: &str) -> Result<(usize, usize), RunError> {
    let mk_err = || RunError::Usage(format!("cutoffs must be \"A,B\" with integers A < B, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(mk_err)?;
    let a: usize = a.trim().parse().map_err(|_| mk_err())?;
    let b: usize = b.trim().parse().map_err(|_| mk_err())?;
    if a >= b {
        return Err(mk_err());
    }
    Ok((a, b))
}

/// "lo:hi:count" with rational endpoints, e.g. "0:2:50".
pub fn parse_grid(s: &str) -> Result<GridSpec, RunError> {
    let mk_err =
        || RunError::Usage(format!("grid must be \"lo:hi:count\" with rational bounds, got {s:?}"));
    let mut parts = s.split(':');
    let (lo, hi, count) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
        (Some(lo), Some(hi), Some(count), None) => (lo, hi, count),
        _ => return Err(mk_err()),
    };
    let lo = crate::exact::parse_rational(lo.trim()).map_err(|_| mk_err())?;
    let hi = crate::exact::parse_rational(hi.trim()).map_err(|_| mk_err())?;
    let count: usize = count.trim().parse().map_err(|_| mk_err())?;
    Ok(GridSpec { lo, hi, count })
}

// ---- Rendering primitives ----

/// One run's outputs: canonical JSON, a human summary, an optional CSV
/// eigenvalue table, and whether the run's claim held.
#[derive(Clone, Debug)]
pub struct CommandOutput {
    pub json: Value,
    pub human: String,
    pub csv: Option<String>,
    pub ok: bool,
}

fn crate_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

fn params_json(p: &ModelParams) -> Value {
    json!({
        "g": p.g.to_string(),
        "omega": p.omega.to_string(),
        "omega0": p.omega0.to_string(),
        "energy": p.energy.to_string(),
    })
}

fn ring_label(energy: &Energy) -> &'static str {
    match energy {
        Energy::Symbolic => "energy-polynomial",
        Energy::Value(_) => "gaussian-rational",
    }
}

/// Ring-specific JSON for exact values: Gaussian rationals as "a+bi" strings,
/// energy polynomials as ascending coefficient-string arrays.
trait JsonCoeff: Coeff {
    fn value_json(&self) -> Value;
}

impl JsonCoeff for GaussianRational {
    fn value_json(&self) -> Value {
        Value::String(format_gaussian(self))
    }
}

impl JsonCoeff for EPoly {
    fn value_json(&self) -> Value {
        json!({ "e_coefficients": self.coeff_strings() })
    }
}

fn verdict_json<R: JsonCoeff>(v: &Verdict<R>) -> Value {
    match v {
        Verdict::AllZeroUpTo(_) => json!("all_zero"),
        Verdict::FirstNonzero { index, value } => json!({
            "first_nonzero": { "index": index, "value": value.value_json() }
        }),
    }
}

fn first_nonzero_json<R: JsonCoeff>(series: &PowerSeries<R>) -> Value {
    match series.first_nonzero() {
        None => Value::Null,
        Some((index, value)) => json!({ "index": index, "value": value.value_json() }),
    }
}

// ---- verify-g ----

pub fn run_verify_g(cfg: &VerifyGConfig) -> Result<CommandOutput, RunError> {
    match cfg.params.energy {
        Energy::Symbolic => verify_g_in::<EPoly>(cfg),
        Energy::Value(_) => verify_g_in::<GaussianRational>(cfg),
    }
}

fn verify_g_in<R: JsonCoeff>(cfg: &VerifyGConfig) -> Result<CommandOutput, RunError> {
    let mut members = sweep_family_full::<R>(&cfg.params, cfg.order)?;
    if cfg.inject_fault {
        let idx = cfg.order.min(6);
        let spec = members[0].spec.clone();
        let mut corrupted: SystemSolution<R> = members[0].solution.clone();
        let mut coeffs = corrupted.phi2.coeffs().to_vec();
        coeffs[idx] = coeffs[idx].ring_add(&R::one());
        corrupted.phi2 = PowerSeries::from_coeffs(coeffs);
        members[0] = build_g_from_solution(spec, corrupted);
    }

    let mut ok = true;
    let mut member_values = Vec::with_capacity(members.len());
    let mut lines = Vec::with_capacity(members.len());
    for gf in &members {
        let conditions = check_derivative_conditions(gf);
        let uniq = uniqueness_report_for(gf)?;
        let four_hold = conditions.conditions.iter().all(|&b| b);
        if four_hold && !gf.verdict.is_all_zero() {
            ok = false;
        }
        if !uniq.consistent() {
            ok = false;
        }
        let verdict_text = match &gf.verdict {
            Verdict::AllZeroUpTo(n) => format!("all zero through order {n}"),
            Verdict::FirstNonzero { index, value } => {
                format!("first nonzero coefficient at index {index}: {value}")
            }
        };
        lines.push(format!(
            "  c = {:>2}, ics {:>4}: {}",
            format_gaussian(&gf.spec.phase),
            gf.spec.ics.describe(),
            verdict_text
        ));
        member_values.push(json!({
            "phase": format_gaussian(&gf.spec.phase),
            "ics": gf.spec.ics.describe(),
            "order": gf.spec.order,
            "derivative_conditions": conditions.conditions,
            "second_derivative_identity": conditions.second_derivative_identity,
            "verdict": verdict_json(&gf.verdict),
            "uniqueness": {
                "ode4_residual_zero": uniq.ode4_residual_zero,
                "first_four_zero": uniq.first_four_zero,
                "all_coefficients_zero": uniq.all_coefficients_zero,
                "consistent": uniq.consistent(),
            },
        }));
    }

    let json = json!({
        "command": "verify-g",
        "config": {
            "params": params_json(&cfg.params),
            "order": cfg.order,
            "inject_fault": cfg.inject_fault,
        },
        "crate_version": crate_version(),
        "ring": ring_label(&cfg.params.energy),
        "family": member_values,
        "ok": ok,
    });
    let human = format!(
        "candidate-determinant family at order {} ({} ring):\n{}\n{}",
        cfg.order,
        ring_label(&cfg.params.energy),
        lines.join("\n"),
        if ok {
            "every member whose first four derivative conditions hold vanishes identically"
        } else {
            "FALSIFIED: a member with vanishing first four conditions has a nonzero coefficient"
        }
    );
    Ok(CommandOutput {
        json,
        human,
        csv: None,
        ok,
    })
}

// ---- verify-ode4 ----

pub fn run_verify_ode4(cfg: &VerifyOde4Config) -> Result<CommandOutput, RunError> {
    match cfg.params.energy {
        Energy::Symbolic => verify_ode4_in::<EPoly>(cfg),
        Energy::Value(_) => verify_ode4_in::<GaussianRational>(cfg),
    }
}

fn verify_ode4_in<R: JsonCoeff>(cfg: &VerifyOde4Config) -> Result<CommandOutput, RunError> {
    let form = if cfg.a1_variant {
        A1Form::AltBracket
    } else {
        A1Form::Standard
    };
    let window = cfg.order.saturating_sub(4);
    let cases: [(&str, InitialConditions<R>); 3] = [
        ("even", InitialConditions::even()),
        ("odd", InitialConditions::odd()),
        (
            "mixed",
            InitialConditions::new(R::one(), R::one(), R::one(), R::one()),
        ),
    ];

    let mut ok = true;
    let mut case_values = Vec::with_capacity(cases.len());
    let mut lines = Vec::new();
    for (label, ics) in &cases {
        let sol = solve_system(&cfg.params, ics, cfg.order)?;
        let phi2_iz = sol.phi2.substitute_iz();
        let combination = PowerSeries::linear_combine(
            &phi2_iz,
            &sol.phi1,
            &R::one(),
            &R::one().ring_neg(),
        )?;
        let targets: [(&str, &PowerSeries<R>); 3] = [
            ("phi1", &sol.phi1),
            ("phi2_iz", &phi2_iz),
            ("combination", &combination),
        ];
        let mut target_values = Vec::with_capacity(targets.len());
        for (name, series) in targets {
            let residual = ode4_residual_with(series, &cfg.params, form)?;
            let zero = residual.is_zero_through(window);
            if !zero {
                ok = false;
            }
            lines.push(format!(
                "  {label:>5} ics, {name:>11}: residual {} through order {window}",
                if zero { "zero" } else { "NONZERO" }
            ));
            target_values.push(json!({
                "name": name,
                "zero_through": window,
                "ok": zero,
                "first_nonzero": first_nonzero_json(&residual),
            }));
        }
        case_values.push(json!({ "ics": label, "targets": target_values }));
    }

    let json = json!({
        "command": "verify-ode4",
        "config": {
            "params": params_json(&cfg.params),
            "order": cfg.order,
            "a1_variant": cfg.a1_variant,
        },
        "crate_version": crate_version(),
        "ring": ring_label(&cfg.params.energy),
        "a1_form": if cfg.a1_variant { "alt-bracket" } else { "standard" },
        "cases": case_values,
        "ok": ok,
    });
    let human = format!(
        "fourth-order membership at order {} ({} a1, {} ring):\n{}\n{}",
        cfg.order,
        if cfg.a1_variant { "alt-bracket" } else { "standard" },
        ring_label(&cfg.params.energy),
        lines.join("\n"),
        if ok {
            "all residuals vanish"
        } else {
            "nonzero residual: the tested coefficient reading is wrong"
        }
    );
    Ok(CommandOutput {
        json,
        human,
        csv: None,
        ok,
    })
}

// ---- spectrum ----

fn norm_json(diag: &BargmannNormDiag) -> Value {
    json!({
        "classification": diag.classification.label(),
        "log_norm_sq": diag.partial_log_sums.last().copied(),
    })
}

fn spectrum_levels_json(comp: &ConvergedSpectrum) -> Vec<Value> {
    let result = &comp.result;
    let mut levels = Vec::with_capacity(result.eigenvalues.len());
    for (i, &value) in result.eigenvalues.iter().enumerate() {
        let converged = result.converged_flag(i);
        let norm = if converged {
            let (up, down) = comp.eigenvector_spin_components(i);
            json!({
                "spin_up": norm_json(&bargmann_norm_diag(&up, NormWeighting::Fock)),
                "spin_down": norm_json(&bargmann_norm_diag(&down, NormWeighting::Fock)),
            })
        } else {
            Value::Null
        };
        levels.push(json!({
            "index": i,
            "eigenvalue": value,
            "converged": converged,
            "residual": result.residuals[i],
            "norm_diagnostics": norm,
        }));
    }
    levels
}

fn spectrum_csv(result: &crate::spectrum::SpectrumResult) -> String {
    let mut out = String::from("index,eigenvalue,converged_flag,residual_bound\n");
    for (i, &value) in result.eigenvalues.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            i,
            value,
            result.converged_flag(i),
            result.residuals[i]
        ));
    }
    out
}

pub fn run_spectrum(cfg: &SpectrumConfig) -> Result<CommandOutput, RunError> {
    let comp = converged_spectrum_full(
        &cfg.params,
        cfg.parity.to_block(),
        cfg.cutoffs.0,
        cfg.cutoffs.1,
        cfg.tol,
    )?;
    let result = &comp.result;
    let warning = result.converged_count == 0;
    let json = json!({
        "command": "spectrum",
        "config": {
            "params": params_json(&cfg.params),
            "cutoffs": [cfg.cutoffs.0, cfg.cutoffs.1],
            "tol": cfg.tol,
            "parity": cfg.parity.label(),
        },
        "crate_version": crate_version(),
        "ring": "float64",
        "converged_count": result.converged_count,
        "residual_bound": result.residual_bound,
        "truncation_pair": [result.truncation_pair.0, result.truncation_pair.1],
        "tolerance": result.tolerance,
        "warning": warning,
        "levels": spectrum_levels_json(&comp),
    });
    let preview: Vec<String> = result
        .spectrum()
        .iter()
        .take(10)
        .enumerate()
        .map(|(i, v)| format!("  {i}: {v}"))
        .collect();
    let human = format!(
        "{} of {} eigenvalues converged between cutoffs {} and {} at tol {:e}{}\n{}",
        result.converged_count,
        result.eigenvalues.len(),
        result.truncation_pair.0,
        result.truncation_pair.1,
        result.tolerance,
        if warning {
            " (WARNING: none converged; parameters may sit near spectral collapse)"
        } else {
            ""
        },
        preview.join("\n")
    );
    Ok(CommandOutput {
        json,
        human,
        csv: Some(spectrum_csv(result)),
        ok: true,
    })
}

// ---- report ----

pub fn run_report(cfg: &ReportConfig) -> Result<CommandOutput, RunError> {
    let grid = cfg.grid.points();
    let control = InitialConditions::new(
        GaussianRational::one(),
        GaussianRational::one(),
        GaussianRational::one(),
        GaussianRational::zero(),
    );
    let ics = if cfg.control_ics {
        control
    } else {
        InitialConditions::even()
    };
    let comparison = spectrum_vs_gscan_with(
        &cfg.params,
        &grid,
        &cfg.z0,
        cfg.order,
        cfg.cutoffs,
        cfg.tol,
        &ics,
        &GaussianRational::one(),
    )?;

    let scan_values: Vec<Value> = comparison
        .scan
        .iter()
        .map(|p| {
            json!({
                "energy": p.energy.to_string(),
                "value": format_gaussian(&p.value),
                "is_zero": p.is_zero,
            })
        })
        .collect();
    let spectrum = &comparison.spectrum;
    let ok = cfg.control_ics
        || (comparison.scan_all_zero && spectrum.converged_count > 0);

    let json = json!({
        "command": "report",
        "config": {
            "params": params_json(&cfg.params),
            "order": cfg.order,
            "cutoffs": [cfg.cutoffs.0, cfg.cutoffs.1],
            "tol": cfg.tol,
            "z0": format_gaussian(&cfg.z0),
            "grid": {
                "lo": cfg.grid.lo.to_string(),
                "hi": cfg.grid.hi.to_string(),
                "count": cfg.grid.count,
            },
            "control_ics": cfg.control_ics,
        },
        "crate_version": crate_version(),
        "ring": "gaussian-rational",
        "scan": scan_values,
        "scan_all_zero": comparison.scan_all_zero,
        "spectrum": {
            "converged_count": spectrum.converged_count,
            "eigenvalues": spectrum.spectrum(),
            "truncation_pair": [spectrum.truncation_pair.0, spectrum.truncation_pair.1],
            "tolerance": spectrum.tolerance,
            "residual_bound": spectrum.residual_bound,
        },
        "conclusion": comparison.conclusion(),
        "ok": ok,
    });

    let mut human = String::new();
    human.push_str(&format!(
        "root scan of the candidate determinant vs truncated-basis spectrum\n\
         params: g = {}, omega = {}, omega0 = {}; z0 = {}; series order {}\n\
         grid: {} points from {} to {}; cutoffs ({}, {}), tol {:e}\n\n",
        cfg.params.g,
        cfg.params.omega,
        cfg.params.omega0,
        format_gaussian(&cfg.z0),
        cfg.order,
        cfg.grid.count,
        cfg.grid.lo,
        cfg.grid.hi,
        cfg.cutoffs.0,
        cfg.cutoffs.1,
        cfg.tol
    ));
    human.push_str(&format!(
        "scan values ({} conditions):\n",
        if cfg.control_ics { "control" } else { "canonical even" }
    ));
    for p in &comparison.scan {
        human.push_str(&format!("  E = {:>8}: {}\n", p.energy.to_string(), format_gaussian(&p.value)));
    }
    human.push_str(&format!(
        "\nconverged spectrum ({} levels):\n",
        spectrum.converged_count
    ));
    for (i, v) in spectrum.spectrum().iter().take(20).enumerate() {
        human.push_str(&format!("  {i}: {v}\n"));
    }
    if spectrum.converged_count > 20 {
        human.push_str(&format!("  ... {} more\n", spectrum.converged_count - 20));
    }
    human.push_str(&format!("\n{}\n", comparison.conclusion()));

    Ok(CommandOutput {
        json,
        human,
        csv: None,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn numeric_params() -> ModelParams {
        ModelParams::defaults(Energy::Value(rat(1, 2)))
    }

    #[test]
    fn cutoff_and_grid_parsing() {
        assert_eq!(parse_cutoffs("500,600").unwrap(), (500, 600));
        assert_eq!(parse_cutoffs(" 30 , 40 ").unwrap(), (30, 40));
        for bad in ["", "500", "600,500", "40,40", "a,b", "1,2,3"] {
            assert!(matches!(parse_cutoffs(bad), Err(RunError::Usage(_))), "{bad}");
        }
        let grid = parse_grid("0:2:50").unwrap();
        assert_eq!(grid.count, 50);
        let points = grid.points();
        assert_eq!(points.len(), 50);
        assert_eq!(points[0], rat(0, 1));
        assert_eq!(points[49], rat(2, 1));
        assert_eq!(points[1], rat(2, 49));
        assert_eq!(
            parse_grid("0:2:5").unwrap().points(),
            vec![rat(0, 1), rat(1, 2), rat(1, 1), rat(3, 2), rat(2, 1)]
        );
        assert_eq!(parse_grid("1/2:1/2:1").unwrap().points(), vec![rat(1, 2)]);
        assert_eq!(parse_grid("0:1:0").unwrap().points(), vec![]);
        for bad in ["", "0:2", "0:2:x", "0;2;5", "q:2:5", "0:2:5:6"] {
            assert!(matches!(parse_grid(bad), Err(RunError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn verify_g_numeric_and_symbolic() {
        let out = run_verify_g(&VerifyGConfig {
            params: numeric_params(),
            order: 12,
            inject_fault: false,
        })
        .unwrap();
        assert!(out.ok);
        assert_eq!(out.json["ring"], "gaussian-rational");
        assert_eq!(out.json["family"].as_array().unwrap().len(), 8);
        assert_eq!(out.json["family"][0]["verdict"], "all_zero");
        assert_eq!(out.json["family"][0]["ics"], "even");
        assert_eq!(out.json["family"][0]["second_derivative_identity"], true);
        // odd members carry no second-derivative certificate
        assert_eq!(out.json["family"][1]["second_derivative_identity"], Value::Null);
        assert_eq!(
            out.json["family"][2]["verdict"]["first_nonzero"]["index"],
            0
        );
        assert_eq!(
            out.json["family"][2]["verdict"]["first_nonzero"]["value"],
            "2"
        );

        let sym = run_verify_g(&VerifyGConfig {
            params: ModelParams::defaults(Energy::Symbolic),
            order: 12,
            inject_fault: false,
        })
        .unwrap();
        assert!(sym.ok);
        assert_eq!(sym.json["ring"], "energy-polynomial");
        assert_eq!(
            sym.json["family"][2]["verdict"]["first_nonzero"]["value"]["e_coefficients"],
            json!(["2"])
        );
    }

    #[test]
    fn verify_g_minimal_order_and_fault() {
        let minimal = run_verify_g(&VerifyGConfig {
            params: numeric_params(),
            order: 4,
            inject_fault: false,
        })
        .unwrap();
        assert!(minimal.ok);

        let faulted = run_verify_g(&VerifyGConfig {
            params: numeric_params(),
            order: 12,
            inject_fault: true,
        })
        .unwrap();
        assert!(!faulted.ok);
        assert_eq!(
            faulted.json["family"][0]["verdict"]["first_nonzero"]["index"],
            6
        );
        // the corrupted member still passes its first four conditions
        assert_eq!(
            faulted.json["family"][0]["derivative_conditions"],
            json!([true, true, true, true])
        );

        // usage error below the minimum order
        assert!(matches!(
            run_verify_g(&VerifyGConfig {
                params: numeric_params(),
                order: 2,
                inject_fault: false,
            }),
            Err(RunError::Usage(_))
        ));
    }

    #[test]
    fn verify_ode4_standard_and_variant() {
        let out = run_verify_ode4(&VerifyOde4Config {
            params: numeric_params(),
            order: 16,
            a1_variant: false,
        })
        .unwrap();
        assert!(out.ok);
        assert_eq!(out.json["cases"].as_array().unwrap().len(), 3);
        for case in out.json["cases"].as_array().unwrap() {
            for target in case["targets"].as_array().unwrap() {
                assert_eq!(target["ok"], true);
                assert_eq!(target["first_nonzero"], Value::Null);
            }
        }

        let sym = run_verify_ode4(&VerifyOde4Config {
            params: ModelParams::defaults(Energy::Symbolic),
            order: 16,
            a1_variant: false,
        })
        .unwrap();
        assert!(sym.ok);

        let variant = run_verify_ode4(&VerifyOde4Config {
            params: numeric_params(),
            order: 16,
            a1_variant: true,
        })
        .unwrap();
        assert!(!variant.ok);
        let phi1 = &variant.json["cases"][0]["targets"][0];
        assert_eq!(phi1["first_nonzero"]["index"], 2);
        assert_eq!(phi1["first_nonzero"]["value"], "-12/25");
    }

    #[test]
    fn spectrum_small_run_shapes() {
        let cfg = SpectrumConfig {
            params: numeric_params(),
            cutoffs: (30, 40),
            tol: 1e-8,
            parity: ParityChoice::Both,
        };
        let out = run_spectrum(&cfg).unwrap();
        assert!(out.ok);
        assert_eq!(out.json["warning"], false);
        let levels = out.json["levels"].as_array().unwrap();
        assert_eq!(levels.len(), 82);
        assert!(out.json["converged_count"].as_u64().unwrap() > 0);
        let csv = out.csv.as_deref().unwrap();
        let mut csv_lines = csv.lines();
        assert_eq!(
            csv_lines.next().unwrap(),
            "index,eigenvalue,converged_flag,residual_bound"
        );
        assert_eq!(csv.lines().count(), 83);
        // determinism: an identical run renders byte-identical artifacts
        let again = run_spectrum(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&out.json).unwrap(),
            serde_json::to_string(&again.json).unwrap()
        );
        assert_eq!(out.csv, again.csv);
    }

    #[test]
    fn spectrum_decoupled_csv_matches_closed_form() {
        let out = run_spectrum(&SpectrumConfig {
            params: ModelParams::new(rat(0, 1), rat(1, 1), rat(7, 10), Energy::Value(rat(0, 1))),
            cutoffs: (30, 40),
            tol: 1e-10,
            parity: ParityChoice::Both,
        })
        .unwrap();
        let csv = out.csv.as_deref().unwrap();
        for (k, line) in csv.lines().skip(1).take(20).enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[0], k.to_string());
            let value: f64 = fields[1].parse().unwrap();
            let expect = (k / 2) as f64 + if k % 2 == 0 { -0.35 } else { 0.35 };
            assert!((value - expect).abs() < 1e-12);
            assert_eq!(fields[2], "true");
        }
    }

    #[test]
    fn spectrum_parity_blocks_run() {
        let even = run_spectrum(&SpectrumConfig {
            params: numeric_params(),
            cutoffs: (30, 40),
            tol: 1e-8,
            parity: ParityChoice::Even,
        })
        .unwrap();
        assert_eq!(even.json["config"]["parity"], "even");
        // even block at cutoff 40 holds photon numbers 0,2,...,40
        assert_eq!(even.json["levels"].as_array().unwrap().len(), 42);
    }

    #[test]
    fn spectrum_defaults_example() {
        // defaults: at least 10 converged levels, every diagnostic converging
        let out = run_spectrum(&SpectrumConfig {
            params: numeric_params(),
            cutoffs: (500, 600),
            tol: 1e-10,
            parity: ParityChoice::Both,
        })
        .unwrap();
        let converged = out.json["converged_count"].as_u64().unwrap();
        assert!(converged >= 10, "converged {converged}");
        for level in out.json["levels"].as_array().unwrap() {
            if level["converged"] == true {
                for spin in ["spin_up", "spin_down"] {
                    let class = &level["norm_diagnostics"][spin]["classification"];
                    assert_eq!(class, "converging", "level {}", level["index"]);
                }
            }
        }
    }

    #[test]
    fn report_canonical_and_control() {
        let cfg = ReportConfig {
            params: numeric_params(),
            order: 16,
            cutoffs: (30, 40),
            tol: 1e-8,
            z0: crate::exact::gauss_real(rat(1, 3)),
            grid: GridSpec {
                lo: rat(0, 1),
                hi: rat(2, 1),
                count: 5,
            },
            control_ics: false,
        };
        let out = run_report(&cfg).unwrap();
        assert!(out.ok);
        assert_eq!(out.json["scan_all_zero"], true);
        let scan = out.json["scan"].as_array().unwrap();
        assert_eq!(scan.len(), 5);
        for p in scan {
            assert_eq!(p["is_zero"], true);
            assert_eq!(p["value"], "0");
        }
        assert!(out.human.contains("selects no levels"));
        // determinism
        let again = run_report(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&out.json).unwrap(),
            serde_json::to_string(&again.json).unwrap()
        );

        let control = run_report(&ReportConfig {
            control_ics: true,
            ..cfg
        })
        .unwrap();
        assert!(control.ok);
        assert_eq!(control.json["scan_all_zero"], false);
        assert!(control
            .json["scan"]
            .as_array()
            .unwrap()
            .iter()
            .all(|p| p["is_zero"] == false));
    }
}
