use std::io::Write;
use std::path::{Path, PathBuf};

use fockfield::algebra::json::{expr_to_json, scalar_to_json};
use fockfield::algebra::OperatorExpr;
use fockfield::field::{
    decompose_modes, electric_field_expr, expectation_series, magnetic_field_expr, perturbed_field_expr,
    verify_report, FieldConfig, FieldState, ModeSource, ReportOptions, TimeGrid,
};
use fockfield::fock::{FockSpace, PropagatorConfig};
use fockfield::transition::{double_slit_pattern, run_transition, RampSchedule, SlitGeometry, SlitState};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::scenario::{CommandKind, Emit, Format, Observable, Scenario, StateKind};

pub fn run(s: &Scenario) -> Result<(), CliError> {
    let cfg = FieldConfig::new(s.omega, s.c, s.eps_tilde, s.z.expect("resolved"))?;
    match s.command {
        CommandKind::Verify => verify(s, &cfg),
        CommandKind::Series => series(s, &cfg),
        CommandKind::Modes => modes(s, &cfg),
        CommandKind::Transition => transition(s, &cfg),
        CommandKind::DoubleSlit => double_slit(s, &cfg),
    }
}

fn format(s: &Scenario) -> Format {
    s.format.expect("resolved")
}

fn theta(s: &Scenario) -> f64 {
    s.theta.expect("resolved")
}

fn space(s: &Scenario) -> Result<Option<FockSpace>, CliError> {
    s.dim.map(FockSpace::new).transpose().map_err(Into::into)
}

fn require_json(s: &Scenario) -> Result<(), CliError> {
    match format(s) {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Invalid(format!("{:?} output is JSON only", s.command))),
    }
}

fn field_state(s: &Scenario) -> FieldState {
    let alpha = s.alpha.0;
    match s.state.expect("resolved") {
        StateKind::Coherent => FieldState::Coherent { alpha },
        StateKind::Number => FieldState::Number { n: s.n },
        StateKind::Displaced => FieldState::Displaced { alpha, n: s.n, convention: s.convention, normalize: s.normalize },
    }
}

fn observable(s: &Scenario, cfg: &FieldConfig) -> OperatorExpr {
    match s.observable {
        Observable::Electric => electric_field_expr(cfg),
        Observable::Magnetic => magnetic_field_expr(cfg),
        Observable::Perturbed => perturbed_field_expr(cfg, true),
    }
}

fn document(s: &Scenario, key: &str, payload: Value) -> String {
    let doc = json!({ "scenario": s.echo(), key: payload });
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data");
    text.push('\n');
    text
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".scenario.json");
    PathBuf::from(name)
}

fn emit(s: &Scenario, contents: &str) -> Result<(), CliError> {
    match &s.out {
        Some(path) => {
            write_atomic(path, contents)?;
            if format(s) == Format::Csv {
                let mut echo = serde_json::to_string_pretty(&s.echo()).expect("plain data");
                echo.push('\n');
                write_atomic(&sidecar(path), &echo)?;
            }
        }
        None => print!("{contents}"),
    }
    Ok(())
}

fn symbolic(s: &Scenario, cfg: &FieldConfig, which: Emit) -> Result<String, CliError> {
    let x = observable(s, cfg);
    Ok(match which {
        Emit::Expr => document(s, "expr", expr_to_json(&x)?),
        Emit::Scalar => document(s, "scalar", scalar_to_json(&field_state(s).symbolic(&x)?)?),
    })
}

fn verify(s: &Scenario, cfg: &FieldConfig) -> Result<(), CliError> {
    require_json(s)?;
    let report = verify_report(s.alpha.0, s.nmax, cfg, &ReportOptions { dim: s.dim });
    let rows = serde_json::to_value(&report).expect("plain data");
    emit(s, &document(s, "report", rows))?;
    let failed = report.failures().count();
    for row in report.failures() {
        eprintln!("FAIL {} ({})", row.id, row.convention);
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}

fn series(s: &Scenario, cfg: &FieldConfig) -> Result<(), CliError> {
    if let Some(which) = s.emit {
        return emit(s, &symbolic(s, cfg, which)?);
    }
    let grid = TimeGrid::new(s.periods, s.samples_per_period)?;
    let series = expectation_series(&observable(s, cfg), &field_state(s), cfg, &grid, s.path, space(s)?)?;
    let text = match format(s) {
        Format::Csv => series.to_csv(),
        Format::Json => {
            let re: Vec<f64> = series.values.iter().map(|v| v.re).collect();
            let im: Vec<f64> = series.values.iter().map(|v| v.im).collect();
            document(s, "series", json!({ "t": series.t, "re": re, "im": im }))
        }
    };
    emit(s, &text)
}

fn modes(s: &Scenario, cfg: &FieldConfig) -> Result<(), CliError> {
    require_json(s)?;
    if let Some(which) = s.emit {
        return emit(s, &symbolic(s, cfg, which)?);
    }
    let state = field_state(s);
    let scalar = state.symbolic(&observable(s, cfg))?;
    let source = ModeSource::Symbolic { scalar: &scalar, alpha_mag: s.alpha_mag() };
    let list = decompose_modes(source, cfg.omega, theta(s), state.excitation())?;
    emit(s, &document(s, "modes", serde_json::to_value(&list).expect("plain data")))
}

fn transition(s: &Scenario, cfg: &FieldConfig) -> Result<(), CliError> {
    require_json(s)?;
    let schedule = RampSchedule::new(s.ramp, s.duration)?;
    let space = space(s)?.unwrap_or_else(|| FockSpace::sized_for(s.alpha.0.norm(), s.n as usize));
    let config = PropagatorConfig { steps_per_period: s.steps_per_period, ..Default::default() };
    let result = run_transition(s.alpha.0, s.n as usize, &schedule, cfg.omega, space, &config)?;
    emit(s, &document(s, "result", serde_json::to_value(&result).expect("plain data")))
}

fn double_slit(s: &Scenario, cfg: &FieldConfig) -> Result<(), CliError> {
    let state = match s.state.expect("resolved") {
        StateKind::Coherent => SlitState::Coherent { alpha: s.alpha.0 },
        StateKind::Number => SlitState::Number { n: s.n },
        StateKind::Displaced => {
            return Err(CliError::Invalid("double-slit takes a coherent or number state".into()));
        }
    };
    let geom = SlitGeometry::uniform(s.slit_separation, s.screen_distance, s.screen_half_width, s.screen_points)?;
    let profile = double_slit_pattern(state, &geom, cfg, s.floor, space(s)?)?;
    if let Some(w) = &profile.warning {
        eprintln!("warning: {w}");
    }
    eprintln!("visibility {}", profile.visibility);
    let text = match format(s) {
        Format::Csv => profile.to_csv(),
        Format::Json => document(s, "profile", serde_json::to_value(&profile).expect("plain data")),
    };
    emit(s, &text)
}
