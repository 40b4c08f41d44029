use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::fit::{decompose_modes, lattice_multiples, ModeSource};
use super::series::{expectation_series, EvalPath, FieldSeries, FieldState, TimeGrid};
use super::{electric_field_expr, magnetic_field_expr, perturbed_field_expr, FieldConfig, FieldError};
use crate::algebra::{
    atom, coherent_expectation, displaced_state_expectation, evolve_phases, multiply, to_real_modes, Atom, CoeffPoly,
    Convention, OperatorExpr, RationalComplex, TimeScalar,
};
use crate::fock::{coherent_ket, expectation, ladder_matrices, FockSpace};
use crate::C64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub convention: Convention,
    pub expected: Value,
    pub measured: Value,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub rows: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.rows.iter().find(|r| r.id == id)
    }

    /// Pretty JSON with object keys in sorted order.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report is plain data");
        serde_json::to_string_pretty(&value).expect("report is plain data")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Fock dimension for the oracle; defaults to the sizing rule.
    pub dim: Option<usize>,
}

struct Battery {
    rows: Vec<Check>,
}

impl Battery {
    fn push(&mut self, id: impl Into<String>, convention: Convention, expected: Value, measured: Value, tol: f64, pass: bool) {
        self.rows.push(Check { id: id.into(), convention, expected, measured, tol, pass });
    }

    fn exact<T: PartialEq + std::fmt::Display>(&mut self, id: &str, convention: Convention, expected: &T, measured: &T) {
        self.push(id, convention, json!(expected.to_string()), json!(measured.to_string()), 0.0, expected == measured);
    }

    fn within(&mut self, id: &str, convention: Convention, expected: f64, measured: f64, tol: f64) {
        let pass = (measured - expected).abs() <= tol;
        self.push(id, convention, json!(expected), json!(measured), tol, pass);
    }

    fn failed(&mut self, id: &str, convention: Convention, err: &FieldError) {
        self.push(id, convention, Value::Null, json!(err.to_string()), 0.0, false);
    }
}

fn poly(c: i64, p: u32, q: u32) -> CoeffPoly {
    CoeffPoly::monomial(RationalComplex::integer(c), p, q)
}

fn exact(v: f64) -> CoeffPoly {
    CoeffPoly::constant(RationalComplex::from_f64(v).expect("finite"))
}

fn max_abs_dev(a: &FieldSeries, f: impl Fn(f64) -> f64) -> f64 {
    a.t.iter().zip(&a.values).fold(0.0, |m, (&t, v)| m.max((v - C64::from(f(t))).norm()))
}

/// Runs the full battery at `α`, with `θ = arg α`, for excitations up to `n_max`.
///
/// Failures are rows with `pass == false`; nothing here returns an error.
pub fn verify_report(alpha: C64, n_max: u32, cfg: &FieldConfig, options: &ReportOptions) -> Report {
    let mut b = Battery { rows: Vec::new() };
    let mag = alpha.norm();
    let theta = alpha.arg();
    let space = match options.dim.map(FockSpace::new) {
        Some(Ok(s)) => s,
        Some(Err(e)) => {
            b.failed("fock_dimension", Convention::Adjoint, &e.into());
            return finish(b);
        }
        None => FockSpace::sized_for(mag, n_max as usize),
    };
    let grid = TimeGrid::default();
    let a = atom(Atom::Annihilate);
    let ad = atom(Atom::Create);
    let paper = Convention::Paper;
    let adjoint = Convention::Adjoint;

    // ladder algebra
    let comm = multiply(&a, &ad).sub(&multiply(&ad, &a));
    b.exact("commutator_symbolic", paper, &OperatorExpr::identity(), &comm);
    let (am, adm) = ladder_matrices(space);
    let c = am.commutator(&adm).expect("shared space");
    let d = space.dim();
    let mut dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let want = match (i == j, i + 1 < d) {
                (true, true) => 1.0,
                (true, false) => -((d - 1) as f64),
                _ => 0.0,
            };
            dev = dev.max((c.matrix()[(i, j)] - want).norm());
        }
    }
    b.within("commutator_truncated", paper, 0.0, dev, 1e-12);
    let half = CoeffPoly::constant(RationalComplex::ratio(1, 2));
    let h = multiply(&ad, &a).add(&OperatorExpr::identity().scale(&half));
    match evolve_phases(&h) {
        Ok(evolved) => b.exact("hamiltonian_stationary", paper, &h, &evolved),
        Err(e) => b.failed("hamiltonian_stationary", paper, &e.into()),
    }
    match coherent_ket(alpha, space) {
        Ok(k) => {
            let m = expectation(&am, &k).expect("shared space");
            b.within("coherent_eigenvalue", paper, 0.0, (m - alpha).norm(), 1e-10);
        }
        Err(e) => b.failed("coherent_eigenvalue", paper, &e.into()),
    }

    // free field
    let e = electric_field_expr(cfg);
    let s = cfg.electric_scale();
    let mut zero: f64 = 0.0;
    let mut zero_err = None;
    for n in 0..=5.max(n_max) {
        match expectation_series(&e, &FieldState::Number { n }, cfg, &grid, EvalPath::Oracle, Some(space)) {
            Ok(series) => zero = zero.max(series.max_abs()),
            Err(err) => zero_err = Some(err),
        }
    }
    match zero_err {
        None => b.within("zero_field_number_states", paper, 0.0, zero, 1e-10),
        Some(err) => b.failed("zero_field_number_states", paper, &err),
    }

    let standing = TimeScalar::from_buckets([
        (-1, &CoeffPoly::alpha() * &exact(s)),
        (1, &CoeffPoly::alpha_conj() * &exact(s)),
    ]);
    b.exact("standing_wave_symbolic", paper, &standing, &coherent_expectation(&e));
    let coherent = FieldState::Coherent { alpha };
    match expectation_series(&e, &coherent, cfg, &grid, EvalPath::Oracle, Some(space)) {
        Ok(series) => {
            let dev = max_abs_dev(&series, |t| 2.0 * s * mag * (cfg.omega * t - theta).cos());
            b.within("standing_wave_series", paper, 0.0, dev, 1e-8);
        }
        Err(err) => b.failed("standing_wave_series", paper, &err),
    }

    let cfg_b = cfg.with_z(cfg.z / 2.0);
    let bfield = magnetic_field_expr(&cfg_b);
    let sb = cfg_b.magnetic_scale();
    match expectation_series(&bfield, &coherent, &cfg_b, &grid, EvalPath::Oracle, Some(space)) {
        Ok(series) => {
            let dev = max_abs_dev(&series, |t| -2.0 * sb * mag * (cfg.omega * t - theta).sin());
            b.within("magnetic_sine_form", paper, 0.0, dev, 1e-8);
        }
        Err(err) => b.failed("magnetic_sine_form", paper, &err),
    }

    // perturbed field
    let pert = coherent_expectation(&perturbed_field_expr(cfg, true));
    let dead_end = TimeScalar::from_buckets([
        (1, &(&CoeffPoly::alpha_conj() - &CoeffPoly::alpha()) * &exact(s)),
        (0, &poly(2, 1, 0) * &exact(s)),
    ]);
    b.exact("dead_end_symbolic", paper, &dead_end, &pert);
    let probe = C64::from_polar(1.0, PI / 4.0);
    let imag = pert.imaginary_residual(probe);
    let floor = 0.1 * cfg.eps_tilde;
    b.push(
        "dead_end_imaginary",
        paper,
        json!(format!("> {floor:e}")),
        json!(imag),
        floor,
        imag > floor && to_real_modes(&pert, 1.0, PI / 4.0).is_err(),
    );

    // printed sandwiches
    let norm = poly(1, 1, 1);
    let one_plus = &CoeffPoly::one() + &norm;
    let sandwiches: [(&str, OperatorExpr, CoeffPoly); 4] = [
        ("sandwich_a_ad_ad", multiply(&a, &multiply(&ad, &ad)), &poly(2, 0, 1) + &poly(1, 1, 2)),
        ("sandwich_ad_ad", multiply(&ad, &ad), poly(1, 0, 2)),
        ("sandwich_a_ad", multiply(&a, &ad), one_plus.clone()),
        ("sandwich_ad", ad.clone(), poly(1, 0, 1)),
    ];
    for (id, x, want) in sandwiches {
        b.exact(id, paper, &TimeScalar::from_buckets([(0, want)]), &coherent_expectation(&x));
    }
    let create_one = &(&(&poly(2, 0, 1) * &one_plus) - &poly(1, 0, 3)) - &(&poly(1, 1, 0) * &one_plus);
    let annihilate_one = create_one.conj();
    for (id, x, want) in [("first_excited_create", &ad, create_one), ("first_excited_annihilate", &a, annihilate_one)] {
        match displaced_state_expectation(x, 1, paper, false) {
            Ok(got) => b.exact(id, paper, &TimeScalar::from_buckets([(0, want)]), &got),
            Err(err) => b.failed(id, paper, &err.into()),
        }
    }

    // first excited field, compared in magnitude per lattice point
    match displaced_state_expectation(&e, 1, paper, false)
        .map_err(FieldError::from)
        .and_then(|sig| decompose_modes(ModeSource::Symbolic { scalar: &sig, alpha_mag: mag }, cfg.omega, theta, 1))
    {
        Ok(modes) => {
            let want = [
                (1, 4.0 * mag * (1.0 + mag * mag) * s),
                (3, 2.0 * mag.powi(3) * s),
                (-1, 2.0 * mag * (1.0 + mag * mag) * s),
            ];
            let mut dev: f64 = modes.residual;
            for (m, v) in want {
                dev = dev.max((modes.lattice_amplitude(m).unwrap_or(0.0).abs() - v.abs()).abs());
            }
            let measured: Vec<Value> =
                modes.lattice.iter().map(|l| json!({"theta_multiple": l.theta_multiple, "amplitude": l.amplitude})).collect();
            let expected: Vec<Value> =
                want.iter().map(|(m, v)| json!({"theta_multiple": m, "amplitude_abs": v.abs()})).collect();
            b.push("first_excited_field_modes", paper, json!(expected), json!(measured), 1e-9, dev <= 1e-9);
        }
        Err(err) => b.failed("first_excited_field_modes", paper, &err),
    }

    // phase lattice for the printed construction
    for n in 0..=n_max {
        let id = format!("mode_lattice_n{n}");
        let lattice = lattice_multiples(n);
        let fitted = displaced_state_expectation(&e, n, paper, false).map_err(FieldError::from).and_then(|sig| {
            let exact_groups = to_real_modes(&sig, mag.max(0.5), 0.3).map_err(FieldError::from)?;
            let fit = decompose_modes(ModeSource::Symbolic { scalar: &sig, alpha_mag: mag }, cfg.omega, theta, n)?;
            Ok((exact_groups, fit))
        });
        match fitted {
            Ok((groups, fit)) => {
                let outside: Vec<i64> = groups
                    .active_multiples()
                    .into_iter()
                    .filter(|d| !lattice.contains(d))
                    .collect();
                let active = fit.active_multiples();
                let count = active.len();
                let pass = outside.is_empty() && count <= lattice.len() && fit.residual < 1e-9;
                b.push(
                    &id,
                    paper,
                    json!({"max_count": lattice.len(), "lattice": lattice}),
                    json!({"count": count, "multiples": active, "outside_lattice": outside,
                           "degenerate": fit.degenerate, "residual": fit.residual}),
                    1e-9,
                    pass,
                );
                if n == 2 {
                    b.push("mode_lattice_n2_phase_set", paper, json!(lattice), json!(active), 0.0, active == lattice);
                }
            }
            Err(err) => b.failed(&id, paper, &err),
        }
    }

    // adjoint construction against the oracle
    let observables: Vec<(&str, OperatorExpr)> = vec![
        ("electric", e.clone()),
        ("magnetic", magnetic_field_expr(&cfg.with_z(0.0))),
        ("number", multiply(&ad, &a)),
        ("a2", evolve_phases(&multiply(&a, &a)).expect("unevolved")),
        ("ad_a_a", evolve_phases(&multiply(&ad, &multiply(&a, &a))).expect("unevolved")),
    ];
    let coherent_fit = coherent_expectation(&e);
    let mut reality: f64 = 0.0;
    for n in 0..=n_max {
        let state = FieldState::Displaced { alpha, n, convention: adjoint, normalize: true };
        let mut dev: f64 = 0.0;
        let mut failure = None;
        for (_, x) in &observables {
            let sym = expectation_series(x, &state, cfg, &grid, EvalPath::Symbolic, Some(space));
            let num = expectation_series(x, &state, cfg, &grid, EvalPath::Oracle, Some(space));
            match (sym, num) {
                (Ok(sym), Ok(num)) => dev = dev.max(sym.max_diff(&num)),
                (Err(err), _) | (_, Err(err)) => failure = Some(err),
            }
        }
        let id = format!("oracle_adjoint_n{n}");
        match failure {
            None => b.within(&id, adjoint, 0.0, dev, 1e-8),
            Some(err) => b.failed(&id, adjoint, &err),
        }

        let id = format!("n_independence_adjoint_n{n}");
        let fits = displaced_state_expectation(&e, n, adjoint, true).map_err(FieldError::from).and_then(|sig| {
            let src = ModeSource::Symbolic { scalar: &sig, alpha_mag: mag };
            let displaced = decompose_modes(src, cfg.omega, theta, n)?;
            let base = decompose_modes(ModeSource::Symbolic { scalar: &coherent_fit, alpha_mag: mag }, cfg.omega, theta, n)?;
            Ok((displaced, base))
        });
        match fits {
            Ok((displaced, base)) => {
                let dev = displaced
                    .lattice
                    .iter()
                    .zip(&base.lattice)
                    .fold(0.0_f64, |m, (x, y)| m.max((x.amplitude - y.amplitude).abs()));
                b.within(&id, adjoint, 0.0, dev, 1e-8);
            }
            Err(err) => b.failed(&id, adjoint, &err),
        }

        for x in [&e, &observables[1].1] {
            for st in [state, FieldState::Number { n }, coherent] {
                if let Ok(series) = expectation_series(x, &st, cfg, &grid, EvalPath::Oracle, Some(space)) {
                    reality = reality.max(series.values.iter().fold(0.0, |m, v| m.max(v.im.abs())));
                }
            }
        }
    }
    b.within("field_reality", adjoint, 0.0, reality, 1e-9);
    finish(b)
}

fn finish(b: Battery) -> Report {
    let mut rows = b.rows;
    rows.sort_by(|x, y| x.id.cmp(&y.id));
    Report { rows }
}
