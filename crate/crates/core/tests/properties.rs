use std::collections::BTreeMap;

use fockfield::algebra::{
    adjoint, atom, coherent_expectation, displace_by, displaced_state_expectation, multiply, Atom, CoeffPoly,
    Convention, OperatorExpr, RationalComplex,
};
use fockfield::field::{
    decompose_modes, electric_field_expr, expectation_series, magnetic_field_expr, EvalPath, FieldConfig,
    FieldState, ModeSource, TimeGrid,
};
use fockfield::fock::{
    coherent_ket, displacement_matrix, expectation, ladder_matrices, matrix_of, FockSpace, PropagatorConfig,
};
use fockfield::transition::{
    double_slit_pattern, run_transition, FloorOrdering, RampKind, RampSchedule, SlitGeometry, SlitState,
};
use fockfield::C64;
use proptest::prelude::*;

#[derive(Clone, Copy, Debug)]
enum Letter {
    A,
    Ad,
    Scalar(i64),
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::A), Just(Letter::Ad), (-3i64..=3).prop_map(Letter::Scalar)]
}

fn letter_expr(l: Letter) -> OperatorExpr {
    match l {
        Letter::A => atom(Atom::Annihilate),
        Letter::Ad => atom(Atom::Create),
        Letter::Scalar(c) => OperatorExpr::scalar(CoeffPoly::constant(RationalComplex::integer(c)), 0),
    }
}

/// Normal form by literal rewriting of `a a† → a† a + 1`; words are
/// `true = a†`, `false = a`.
fn rewrite_oracle(word: &[Letter]) -> BTreeMap<(u32, u32), i64> {
    let mut scale = 1i64;
    let mut letters = Vec::new();
    for l in word {
        match *l {
            Letter::A => letters.push(false),
            Letter::Ad => letters.push(true),
            Letter::Scalar(c) => scale *= c,
        }
    }
    let mut pending = vec![(letters, scale)];
    let mut out = BTreeMap::new();
    while let Some((w, c)) = pending.pop() {
        if c == 0 {
            continue;
        }
        match w.windows(2).position(|p| !p[0] && p[1]) {
            Some(i) => {
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                let mut contracted = w.clone();
                contracted.drain(i..i + 2);
                pending.push((swapped, c));
                pending.push((contracted, c));
            }
            None => {
                let m = w.iter().filter(|&&b| b).count() as u32;
                *out.entry((m, w.len() as u32 - m)).or_insert(0) += c;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn as_integer_table(x: &OperatorExpr) -> BTreeMap<(u32, u32), i64> {
    x.monomials()
        .map(|mono| {
            assert_eq!(mono.k, 0);
            let c = mono.coeff.as_constant().expect("constant coefficient").to_c64();
            assert_eq!(c.im, 0.0);
            ((mono.m, mono.n), c.re as i64)
        })
        .collect()
}

fn product_in(word: &[Letter], lo: usize, hi: usize, split: &[usize]) -> OperatorExpr {
    if hi - lo == 1 {
        return letter_expr(word[lo]);
    }
    let mid = lo + 1 + split[lo % split.len()] % (hi - lo - 1);
    multiply(&product_in(word, lo, mid, split), &product_in(word, mid, hi, split))
}

fn small_rational() -> impl Strategy<Value = RationalComplex> {
    (-6i64..=6, -6i64..=6, 1i64..=4).prop_map(|(re, im, den)| {
        &RationalComplex::from_ints(re, im) * &RationalComplex::ratio(1, den)
    })
}

fn coeff_poly() -> impl Strategy<Value = CoeffPoly> {
    prop::collection::vec((small_rational(), 0u32..=2, 0u32..=2), 1..=3).prop_map(|terms| {
        let mut c = CoeffPoly::zero();
        for (r, p, q) in terms {
            c.add_term(p, q, r);
        }
        c
    })
}

fn operator_expr() -> impl Strategy<Value = OperatorExpr> {
    prop::collection::vec((coeff_poly(), 0u32..=4, 0u32..=4, -2i32..=2), 1..=4).prop_map(|monos| {
        monos.into_iter().fold(OperatorExpr::zero(), |acc, (c, m, n, k)| acc.add(&OperatorExpr::monomial(c, m, n, k)))
    })
}

fn alpha_in_disc(max: f64) -> impl Strategy<Value = C64> {
    (0.0..=max, 0.0..std::f64::consts::TAU).prop_map(|(r, th)| C64::from_polar(r, th))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn parenthesizations_agree_with_rewriting(
        word in prop::collection::vec(letter(), 1..=8),
        split in prop::collection::vec(0usize..8, 1..=8),
    ) {
        let left = word.iter().fold(OperatorExpr::identity(), |acc, &l| multiply(&acc, &letter_expr(l)));
        let right = word.iter().rev().fold(OperatorExpr::identity(), |acc, &l| multiply(&letter_expr(l), &acc));
        let mixed = product_in(&word, 0, word.len(), &split);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&left, &mixed);
        prop_assert_eq!(as_integer_table(&left), rewrite_oracle(&word));
    }

    #[test]
    fn matrix_oracle_matches_coherent_expectation(
        x in operator_expr(),
        alpha in alpha_in_disc(1.5),
        t in 0.0..7.0f64,
    ) {
        let space = FockSpace::new(48).unwrap();
        let ket = coherent_ket(alpha, space).unwrap();
        let numeric = expectation(&matrix_of(&x, space, t, 1.3, alpha), &ket).unwrap();
        let symbolic = coherent_expectation(&x).eval(alpha, 1.3, t);
        let scale = 1.0 + symbolic.norm();
        prop_assert!((numeric - symbolic).norm() <= 1e-8 * scale, "{numeric} vs {symbolic}");
    }

    #[test]
    fn adjoint_conjugates_expectation(x in operator_expr()) {
        prop_assert_eq!(coherent_expectation(&adjoint(&x)), coherent_expectation(&x).conj());
    }

    #[test]
    fn adjoint_shifts_compose(x in operator_expr(), s1 in small_rational(), s2 in small_rational()) {
        let (c1, c2) = (CoeffPoly::constant(s1), CoeffPoly::constant(s2));
        let twice = displace_by(&displace_by(&x, &c1, Convention::Adjoint), &c2, Convention::Adjoint);
        let once = displace_by(&x, &(&c1 + &c2), Convention::Adjoint);
        prop_assert_eq!(twice, once);
        let symbolic = displace_by(&displace_by(&x, &CoeffPoly::alpha(), Convention::Adjoint), &c2, Convention::Adjoint);
        prop_assert_eq!(symbolic, displace_by(&x, &(&CoeffPoly::alpha() + &c2), Convention::Adjoint));
    }

    #[test]
    fn displacement_conjugates_annihilator(alpha in alpha_in_disc(1.5)) {
        let space = FockSpace::new(64).unwrap();
        let d = displacement_matrix(alpha, space);
        let (a, _) = ladder_matrices(space);
        let shifted = d.dagger().compose(&a).unwrap().compose(&d).unwrap();
        let want = a.plus(&fockfield::fock::FockOperator::identity(space).scaled(alpha)).unwrap();
        let diff = shifted.minus(&want).unwrap().leading_block(32);
        prop_assert!(diff.iter().all(|v| v.norm() <= 1e-7));
    }

    #[test]
    fn field_scales_with_mode_function(alpha in alpha_in_disc(1.2), n in 0u32..=2) {
        let base = FieldConfig::default().with_z(0.0);
        let state = FieldState::Displaced { alpha, n, convention: Convention::Adjoint, normalize: true };
        let unit_e = FieldConfig::default();
        for z in [0.3, 1.1, 2.6] {
            let cfg = base.with_z(z);
            let e = state.symbolic(&electric_field_expr(&cfg)).unwrap();
            let e1 = state.symbolic(&electric_field_expr(&unit_e)).unwrap();
            prop_assert_eq!(e, e1.scale(&RationalComplex::from_f64(cfg.sin_kz()).unwrap()));
            let b = state.symbolic(&magnetic_field_expr(&cfg)).unwrap();
            let b1 = state.symbolic(&magnetic_field_expr(&base)).unwrap();
            prop_assert_eq!(b, b1.scale(&RationalComplex::from_f64(cfg.cos_kz()).unwrap()));
        }
    }

    #[test]
    fn fitted_modes_reconstruct_series(alpha in alpha_in_disc(1.5), eps in 0.1..3.0f64) {
        let cfg = FieldConfig { eps_tilde: eps, ..FieldConfig::default() };
        let series = expectation_series(
            &electric_field_expr(&cfg),
            &FieldState::Coherent { alpha },
            &cfg,
            &TimeGrid::default(),
            EvalPath::Symbolic,
            None,
        ).unwrap();
        let fit = decompose_modes(ModeSource::Series(&series), 1.0, alpha.arg(), 0).unwrap();
        prop_assert!(!fit.degenerate);
        let rms = (series.t.iter().zip(&series.values)
            .map(|(&t, v)| (fit.eval(1.0, t) - v.re).powi(2)).sum::<f64>() / series.len() as f64).sqrt();
        prop_assert!(rms < 1e-6 && fit.residual < 1e-6);
    }

    #[test]
    fn displaced_mean_field_is_level_independent(alpha in alpha_in_disc(1.5), n in 1u32..=4) {
        let cfg = FieldConfig::default();
        let e = electric_field_expr(&cfg);
        let coherent = coherent_expectation(&e);
        let displaced = displaced_state_expectation(&e, n, Convention::Adjoint, true).unwrap();
        prop_assert_eq!(&displaced, &coherent);
        let state = FieldState::Displaced { alpha, n, convention: Convention::Adjoint, normalize: true };
        let series = expectation_series(&e, &state, &cfg, &TimeGrid::default(), EvalPath::Oracle, None).unwrap();
        for (&t, v) in series.t.iter().zip(&series.values) {
            prop_assert!((v - coherent.eval(alpha, 1.0, t)).norm() <= 1e-8);
        }
    }

    #[test]
    fn visibility_stays_in_unit_interval(
        alpha in alpha_in_disc(2.0),
        n in 0u32..=3,
        d in 0.0..5.0f64,
        full in any::<bool>(),
    ) {
        let geom = SlitGeometry::uniform(d, 1000.0, 3000.0, 31).unwrap();
        let ordering = if full { FloorOrdering::Full } else { FloorOrdering::NormalOrdered };
        for state in [SlitState::Coherent { alpha }, SlitState::Number { n }] {
            let p = double_slit_pattern(state, &geom, &FieldConfig::default(), ordering, None).unwrap();
            prop_assert!((0.0..=1.0).contains(&p.visibility));
            prop_assert!(p.intensity.iter().all(|&i| i >= -1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn undisplaced_start_survives_any_ramp(kind in 0usize..3, duration in 0.01..20.0f64, n in 0usize..=3) {
        let schedule = match kind {
            0 => RampSchedule::sudden(),
            1 => RampSchedule::new(RampKind::Linear, duration).unwrap(),
            _ => RampSchedule::new(RampKind::SmoothCosine, duration).unwrap(),
        };
        let space = FockSpace::new(32).unwrap();
        let r = run_transition(C64::from(0.0), n, &schedule, 1.0, space, &PropagatorConfig::default()).unwrap();
        prop_assert!((r.fidelity_to_displaced - 1.0).abs() <= 1e-8);
        prop_assert!(r.norm_drift <= 1e-7);
    }

    #[test]
    fn field_expectations_are_real(alpha in alpha_in_disc(1.5), n in 0u32..=3, t in 0.0..7.0f64) {
        let cfg = FieldConfig::default().with_z(0.4);
        for x in [electric_field_expr(&cfg), magnetic_field_expr(&cfg)] {
            for state in [
                FieldState::Coherent { alpha },
                FieldState::Number { n },
                FieldState::Displaced { alpha, n, convention: Convention::Adjoint, normalize: true },
            ] {
                let v = state.symbolic(&x).unwrap().eval(state.alpha(), 1.0, t);
                prop_assert!(v.im.abs() <= 1e-9, "{state:?}: {v}");
                let series = expectation_series(&x, &state, &cfg, &TimeGrid::default(), EvalPath::Oracle, None).unwrap();
                prop_assert!(series.imag_rms() <= 1e-9);
            }
        }
    }
}
