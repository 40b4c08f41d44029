use fockfield::algebra::json::{expr_from_json, expr_to_json, scalar_from_json, scalar_to_json};
use fockfield::algebra::{atom, coherent_expectation, displaced_state_expectation, multiply, Atom, Convention};
use fockfield::field::{electric_field_expr, FieldConfig};
use fockfield::fock::json::{operator_from_json, operator_to_json};
use fockfield::fock::{ladder_matrices, FockSpace};
use serde_json::Value;

fn golden(name: &str) -> Value {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn first_excited_create_sandwich() {
    let got = displaced_state_expectation(&atom(Atom::Create), 1, Convention::Paper, false).unwrap();
    let want = golden("first_excited_create.json");
    assert_eq!(scalar_to_json(&got).unwrap(), want);
    assert_eq!(scalar_from_json(&want).unwrap(), got);
}

#[test]
fn coherent_standing_wave() {
    let got = coherent_expectation(&electric_field_expr(&FieldConfig::default()));
    assert_eq!(scalar_to_json(&got).unwrap(), golden("coherent_electric.json"));
}

#[test]
fn expression_round_trip() {
    let x = multiply(&atom(Atom::Annihilate), &multiply(&atom(Atom::Create), &atom(Atom::Create)));
    let v = expr_to_json(&x).unwrap();
    assert_eq!(expr_from_json(&v).unwrap(), x);
    assert_eq!(v.to_string(), r#"[{"coeff":[[0,0,2,1,0,1]],"k":0,"m":1,"n":0},{"coeff":[[0,0,1,1,0,1]],"k":0,"m":2,"n":1}]"#);
}

#[test]
fn truncated_annihilator() {
    let (a, _) = ladder_matrices(FockSpace::new(3).unwrap());
    let want = golden("ladder_d3.json");
    assert_eq!(operator_to_json(&a), want);
    assert_eq!(operator_from_json(&want).unwrap(), a);
}
