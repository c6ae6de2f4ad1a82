mod common;

use common::{fixture, random_cover, sphere, two_simplices};
use deligne::analytic::{cup_product, Presentation};
use deligne::cochain::random_cocycle;
use deligne::complex::SimplicialComplex;
use deligne::cover::{CoverFile, CoveredComplex};
use deligne::json::{canonical, cochain_from_file, cochain_to_file, parse, to_canonical, CochainFile, SchemaError};
use deligne::scalar::Exact;
use proptest::prelude::*;
use serde_json::Value;

#[test]
fn canonical_output_is_a_fixed_point() {
    let p = cup_product(&fixture("winding_function", &[]), &fixture("const_function", &[("value_turns", "1/3")])).unwrap();
    let text = to_canonical(&p);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(canonical(&v), text);
    let back: Presentation = parse("p.json", &text).unwrap();
    assert_eq!(back, p);
}

#[test]
fn complex_and_cover_files_round_trip() {
    let base = random_cover(two_simplices(3), 3, 2);
    let ktext = to_canonical(&base.complex().to_file());
    let ctext = to_canonical(&base.to_file());
    let (k, positions) = SimplicialComplex::from_file(&parse("k.json", &ktext).unwrap()).unwrap();
    let cover = CoveredComplex::from_file(k, &positions, &parse::<CoverFile>("c.json", &ctext).unwrap()).unwrap();
    assert_eq!(&cover, base.as_ref());
}

#[test]
fn parse_errors_name_the_file_and_position() {
    let err = parse::<CochainFile>("broken.json", "{\n  \"degree\": 1,\n  \"arithmetic\": \"float\",\n  \"entries\": [}\n").unwrap_err();
    let msg = err.to_string();
    assert!(msg.starts_with("broken.json: line 4"), "{msg}");
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"degree": 1, "arithmetic": "float", "entries": [], "colour": "red"}"#;
    assert!(matches!(parse::<CochainFile>("x.json", text), Err(SchemaError::Parse { .. })));
    let text = r#"{"degree": 1, "arithmetic": "float", "entries": [{"k": 0, "indices": [0, 1], "simplex": [0], "valu": 1.0}]}"#;
    assert!(parse::<CochainFile>("x.json", text).is_err());
}

#[test]
fn entry_errors_carry_the_position() {
    let base = random_cover(sphere(1), 2, 0);
    let text = r#"{"degree": 1, "arithmetic": "float", "entries": [
        {"k": 1, "indices": [0], "simplex": [0, 1], "value": 0.5},
        {"k": 0, "indices": [0, 1], "simplex": [7], "value": 1.0}
    ]}"#;
    let file: CochainFile = parse("x.json", text).unwrap();
    match cochain_from_file::<f64>(base.clone(), &file) {
        Err(SchemaError::Entry { index, .. }) => assert_eq!(index, 1),
        other => panic!("{other:?}"),
    }
    let text = r#"{"degree": 1, "arithmetic": "rational", "entries": [{"k": 0, "indices": [0, 1], "simplex": [0], "turns": "1/0"}]}"#;
    let file: CochainFile = parse("x.json", text).unwrap();
    assert!(matches!(cochain_from_file::<Exact>(base, &file), Err(SchemaError::Entry { index: 0, .. })));
}

#[test]
fn exact_values_are_written_as_fractions() {
    let base = std::sync::Arc::new(CoveredComplex::attach(sphere(1), 2, &vec![vec![0, 1]; 3]).unwrap());
    let text = r#"{"degree": 1, "arithmetic": "rational", "entries": [{"k": 1, "indices": [1], "simplex": [0, 1], "rational": "2/4", "turns": "-1/3"}]}"#;
    let c = cochain_from_file::<Exact>(base, &parse("x.json", text).unwrap()).unwrap();
    let out = cochain_to_file(&c);
    assert_eq!(out.arithmetic, "rational");
    let e = &out.entries[0];
    assert_eq!(e.simplex, vec![0, 1]);
    assert_eq!((e.rational.as_deref(), e.turns.as_deref()), (Some("1/2"), Some("-1/3")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cochains_round_trip(n in 1usize..=3, cs in 0u64..500, seed in any::<u64>()) {
        let base = random_cover(sphere(n), 3, cs);
        let f = random_cocycle::<f64>(base.clone(), n, seed);
        let text = to_canonical(&cochain_to_file(&f));
        let back = cochain_from_file::<f64>(base.clone(), &parse("f.json", &text).unwrap()).unwrap();
        prop_assert_eq!(back, f);
        let e = random_cocycle::<Exact>(base.clone(), n, seed);
        let text = to_canonical(&cochain_to_file(&e));
        let back = cochain_from_file::<Exact>(base, &parse("e.json", &text).unwrap()).unwrap();
        prop_assert_eq!(back, e);
    }
}
