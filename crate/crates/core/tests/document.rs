use assemblers::document::{structurally_equal, AssemblerDocument};
use assemblers::fixtures::{self, IntervalVariant};
use assemblers::{Budget, Error};

fn doc(body: &str) -> Result<AssemblerDocument, Error> {
    AssemblerDocument::from_json(body)
}

#[test]
fn sieve_survives_round_trip() {
    let b = Budget::default();
    let (pre, sieve) = fixtures::preorder5().unwrap();
    let d = AssemblerDocument::from_assembler(&pre, &b).unwrap().with_sieve("D", &pre, &sieve);
    let back = AssemblerDocument::from_json(&d.to_json()).unwrap();
    let asm = back.to_assembler().unwrap();
    assert!(structurally_equal(&pre, &asm, &b).unwrap());
    let names: Vec<&str> = back.sieve(&asm, "D").unwrap().into_iter().map(|o| asm.object_name(o)).collect();
    assert_eq!(names.len(), 2);
    assert!(names.contains(&"A"));
}

#[test]
fn large_fixture_round_trip() {
    let b = Budget::default();
    let fx = fixtures::intervals(2, 3, IntervalVariant::Total, false).unwrap();
    let d = AssemblerDocument::from_assembler(&fx.asm, &b).unwrap();
    let asm = AssemblerDocument::from_json(&d.to_json()).unwrap().to_assembler().unwrap();
    assert!(structurally_equal(&fx.asm, &asm, &b).unwrap());
}

#[test]
fn initial_object_is_renamed() {
    let d = doc(r#"{"objects": ["0", "A"], "initial": "0", "morphisms": [], "composition": [], "covers": []}"#).unwrap();
    let asm = d.to_assembler().unwrap();
    assert_eq!(asm.object_name(asm.initial()), "∅");
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(matches!(doc("{"), Err(Error::Format(_))));
    assert!(matches!(
        doc(r#"{"objects": [], "initial": "0", "morphisms": [], "composition": [], "covers": [], "extra": 1}"#),
        Err(Error::Format(_))
    ));
    let reserved = doc(
        r#"{"objects": ["0", "A"], "initial": "0", "morphisms": [{"id": "id:A", "src": "A", "tgt": "A"}], "composition": [], "covers": []}"#,
    )
    .unwrap();
    assert!(matches!(reserved.to_assembler(), Err(Error::Format(_))));
    let unknown = doc(
        r#"{"objects": ["0", "A"], "initial": "0", "morphisms": [{"id": "f", "src": "A", "tgt": "B"}], "composition": [], "covers": []}"#,
    )
    .unwrap();
    assert!(unknown.to_assembler().is_err());
}

#[test]
fn missing_composite_is_invalid() {
    let d = doc(
        r#"{"objects": ["0", "A", "B", "C"], "initial": "0",
            "morphisms": [{"id": "f", "src": "A", "tgt": "B"}, {"id": "g", "src": "B", "tgt": "C"}],
            "composition": [], "covers": []}"#,
    )
    .unwrap();
    let err = d.to_assembler().unwrap_err().to_string();
    assert!(err.contains("incomplete composition (f,g)"), "{err}");
}
