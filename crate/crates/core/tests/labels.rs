use cubic_dual::classify::{classify, ClassificationReport, ClassifyConfig, Label};
use cubic_dual::families::{generate, FamilySpec, Lemma22Variant, DEFAULT_L};
use cubic_dual::field::{PrimeField, DEFAULT_PRIME};

fn report(spec: &FamilySpec) -> ClassificationReport {
    let (x, s) = generate(spec).unwrap().at_prime(PrimeField::new(DEFAULT_PRIME).unwrap()).unwrap();
    classify(&x, s.as_ref(), &ClassifyConfig { seed: 1, ..ClassifyConfig::default() })
}

#[test]
fn every_family_gets_its_label() {
    let cases = [
        (FamilySpec::PerazzoP4, Label::III, Some(1)),
        (FamilySpec::JoinQuadrics { p: 1, q: 1 }, Label::II, Some(1)),
        (FamilySpec::JoinQuadrics { p: 1, q: 2 }, Label::II, Some(1)),
        (FamilySpec::JoinQuadrics { p: 2, q: 2 }, Label::II, Some(1)),
        (FamilySpec::JoinQuadrics { p: 2, q: 3 }, Label::II, Some(1)),
        (FamilySpec::Det3Symmetric, Label::I, Some(2)),
        (FamilySpec::Det3General, Label::I, Some(3)),
        (FamilySpec::Fermat { n: 3 }, Label::DefectZero, Some(0)),
        (FamilySpec::Fermat { n: 5 }, Label::DefectZero, Some(0)),
        (FamilySpec::Lemma22N3 { variant: Lemma22Variant::A, l: DEFAULT_L }, Label::DefectZero, Some(0)),
        (FamilySpec::Lemma22N3 { variant: Lemma22Variant::B, l: DEFAULT_L }, Label::DefectZero, Some(0)),
    ];
    for (spec, label, delta) in cases {
        let r = report(&spec);
        assert_eq!((r.label, r.delta), (label, delta), "{spec}: {:?}", r.evidence.unresolved_reason);
        if let Some(sing) = &r.evidence.sing {
            assert_eq!(sing.modes_agree, Some(true), "{spec}");
        }
    }
}

#[test]
fn cones_over_families_are_cones() {
    for inner in [FamilySpec::PerazzoP4, FamilySpec::Fermat { n: 3 }, FamilySpec::JoinQuadrics { p: 1, q: 1 }] {
        let spec = FamilySpec::ConeOver { inner: Box::new(inner), extra: 1 };
        let r = report(&spec);
        assert_eq!(r.label, Label::Cone, "{spec}");
        assert!(r.evidence.cone.unwrap().hessian_corank_consistent);
    }
}
