mod common;

use common::fixture;
use common::literature::{bonds, phenoxyl_spins, DIKETONE_SPINS};
use radscf::molsys::perceive_bonds;
use radscf::report::to_json;
use radscf::screener::{
    assess_bond_stability, assess_spin_localization, detect_anchor_group, detect_ordering_group,
    screen, screen_unconverged, Evidence, ScreeningThresholds,
};
use radscf::Error;

#[test]
fn diketone_literature_spins_are_localized() {
    let (pass, e) = assess_spin_localization(&DIKETONE_SPINS, 2, 0.7).unwrap();
    assert!(pass);
    assert_eq!(e.top_atoms, vec![1, 10]);
    let top: f64 = e.top_spins.iter().sum();
    assert!((top - 0.907419).abs() < 1e-12);
    assert!(e.antiferromagnetic.is_empty());
}

#[test]
fn phenoxyl_literature_spins_are_not_localized() {
    let spins = phenoxyl_spins(26);
    let (pass, e) = assess_spin_localization(&spins, 2, 0.7).unwrap();
    assert!(!pass);
    assert_eq!(e.top_atoms, vec![22, 2]);
    assert!((e.top_spins.iter().sum::<f64>() - 0.62843).abs() < 1e-12);
    assert!(e.top_fraction < 0.7);
    let afm: Vec<usize> = e.antiferromagnetic.iter().map(|s| s.atom + 1).collect();
    assert_eq!(afm, vec![2, 4]);
}

#[test]
fn literature_bond_order_sets() {
    // β-diketone radical: O2–C1 and O11–C8.
    let (pass, e) =
        assess_bond_stability(&bonds(&[(2, 1, 0.57), (11, 8, 0.57)]), &[1, 10], 0.3).unwrap();
    assert!(pass);
    assert_eq!(e.min_overlap_population, 0.57);
    // TEMPO: N6–C4, N6–C2, N6–O17.
    let tempo = bonds(&[(6, 4, 0.58), (6, 2, 0.62), (6, 17, 0.067)]);
    let (pass, e) = assess_bond_stability(&tempo, &[5, 16], 0.3).unwrap();
    assert!(!pass);
    assert_eq!(e.min_overlap_population, 0.067);
    assert_eq!((e.weakest.a, e.weakest.b), (5, 16));
    // Methyl-substituted β-diketone: O2–C1 and O10–C8.
    let (pass, _) =
        assess_bond_stability(&bonds(&[(2, 1, 0.50), (10, 8, 0.50)]), &[1, 9], 0.3).unwrap();
    assert!(pass);
}

#[test]
fn ordering_group_detection() {
    let g = |name: &str| {
        let m = fixture(name);
        let graph = perceive_bonds(&m);
        detect_ordering_group(&m, &graph, 8)
    };
    let (pass, e) = g("tetradecane.xyz");
    assert!(pass);
    assert_eq!(e.chain_length, 12);
    assert_eq!(g("structures/diketone_radical.xyz").1.chain_length, 12);
    assert_eq!(
        g("structures/diketone_methyl_radical.xyz").1.chain_length,
        12
    );
    assert_eq!(
        g("structures/phenoxyl_ester_radical.xyz").1.chain_length,
        11
    );
    let (pass, e) = g("h2o.xyz");
    assert!(!pass);
    assert_eq!(e.chain_length, 0);
}

#[test]
fn anchor_group_detection() {
    let g = |name: &str| {
        let m = fixture(name);
        let graph = perceive_bonds(&m);
        detect_anchor_group(&m, &graph)
    };
    let (pass, e) = g("acetic_acid.xyz");
    assert!(pass);
    assert_eq!(e.matches.len(), 1);
    // Formic acid's carboxyl carbon carries H instead of C.
    assert!(!g("formic_acid.xyz").0);
    assert!(g("structures/diketone_radical.xyz").0);
    assert!(!g("structures/phenoxyl_ester_radical.xyz").0);
    assert!(!g("propanedial_radical.xyz").0);
}

#[test]
fn diketone_with_literature_data_passes() {
    let m = fixture("structures/diketone_radical.xyz");
    let mut spins = vec![0.0; m.len()];
    spins[..12].copy_from_slice(&DIKETONE_SPINS);
    let r = screen(
        &m,
        &spins,
        &bonds(&[(2, 1, 0.57), (11, 8, 0.57)]),
        &ScreeningThresholds::default(),
    )
    .unwrap();
    assert!(r.criterion_1_ordering.pass);
    assert!(r.criterion_2_anchor.pass);
    assert!(r.criterion_3_localization.pass);
    assert!(r.criterion_4_stability.pass);
    assert!(r.overall);
    let Evidence::Evaluated(e) = &r.criterion_3_localization.evidence else {
        panic!()
    };
    // O2–O11 separation in the fixture.
    let d = e.separations[0].distance_bohr / 18.897259886;
    assert!((0.2..0.3).contains(&d), "{d}");
}

#[test]
fn phenoxyl_with_literature_spins_fails_localization() {
    let m = fixture("structures/phenoxyl_ester_radical.xyz");
    let spins = phenoxyl_spins(m.len());
    let b = bonds(&[(23, 3, 0.6), (3, 2, 0.5), (3, 4, 0.5)]);
    let r = screen(&m, &spins, &b, &ScreeningThresholds::default()).unwrap();
    assert!(r.criterion_1_ordering.pass);
    assert!(!r.criterion_3_localization.pass);
    assert!(!r.overall);
}

#[test]
fn unconverged_report_names_the_reason() {
    let m = fixture("structures/diketone_radical.xyz");
    let r = screen_unconverged(&m, &ScreeningThresholds::default()).unwrap();
    assert!(!r.overall);
    assert_eq!(r.reason.as_deref(), Some("scf-unconverged"));
    let json: serde_json::Value = serde_json::from_str(&to_json(&r)).unwrap();
    assert_eq!(
        json["criterion_3_localization"]["evidence"]["reason"],
        "scf-unconverged"
    );
    assert_eq!(json["criterion_1_ordering"]["pass"], true);
}

#[test]
fn screen_rejects_closed_shells_and_bad_lengths() {
    let m = fixture("h2o.xyz");
    let b = bonds(&[(1, 2, 0.3)]);
    let t = ScreeningThresholds::default();
    assert!(matches!(
        screen(&m, &[0.0; 3], &b, &t),
        Err(Error::NotARadical)
    ));
    assert!(screen(&m, &[1.0; 2], &b, &t).is_err());
}

#[test]
fn text_report_lists_every_criterion() {
    let m = fixture("structures/diketone_radical.xyz");
    let mut spins = vec![0.0; m.len()];
    spins[..12].copy_from_slice(&DIKETONE_SPINS);
    let r = screen(
        &m,
        &spins,
        &bonds(&[(2, 1, 0.57), (11, 8, 0.57)]),
        &ScreeningThresholds::default(),
    )
    .unwrap();
    let text = r.to_text();
    for needle in [
        "criterion 1",
        "criterion 2",
        "criterion 3",
        "criterion 4",
        "overall: PASS",
    ] {
        assert!(text.contains(needle), "{text}");
    }
}
