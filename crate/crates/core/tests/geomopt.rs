mod common;

use common::fixture;
use radscf::basis::BasisSet;
use radscf::geomopt::{
    numerical_gradient, optimize, optimize_multistart, scan_bond, trajectory_xyz, EnergySurface,
    OptMethod, OptimizerConfig,
};
use radscf::molsys::{parse_xyz, parse_xyz_frames, Molecule, ANGSTROM_TO_BOHR};
use radscf::scf::{Method, ScfConfig};

fn surface(method: Method) -> EnergySurface {
    EnergySurface::new(
        BasisSet::builtin("sto-3g").unwrap(),
        method,
        ScfConfig::default(),
    )
}

fn h2(r_bohr: f64) -> Molecule {
    parse_xyz(&format!(
        "2\n\nH 0 0 0\nH 0 0 {}",
        r_bohr / ANGSTROM_TO_BOHR
    ))
    .unwrap()
}

/// Brute-force minimum of the H₂ curve on a 0.001 bohr grid over [1.0, 2.0].
fn scan_minimum() -> f64 {
    let pts = scan_bond(&h2(1.4), &surface(Method::Rhf), (0, 1), 1.0, 2.0, 1001).unwrap();
    assert!(pts.iter().all(|p| p.converged));
    pts.iter()
        .min_by(|a, b| a.energy.total_cmp(&b.energy))
        .unwrap()
        .r_bohr
}

#[test]
fn h2_optimum_matches_brute_force_scan() {
    let r_scan = scan_minimum();
    assert!((r_scan - 1.346).abs() < 0.002, "{r_scan}");
    for method in [OptMethod::QuasiNewton, OptMethod::SteepestDescent] {
        let cfg = OptimizerConfig {
            method,
            ..OptimizerConfig::default()
        };
        let o = optimize(&h2(1.3), &surface(Method::Rhf), &cfg).unwrap();
        assert!(o.converged);
        let r = o.molecule.distance(0, 1);
        assert!((r - r_scan).abs() < 0.01, "{method:?}: {r} vs {r_scan}");
        assert!(o.trace.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn stretched_h2_gradient_pulls_atoms_together() {
    let (_, g) = numerical_gradient(&surface(Method::Rhf), &h2(2.0), 5e-3).unwrap();
    // Atom 2 sits at +z; a positive z gradient means the energy rises on
    // stretching further.
    assert!(g[5] > 0.0 && g[2] < 0.0);
    for k in 0..3 {
        assert!((g[k] + g[3 + k]).abs() < 1e-6);
    }
}

#[test]
fn gradient_is_second_order_in_the_step() {
    let tight = ScfConfig {
        energy_tol: 1e-12,
        density_rms_tol: 1e-10,
        ..ScfConfig::default()
    };
    let s = EnergySurface::new(BasisSet::builtin("sto-3g").unwrap(), Method::Rhf, tight);
    let m = h2(2.0);
    let g = |h: f64| numerical_gradient(&s, &m, h).unwrap().1[5];
    let (g1, g2, g3) = (g(0.08), g(0.04), g(0.02));
    let ratio = (g1 - g2) / (g2 - g3);
    assert!((2.0..=6.0).contains(&ratio), "{ratio}");
}

#[test]
fn water_relaxes_to_symmetric_bonds() {
    let m = parse_xyz("3\n\nO 0 0 0.05\nH 0.80 0 -0.55\nH -0.70 0.05 -0.45").unwrap();
    let o = optimize(&m, &surface(Method::Rhf), &OptimizerConfig::default()).unwrap();
    assert!(o.converged);
    let (r1, r2) = (o.molecule.distance(0, 1), o.molecule.distance(0, 2));
    assert!((r1 - r2).abs() < 1e-3, "{r1} {r2}");
    assert!(o.trace.windows(2).all(|w| w[1] <= w[0]));
    assert!(o.energy <= o.trace[0]);
}

#[test]
fn converged_geometry_is_returned_at_once() {
    let s = surface(Method::Rhf);
    let cfg = OptimizerConfig::default();
    let first = optimize(&h2(1.3), &s, &cfg).unwrap();
    let again = optimize(&first.molecule, &s, &cfg).unwrap();
    assert!(again.steps <= 1);
    assert!((again.energy - first.energy).abs() < 1e-9);
}

#[test]
fn multistart_keeps_the_lowest_result() {
    let s = surface(Method::Rhf);
    let ms = optimize_multistart(&h2(1.3), &s, &OptimizerConfig::default(), 3, 0.05, 1).unwrap();
    assert_eq!(ms.energies.len(), 4);
    let min = ms.energies.iter().cloned().fold(f64::INFINITY, f64::min);
    assert_eq!(ms.best.energy, min);
    let again = optimize_multistart(&h2(1.3), &s, &OptimizerConfig::default(), 3, 0.05, 1).unwrap();
    assert_eq!(ms.energies, again.energies);
}

#[test]
fn trajectory_frames_carry_energies() {
    let o = optimize(&h2(1.3), &surface(Method::Rhf), &OptimizerConfig::default()).unwrap();
    let text = trajectory_xyz(&o.frames, &o.trace);
    let frames = parse_xyz_frames(&text).unwrap();
    assert_eq!(frames.len(), o.frames.len());
    assert!(frames[0].comment.starts_with("step=0 energy=-1.1"));
}

#[test]
fn scan_rejects_bad_input() {
    let s = surface(Method::Rhf);
    assert!(scan_bond(&h2(1.4), &s, (0, 0), 1.0, 2.0, 3).is_err());
    assert!(scan_bond(&h2(1.4), &s, (0, 1), 1.0, 2.0, 0).is_err());
    let m = fixture("h2.xyz");
    let pts = scan_bond(&m, &s, (0, 1), 1.0, 2.0, 21).unwrap();
    assert_eq!(pts.len(), 21);
    assert!(pts.windows(2).all(|w| w[1].r_bohr > w[0].r_bohr));
}
