use std::collections::BTreeSet;

use proptest::prelude::*;
use radscf::analysis::{analyze, BondOrderTable};
use radscf::basis::{assign_basis, BasisSet};
use radscf::integrals::{boys, build_integral_tables};
use radscf::molsys::{parse_xyz, perceive_bonds, to_xyz, Atom, Element, Molecule};
use radscf::report::to_json;
use radscf::scf::{scf, Method, ScfConfig};
use radscf::screener::{
    assess_bond_stability, assess_spin_localization, screen, ScreeningThresholds,
};

const ELEMENTS: [Element; 4] = [Element::H, Element::C, Element::N, Element::O];

fn atoms(max: usize) -> impl Strategy<Value = Vec<Atom>> {
    prop::collection::vec(
        (0..ELEMENTS.len(), prop::array::uniform3(-6.0f64..6.0)),
        1..max,
    )
    .prop_map(|v| {
        v.into_iter()
            .enumerate()
            // Spread atoms along x so no two coincide.
            .map(|(i, (e, mut p))| {
                p[0] += 3.0 * i as f64;
                Atom::new(ELEMENTS[e], p)
            })
            .collect()
    })
}

fn molecule(max: usize) -> impl Strategy<Value = Molecule> {
    (atoms(max), -1i32..=1).prop_filter_map("no electrons", |(a, q)| {
        Molecule::with_default_multiplicity(a, q).ok()
    })
}

fn rotation() -> impl Strategy<Value = [[f64; 3]; 3]> {
    prop::array::uniform4(-1.0f64..1.0).prop_filter_map("degenerate quaternion", |q| {
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 1e-3 {
            return None;
        }
        let [w, x, y, z] = q.map(|c| c / n);
        Some([
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ])
    })
}

fn spins(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2..n)
}

fn edge_set(m: &Molecule) -> BTreeSet<(usize, usize)> {
    perceive_bonds(m).edges().map(|(a, b, _)| (a, b)).collect()
}

proptest! {
    #[test]
    fn xyz_round_trip(m in molecule(8)) {
        let back = parse_xyz(&to_xyz(&m, "round trip")).unwrap();
        prop_assert_eq!(back.charge(), m.charge());
        prop_assert_eq!(back.multiplicity(), m.multiplicity());
        prop_assert_eq!(back.formula(), m.formula());
        for (a, b) in m.atoms().iter().zip(back.atoms()) {
            prop_assert_eq!(a.element, b.element);
            for k in 0..3 {
                prop_assert!((a.position[k] - b.position[k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn nuclear_repulsion_is_rigid_invariant(m in molecule(8), r in rotation(), t in prop::array::uniform3(-20.0f64..20.0)) {
        let e0 = m.nuclear_repulsion().unwrap();
        let e1 = m.rotated(&r).translated(t).nuclear_repulsion().unwrap();
        prop_assert!((e0 - e1).abs() <= 1e-10 * e0.abs().max(1.0));
    }

    #[test]
    fn bond_perception_follows_permutation(
        a in prop::collection::vec((0..ELEMENTS.len(), prop::array::uniform3(-2.5f64..2.5)), 2..10),
        seed in any::<u64>(),
    ) {
        let atoms: Vec<Atom> = a.iter().map(|&(e, p)| Atom::new(ELEMENTS[e], p)).collect();
        let m = Molecule::with_default_multiplicity(atoms.clone(), 0);
        prop_assume!(m.is_ok() && m.as_ref().unwrap().nuclear_repulsion().is_ok());
        let m = m.unwrap();
        let n = atoms.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        // perm[new] = old
        let permuted = Molecule::with_default_multiplicity(perm.iter().map(|&o| atoms[o].clone()).collect(), 0).unwrap();
        let mapped: BTreeSet<(usize, usize)> = edge_set(&permuted)
            .into_iter()
            .map(|(x, y)| (perm[x].min(perm[y]), perm[x].max(perm[y])))
            .collect();
        prop_assert_eq!(mapped, edge_set(&m));
    }

    #[test]
    fn spin_scaling_keeps_the_localization_verdict(s in spins(20), c in 0.01f64..100.0, k in 1usize..4, f in 0.1f64..1.0) {
        prop_assume!(s.iter().sum::<f64>().abs() > 1e-3);
        let scaled: Vec<f64> = s.iter().map(|x| x * c).collect();
        let a = assess_spin_localization(&s, k, f).unwrap();
        let b = assess_spin_localization(&scaled, k, f).unwrap();
        prop_assert_eq!(a.0, b.0);
        prop_assert_eq!(a.1.top_atoms, b.1.top_atoms);
    }

    #[test]
    fn raising_the_fraction_never_turns_fail_into_pass(s in spins(20), k in 1usize..4, f1 in 0.0f64..1.0, f2 in 0.0f64..1.0) {
        prop_assume!(s.iter().sum::<f64>().abs() > 1e-3);
        let (lo, hi) = (f1.min(f2), f1.max(f2));
        let pass_lo = assess_spin_localization(&s, k, lo).unwrap().0;
        let pass_hi = assess_spin_localization(&s, k, hi).unwrap().0;
        prop_assert!(pass_lo || !pass_hi);
    }

    #[test]
    fn raising_the_bond_threshold_never_turns_fail_into_pass(
        values in prop::collection::vec(0.0f64..1.5, 1..6),
        t1 in 0.0f64..1.5,
        t2 in 0.0f64..1.5,
    ) {
        let table = BondOrderTable::from_pairs(values.iter().enumerate().map(|(i, &v)| (0, i + 1, v))).unwrap();
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        let pass_lo = assess_bond_stability(&table, &[0], lo).unwrap().0;
        let pass_hi = assess_bond_stability(&table, &[0], hi).unwrap().0;
        prop_assert!(pass_lo || !pass_hi);
    }

    #[test]
    fn screening_is_deterministic(m in molecule(10), seed in prop::collection::vec(-1.0f64..1.0, 10)) {
        let spins: Vec<f64> = (0..m.len()).map(|i| seed[i % seed.len()] + 1.0 / (i + 2) as f64).collect();
        prop_assume!(spins.iter().sum::<f64>().abs() > 1e-3);
        let bonds = BondOrderTable::from_pairs(perceive_bonds(&m).edges().map(|(a, b, d)| (a, b, 1.0 / d))).unwrap();
        let t = ScreeningThresholds::default();
        let a = screen(&m, &spins, &bonds, &t);
        let b = screen(&m, &spins, &bonds, &t);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(to_json(&a), to_json(&b)),
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            _ => prop_assert!(false, "verdicts differ"),
        }
    }

    #[test]
    fn boys_downward_recurrence_and_bounds(n in 0usize..12, x in 0.0f64..60.0) {
        let f_n = boys(n, x);
        let f_n1 = boys(n + 1, x);
        let down = (2.0 * x * f_n1 + (-x).exp()) / (2 * n + 1) as f64;
        prop_assert!((f_n - down).abs() <= 1e-12 * f_n.max(1e-300), "n={} x={} {} vs {}", n, x, f_n, down);
        prop_assert!(f_n > 0.0 && f_n <= 1.0 / (2 * n + 1) as f64 + 1e-15);
        prop_assert!(f_n1 < f_n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hydrogen_cluster_sum_rules(
        d in prop::collection::vec(1.2f64..2.4, 1..4),
        charge in 0i32..=1,
        method_uhf in any::<bool>(),
    ) {
        let atoms: Vec<Atom> = std::iter::once(0.0)
            .chain(d.iter().scan(0.0, |x, step| { *x += step; Some(*x) }))
            .map(|x| Atom::new(Element::H, [x, 0.0, 0.0]))
            .collect();
        let m = Molecule::with_default_multiplicity(atoms, charge);
        prop_assume!(m.is_ok());
        let m = m.unwrap();
        let method = if method_uhf || m.multiplicity() != 1 { Method::Uhf } else { Method::Rhf };
        let basis = assign_basis(&m, &BasisSet::builtin("sto-3g").unwrap()).unwrap();
        let tables = build_integral_tables(&basis, &m);
        let r = scf(&m, &tables, method, &ScfConfig::default());
        prop_assume!(r.as_ref().map(|r| r.converged).unwrap_or(false));
        let r = r.unwrap();
        let (na, nb) = m.electron_counts();
        prop_assert!(((&r.p_alpha * &tables.s).trace() - na as f64).abs() < 1e-8);
        prop_assert!(((&r.p_beta * &tables.s).trace() - nb as f64).abs() < 1e-8);
        let a = analyze(&r, &tables, &m, &basis, &[]).unwrap();
        let pop: f64 = a.populations.population.iter().sum();
        let spin: f64 = a.populations.spin.iter().sum();
        prop_assert!((pop - m.n_electrons() as f64).abs() < 1e-8);
        prop_assert!((spin - (m.multiplicity() - 1) as f64).abs() < 1e-8);
    }
}
