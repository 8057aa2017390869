mod common;

use std::collections::VecDeque;

use common::{atoms_of, fixture};
use radscf::molsys::{perceive_bonds, BondGraph};

/// Shortest path from `from` to `to` that avoids `banned`, endpoints included.
fn shortest_path(g: &BondGraph, from: usize, to: usize, banned: usize) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; g.n_atoms()];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(a) = queue.pop_front() {
        if a == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            return Some(path);
        }
        for &b in g.neighbors(a) {
            if b != banned && prev[b] == usize::MAX {
                prev[b] = a;
                queue.push_back(b);
            }
        }
    }
    None
}

#[test]
fn tempo_fixture_formula_and_electrons() {
    let m = fixture("tempo.xyz");
    assert_eq!(m.len(), 29);
    assert_eq!(m.formula(), "C9H18NO");
    assert_eq!(m.multiplicity(), 2);
    assert_eq!(m.n_electrons(), 87);
    assert_eq!(m.electron_counts(), (44, 43));
}

#[test]
fn tempo_has_one_nitroxide_bond_in_a_six_membered_ring() {
    let m = fixture("tempo.xyz");
    let g = perceive_bonds(&m);
    let n = atoms_of(&m, "N")[0];
    let o = atoms_of(&m, "O")[0];
    let no_edges: Vec<_> = g
        .edges()
        .filter(|&(a, b, _)| (a == n && b == o) || (a == o && b == n))
        .collect();
    assert_eq!(no_edges.len(), 1);
    assert_eq!(g.degree(o), 1);

    let carbons: Vec<usize> = g.neighbors(n).iter().copied().filter(|&x| x != o).collect();
    assert_eq!(carbons.len(), 2);
    let path = shortest_path(&g, carbons[0], carbons[1], n).unwrap();
    assert_eq!(path.len(), 5);
    assert!(path.iter().all(|&a| m.atoms()[a].element.symbol() == "C"));
}

#[test]
fn fixtures_parse_with_declared_charge_and_multiplicity() {
    for (name, formula, mult) in [
        ("h2.xyz", "H2", 1),
        ("oh.xyz", "HO", 2),
        ("structures/diketone_radical.xyz", "C17H29O4", 2),
        ("structures/diketone_methyl_radical.xyz", "C18H31O4", 2),
        ("structures/phenoxyl_ester_radical.xyz", "C21H29O5", 2),
        ("tempo.xyz", "C9H18NO", 2),
    ] {
        let m = fixture(name);
        assert_eq!(m.formula(), formula, "{name}");
        assert_eq!(m.multiplicity(), mult, "{name}");
        assert_eq!(m.charge(), 0, "{name}");
    }
}
