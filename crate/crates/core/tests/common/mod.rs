#![allow(dead_code)]

use std::path::PathBuf;

use radscf::analysis::{analyze, Analysis};
use radscf::basis::{assign_basis, BasisSet, MolecularBasis};
use radscf::integrals::{build_integral_tables, IntegralTables};
use radscf::molsys::{parse_xyz, Molecule};
use radscf::scf::{scf, Method, ScfConfig, ScfResult};

pub mod literature;
pub mod quadrature;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Molecule {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_xyz(&text).unwrap()
}

pub struct Run {
    pub molecule: Molecule,
    pub basis: MolecularBasis,
    pub tables: IntegralTables,
    pub result: ScfResult,
}

impl Run {
    pub fn analysis(&self) -> Analysis {
        analyze(&self.result, &self.tables, &self.molecule, &self.basis, &[]).unwrap()
    }
}

pub fn run(m: Molecule, basis: &str, method: Method) -> Run {
    let b = assign_basis(&m, &BasisSet::builtin(basis).unwrap()).unwrap();
    let tables = build_integral_tables(&b, &m);
    let result = scf(&m, &tables, method, &ScfConfig::default()).unwrap();
    Run {
        molecule: m,
        basis: b,
        tables,
        result,
    }
}

pub fn run_fixture(name: &str, method: Method) -> Run {
    run(fixture(name), "sto-3g", method)
}

/// Atom indices of `symbol`, 0-based.
pub fn atoms_of(m: &Molecule, symbol: &str) -> Vec<usize> {
    m.atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.element.symbol() == symbol)
        .map(|(i, _)| i)
        .collect()
}
