//! Nuclear frame: atoms, charge and spin state, bond perception and XYZ I/O.
//!
//! Positions are stored in bohr. Files are read and written in ångström.

mod bonds;
mod elements;
mod xyz;

pub use bonds::{perceive_bonds, perceive_bonds_with, BondGraph, DEFAULT_BOND_SCALE};
pub use elements::Element;
pub use xyz::{parse_xyz, parse_xyz_frames, to_xyz, XyzDocument};

use crate::error::{Error, Result};

/// 1 Å expressed in bohr.
pub const ANGSTROM_TO_BOHR: f64 = 1.8897259886;

/// Nuclei closer than this are treated as coincident.
const COINCIDENCE_THRESHOLD: f64 = 1e-6;

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub element: Element,
    /// Cartesian position in bohr.
    pub position: Vec3,
}

impl Atom {
    pub fn new(element: Element, position: Vec3) -> Self {
        Self { element, position }
    }

    pub fn atomic_number(&self) -> u8 {
        self.element.atomic_number()
    }
}

/// A validated molecule.
///
/// Construction checks that the electron count is positive and compatible
/// with the requested multiplicity, so `electron_counts` never fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    atoms: Vec<Atom>,
    charge: i32,
    multiplicity: u32,
}

impl Molecule {
    pub fn new(atoms: Vec<Atom>, charge: i32, multiplicity: u32) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMolecule("no atoms".into()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if a.position.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidMolecule(format!(
                    "atom {} has a non-finite coordinate",
                    i + 1
                )));
            }
        }
        if multiplicity == 0 {
            return Err(Error::InvalidMolecule("multiplicity must be >= 1".into()));
        }
        let nuclear: i64 = atoms.iter().map(|a| a.atomic_number() as i64).sum();
        let n_electrons = nuclear - charge as i64;
        if n_electrons < 1 {
            return Err(Error::InvalidMolecule(format!(
                "charge {charge} leaves {n_electrons} electrons"
            )));
        }
        let unpaired = multiplicity as i64 - 1;
        if (n_electrons - unpaired) % 2 != 0 {
            return Err(Error::InvalidMolecule(format!(
                "{n_electrons} electrons cannot form multiplicity {multiplicity}"
            )));
        }
        if unpaired > n_electrons {
            return Err(Error::InvalidMolecule(format!(
                "multiplicity {multiplicity} needs more than {n_electrons} electrons"
            )));
        }
        Ok(Self {
            atoms,
            charge,
            multiplicity,
        })
    }

    /// Molecule with the default spin state: singlet for an even electron
    /// count, doublet otherwise.
    pub fn with_default_multiplicity(atoms: Vec<Atom>, charge: i32) -> Result<Self> {
        let nuclear: i64 = atoms.iter().map(|a| a.atomic_number() as i64).sum();
        let mult = if (nuclear - charge as i64).rem_euclid(2) == 0 {
            1
        } else {
            2
        };
        Self::new(atoms, charge, mult)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn charge(&self) -> i32 {
        self.charge
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn n_electrons(&self) -> usize {
        let nuclear: i64 = self.atoms.iter().map(|a| a.atomic_number() as i64).sum();
        (nuclear - self.charge as i64) as usize
    }

    /// `(n_alpha, n_beta)` with `n_alpha - n_beta = multiplicity - 1`.
    pub fn electron_counts(&self) -> (usize, usize) {
        let n = self.n_electrons();
        let unpaired = self.multiplicity as usize - 1;
        let n_alpha = (n + unpaired) / 2;
        (n_alpha, n - n_alpha)
    }

    /// Hill-order formula, e.g. `C9H18NO`.
    pub fn formula(&self) -> String {
        let mut counts = std::collections::BTreeMap::new();
        for a in &self.atoms {
            *counts.entry(a.element.symbol()).or_insert(0usize) += 1;
        }
        let mut out = String::new();
        let mut push = |sym: &str, n: usize| {
            out.push_str(sym);
            if n > 1 {
                out.push_str(&n.to_string());
            }
        };
        let has_carbon = counts.contains_key("C");
        if has_carbon {
            for sym in ["C", "H"] {
                if let Some(n) = counts.remove(sym) {
                    push(sym, n);
                }
            }
        }
        for (sym, n) in counts {
            push(sym, n);
        }
        out
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        distance(&self.atoms[a].position, &self.atoms[b].position)
    }

    /// Flattened `3n` coordinate vector in bohr.
    pub fn coordinates(&self) -> Vec<f64> {
        self.atoms.iter().flat_map(|a| a.position).collect()
    }

    /// Same molecule with new flattened coordinates.
    pub fn with_coordinates(&self, coords: &[f64]) -> Self {
        assert_eq!(coords.len(), 3 * self.atoms.len());
        let atoms = self
            .atoms
            .iter()
            .zip(coords.chunks_exact(3))
            .map(|(a, c)| Atom::new(a.element, [c[0], c[1], c[2]]))
            .collect();
        Self {
            atoms,
            charge: self.charge,
            multiplicity: self.multiplicity,
        }
    }

    pub fn with_charge_and_multiplicity(&self, charge: i32, multiplicity: u32) -> Result<Self> {
        Self::new(self.atoms.clone(), charge, multiplicity)
    }

    pub fn translated(&self, shift: Vec3) -> Self {
        let mut out = self.clone();
        for a in &mut out.atoms {
            for (p, d) in a.position.iter_mut().zip(shift) {
                *p += d;
            }
        }
        out
    }

    /// Applies a 3x3 rotation (row-major) about the origin.
    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> Self {
        let mut out = self.clone();
        for a in &mut out.atoms {
            let p = a.position;
            a.position = [
                r[0][0] * p[0] + r[0][1] * p[1] + r[0][2] * p[2],
                r[1][0] * p[0] + r[1][1] * p[1] + r[1][2] * p[2],
                r[2][0] * p[0] + r[2][1] * p[1] + r[2][2] * p[2],
            ];
        }
        out
    }

    /// Σ_{A<B} Z_A Z_B / R_AB in hartree.
    pub fn nuclear_repulsion(&self) -> Result<f64> {
        let mut e = 0.0;
        for (i, a) in self.atoms.iter().enumerate() {
            for (j, b) in self.atoms.iter().enumerate().skip(i + 1) {
                let r = distance(&a.position, &b.position);
                if r < COINCIDENCE_THRESHOLD {
                    return Err(Error::DegenerateGeometry {
                        a: i,
                        b: j,
                        distance: r,
                    });
                }
                e += (a.atomic_number() as f64) * (b.atomic_number() as f64) / r;
            }
        }
        Ok(e)
    }
}

pub fn distance(a: &Vec3, b: &Vec3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}
