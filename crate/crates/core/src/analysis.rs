//! Mulliken condensation of a converged wavefunction: gross atomic
//! populations, atomic spin densities and overlap populations (bond orders).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::basis::MolecularBasis;
use crate::error::{Error, Result};
use crate::integrals::IntegralTables;
use crate::molsys::{perceive_bonds, Molecule, ANGSTROM_TO_BOHR};
use crate::report::sig;
use crate::scf::ScfResult;

/// Per-atom Mulliken quantities, indexed like the molecule's atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicPopulations {
    pub population: Vec<f64>,
    /// `Z − population`.
    pub charge: Vec<f64>,
    pub spin: Vec<f64>,
}

/// Overlap populations keyed by unordered atom pair.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BondOrderTable {
    entries: BTreeMap<(usize, usize), f64>,
}

impl BondOrderTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from `(a, b, A)` triples; self pairs are rejected.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut t = Self::new();
        for (a, b, v) in pairs {
            t.insert(a, b, v)?;
        }
        Ok(t)
    }

    pub fn insert(&mut self, a: usize, b: usize, value: f64) -> Result<()> {
        if a == b {
            return Err(self_pair(a));
        }
        self.entries.insert((a.min(b), a.max(b)), value);
        Ok(())
    }

    pub fn get(&self, a: usize, b: usize) -> Option<f64> {
        self.entries.get(&(a.min(b), a.max(b))).copied()
    }

    /// `(a, b, A)` with `a < b`, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|(&(a, b), &v)| (a, b, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn self_pair(a: usize) -> Error {
    Error::OutOfRange {
        what: "atom pair",
        value: format!("({}, {})", a + 1, a + 1),
        allowed: "two distinct atoms".into(),
    }
}

/// Row sums of `P ∘ S` accumulated per owning atom, i.e. `Σ_{μ∈A} (PS)_μμ`.
fn condense(p: &DMatrix<f64>, s: &DMatrix<f64>, owners: &[usize], n_atoms: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_atoms];
    for (mu, &a) in owners.iter().enumerate() {
        out[a] += p.row(mu).dot(&s.column(mu).transpose());
    }
    out
}

fn atom_count(owners: &[usize]) -> usize {
    owners.iter().max().map_or(0, |&m| m + 1)
}

/// Gross Mulliken population of each atom from the total density.
/// `owners[μ]` is the atom carrying basis function `μ`.
pub fn mulliken_populations(
    p_total: &DMatrix<f64>,
    s: &DMatrix<f64>,
    owners: &[usize],
) -> Vec<f64> {
    condense(p_total, s, owners, atom_count(owners))
}

/// Mulliken-condensed spin density `Σ_{μ∈A} ((Pα − Pβ) S)_μμ`.
pub fn atomic_spin_densities(
    p_alpha: &DMatrix<f64>,
    p_beta: &DMatrix<f64>,
    s: &DMatrix<f64>,
    owners: &[usize],
) -> Vec<f64> {
    condense(&(p_alpha - p_beta), s, owners, atom_count(owners))
}

/// Overlap population `2 Σ_{i∈A} Σ_{j∈B} P_ij S_ij` between atoms `a` and `b`.
pub fn overlap_population(
    p_total: &DMatrix<f64>,
    s: &DMatrix<f64>,
    owners: &[usize],
    (a, b): (usize, usize),
) -> Result<f64> {
    if a == b {
        return Err(self_pair(a));
    }
    let mut sum = 0.0;
    for (i, &oi) in owners.iter().enumerate() {
        if oi != a {
            continue;
        }
        for (j, &oj) in owners.iter().enumerate() {
            if oj == b {
                sum += p_total[(i, j)] * s[(i, j)];
            }
        }
    }
    Ok(2.0 * sum)
}

/// Populations plus bond orders for one converged calculation.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub populations: AtomicPopulations,
    pub bond_orders: BondOrderTable,
}

/// Condenses `result` onto atoms. Bond orders are reported for every
/// perceived bond plus each pair in `extra_pairs` (0-based indices).
pub fn analyze(
    result: &ScfResult,
    tables: &IntegralTables,
    m: &Molecule,
    basis: &MolecularBasis,
    extra_pairs: &[(usize, usize)],
) -> Result<Analysis> {
    if !result.converged {
        return Err(Error::ScfNotConverged {
            iterations: result.iterations,
        });
    }
    let owners = basis.owners();
    let n_atoms = m.len();
    let p = result.p_total();
    let population = condense(&p, &tables.s, &owners, n_atoms);
    let spin = condense(&result.p_spin(), &tables.s, &owners, n_atoms);
    let charge = m
        .atoms()
        .iter()
        .zip(&population)
        .map(|(a, q)| a.atomic_number() as f64 - q)
        .collect();

    let mut pairs: Vec<(usize, usize)> =
        perceive_bonds(m).edges().map(|(a, b, _)| (a, b)).collect();
    for &(a, b) in extra_pairs {
        if a >= n_atoms || b >= n_atoms {
            return Err(Error::OutOfRange {
                what: "atom index",
                value: (a.max(b) + 1).to_string(),
                allowed: format!("1..={n_atoms}"),
            });
        }
        pairs.push((a, b));
    }
    let mut bond_orders = BondOrderTable::new();
    for (a, b) in pairs {
        let v = overlap_population(&p, &tables.s, &owners, (a, b))?;
        bond_orders.insert(a, b, v)?;
    }
    Ok(Analysis {
        populations: AtomicPopulations {
            population,
            charge,
            spin,
        },
        bond_orders,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AtomRecord {
    /// 1-based.
    pub index: usize,
    pub element: String,
    #[serde(serialize_with = "sig")]
    pub population: f64,
    #[serde(serialize_with = "sig")]
    pub charge: f64,
    #[serde(serialize_with = "sig")]
    pub spin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BondRecord {
    /// 1-based.
    pub a: usize,
    /// 1-based.
    pub b: usize,
    #[serde(serialize_with = "sig")]
    pub overlap_population: f64,
    #[serde(serialize_with = "sig")]
    pub distance_angstrom: f64,
}

/// Serializable form of an [`Analysis`].
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub atoms: Vec<AtomRecord>,
    pub bonds: Vec<BondRecord>,
}

impl Analysis {
    pub fn report(&self, m: &Molecule) -> AnalysisReport {
        let p = &self.populations;
        let atoms = m
            .atoms()
            .iter()
            .enumerate()
            .map(|(i, a)| AtomRecord {
                index: i + 1,
                element: a.element.symbol().to_string(),
                population: p.population[i],
                charge: p.charge[i],
                spin: p.spin[i],
            })
            .collect();
        let bonds = self
            .bond_orders
            .iter()
            .map(|(a, b, v)| BondRecord {
                a: a + 1,
                b: b + 1,
                overlap_population: v,
                distance_angstrom: m.distance(a, b) / ANGSTROM_TO_BOHR,
            })
            .collect();
        AnalysisReport { atoms, bonds }
    }
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("atom  elem  population      charge        spin\n");
        for a in &self.atoms {
            out.push_str(&format!(
                "{:>4}  {:<4} {:>11.6} {:>11.6} {:>11.6}\n",
                a.index, a.element, a.population, a.charge, a.spin
            ));
        }
        out.push_str("\n   a     b  overlap_pop  distance/Å\n");
        for b in &self.bonds {
            out.push_str(&format!(
                "{:>4}  {:>4} {:>12.6} {:>11.6}\n",
                b.a, b.b, b.overlap_population, b.distance_angstrom
            ));
        }
        out
    }
}
