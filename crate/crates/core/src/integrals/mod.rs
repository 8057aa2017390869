//! One- and two-electron integrals over contracted Cartesian Gaussians
//! (McMurchie–Davidson scheme).

mod boys;
mod dump;
mod eri;
mod hermite;
mod kernels;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::basis::MolecularBasis;
use crate::molsys::Molecule;

pub use boys::{boys, boys_array, MAX_ORDER as BOYS_MAX_ORDER};
pub use dump::{read_dump, write_dump, DUMP_MAGIC};
pub use eri::{pair_index, quartet_index, EriTensor};
pub use kernels::{eri, kinetic, nuclear_attraction, nuclear_attraction_to, overlap};

/// Knobs for [`build_integral_tables_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IntegralOptions {
    /// Skip shell quartets whose Schwarz bound `sqrt((ab|ab)(cd|cd))` falls
    /// below this value. `None` computes every quartet.
    pub schwarz_threshold: Option<f64>,
}

/// `S`, `T`, `V` and the two-electron tensor for one molecule/basis pair.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTables {
    pub s: DMatrix<f64>,
    pub t: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub eri: EriTensor,
}

impl IntegralTables {
    pub fn n_basis(&self) -> usize {
        self.s.nrows()
    }

    /// `T + V`.
    pub fn core_hamiltonian(&self) -> DMatrix<f64> {
        &self.t + &self.v
    }

    /// Smallest and largest eigenvalue of `S`.
    pub fn overlap_spectrum(&self) -> (f64, f64) {
        let eig = SymmetricEigen::new(self.s.clone()).eigenvalues;
        (eig.min(), eig.max())
    }

    /// `λ_max / λ_min` of the overlap matrix.
    pub fn overlap_condition_number(&self) -> f64 {
        let (lo, hi) = self.overlap_spectrum();
        hi / lo
    }
}

pub fn build_integral_tables(basis: &MolecularBasis, m: &Molecule) -> IntegralTables {
    build_integral_tables_with(basis, m, &IntegralOptions::default())
}

pub fn build_integral_tables_with(
    basis: &MolecularBasis,
    m: &Molecule,
    options: &IntegralOptions,
) -> IntegralTables {
    let charges: Vec<(f64, [f64; 3])> = m
        .atoms()
        .iter()
        .map(|a| (a.atomic_number() as f64, a.position))
        .collect();
    let (s, t, v) = one_electron_matrices(basis, &charges);
    let eri = eri::compute_eri(basis, options.schwarz_threshold);
    IntegralTables { s, t, v, eri }
}

/// `S`, `T` and the attraction matrix to the given point charges.
pub fn one_electron_matrices(
    basis: &MolecularBasis,
    charges: &[(f64, [f64; 3])],
) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let f = basis.functions();
    let n = f.len();
    let rows: Vec<Vec<[f64; 3]>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..=i)
                .map(|j| {
                    [
                        overlap(&f[i], &f[j]),
                        kinetic(&f[i], &f[j]),
                        nuclear_attraction_to(&f[i], &f[j], charges),
                    ]
                })
                .collect()
        })
        .collect();
    let mut s = DMatrix::zeros(n, n);
    let mut t = DMatrix::zeros(n, n);
    let mut v = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, vals) in row.iter().enumerate() {
            for (mat, &x) in [&mut s, &mut t, &mut v].into_iter().zip(vals) {
                mat[(i, j)] = x;
                mat[(j, i)] = x;
            }
        }
    }
    (s, t, v)
}
