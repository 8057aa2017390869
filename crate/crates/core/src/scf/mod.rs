//! Restricted and unrestricted Hartree–Fock.

mod diis;
mod fock;
mod roothaan;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrals::IntegralTables;
use crate::molsys::Molecule;

pub use diis::{diis_extrapolate, solve_bordered, Diis};
pub use fock::{build_fock_rhf, build_fock_uhf, coulomb_exchange, total_energy};
pub use roothaan::{
    density_matrix, solve_roothaan, sorted_eigen, Orthogonalizer, LINEAR_DEPENDENCE_RATIO,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rhf,
    Uhf,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rhf" => Ok(Self::Rhf),
            "uhf" => Ok(Self::Uhf),
            _ => Err(Error::OutOfRange {
                what: "method",
                value: s.into(),
                allowed: "rhf, uhf".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialGuess {
    /// Orbitals of `T + V`.
    CoreHamiltonian,
    /// Per-spin densities, e.g. from a neighbouring geometry.
    Density {
        alpha: DMatrix<f64>,
        beta: DMatrix<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScfConfig {
    pub max_iterations: usize,
    pub energy_tol: f64,
    pub density_rms_tol: f64,
    /// Number of stored DIIS vectors; values below 2 disable DIIS.
    pub diis_depth: usize,
    pub initial_guess: InitialGuess,
    /// Virtual-orbital shift in hartree.
    pub level_shift: f64,
    /// Rotation angle (degrees) between the α HOMO and LUMO of the core
    /// guess for UHF with `Nα = Nβ`, where the core guess would otherwise
    /// give identical α and β densities. Zero disables it.
    pub guess_mix_degrees: f64,
}

impl Default for ScfConfig {
    fn default() -> Self {
        Self {
            max_iterations: 128,
            energy_tol: 1e-9,
            density_rms_tol: 1e-8,
            diis_depth: 8,
            initial_guess: InitialGuess::CoreHamiltonian,
            level_shift: 0.0,
            guess_mix_degrees: 30.0,
        }
    }
}

impl ScfConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |what: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::OutOfRange {
                    what,
                    value: v.to_string(),
                    allowed: "> 0".into(),
                })
            }
        };
        positive("energy tolerance", self.energy_tol)?;
        positive("density tolerance", self.density_rms_tol)?;
        if self.max_iterations == 0 {
            return Err(Error::OutOfRange {
                what: "max iterations",
                value: "0".into(),
                allowed: ">= 1".into(),
            });
        }
        if !(self.level_shift >= 0.0 && self.level_shift.is_finite()) {
            return Err(Error::OutOfRange {
                what: "level shift",
                value: self.level_shift.to_string(),
                allowed: ">= 0".into(),
            });
        }
        Ok(())
    }
}

/// One line of the iteration log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub energy: f64,
    pub delta_energy: f64,
    /// RMS change of the density that entered this iteration.
    pub density_rms: f64,
    /// Largest element of the orthogonalized commutator.
    pub diis_error: f64,
}

impl IterationRecord {
    pub fn to_log_line(&self) -> String {
        serde_json::to_string(self).expect("plain numeric record")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScfResult {
    pub method: Method,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub c_alpha: DMatrix<f64>,
    pub c_beta: DMatrix<f64>,
    pub eps_alpha: DVector<f64>,
    pub eps_beta: DVector<f64>,
    pub p_alpha: DMatrix<f64>,
    pub p_beta: DMatrix<f64>,
    pub f_alpha: DMatrix<f64>,
    pub f_beta: DMatrix<f64>,
    pub e_total: f64,
    pub e_electronic: f64,
    pub e_nuclear: f64,
    pub iterations: usize,
    pub converged: bool,
    pub s_squared: f64,
    pub log: Vec<IterationRecord>,
}

impl ScfResult {
    pub fn p_total(&self) -> DMatrix<f64> {
        &self.p_alpha + &self.p_beta
    }

    pub fn p_spin(&self) -> DMatrix<f64> {
        &self.p_alpha - &self.p_beta
    }

    /// `max |FPS − SPF|` over both spins.
    pub fn commutator_norm(&self, s: &DMatrix<f64>) -> f64 {
        commutator(&self.f_alpha, &self.p_alpha, s)
            .abs()
            .max()
            .max(commutator(&self.f_beta, &self.p_beta, s).abs().max())
    }
}

pub fn core_hamiltonian(tables: &IntegralTables) -> DMatrix<f64> {
    tables.core_hamiltonian()
}

fn commutator(f: &DMatrix<f64>, p: &DMatrix<f64>, s: &DMatrix<f64>) -> DMatrix<f64> {
    let fps = f * p * s;
    &fps - fps.transpose()
}

/// `⟨S²⟩ = S_z(S_z+1) + Nβ − tr(Pα S Pβ S)`; the trace equals
/// `Σ_ij |(C_αᵀ S C_β)_ij|²` over occupied orbitals.
pub fn s_squared(
    p_alpha: &DMatrix<f64>,
    p_beta: &DMatrix<f64>,
    s: &DMatrix<f64>,
    n_alpha: usize,
    n_beta: usize,
) -> f64 {
    let sz = 0.5 * (n_alpha as f64 - n_beta as f64);
    let pas = p_alpha * s;
    let pbs = p_beta * s;
    sz * (sz + 1.0) + n_beta as f64 - (pas * pbs).trace()
}

pub fn scf(
    m: &Molecule,
    tables: &IntegralTables,
    method: Method,
    cfg: &ScfConfig,
) -> Result<ScfResult> {
    match method {
        Method::Rhf => scf_rhf(m, tables, cfg),
        Method::Uhf => scf_uhf(m, tables, cfg),
    }
}

pub fn scf_uhf(m: &Molecule, tables: &IntegralTables, cfg: &ScfConfig) -> Result<ScfResult> {
    run(m, tables, cfg, Method::Uhf)
}

/// Closed-shell special case; requires `Nα = Nβ`.
pub fn scf_rhf(m: &Molecule, tables: &IntegralTables, cfg: &ScfConfig) -> Result<ScfResult> {
    let (na, nb) = m.electron_counts();
    if na != nb {
        return Err(Error::OutOfRange {
            what: "multiplicity for RHF",
            value: m.multiplicity().to_string(),
            allowed: "1 (closed shell)".into(),
        });
    }
    run(m, tables, cfg, Method::Rhf)
}

fn run(
    m: &Molecule,
    tables: &IntegralTables,
    cfg: &ScfConfig,
    method: Method,
) -> Result<ScfResult> {
    cfg.validate()?;
    let restricted = method == Method::Rhf;
    let (na, nb) = m.electron_counts();
    let n = tables.n_basis();
    if na > n {
        return Err(Error::OutOfRange {
            what: "alpha electron count",
            value: na.to_string(),
            allowed: format!("<= {n} basis functions"),
        });
    }
    let e_nuclear = m.nuclear_repulsion()?;
    let s = &tables.s;
    let h = tables.core_hamiltonian();
    let orth = Orthogonalizer::new(s)?;
    let x = orth.matrix();

    let (mut pa, mut pb) = match &cfg.initial_guess {
        InitialGuess::CoreHamiltonian => {
            let (mut c, _) = orth.solve(&h);
            let pb = density_matrix(&c, nb)?;
            if !restricted && na == nb && na > 0 && na < n && cfg.guess_mix_degrees != 0.0 {
                let (sin, cos) = cfg.guess_mix_degrees.to_radians().sin_cos();
                let homo = c.column(na - 1).clone_owned();
                let lumo = c.column(na).clone_owned();
                c.set_column(na - 1, &(&homo * cos + &lumo * sin));
                c.set_column(na, &(&lumo * cos - &homo * sin));
            }
            (density_matrix(&c, na)?, pb)
        }
        InitialGuess::Density { alpha, beta } => {
            if alpha.shape() != (n, n) || beta.shape() != (n, n) {
                return Err(Error::OutOfRange {
                    what: "guess density shape",
                    value: format!("{:?}", alpha.shape()),
                    allowed: format!("({n}, {n})"),
                });
            }
            (alpha.clone(), beta.clone())
        }
    };
    if restricted {
        pa = (&pa + &pb) * 0.5;
        pb = pa.clone();
    }

    let mut diis = (cfg.diis_depth >= 2).then(|| Diis::new(cfg.diis_depth));
    let mut log = Vec::new();
    let mut previous_energy: Option<f64> = None;
    let mut rms = f64::INFINITY;
    let mut converged = false;
    let mut fa;
    let mut fb;
    let mut energy;
    let mut iteration = 0;

    loop {
        iteration += 1;
        if restricted {
            fa = build_fock_rhf(&pa, &h, tables);
            fb = fa.clone();
        } else {
            (fa, fb) = build_fock_uhf(&pa, &pb, &h, tables);
        }
        energy = total_energy(&pa, &pb, &h, &fa, &fb, e_nuclear);
        let delta = previous_energy.map_or(energy, |e| energy - e);
        let ea = x.transpose() * commutator(&fa, &pa, s) * x;
        let eb = if restricted {
            None
        } else {
            Some(x.transpose() * commutator(&fb, &pb, s) * x)
        };
        let err = eb
            .as_ref()
            .map_or(ea.abs().max(), |eb| ea.abs().max().max(eb.abs().max()));
        log.push(IterationRecord {
            iteration,
            energy,
            delta_energy: delta,
            density_rms: rms,
            diis_error: err,
        });

        if previous_energy.is_some() && delta.abs() < cfg.energy_tol && rms < cfg.density_rms_tol {
            converged = true;
            break;
        }
        if iteration >= cfg.max_iterations {
            break;
        }
        previous_energy = Some(energy);

        let mut focks = if restricted {
            vec![fa.clone()]
        } else {
            vec![fa.clone(), fb.clone()]
        };
        if let Some(d) = diis.as_mut() {
            let errors = match eb {
                Some(eb) => vec![ea, eb],
                None => vec![ea],
            };
            d.push(focks, errors);
            focks = d.extrapolate();
        }
        if cfg.level_shift > 0.0 {
            for (f, p) in focks.iter_mut().zip([&pa, &pb]) {
                *f += (s - s * p * s) * cfg.level_shift;
            }
        }
        let (ca, _) = orth.solve(&focks[0]);
        let new_pa = density_matrix(&ca, na)?;
        let new_pb = if restricted {
            new_pa.clone()
        } else {
            let (cb, _) = orth.solve(&focks[1]);
            density_matrix(&cb, nb)?
        };
        rms = rms_change(&new_pa, &pa).max(rms_change(&new_pb, &pb));
        pa = new_pa;
        pb = new_pb;
    }

    let (c_alpha, eps_alpha) = orth.solve(&fa);
    let (c_beta, eps_beta) = if restricted {
        (c_alpha.clone(), eps_alpha.clone())
    } else {
        orth.solve(&fb)
    };
    let s_squared = s_squared(&pa, &pb, s, na, nb);
    Ok(ScfResult {
        method,
        n_alpha: na,
        n_beta: nb,
        c_alpha,
        c_beta,
        eps_alpha,
        eps_beta,
        p_alpha: pa,
        p_beta: pb,
        f_alpha: fa,
        f_beta: fb,
        e_total: energy,
        e_electronic: energy - e_nuclear,
        e_nuclear,
        iterations: iteration,
        converged,
        s_squared,
        log,
    })
}

fn rms_change(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    ((a - b).norm_squared() / a.len() as f64).sqrt()
}
