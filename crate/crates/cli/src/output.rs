use std::fmt::Write as _;
use std::path::Path;

use radscf::analysis::AnalysisReport;
use radscf::geomopt::{Optimization, ScanPoint};
use radscf::integrals::IntegralTables;
use radscf::molsys::{Molecule, ANGSTROM_TO_BOHR};
use radscf::report::{sig, sig_opt, sig_vec};
use radscf::scf::{Method, ScfResult};
use radscf::screener::SuitabilityReport;
use serde::Serialize;

pub trait Report: Serialize {
    fn to_text(&self) -> String;
}

#[derive(Serialize)]
pub struct MoleculeInfo {
    pub formula: String,
    pub n_atoms: usize,
    pub charge: i32,
    pub multiplicity: u32,
    pub n_electrons: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
}

impl MoleculeInfo {
    fn new(m: &Molecule) -> Self {
        let (n_alpha, n_beta) = m.electron_counts();
        Self {
            formula: m.formula(),
            n_atoms: m.len(),
            charge: m.charge(),
            multiplicity: m.multiplicity(),
            n_electrons: m.n_electrons(),
            n_alpha,
            n_beta,
        }
    }
}

#[derive(Serialize)]
pub struct ScfInfo {
    pub method: Method,
    pub basis: String,
    pub n_basis: usize,
    pub converged: bool,
    pub iterations: usize,
    #[serde(serialize_with = "sig")]
    pub e_total: f64,
    #[serde(serialize_with = "sig")]
    pub e_electronic: f64,
    #[serde(serialize_with = "sig")]
    pub e_nuclear: f64,
    #[serde(serialize_with = "sig")]
    pub s_squared: f64,
    #[serde(serialize_with = "sig")]
    pub commutator_norm: f64,
}

#[derive(Serialize)]
pub struct OrbitalEnergies {
    #[serde(serialize_with = "sig_vec")]
    pub alpha: Vec<f64>,
    #[serde(serialize_with = "sig_vec")]
    pub beta: Vec<f64>,
}

#[derive(Serialize)]
pub struct EnergyReport {
    pub molecule: MoleculeInfo,
    pub scf: ScfInfo,
    pub orbital_energies: OrbitalEnergies,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub screening: Option<SuitabilityReport>,
}

impl EnergyReport {
    pub fn new(m: &Molecule, basis: &str, tables: &IntegralTables, r: &ScfResult) -> Self {
        Self {
            molecule: MoleculeInfo::new(m),
            scf: ScfInfo {
                method: r.method,
                basis: basis.to_string(),
                n_basis: tables.n_basis(),
                converged: r.converged,
                iterations: r.iterations,
                e_total: r.e_total,
                e_electronic: r.e_electronic,
                e_nuclear: r.e_nuclear,
                s_squared: r.s_squared,
                commutator_norm: r.commutator_norm(&tables.s),
            },
            orbital_energies: OrbitalEnergies {
                alpha: r.eps_alpha.iter().copied().collect(),
                beta: r.eps_beta.iter().copied().collect(),
            },
            analysis: None,
            screening: None,
        }
    }
}

fn orbital_lines(out: &mut String, label: &str, eps: &[f64], n_occ: usize) {
    let _ = writeln!(out, "{label} orbital energies (hartree), {n_occ} occupied:");
    for (i, e) in eps.iter().enumerate() {
        let mark = if i < n_occ { "occ" } else { "vir" };
        let _ = writeln!(out, "  {:>4} {mark} {:>16.8}", i + 1, e);
    }
}

impl Report for EnergyReport {
    fn to_text(&self) -> String {
        let m = &self.molecule;
        let s = &self.scf;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}  charge {}  multiplicity {}  ({} alpha, {} beta electrons)",
            m.formula, m.charge, m.multiplicity, m.n_alpha, m.n_beta
        );
        let method = match s.method {
            Method::Rhf => "RHF",
            Method::Uhf => "UHF",
        };
        let _ = writeln!(out, "{method}/{}  {} basis functions", s.basis, s.n_basis);
        let status = if s.converged {
            "converged"
        } else {
            "NOT converged"
        };
        let _ = writeln!(out, "SCF {status} in {} iterations", s.iterations);
        let _ = writeln!(out, "E_total      = {:>18.10} hartree", s.e_total);
        let _ = writeln!(out, "E_electronic = {:>18.10} hartree", s.e_electronic);
        let _ = writeln!(out, "E_nuclear    = {:>18.10} hartree", s.e_nuclear);
        let _ = writeln!(out, "<S^2>        = {:>18.10}", s.s_squared);
        let _ = writeln!(out, "|FPS - SPF|  = {:>18.3e}", s.commutator_norm);
        orbital_lines(&mut out, "alpha", &self.orbital_energies.alpha, m.n_alpha);
        if s.method == Method::Uhf {
            orbital_lines(&mut out, "beta", &self.orbital_energies.beta, m.n_beta);
        }
        if let Some(a) = &self.analysis {
            out.push('\n');
            out.push_str(&a.to_text());
        }
        if let Some(r) = &self.screening {
            out.push('\n');
            out.push_str(&r.to_text());
        }
        out
    }
}

#[derive(Serialize)]
pub struct AtomPosition {
    pub element: String,
    /// Ångström.
    #[serde(serialize_with = "sig_vec")]
    pub position: Vec<f64>,
}

#[derive(Serialize)]
pub struct OptimizationInfo {
    pub converged: bool,
    pub steps: usize,
    #[serde(serialize_with = "sig")]
    pub max_gradient: f64,
    #[serde(serialize_with = "sig_vec")]
    pub energies: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_energies: Option<Vec<f64>>,
    pub trajectory: String,
    pub final_geometry: Vec<AtomPosition>,
}

#[derive(Serialize)]
pub struct OptimizeReport {
    pub optimization: OptimizationInfo,
    #[serde(rename = "final")]
    pub final_state: EnergyReport,
}

impl OptimizeReport {
    pub fn new(
        o: &Optimization,
        starts: Option<Vec<f64>>,
        trajectory: &Path,
        final_state: EnergyReport,
    ) -> Self {
        let final_geometry = o
            .molecule
            .atoms()
            .iter()
            .map(|a| AtomPosition {
                element: a.element.symbol().to_string(),
                position: a.position.iter().map(|c| c / ANGSTROM_TO_BOHR).collect(),
            })
            .collect();
        Self {
            optimization: OptimizationInfo {
                converged: o.converged,
                steps: o.steps,
                max_gradient: o.max_gradient,
                energies: o.trace.clone(),
                start_energies: starts
                    .map(|v| v.iter().map(|&e| radscf::report::round_sig(e)).collect()),
                trajectory: trajectory.display().to_string(),
                final_geometry,
            },
            final_state,
        }
    }
}

impl Report for OptimizeReport {
    fn to_text(&self) -> String {
        let o = &self.optimization;
        let mut out = String::new();
        let status = if o.converged {
            "converged"
        } else {
            "NOT converged"
        };
        let _ = writeln!(
            out,
            "optimization {status} after {} steps, max |gradient| {:.3e} hartree/bohr",
            o.steps, o.max_gradient
        );
        for (i, e) in o.energies.iter().enumerate() {
            let _ = writeln!(out, "  step {i:>3}  E = {e:>18.10}");
        }
        if let Some(s) = &o.start_energies {
            let list: Vec<String> = s.iter().map(|e| format!("{e:.10}")).collect();
            let _ = writeln!(out, "multi-start final energies: {}", list.join(" "));
        }
        let _ = writeln!(out, "trajectory written to {}", o.trajectory);
        let _ = writeln!(out, "final geometry (angstrom):");
        for a in &o.final_geometry {
            let p = &a.position;
            let _ = writeln!(
                out,
                "  {:<2} {:>14.8} {:>14.8} {:>14.8}",
                a.element, p[0], p[1], p[2]
            );
        }
        out.push('\n');
        out.push_str(&self.final_state.to_text());
        out
    }
}

#[derive(Serialize)]
pub struct ScanReport {
    pub molecule: MoleculeInfo,
    pub method: Method,
    pub basis: String,
    /// 1-based.
    pub a: usize,
    /// 1-based.
    pub b: usize,
    pub points: Vec<ScanPoint>,
    #[serde(serialize_with = "sig_opt")]
    pub minimum_r_bohr: Option<f64>,
}

impl ScanReport {
    pub fn new(
        m: &Molecule,
        basis: &str,
        method: Method,
        (a, b): (usize, usize),
        points: Vec<ScanPoint>,
    ) -> Self {
        let minimum_r_bohr = points
            .iter()
            .filter(|p| p.converged)
            .min_by(|x, y| x.energy.total_cmp(&y.energy))
            .map(|p| p.r_bohr);
        Self {
            molecule: MoleculeInfo::new(m),
            method,
            basis: basis.to_string(),
            a: a + 1,
            b: b + 1,
            points,
            minimum_r_bohr,
        }
    }
}

impl Report for ScanReport {
    fn to_text(&self) -> String {
        let mut out = format!(
            "# scan of R({},{}) in bohr, energy in hartree\n",
            self.a, self.b
        );
        for p in &self.points {
            let flag = if p.converged { "" } else { "  # unconverged" };
            let _ = writeln!(out, "{:>12.6} {:>18.10}{flag}", p.r_bohr, p.energy);
        }
        if let Some(r) = self.minimum_r_bohr {
            let _ = writeln!(out, "# minimum at R = {r:.6} bohr");
        }
        out
    }
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    pub exit_code: u8,
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

impl ErrorReport {
    pub fn new(kind: &str, message: String, exit_code: u8) -> Self {
        Self {
            error: ErrorBody {
                kind: kind.to_string(),
                message,
                exit_code,
            },
        }
    }
}
