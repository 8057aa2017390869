//! Geometry relaxation on the SCF energy surface with central-difference
//! gradients, plus multi-start search and 1D bond scans.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{assign_basis, BasisSet};
use crate::error::{Error, Result};
use crate::integrals::build_integral_tables;
use crate::molsys::{to_xyz, Molecule};
use crate::scf::{scf, InitialGuess, Method, ScfConfig, ScfResult};

/// Longest Cartesian displacement of any coordinate in one trial step, bohr.
pub const MAX_STEP: f64 = 0.3;

/// Armijo sufficient-decrease constant.
const ARMIJO: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptMethod {
    SteepestDescent,
    QuasiNewton,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Central-difference displacement in bohr.
    pub fd_step: f64,
    /// Convergence threshold on the largest gradient component, hartree/bohr.
    pub grad_tol: f64,
    pub max_steps: usize,
    pub method: OptMethod,
    /// Step halvings allowed per line search.
    pub max_backtracks: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            fd_step: 5e-3,
            grad_tol: 3e-4,
            max_steps: 100,
            method: OptMethod::QuasiNewton,
            max_backtracks: 20,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [("fd_step", self.fd_step), ("grad_tol", self.grad_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange {
                    what,
                    value: v.to_string(),
                    allowed: "> 0".into(),
                });
            }
        }
        Ok(())
    }
}

/// SCF energy as a function of nuclear positions for a fixed basis set,
/// method and SCF configuration.
#[derive(Debug, Clone)]
pub struct EnergySurface {
    pub basis: BasisSet,
    pub method: Method,
    pub scf: ScfConfig,
}

impl EnergySurface {
    pub fn new(basis: BasisSet, method: Method, scf: ScfConfig) -> Self {
        Self { basis, method, scf }
    }

    /// Runs the SCF at `m`, warm-started from `guess` when given. The result
    /// may be unconverged.
    pub fn evaluate(&self, m: &Molecule, guess: Option<&ScfResult>) -> Result<ScfResult> {
        let basis = assign_basis(m, &self.basis)?;
        let tables = build_integral_tables(&basis, m);
        let mut cfg = self.scf.clone();
        if let Some(g) = guess {
            cfg.initial_guess = InitialGuess::Density {
                alpha: g.p_alpha.clone(),
                beta: g.p_beta.clone(),
            };
        }
        scf(m, &tables, self.method, &cfg)
    }

    /// Like [`evaluate`](Self::evaluate) but unconverged runs are errors.
    pub fn converged(&self, m: &Molecule, guess: Option<&ScfResult>) -> Result<ScfResult> {
        let r = self.evaluate(m, guess)?;
        if !r.converged {
            return Err(Error::ScfNotConverged {
                iterations: r.iterations,
            });
        }
        Ok(r)
    }
}

/// Orthonormal basis of rigid translations and rotations about the centroid.
fn rigid_modes(coords: &[f64]) -> Vec<DVector<f64>> {
    let n = coords.len() / 3;
    let mut centroid = [0.0; 3];
    for a in 0..n {
        for k in 0..3 {
            centroid[k] += coords[3 * a + k] / n as f64;
        }
    }
    let mut raw = Vec::with_capacity(6);
    for k in 0..3 {
        raw.push(DVector::from_fn(
            3 * n,
            |i, _| if i % 3 == k { 1.0 } else { 0.0 },
        ));
    }
    for k in 0..3 {
        // e_k × r for every atom.
        let mut v = DVector::zeros(3 * n);
        for a in 0..n {
            let r: Vec<f64> = (0..3).map(|j| coords[3 * a + j] - centroid[j]).collect();
            let (x, y) = ((k + 1) % 3, (k + 2) % 3);
            v[3 * a + x] = -r[y];
            v[3 * a + y] = r[x];
        }
        raw.push(v);
    }
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(6);
    for mut v in raw {
        for b in &basis {
            let c = v.dot(b);
            v -= b * c;
        }
        let norm = v.norm();
        // Linear and single-atom systems have fewer independent rotations.
        if norm > 1e-8 {
            basis.push(v / norm);
        }
    }
    basis
}

/// Removes net translation and rotation from a Cartesian gradient.
pub fn project_rigid_motions(coords: &[f64], gradient: &[f64]) -> Vec<f64> {
    let mut g = DVector::from_column_slice(gradient);
    for b in rigid_modes(coords) {
        let c = g.dot(&b);
        g -= b * c;
    }
    g.as_slice().to_vec()
}

/// Central-difference gradient at `m` in hartree/bohr with rigid motions
/// projected out. Displaced runs are warm-started from `base`.
pub fn gradient_at(
    surface: &EnergySurface,
    m: &Molecule,
    base: &ScfResult,
    fd_step: f64,
) -> Result<Vec<f64>> {
    let x0 = m.coordinates();
    let energies: Vec<Result<f64>> = (0..2 * x0.len())
        .into_par_iter()
        .map(|k| {
            let (i, sign) = (k / 2, if k % 2 == 0 { 1.0 } else { -1.0 });
            let mut x = x0.clone();
            x[i] += sign * fd_step;
            surface
                .converged(&m.with_coordinates(&x), Some(base))
                .map(|r| r.e_total)
                .map_err(|e| Error::Gradient {
                    coordinate: i + 1,
                    source: Box::new(e),
                })
        })
        .collect();
    let energies = energies.into_iter().collect::<Result<Vec<f64>>>()?;
    let raw: Vec<f64> = energies
        .chunks(2)
        .map(|p| (p[0] - p[1]) / (2.0 * fd_step))
        .collect();
    Ok(project_rigid_motions(&x0, &raw))
}

/// Converged SCF at `m` and its projected gradient.
pub fn numerical_gradient(
    surface: &EnergySurface,
    m: &Molecule,
    fd_step: f64,
) -> Result<(ScfResult, Vec<f64>)> {
    let base = surface.converged(m, None)?;
    let g = gradient_at(surface, m, &base, fd_step)?;
    Ok((base, g))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Debug, Clone)]
pub struct Optimization {
    pub molecule: Molecule,
    pub energy: f64,
    /// Energy of every accepted geometry, starting with the initial one.
    pub trace: Vec<f64>,
    /// Every accepted geometry, starting with the initial one.
    pub frames: Vec<Molecule>,
    pub steps: usize,
    pub converged: bool,
    /// Largest gradient component at the returned geometry.
    pub max_gradient: f64,
    pub result: ScfResult,
}

/// Relaxes `m` until the largest gradient component drops below
/// `cfg.grad_tol` or `cfg.max_steps` steps have been taken. Each step is a
/// backtracking line search along the steepest-descent or BFGS direction,
/// so the energy trace never increases.
pub fn optimize(
    m: &Molecule,
    surface: &EnergySurface,
    cfg: &OptimizerConfig,
) -> Result<Optimization> {
    cfg.validate()?;
    let dim = 3 * m.len();
    let mut current = m.clone();
    let (mut result, g) = numerical_gradient(surface, &current, cfg.fd_step)?;
    let mut g = DVector::from_vec(g);
    let mut trace = vec![result.e_total];
    let mut frames = vec![current.clone()];
    let mut h_inv = DMatrix::<f64>::identity(dim, dim);
    let mut steps = 0;
    while max_abs(g.as_slice()) >= cfg.grad_tol && steps < cfg.max_steps {
        let mut d = match cfg.method {
            OptMethod::SteepestDescent => -&g,
            OptMethod::QuasiNewton => -(&h_inv * &g),
        };
        if d.dot(&g) >= 0.0 {
            h_inv.fill_with_identity();
            d = -&g;
        }
        let longest = max_abs(d.as_slice());
        if longest > MAX_STEP {
            d *= MAX_STEP / longest;
        }
        let slope = d.dot(&g);
        let x = DVector::from_vec(current.coordinates());
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_backtracks {
            let trial = current.with_coordinates((&x + &d * alpha).as_slice());
            // Failed SCF or collapsed geometry counts as a rejected trial.
            if let Ok(r) = surface.converged(&trial, Some(&result)) {
                if r.e_total <= result.e_total + ARMIJO * alpha * slope {
                    accepted = Some((trial, r));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((next, r)) = accepted else {
            return Err(Error::Stalled {
                step: steps + 1,
                backtracks: cfg.max_backtracks,
                last_coordinates: current.coordinates(),
            });
        };
        let g_next = DVector::from_vec(gradient_at(surface, &next, &r, cfg.fd_step)?);
        if cfg.method == OptMethod::QuasiNewton {
            let s = &d * alpha;
            let y = &g_next - &g;
            let sy = s.dot(&y);
            if sy > 1e-12 {
                let hy = &h_inv * &y;
                let yhy = y.dot(&hy);
                h_inv += (&s * s.transpose()) * ((sy + yhy) / (sy * sy))
                    - (&hy * s.transpose() + &s * hy.transpose()) / sy;
            }
        }
        current = next;
        result = r;
        g = g_next;
        steps += 1;
        trace.push(result.e_total);
        frames.push(current.clone());
    }
    Ok(Optimization {
        converged: max_abs(g.as_slice()) < cfg.grad_tol,
        max_gradient: max_abs(g.as_slice()),
        energy: result.e_total,
        molecule: current,
        trace,
        frames,
        steps,
        result,
    })
}

/// Number of perturbed restarts in [`optimize_multistart`].
pub const DEFAULT_RESTARTS: usize = 3;
/// Half-width of the uniform coordinate noise for restarts, bohr.
pub const DEFAULT_NOISE: f64 = 0.05;
pub const DEFAULT_SEED: u64 = 20_030_417;

#[derive(Debug, Clone)]
pub struct MultiStart {
    /// Lowest-energy relaxation.
    pub best: Optimization,
    /// Final energy of each start; the unperturbed start comes first.
    pub energies: Vec<f64>,
}

/// Relaxes `m` and `restarts` copies perturbed by uniform noise in
/// `[-noise, noise]` bohr per coordinate, keeping the lowest result.
pub fn optimize_multistart(
    m: &Molecule,
    surface: &EnergySurface,
    cfg: &OptimizerConfig,
    restarts: usize,
    noise: f64,
    seed: u64,
) -> Result<MultiStart> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![m.clone()];
    for _ in 0..restarts {
        let x: Vec<f64> = m
            .coordinates()
            .iter()
            .map(|c| c + rng.random_range(-noise..=noise))
            .collect();
        starts.push(m.with_coordinates(&x));
    }
    let mut best: Option<Optimization> = None;
    let mut energies = Vec::with_capacity(starts.len());
    for s in &starts {
        let o = optimize(s, surface, cfg)?;
        energies.push(o.energy);
        if best.as_ref().map_or(true, |b| o.energy < b.energy) {
            best = Some(o);
        }
    }
    Ok(MultiStart {
        best: best.expect("at least one start"),
        energies,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    #[serde(serialize_with = "crate::report::sig")]
    pub r_bohr: f64,
    #[serde(serialize_with = "crate::report::sig")]
    pub energy: f64,
    pub converged: bool,
}

/// Energies along the `a`–`b` distance from `from` to `to` bohr in `steps`
/// evenly spaced points. Atom `b` moves along the bond axis, everything else
/// stays put. Each point is warm-started from the last converged one.
pub fn scan_bond(
    m: &Molecule,
    surface: &EnergySurface,
    (a, b): (usize, usize),
    from: f64,
    to: f64,
    steps: usize,
) -> Result<Vec<ScanPoint>> {
    let n = m.len();
    if a >= n || b >= n || a == b {
        return Err(Error::OutOfRange {
            what: "scan atom pair",
            value: format!("{},{}", a + 1, b + 1),
            allowed: format!("two distinct atoms in 1..={n}"),
        });
    }
    if steps == 0 || !(from > 0.0 && to > 0.0) {
        return Err(Error::OutOfRange {
            what: "scan range",
            value: format!("{from}..{to} in {steps} steps"),
            allowed: "positive distances and at least one step".into(),
        });
    }
    let pa = m.atoms()[a].position;
    let pb = m.atoms()[b].position;
    let r0 = m.distance(a, b);
    let axis: Vec<f64> = (0..3).map(|k| (pb[k] - pa[k]) / r0).collect();
    let mut guess: Option<ScfResult> = None;
    let mut out = Vec::with_capacity(steps);
    for i in 0..steps {
        let r = if steps == 1 {
            from
        } else {
            from + (to - from) * i as f64 / (steps - 1) as f64
        };
        let mut x = m.coordinates();
        for k in 0..3 {
            x[3 * b + k] = pa[k] + axis[k] * r;
        }
        let res = surface.evaluate(&m.with_coordinates(&x), guess.as_ref())?;
        out.push(ScanPoint {
            r_bohr: r,
            energy: res.e_total,
            converged: res.converged,
        });
        if res.converged {
            guess = Some(res);
        }
    }
    Ok(out)
}

/// Concatenated XYZ frames with `step=` and `energy=` in each comment line.
pub fn trajectory_xyz(frames: &[Molecule], energies: &[f64]) -> String {
    frames
        .iter()
        .zip(energies)
        .enumerate()
        .map(|(i, (m, e))| to_xyz(m, &format!("step={i} energy={e:.10}")))
        .collect()
}
