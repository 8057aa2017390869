use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

/// Condition number of the bordered DIIS matrix above which the oldest
/// entry is discarded.
pub const MAX_CONDITION: f64 = 1e12;

/// Pulay DIIS over one or more spin channels sharing a single `B` matrix.
#[derive(Debug, Clone)]
pub struct Diis {
    depth: usize,
    entries: VecDeque<Entry>,
}

#[derive(Debug, Clone)]
struct Entry {
    focks: Vec<DMatrix<f64>>,
    errors: Vec<DMatrix<f64>>,
}

impl Diis {
    pub fn new(depth: usize) -> Self {
        Self {
            depth: depth.max(1),
            entries: VecDeque::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, focks: Vec<DMatrix<f64>>, errors: Vec<DMatrix<f64>>) {
        if self.entries.len() == self.depth {
            self.entries.pop_front();
        }
        self.entries.push_back(Entry { focks, errors });
    }

    /// Extrapolated Fock matrices. Falls back to the newest entry when fewer
    /// than two usable entries remain.
    pub fn extrapolate(&mut self) -> Vec<DMatrix<f64>> {
        loop {
            if self.entries.len() < 2 {
                return self
                    .entries
                    .back()
                    .map(|e| e.focks.clone())
                    .unwrap_or_default();
            }
            let b = self.b_matrix();
            match solve_bordered(&b) {
                Some(c) => {
                    let spins = self.entries[0].focks.len();
                    return (0..spins)
                        .map(|s| {
                            self.entries.iter().zip(&c).fold(
                                DMatrix::zeros(
                                    self.entries[0].focks[s].nrows(),
                                    self.entries[0].focks[s].ncols(),
                                ),
                                |acc, (e, ci)| acc + &e.focks[s] * *ci,
                            )
                        })
                        .collect();
                }
                None => {
                    self.entries.pop_front();
                }
            }
        }
    }

    fn b_matrix(&self) -> DMatrix<f64> {
        let m = self.entries.len();
        DMatrix::from_fn(m, m, |i, j| {
            self.entries[i]
                .errors
                .iter()
                .zip(&self.entries[j].errors)
                .map(|(a, b)| a.dot(b))
                .sum()
        })
    }
}

/// Coefficients minimizing `cᵀBc` subject to `Σc = 1`, or `None` when the
/// bordered system is too ill-conditioned. `B` is rescaled by its largest
/// diagonal element first so that small late-stage errors do not by
/// themselves trigger the condition check.
pub fn solve_bordered(b: &DMatrix<f64>) -> Option<Vec<f64>> {
    let m = b.nrows();
    let scale = b.diagonal().max();
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let mut a = DMatrix::zeros(m + 1, m + 1);
    a.view_mut((0, 0), (m, m)).copy_from(&(b / scale));
    for i in 0..m {
        a[(i, m)] = -1.0;
        a[(m, i)] = -1.0;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let (hi, lo) = (sv.max(), sv.min());
    if lo.is_nan() || lo <= 0.0 || hi / lo > MAX_CONDITION {
        return None;
    }
    let mut rhs = DVector::zeros(m + 1);
    rhs[m] = -1.0;
    let x = a.lu().solve(&rhs)?;
    Some(x.as_slice()[..m].to_vec())
}

/// Single-channel DIIS over an explicit history of `(F, error)` pairs.
pub fn diis_extrapolate(history: &[(DMatrix<f64>, DMatrix<f64>)]) -> DMatrix<f64> {
    let mut d = Diis::new(history.len());
    for (f, e) in history {
        d.push(vec![f.clone()], vec![e.clone()]);
    }
    d.extrapolate().pop().expect("empty DIIS history")
}
