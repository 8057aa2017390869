use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Ratio below which the overlap spectrum is treated as singular.
pub const LINEAR_DEPENDENCE_RATIO: f64 = 1e-10;

/// Löwdin symmetric orthogonalizer `X = S^{-1/2}`.
#[derive(Debug, Clone)]
pub struct Orthogonalizer {
    x: DMatrix<f64>,
}

impl Orthogonalizer {
    pub fn new(s: &DMatrix<f64>) -> Result<Self> {
        let eig = SymmetricEigen::new(s.clone());
        let largest = eig.eigenvalues.max();
        let smallest = eig.eigenvalues.min();
        if smallest.is_nan() || smallest <= LINEAR_DEPENDENCE_RATIO * largest {
            return Err(Error::LinearDependence {
                eigenvalue: smallest,
                largest,
            });
        }
        let inv_sqrt = eig.eigenvalues.map(|l| l.sqrt().recip());
        let u = &eig.eigenvectors;
        let x = u * DMatrix::from_diagonal(&inv_sqrt) * u.transpose();
        Ok(Self { x })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    /// Solves `F C = S C ε` with eigenvalues ascending and `CᵀSC = I`.
    pub fn solve(&self, f: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
        let fp = self.x.transpose() * f * &self.x;
        let fp = (&fp + fp.transpose()) * 0.5;
        let (vecs, vals) = sorted_eigen(fp);
        (&self.x * vecs, vals)
    }
}

/// Symmetric eigendecomposition with eigenpairs sorted by ascending
/// eigenvalue. Each eigenvector's sign is fixed so that its largest-magnitude
/// component is positive, which keeps results reproducible.
pub fn sorted_eigen(m: DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut vecs = DMatrix::zeros(n, n);
    let mut vals = DVector::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let pivot = col
            .iter()
            .copied()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        vecs.set_column(dst, &(col * sign));
        vals[dst] = eig.eigenvalues[src];
    }
    (vecs, vals)
}

/// One-shot generalized eigensolve; see [`Orthogonalizer::solve`].
pub fn solve_roothaan(f: &DMatrix<f64>, s: &DMatrix<f64>) -> Result<(DMatrix<f64>, DVector<f64>)> {
    Ok(Orthogonalizer::new(s)?.solve(f))
}

/// `P = Σ_{k < n_occ} C_k C_kᵀ` over the first `n_occ` columns.
pub fn density_matrix(c: &DMatrix<f64>, n_occ: usize) -> Result<DMatrix<f64>> {
    if n_occ > c.ncols() {
        return Err(Error::OutOfRange {
            what: "occupied orbital count",
            value: n_occ.to_string(),
            allowed: format!("0..={}", c.ncols()),
        });
    }
    let occ = c.columns(0, n_occ);
    Ok(occ * occ.transpose())
}
