use nalgebra::DMatrix;

use crate::integrals::{EriTensor, IntegralTables};

/// Coulomb matrix `J` of `p_total` and exchange matrices `K` of each spin
/// density, from one sequential pass over the unique integrals. The fixed
/// loop order makes the result independent of the thread count.
pub fn coulomb_exchange(
    eri: &EriTensor,
    p_total: &DMatrix<f64>,
    p_spin: &[&DMatrix<f64>],
) -> (DMatrix<f64>, Vec<DMatrix<f64>>) {
    let n = eri.n_basis();
    let npair = n * (n + 1) / 2;
    // Off-diagonal pairs appear twice in Σ_kl, so their density is doubled.
    let mut dpair = vec![0.0; npair];
    let mut jpair = vec![0.0; npair];
    for i in 0..n {
        for j in 0..=i {
            dpair[i * (i + 1) / 2 + j] = if i == j {
                p_total[(i, i)]
            } else {
                2.0 * p_total[(i, j)]
            };
        }
    }
    let dens: Vec<&[f64]> = p_spin.iter().map(|p| p.as_slice()).collect();
    let mut k: Vec<Vec<f64>> = p_spin.iter().map(|_| vec![0.0; n * n]).collect();
    let data = eri.as_packed();
    let mut slot = 0;
    for a in 0..n {
        for b in 0..=a {
            let ab = a * (a + 1) / 2 + b;
            let fab = if a == b { 0.5 } else { 1.0 };
            for c in 0..=a {
                let dmax = if c == a { b } else { c };
                for d in 0..=dmax {
                    let v = data[slot];
                    slot += 1;
                    let cd = c * (c + 1) / 2 + d;
                    jpair[ab] += v * dpair[cd];
                    if ab != cd {
                        jpair[cd] += v * dpair[ab];
                    }
                    // A unique quartet stands for up to eight permutations;
                    // halving per index coincidence lets the four updates
                    // below plus the final K + Kᵀ count each exactly once.
                    let mut w = v * fab;
                    if c == d {
                        w *= 0.5;
                    }
                    if ab == cd {
                        w *= 0.5;
                    }
                    for (kk, p) in k.iter_mut().zip(&dens) {
                        kk[a + n * c] += p[b + n * d] * w;
                        kk[b + n * d] += p[a + n * c] * w;
                        kk[a + n * d] += p[b + n * c] * w;
                        kk[b + n * c] += p[a + n * d] * w;
                    }
                }
            }
        }
    }
    debug_assert_eq!(slot, data.len());
    let j = DMatrix::from_fn(n, n, |i, l| jpair[i.max(l) * (i.max(l) + 1) / 2 + i.min(l)]);
    let k = k
        .into_iter()
        .map(|kk| {
            let kk = DMatrix::from_vec(n, n, kk);
            &kk + kk.transpose()
        })
        .collect();
    (j, k)
}

/// `F^σ = h + J[Pα+Pβ] − K[P^σ]` for both spins.
pub fn build_fock_uhf(
    p_alpha: &DMatrix<f64>,
    p_beta: &DMatrix<f64>,
    h: &DMatrix<f64>,
    tables: &IntegralTables,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let total = p_alpha + p_beta;
    let (j, mut k) = coulomb_exchange(&tables.eri, &total, &[p_alpha, p_beta]);
    let kb = k.pop().unwrap();
    let ka = k.pop().unwrap();
    let hj = h + j;
    (&hj - ka, hj - kb)
}

/// Closed-shell Fock matrix for per-spin density `p` (`Pα = Pβ = p`).
pub fn build_fock_rhf(p: &DMatrix<f64>, h: &DMatrix<f64>, tables: &IntegralTables) -> DMatrix<f64> {
    let (j, k) = coulomb_exchange(&tables.eri, &(p * 2.0), &[p]);
    h + j - &k[0]
}

/// `E = ½ Σ_ij [(Pα+Pβ)_ij h_ij + Pα_ij Fα_ij + Pβ_ij Fβ_ij] + E_nn`.
pub fn total_energy(
    p_alpha: &DMatrix<f64>,
    p_beta: &DMatrix<f64>,
    h: &DMatrix<f64>,
    f_alpha: &DMatrix<f64>,
    f_beta: &DMatrix<f64>,
    e_nuclear: f64,
) -> f64 {
    let one = (p_alpha + p_beta).dot(h);
    0.5 * (one + p_alpha.dot(f_alpha) + p_beta.dot(f_beta)) + e_nuclear
}
