//! McMurchie–Davidson building blocks: Hermite expansion coefficients of a
//! Gaussian product and the Hermite Coulomb integrals `R_tuv`.

use super::boys::boys_array;

/// Largest per-center power handled by [`HermiteE`]; kinetic integrals need
/// `l + 2` on the ket side.
pub(crate) const MAX_POWER: usize = 4;
const MAX_T: usize = 2 * MAX_POWER + 2;

/// Largest total Hermite order in `R_tuv` (four d functions).
pub(crate) const MAX_R_ORDER: usize = 8;
pub(crate) const R_DIM: usize = MAX_R_ORDER + 1;

/// `E^{ij}_t` for one Cartesian direction of the product of two 1D
/// Gaussians with exponents `a`, `b` centered at `xa`, `xb`. The Gaussian
/// prefactor `exp(-ab/(a+b) (xa-xb)²)` is included in `E^{00}_0`.
pub(crate) struct HermiteE {
    e: [[[f64; MAX_T]; MAX_POWER + 1]; MAX_POWER + 1],
}

impl HermiteE {
    pub(crate) fn new(la: usize, lb: usize, a: f64, b: f64, xa: f64, xb: f64) -> Self {
        debug_assert!(la <= MAX_POWER && lb <= MAX_POWER);
        let p = a + b;
        let mu = a * b / p;
        let xab = xa - xb;
        let xp = (a * xa + b * xb) / p;
        let xpa = xp - xa;
        let xpb = xp - xb;
        let half_inv_p = 0.5 / p;

        let mut e = [[[0.0; MAX_T]; MAX_POWER + 1]; MAX_POWER + 1];
        e[0][0][0] = (-mu * xab * xab).exp();
        for i in 0..=la {
            for j in 0..=lb {
                if i == 0 && j == 0 {
                    continue;
                }
                let (prev, shift) = if i > 0 {
                    (e[i - 1][j], xpa)
                } else {
                    (e[i][j - 1], xpb)
                };
                for t in 0..=(i + j) {
                    let lower = if t > 0 { prev[t - 1] } else { 0.0 };
                    e[i][j][t] =
                        half_inv_p * lower + shift * prev[t] + (t + 1) as f64 * prev[t + 1];
                }
            }
        }
        Self { e }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize, t: usize) -> f64 {
        self.e[i][j][t]
    }
}

#[inline]
pub(crate) fn r_index(t: usize, u: usize, v: usize) -> usize {
    (t * R_DIM + u) * R_DIM + v
}

/// Hermite Coulomb integrals `R^0_tuv(α, X, Y, Z)` for `t+u+v <= order`,
/// stored at [`r_index`]. The buffers are reused between evaluations.
pub(crate) struct HermiteR {
    levels: Box<[[f64; R_DIM * R_DIM * R_DIM]; 2]>,
}

impl HermiteR {
    pub(crate) fn new() -> Self {
        Self {
            levels: Box::new([[0.0; R_DIM * R_DIM * R_DIM]; 2]),
        }
    }

    pub(crate) fn compute(&mut self, order: usize, alpha: f64, pc: [f64; 3]) {
        debug_assert!(order <= MAX_R_ORDER);
        let [x, y, z] = pc;
        let r2 = x * x + y * y + z * z;
        let mut f = [0.0; MAX_R_ORDER + 1];
        boys_array(order, alpha * r2, &mut f[..order + 1]);

        let m2a = -2.0 * alpha;
        let mut powers = [1.0; MAX_R_ORDER + 1];
        for k in 1..order + 1 {
            powers[k] = powers[k - 1] * m2a;
        }
        // Level n (stored in buffer n % 2) holds R^n_tuv for t+u+v <= order - n;
        // every entry read from level n+1 was written at that level.
        for n in (0..order + 1).rev() {
            let (lo, hi) = self.levels.split_at_mut(1);
            let (cur, prev) = if n % 2 == 0 {
                (&mut lo[0], &hi[0])
            } else {
                (&mut hi[0], &lo[0])
            };
            cur[0] = powers[n] * f[n];
            let max = order - n;
            // v-recursion on the t = u = 0 line
            for v in 1..max + 1 {
                let lower = if v > 1 {
                    (v - 1) as f64 * prev[v - 2]
                } else {
                    0.0
                };
                cur[v] = lower + z * prev[v - 1];
            }
            // u-recursion for t = 0
            for u in 1..max + 1 {
                let at = r_index(0, u, 0);
                let down1 = r_index(0, u - 1, 0);
                for v in 0..max + 1 - u {
                    let lower = if u > 1 {
                        (u - 1) as f64 * prev[r_index(0, u - 2, v)]
                    } else {
                        0.0
                    };
                    cur[at + v] = lower + y * prev[down1 + v];
                }
            }
            // t-recursion everywhere else
            for t in 1..max + 1 {
                let tm1 = (t - 1) as f64;
                for u in 0..max + 1 - t {
                    let at = r_index(t, u, 0);
                    let down1 = r_index(t - 1, u, 0);
                    let vmax = max + 1 - t - u;
                    if t > 1 {
                        let down2 = r_index(t - 2, u, 0);
                        for v in 0..vmax {
                            cur[at + v] = tm1 * prev[down2 + v] + x * prev[down1 + v];
                        }
                    } else {
                        for v in 0..vmax {
                            cur[at + v] = x * prev[down1 + v];
                        }
                    }
                }
            }
        }
    }

    #[inline]
    pub(crate) fn at(&self, index: usize) -> f64 {
        self.levels[0][index]
    }

    #[inline]
    pub(crate) fn get(&self, t: usize, u: usize, v: usize) -> f64 {
        self.at(r_index(t, u, v))
    }
}

/// All `(t, u, v)` with `t + u + v <= order`, in a fixed order.
pub(crate) fn hermite_indices(order: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for t in 0..=order {
        for u in 0..=(order - t) {
            for v in 0..=(order - t - u) {
                out.push([t, u, v]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_coefficients_reproduce_1d_overlap_of_s_functions() {
        // ∫ exp(-a(x-A)²) exp(-b(x-B)²) dx = sqrt(π/p) exp(-μ X²)
        let (a, b, xa, xb) = (0.8, 1.3, 0.2, -0.9);
        let e = HermiteE::new(0, 0, a, b, xa, xb);
        let p = a + b;
        let mu = a * b / p;
        let expected = (-mu * (xa - xb) * (xa - xb)).exp();
        assert!((e.get(0, 0, 0) - expected).abs() < 1e-15);
    }

    #[test]
    fn e_coefficients_for_p_on_first_center() {
        // x_A * s_B: E^{10}_0 = X_PA E^{00}_0 and E^{10}_1 = E^{00}_0 / 2p.
        let (a, b, xa, xb) = (0.5, 1.5, 0.0, 1.0);
        let e = HermiteE::new(1, 0, a, b, xa, xb);
        let p = a + b;
        let xp = (a * xa + b * xb) / p;
        assert!((e.get(1, 0, 0) - (xp - xa) * e.get(0, 0, 0)).abs() < 1e-15);
        assert!((e.get(1, 0, 1) - e.get(0, 0, 0) / (2.0 * p)).abs() < 1e-15);
    }

    #[test]
    fn r_integrals_at_zero_order_reduce_to_boys() {
        let mut r = HermiteR::new();
        r.compute(0, 0.7, [0.3, -0.2, 0.5]);
        let x = 0.7 * (0.09 + 0.04 + 0.25);
        assert!((r.get(0, 0, 0) - super::super::boys::boys(0, x)).abs() < 1e-15);
    }

    #[test]
    fn r_first_derivative_relation() {
        // R_100 = X R^1_000 = X (-2α) F_1
        let (alpha, pc) = (1.1, [0.4, 0.1, -0.3]);
        let mut r = HermiteR::new();
        r.compute(1, alpha, pc);
        let x = alpha * (0.16 + 0.01 + 0.09);
        let f1 = super::super::boys::boys(1, x);
        assert!((r.get(1, 0, 0) - pc[0] * (-2.0 * alpha) * f1).abs() < 1e-15);
        assert!((r.get(0, 0, 1) - pc[2] * (-2.0 * alpha) * f1).abs() < 1e-15);
    }

    #[test]
    fn hermite_index_count() {
        assert_eq!(hermite_indices(0).len(), 1);
        assert_eq!(hermite_indices(2).len(), 10);
        assert_eq!(hermite_indices(4).len(), 35);
    }
}
