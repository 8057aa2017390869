//! Integrals between individual contracted functions.
//!
//! These work on any pair/quartet of [`BasisFunction`]s and are the reference
//! path; [`super::build_integral_tables`] uses a shell-blocked ERI engine for
//! speed and is checked against these in tests.

use std::f64::consts::PI;

use super::hermite::{HermiteE, HermiteR};
use crate::basis::BasisFunction;
use crate::molsys::Molecule;

fn primitive_pairs<'a>(
    a: &'a BasisFunction,
    b: &'a BasisFunction,
) -> impl Iterator<Item = (f64, f64, f64)> + 'a {
    a.exponents
        .iter()
        .zip(&a.coefficients)
        .flat_map(move |(&ea, &ca)| {
            b.exponents
                .iter()
                .zip(&b.coefficients)
                .map(move |(&eb, &cb)| (ea, eb, ca * cb))
        })
}

fn hermite_xyz(
    a: &BasisFunction,
    b: &BasisFunction,
    ea: f64,
    eb: f64,
    extra_b: usize,
) -> [HermiteE; 3] {
    std::array::from_fn(|k| {
        HermiteE::new(
            a.powers[k] as usize,
            b.powers[k] as usize + extra_b,
            ea,
            eb,
            a.center[k],
            b.center[k],
        )
    })
}

/// ⟨a|b⟩
pub fn overlap(a: &BasisFunction, b: &BasisFunction) -> f64 {
    let mut s = 0.0;
    for (ea, eb, c) in primitive_pairs(a, b) {
        let p = ea + eb;
        let e = hermite_xyz(a, b, ea, eb, 0);
        let mut prim = (PI / p).powf(1.5);
        for (k, ek) in e.iter().enumerate() {
            prim *= ek.get(a.powers[k] as usize, b.powers[k] as usize, 0);
        }
        s += c * prim;
    }
    s
}

/// ⟨a| -½∇² |b⟩
pub fn kinetic(a: &BasisFunction, b: &BasisFunction) -> f64 {
    let mut total = 0.0;
    for (ea, eb, c) in primitive_pairs(a, b) {
        let p = ea + eb;
        let e = hermite_xyz(a, b, ea, eb, 2);
        let root = (PI / p).sqrt();
        let mut s1 = [0.0; 3];
        let mut t1 = [0.0; 3];
        for k in 0..3 {
            let i = a.powers[k] as usize;
            let j = b.powers[k] as usize;
            let s = |jj: usize| e[k].get(i, jj, 0) * root;
            s1[k] = s(j);
            let jf = j as f64;
            let lower = if j >= 2 {
                jf * (jf - 1.0) * s(j - 2)
            } else {
                0.0
            };
            t1[k] = -0.5 * (lower - 2.0 * eb * (2.0 * jf + 1.0) * s(j) + 4.0 * eb * eb * s(j + 2));
        }
        let prim = t1[0] * s1[1] * s1[2] + s1[0] * t1[1] * s1[2] + s1[0] * s1[1] * t1[2];
        total += c * prim;
    }
    total
}

/// ⟨a| Σ_C -Z_C/|r - R_C| |b⟩ over the nuclei of `m`.
pub fn nuclear_attraction(a: &BasisFunction, b: &BasisFunction, m: &Molecule) -> f64 {
    let charges: Vec<(f64, [f64; 3])> = m
        .atoms()
        .iter()
        .map(|at| (at.atomic_number() as f64, at.position))
        .collect();
    nuclear_attraction_to(a, b, &charges)
}

/// Attraction to arbitrary point charges `(Z, position)`.
pub fn nuclear_attraction_to(
    a: &BasisFunction,
    b: &BasisFunction,
    charges: &[(f64, [f64; 3])],
) -> f64 {
    let order = (a.angular_momentum() + b.angular_momentum()) as usize;
    let mut r = HermiteR::new();
    let mut total = 0.0;
    for (ea, eb, c) in primitive_pairs(a, b) {
        let p = ea + eb;
        let e = hermite_xyz(a, b, ea, eb, 0);
        let centre: [f64; 3] = std::array::from_fn(|k| (ea * a.center[k] + eb * b.center[k]) / p);
        let [lx, ly, lz] = std::array::from_fn::<usize, 3, _>(|k| a.powers[k] as usize);
        let [mx, my, mz] = std::array::from_fn::<usize, 3, _>(|k| b.powers[k] as usize);
        let mut prim = 0.0;
        for &(z, pos) in charges {
            if z == 0.0 {
                continue;
            }
            r.compute(order, p, std::array::from_fn(|k| centre[k] - pos[k]));
            let mut sum = 0.0;
            for t in 0..=(lx + mx) {
                let et = e[0].get(lx, mx, t);
                for u in 0..=(ly + my) {
                    let eu = e[1].get(ly, my, u);
                    for v in 0..=(lz + mz) {
                        sum += et * eu * e[2].get(lz, mz, v) * r.get(t, u, v);
                    }
                }
            }
            prim -= z * sum;
        }
        total += c * 2.0 * PI / p * prim;
    }
    total
}

/// Two-electron repulsion (ab|cd) in chemists' notation.
pub fn eri(a: &BasisFunction, b: &BasisFunction, c: &BasisFunction, d: &BasisFunction) -> f64 {
    let order =
        (a.angular_momentum() + b.angular_momentum() + c.angular_momentum() + d.angular_momentum())
            as usize;
    let pa: [usize; 3] = std::array::from_fn(|k| a.powers[k] as usize);
    let pb: [usize; 3] = std::array::from_fn(|k| b.powers[k] as usize);
    let pc: [usize; 3] = std::array::from_fn(|k| c.powers[k] as usize);
    let pd: [usize; 3] = std::array::from_fn(|k| d.powers[k] as usize);
    let mut r = HermiteR::new();
    let mut total = 0.0;
    for (ea, eb, cab) in primitive_pairs(a, b) {
        let p = ea + eb;
        let eab = hermite_xyz(a, b, ea, eb, 0);
        let centre_p: [f64; 3] = std::array::from_fn(|k| (ea * a.center[k] + eb * b.center[k]) / p);
        for (ec, ed, ccd) in primitive_pairs(c, d) {
            let q = ec + ed;
            let ecd = hermite_xyz(c, d, ec, ed, 0);
            let centre_q: [f64; 3] =
                std::array::from_fn(|k| (ec * c.center[k] + ed * d.center[k]) / q);
            let alpha = p * q / (p + q);
            r.compute(
                order,
                alpha,
                std::array::from_fn(|k| centre_p[k] - centre_q[k]),
            );
            let mut sum = 0.0;
            for t in 0..=(pa[0] + pb[0]) {
                for u in 0..=(pa[1] + pb[1]) {
                    for v in 0..=(pa[2] + pb[2]) {
                        let e1 = eab[0].get(pa[0], pb[0], t)
                            * eab[1].get(pa[1], pb[1], u)
                            * eab[2].get(pa[2], pb[2], v);
                        if e1 == 0.0 {
                            continue;
                        }
                        let mut inner = 0.0;
                        for tau in 0..=(pc[0] + pd[0]) {
                            for nu in 0..=(pc[1] + pd[1]) {
                                for phi in 0..=(pc[2] + pd[2]) {
                                    let sign = if (tau + nu + phi) % 2 == 0 { 1.0 } else { -1.0 };
                                    let e2 = ecd[0].get(pc[0], pd[0], tau)
                                        * ecd[1].get(pc[1], pd[1], nu)
                                        * ecd[2].get(pc[2], pd[2], phi);
                                    inner += sign * e2 * r.get(t + tau, u + nu, v + phi);
                                }
                            }
                        }
                        sum += e1 * inner;
                    }
                }
            }
            let pref = 2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt());
            total += cab * ccd * pref * sum;
        }
    }
    total
}
