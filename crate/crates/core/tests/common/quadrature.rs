//! Brute-force numerical integration used as an independent check on the
//! analytic integrals.

use radscf::basis::BasisFunction;

/// Trapezoid rule on `[c - w, c + w]`; for smooth integrands that decay like
/// Gaussians the error falls off exponentially with the point count.
fn trapezoid(c: f64, w: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = 2.0 * w / n as f64;
    let mut s = 0.5 * (f(c - w) + f(c + w));
    for i in 1..n {
        s += f(c - w + i as f64 * h);
    }
    s * h
}

/// 1D primitive factor `(x − a)^i exp(−α (x − a)²)` and its second derivative.
fn prim(x: f64, a: f64, i: u8, alpha: f64) -> f64 {
    let d = x - a;
    d.powi(i as i32) * (-alpha * d * d).exp()
}

fn prim_d2(x: f64, a: f64, i: u8, alpha: f64) -> f64 {
    let d = x - a;
    let e = (-alpha * d * d).exp();
    let i = i as i32;
    let mut v = -2.0 * alpha * (2 * i + 1) as f64 * d.powi(i) + 4.0 * alpha * alpha * d.powi(i + 2);
    if i >= 2 {
        v += (i * (i - 1)) as f64 * d.powi(i - 2);
    }
    v * e
}

/// Overlap and kinetic-energy integrals of two contracted functions by
/// numerical integration of each Cartesian factor.
pub fn overlap_kinetic(f: &BasisFunction, g: &BasisFunction) -> (f64, f64) {
    let mut s_total = 0.0;
    let mut t_total = 0.0;
    for (&a, &ca) in f.exponents.iter().zip(&f.coefficients) {
        for (&b, &cb) in g.exponents.iter().zip(&g.coefficients) {
            let p = a + b;
            let width = 14.0 / p.sqrt();
            let mut s = [0.0; 3];
            let mut d2 = [0.0; 3];
            for k in 0..3 {
                let centre = (a * f.center[k] + b * g.center[k]) / p;
                let (ai, bi) = (f.powers[k], g.powers[k]);
                s[k] = trapezoid(centre, width, 2000, |x| {
                    prim(x, f.center[k], ai, a) * prim(x, g.center[k], bi, b)
                });
                d2[k] = trapezoid(centre, width, 2000, |x| {
                    prim(x, f.center[k], ai, a) * prim_d2(x, g.center[k], bi, b)
                });
            }
            let w = ca * cb;
            s_total += w * s[0] * s[1] * s[2];
            t_total += -0.5 * w * (d2[0] * s[1] * s[2] + s[0] * d2[1] * s[2] + s[0] * s[1] * d2[2]);
        }
    }
    (s_total, t_total)
}

/// `F_n(x) = ∫₀¹ t^{2n} exp(−x t²) dt` by composite Simpson.
pub fn boys(n: usize, x: f64) -> f64 {
    let m = 20_000;
    let h = 1.0 / m as f64;
    let f = |t: f64| t.powi(2 * n as i32) * (-x * t * t).exp();
    let mut s = f(0.0) + f(1.0);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}
