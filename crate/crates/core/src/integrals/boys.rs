//! Boys function `F_n(x) = ∫₀¹ t^(2n) exp(-x t²) dt`.
//!
//! For `x <= 35` values come from a Taylor expansion around a tabulated grid
//! (the table itself is filled from the convergent series), followed by
//! downward recursion. Above the cutoff the asymptotic closed form and upward
//! recursion are used; `erfc(√35)` is below 1e-16 so the truncation is
//! invisible at double precision.

use std::f64::consts::PI;
use std::sync::LazyLock;

/// Highest order the table supports directly.
pub const MAX_ORDER: usize = 16;

const GRID_STEP: f64 = 0.05;
const ASYMPTOTIC_CUTOFF: f64 = 35.0;
const TAYLOR_TERMS: usize = 8;
const TABLE_ORDERS: usize = MAX_ORDER + TAYLOR_TERMS + 1;

static TABLE: LazyLock<Vec<[f64; TABLE_ORDERS]>> = LazyLock::new(|| {
    let npoints = (ASYMPTOTIC_CUTOFF / GRID_STEP).round() as usize + 2;
    (0..npoints)
        .map(|i| {
            let x = i as f64 * GRID_STEP;
            let mut row = [0.0; TABLE_ORDERS];
            let top = TABLE_ORDERS - 1;
            row[top] = series(top, x);
            let ex = (-x).exp();
            for m in (0..top).rev() {
                row[m] = (2.0 * x * row[m + 1] + ex) / (2 * m + 1) as f64;
            }
            row
        })
        .collect()
});

/// `F_m(x) = e^{-x} Σ_k (2x)^k / [(2m+1)(2m+3)…(2m+2k+1)]`; all terms are
/// positive so the sum is free of cancellation.
fn series(m: usize, x: f64) -> f64 {
    let mut term = 1.0 / (2 * m + 1) as f64;
    let mut sum = term;
    let mut k = 1;
    loop {
        term *= 2.0 * x / (2 * m + 2 * k + 1) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
        k += 1;
    }
    sum * (-x).exp()
}

/// Single value `F_n(x)`.
pub fn boys(n: usize, x: f64) -> f64 {
    let mut out = [0.0; MAX_ORDER + 1];
    boys_array(n, x, &mut out[..=n]);
    out[n]
}

/// Fills `out[m] = F_m(x)` for `m = 0..=n_max` where `n_max = out.len() - 1`.
pub fn boys_array(n_max: usize, x: f64, out: &mut [f64]) {
    assert!(n_max <= MAX_ORDER, "Boys order {n_max} above {MAX_ORDER}");
    assert!(x >= 0.0, "Boys argument must be non-negative, got {x}");
    debug_assert!(out.len() > n_max);

    if x > ASYMPTOTIC_CUTOFF {
        let ex = (-x).exp();
        out[0] = 0.5 * (PI / x).sqrt();
        for m in 0..n_max {
            out[m + 1] = ((2 * m + 1) as f64 * out[m] - ex) / (2.0 * x);
        }
        return;
    }

    let i = (x / GRID_STEP).round() as usize;
    let row = &TABLE[i];
    let dx = i as f64 * GRID_STEP - x;
    // dF_m/dx = -F_{m+1}, so F_m(x) = Σ_k F_{m+k}(x_i) (x_i - x)^k / k!
    let mut value = 0.0;
    let mut factor = 1.0;
    for k in 0..TAYLOR_TERMS {
        value += row[n_max + k] * factor;
        factor *= dx / (k + 1) as f64;
    }
    out[n_max] = value;
    if n_max > 0 {
        let ex = (-x).exp();
        for m in (0..n_max).rev() {
            out[m] = (2.0 * x * out[m + 1] + ex) / (2 * m + 1) as f64;
        }
    }
}
