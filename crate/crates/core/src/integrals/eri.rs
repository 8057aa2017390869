//! Shell-blocked two-electron integrals and their packed storage.

use rayon::prelude::*;

use super::hermite::{hermite_indices, r_index, HermiteE, HermiteR};
use crate::basis::{MolecularBasis, ShellBlock};

const TWO_PI_POW_2_5: f64 = 2.0 * 17.493418327624862;

/// Primitive pairs whose Gaussian product prefactor `exp(-μ R_AB²)` falls
/// below this are dropped; their contributions are far below double
/// precision relative to the surviving terms.
const PRIMITIVE_PAIR_CUTOFF: f64 = 1e-16;

/// `i(i+1)/2 + j` for the unordered pair `{i, j}`.
#[inline]
pub fn pair_index(i: usize, j: usize) -> usize {
    let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

/// Canonical slot of `(ij|kl)` under the 8-fold permutational symmetry.
#[inline]
pub fn quartet_index(i: usize, j: usize, k: usize, l: usize) -> usize {
    pair_index(pair_index(i, j), pair_index(k, l))
}

/// Two-electron integrals stored once per symmetry-unique quartet.
#[derive(Debug, Clone, PartialEq)]
pub struct EriTensor {
    n: usize,
    data: Vec<f64>,
}

impl EriTensor {
    pub fn zeros(n: usize) -> Self {
        let pairs = n * (n + 1) / 2;
        Self {
            n,
            data: vec![0.0; pairs * (pairs + 1) / 2],
        }
    }

    /// Wraps canonical-order values; `data.len()` must match `n`.
    pub fn from_packed(n: usize, data: Vec<f64>) -> Option<Self> {
        let pairs = n * (n + 1) / 2;
        (data.len() == pairs * (pairs + 1) / 2).then_some(Self { n, data })
    }

    pub fn n_basis(&self) -> usize {
        self.n
    }

    /// Number of unique values.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[quartet_index(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        self.data[quartet_index(i, j, k, l)] = value;
    }

    /// Values in canonical order: slot `ij(ij+1)/2 + kl` with `ij >= kl`.
    pub fn as_packed(&self) -> &[f64] {
        &self.data
    }
}

/// Gaussian-product data of one primitive pair: `p`, `P` and the Hermite
/// coefficients of every function pair with contraction weights folded in.
struct PrimPair {
    p: f64,
    centre: [f64; 3],
    /// `coef[fpair * n_herm + h]`
    coef: Vec<f64>,
    /// Same with the `(-1)^(t+u+v)` ket sign applied.
    signed: Vec<f64>,
}

struct ShellPair {
    a: usize,
    b: usize,
    order: usize,
    herm: Vec<[usize; 3]>,
    n_fpairs: usize,
    prims: Vec<PrimPair>,
}

impl ShellPair {
    fn new(shells: &[ShellBlock], a: usize, b: usize) -> Self {
        let (sa, sb) = (&shells[a], &shells[b]);
        let order = (sa.angular_momentum + sb.angular_momentum) as usize;
        let herm = hermite_indices(order);
        let nh = herm.len();
        let nfp = sa.n_functions() * sb.n_functions();
        let mut prims = Vec::with_capacity(sa.exponents.len() * sb.exponents.len());
        for (pa, &ea) in sa.exponents.iter().enumerate() {
            for (pb, &eb) in sb.exponents.iter().enumerate() {
                let p = ea + eb;
                let d2: f64 = (0..3).map(|k| (sa.center[k] - sb.center[k]).powi(2)).sum();
                if (-ea * eb / p * d2).exp() < PRIMITIVE_PAIR_CUTOFF {
                    continue;
                }
                let e: [HermiteE; 3] = std::array::from_fn(|k| {
                    HermiteE::new(
                        sa.angular_momentum as usize,
                        sb.angular_momentum as usize,
                        ea,
                        eb,
                        sa.center[k],
                        sb.center[k],
                    )
                });
                let mut coef = vec![0.0; nfp * nh];
                for (fa, ca) in sa.components.iter().enumerate() {
                    for (fb, cb) in sb.components.iter().enumerate() {
                        let w = sa.coefficients[fa][pa] * sb.coefficients[fb][pb];
                        let row = &mut coef[(fa * sb.n_functions() + fb) * nh..][..nh];
                        for (h, &[t, u, v]) in herm.iter().enumerate() {
                            if t > (ca[0] + cb[0]) as usize
                                || u > (ca[1] + cb[1]) as usize
                                || v > (ca[2] + cb[2]) as usize
                            {
                                continue;
                            }
                            row[h] = w
                                * e[0].get(ca[0] as usize, cb[0] as usize, t)
                                * e[1].get(ca[1] as usize, cb[1] as usize, u)
                                * e[2].get(ca[2] as usize, cb[2] as usize, v);
                        }
                    }
                }
                let signed = coef
                    .chunks(nh)
                    .flat_map(|row| {
                        row.iter().zip(&herm).map(|(c, tuv)| {
                            if (tuv[0] + tuv[1] + tuv[2]) % 2 == 0 {
                                *c
                            } else {
                                -*c
                            }
                        })
                    })
                    .collect();
                let centre = std::array::from_fn(|k| (ea * sa.center[k] + eb * sb.center[k]) / p);
                prims.push(PrimPair {
                    p,
                    centre,
                    coef,
                    signed,
                });
            }
        }
        Self {
            a,
            b,
            order,
            herm,
            n_fpairs: nfp,
            prims,
        }
    }

    fn n_fpairs(&self) -> usize {
        self.n_fpairs
    }
}

/// Scratch buffers reused across quartets on one worker.
struct Workspace {
    r: HermiteR,
    rmat: Vec<f64>,
    ridx: Vec<usize>,
    tmp: Vec<f64>,
}

impl Workspace {
    fn new() -> Self {
        Self {
            r: HermiteR::new(),
            rmat: Vec::new(),
            ridx: Vec::new(),
            tmp: Vec::new(),
        }
    }
}

/// `(ab|cd)` for every function of the four shells, laid out as
/// `out[abpair * n_cd + cdpair]`.
fn shell_quartet(bra: &ShellPair, ket: &ShellPair, ws: &mut Workspace, out: &mut Vec<f64>) {
    let nh1 = bra.herm.len();
    let nh2 = ket.herm.len();
    let nab = bra.n_fpairs();
    let ncd = ket.n_fpairs();
    out.clear();
    out.resize(nab * ncd, 0.0);
    ws.rmat.resize(nh1 * nh2, 0.0);
    ws.tmp.resize(nh1 * ncd, 0.0);
    ws.ridx.clear();
    for b in &ket.herm {
        for a in &bra.herm {
            ws.ridx.push(r_index(a[0] + b[0], a[1] + b[1], a[2] + b[2]));
        }
    }
    let order = bra.order + ket.order;

    for pp in &bra.prims {
        for qq in &ket.prims {
            let (p, q) = (pp.p, qq.p);
            let alpha = p * q / (p + q);
            let pq = std::array::from_fn(|k| pp.centre[k] - qq.centre[k]);
            let pref = TWO_PI_POW_2_5 / (p * q * (p + q).sqrt());
            ws.r.compute(order, alpha, pq);
            if order == 0 {
                let v = pref * ws.r.at(0);
                for (ab, e1) in pp.coef.iter().enumerate() {
                    let e = e1 * v;
                    for (o, e2) in out[ab * ncd..][..ncd].iter_mut().zip(&qq.coef) {
                        *o += e * e2;
                    }
                }
                continue;
            }
            // rmat[h2][h1] = R_{t+τ, u+ν, v+φ}
            for (dst, &src) in ws.rmat.iter_mut().zip(&ws.ridx) {
                *dst = ws.r.at(src);
            }
            // tmp[h1][cd] = Σ_h2 (-1)^{τ+ν+φ} E^{cd}_{h2} R[h1 + h2]
            ws.tmp.fill(0.0);
            for cd in 0..ncd {
                for (h2, &e) in qq.signed[cd * nh2..][..nh2].iter().enumerate() {
                    if e == 0.0 {
                        continue;
                    }
                    for (h1, r) in ws.rmat[h2 * nh1..][..nh1].iter().enumerate() {
                        ws.tmp[h1 * ncd + cd] += e * r;
                    }
                }
            }
            for ab in 0..nab {
                let row = &mut out[ab * ncd..][..ncd];
                for (h1, &e) in pp.coef[ab * nh1..][..nh1].iter().enumerate() {
                    if e == 0.0 {
                        continue;
                    }
                    let e = e * pref;
                    for (o, t) in row.iter_mut().zip(&ws.tmp[h1 * ncd..][..ncd]) {
                        *o += e * t;
                    }
                }
            }
        }
    }
}

pub(crate) fn compute_eri(basis: &MolecularBasis, schwarz: Option<f64>) -> EriTensor {
    let shells = basis.shells();
    let n = basis.len();
    let mut pairs = Vec::new();
    for a in 0..shells.len() {
        for b in 0..=a {
            pairs.push(ShellPair::new(shells, a, b));
        }
    }

    let bounds: Option<Vec<f64>> = schwarz.map(|_| {
        pairs
            .par_iter()
            .map(|sp| {
                let mut ws = Workspace::new();
                let mut out = Vec::new();
                shell_quartet(sp, sp, &mut ws, &mut out);
                let nf = sp.n_fpairs();
                (0..nf)
                    .map(|i| out[i * nf + i].abs())
                    .fold(0.0, f64::max)
                    .sqrt()
            })
            .collect()
    });

    let blocks: Vec<Vec<(usize, f64)>> = (0..pairs.len())
        .into_par_iter()
        .map(|x| {
            let mut ws = Workspace::new();
            let mut buf = Vec::new();
            let mut found = Vec::new();
            let bra = &pairs[x];
            for (y, ket) in pairs.iter().enumerate().take(x + 1) {
                if let (Some(thr), Some(q)) = (schwarz, &bounds) {
                    if q[x] * q[y] < thr {
                        continue;
                    }
                }
                shell_quartet(bra, ket, &mut ws, &mut buf);
                scatter_quartet(shells, bra, ket, x == y, &buf, &mut found);
            }
            found
        })
        .collect();

    let mut tensor = EriTensor::zeros(n);
    for block in blocks {
        for (slot, value) in block {
            tensor.data[slot] = value;
        }
    }
    tensor
}

/// Maps a computed shell quartet to canonical slots so that each slot is
/// produced by exactly one quartet and one function combination.
fn scatter_quartet(
    shells: &[ShellBlock],
    bra: &ShellPair,
    ket: &ShellPair,
    same_pair: bool,
    values: &[f64],
    found: &mut Vec<(usize, f64)>,
) {
    let (sa, sb, sc, sd) = (
        &shells[bra.a],
        &shells[bra.b],
        &shells[ket.a],
        &shells[ket.b],
    );
    let ncd = sc.n_functions() * sd.n_functions();
    for fa in 0..sa.n_functions() {
        let i = sa.first_function + fa;
        for fb in 0..sb.n_functions() {
            let j = sb.first_function + fb;
            if j > i {
                continue;
            }
            let ij = pair_index(i, j);
            let ab = fa * sb.n_functions() + fb;
            for fc in 0..sc.n_functions() {
                let k = sc.first_function + fc;
                for fd in 0..sd.n_functions() {
                    let l = sd.first_function + fd;
                    if l > k {
                        continue;
                    }
                    let kl = pair_index(k, l);
                    if same_pair && kl > ij {
                        continue;
                    }
                    let cd = fc * sd.n_functions() + fd;
                    found.push((pair_index(ij, kl), values[ab * ncd + cd]));
                }
            }
        }
    }
}
