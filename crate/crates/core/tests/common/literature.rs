use radscf::analysis::BondOrderTable;

/// Literature (hybrid DFT) spin densities of the 50-atom β-diketone radical, atoms 1–12.
pub const DIKETONE_SPINS: [f64; 12] = [
    -0.039422, 0.496910, 0.054653, 0.060413, 0.004084, -0.003086, -0.003086, -0.032485, -0.003782,
    0.054497, 0.410509, 0.001611,
];

/// Literature (hybrid DFT) spin densities of the phenoxyl radical, as (1-based atom, spin).
pub const PHENOXYL_SPINS: [(usize, f64); 13] = [
    (1, 0.225298),
    (2, -0.122716),
    (3, 0.306939),
    (4, -0.121119),
    (5, 0.220468),
    (6, -0.037633),
    (7, -0.021294),
    (8, 0.008971),
    (21, 0.067679),
    (22, -0.004785),
    (23, 0.321491),
    (25, -0.004772),
    (26, 0.065633),
];

pub fn phenoxyl_spins(n_atoms: usize) -> Vec<f64> {
    let mut v = vec![0.0; n_atoms];
    for (atom, s) in PHENOXYL_SPINS {
        v[atom - 1] = s;
    }
    v
}

pub fn bonds(pairs: &[(usize, usize, f64)]) -> BondOrderTable {
    BondOrderTable::from_pairs(pairs.iter().map(|&(a, b, v)| (a - 1, b - 1, v))).unwrap()
}
