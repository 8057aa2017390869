use std::collections::BTreeMap;

use super::{Molecule, ANGSTROM_TO_BOHR};

/// Scale applied to the sum of covalent radii when deciding whether two
/// atoms are bonded.
pub const DEFAULT_BOND_SCALE: f64 = 1.2;

/// Covalent connectivity. Edges are stored as `(low, high)` index pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BondGraph {
    n_atoms: usize,
    edges: BTreeMap<(usize, usize), f64>,
    neighbors: Vec<Vec<usize>>,
}

impl BondGraph {
    pub fn from_edges(
        n_atoms: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        let mut neighbors = vec![Vec::new(); n_atoms];
        for (a, b, d) in edges {
            assert!(a != b && a < n_atoms && b < n_atoms, "bad edge ({a}, {b})");
            let key = (a.min(b), a.max(b));
            if map.insert(key, d).is_none() {
                neighbors[a].push(b);
                neighbors[b].push(a);
            }
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }
        Self {
            n_atoms,
            edges: map,
            neighbors,
        }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains_key(&(a.min(b), a.max(b)))
    }

    /// Bond length in bohr.
    pub fn distance(&self, a: usize, b: usize) -> Option<f64> {
        self.edges.get(&(a.min(b), a.max(b))).copied()
    }

    /// `(a, b, distance)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(a, b), &d)| (a, b, d))
    }

    pub fn neighbors(&self, atom: usize) -> &[usize] {
        &self.neighbors[atom]
    }

    pub fn degree(&self, atom: usize) -> usize {
        self.neighbors[atom].len()
    }
}

pub fn perceive_bonds(m: &Molecule) -> BondGraph {
    perceive_bonds_with(m, DEFAULT_BOND_SCALE)
}

/// Bond iff `R_AB <= scale * (r_cov(A) + r_cov(B))`.
pub fn perceive_bonds_with(m: &Molecule, scale: f64) -> BondGraph {
    let atoms = m.atoms();
    let mut edges = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        for (j, b) in atoms.iter().enumerate().skip(i + 1) {
            let cutoff = scale
                * (a.element.covalent_radius() + b.element.covalent_radius())
                * ANGSTROM_TO_BOHR;
            let r = m.distance(i, j);
            if r <= cutoff {
                edges.push((i, j, r));
            }
        }
    }
    BondGraph::from_edges(atoms.len(), edges)
}
