//! Qubit-suitability screening of radical molecules.
//!
//! Four criteria are checked. The first two are structural patterns on the
//! bond graph: an ordering group (a long `–(CH₂)ₙ–` chain) and an anchor
//! group (carboxyl). The last two are electronic: the unpaired spin must be
//! localized on a few atoms, and the bonds of those atoms must carry a
//! substantial overlap population.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{Analysis, BondOrderTable};
use crate::error::{Error, Result};
use crate::molsys::{perceive_bonds, BondGraph, Element, Molecule};
use crate::report::{one_based, one_based_vec, sig, sig_vec};

/// Net spins smaller than this are treated as a closed shell.
pub const ZERO_SPIN: f64 = 1e-8;

/// Opposite-sign spin densities larger than this in magnitude are reported
/// as antiferromagnetic structure.
pub const ANTIFERROMAGNETIC_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorPattern {
    /// `C(=O)OH` attached to a carbon.
    Carboxyl,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreeningThresholds {
    pub localization_top_k: usize,
    pub localization_fraction: f64,
    pub bond_order_min: f64,
    pub min_chain_length: usize,
    pub anchor_patterns: Vec<AnchorPattern>,
}

impl Default for ScreeningThresholds {
    fn default() -> Self {
        Self {
            localization_top_k: 2,
            localization_fraction: 0.7,
            bond_order_min: 0.3,
            min_chain_length: 8,
            anchor_patterns: vec![AnchorPattern::Carboxyl],
        }
    }
}

impl ScreeningThresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.localization_fraction > 0.0 && self.localization_fraction <= 1.0) {
            return Err(Error::OutOfRange {
                what: "localization_fraction",
                value: self.localization_fraction.to_string(),
                allowed: "(0, 1]".into(),
            });
        }
        if self.localization_top_k == 0 {
            return Err(Error::OutOfRange {
                what: "localization_top_k",
                value: "0".into(),
                allowed: ">= 1".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingEvidence {
    pub chain_length: usize,
    /// Carbons of the longest chain, end to end.
    #[serde(serialize_with = "one_based_vec")]
    pub chain_atoms: Vec<usize>,
    pub min_chain_length: usize,
}

/// An sp³ CH₂ carbon: four neighbours, exactly two of them hydrogen.
fn is_methylene(m: &Molecule, g: &BondGraph, atom: usize) -> bool {
    let atoms = m.atoms();
    if atoms[atom].element != Element::C || g.degree(atom) != 4 {
        return false;
    }
    g.neighbors(atom)
        .iter()
        .filter(|&&n| atoms[n].element == Element::H)
        .count()
        == 2
}

/// Longest run of bonded CH₂ carbons; passes when it has at least
/// `min_len` members.
pub fn detect_ordering_group(
    m: &Molecule,
    g: &BondGraph,
    min_len: usize,
) -> (bool, OrderingEvidence) {
    let n = m.len();
    let ch2: Vec<bool> = (0..n).map(|i| is_methylene(m, g, i)).collect();
    // Each CH₂ carbon has at most two heavy neighbours, so the CH₂ subgraph
    // is a disjoint union of paths and rings.
    let next = |i: usize| g.neighbors(i).iter().copied().filter(|&j| ch2[j]);
    let mut seen = vec![false; n];
    let mut best: Vec<usize> = Vec::new();
    let mut walk = |start: usize, seen: &mut Vec<bool>| {
        let mut chain = vec![start];
        seen[start] = true;
        let mut cur = start;
        while let Some(j) = next(cur).find(|&j| !seen[j]) {
            seen[j] = true;
            chain.push(j);
            cur = j;
        }
        if chain.len() > best.len() {
            best = chain;
        }
    };
    // Paths from their lower-index end first, then whatever rings remain.
    for i in 0..n {
        if ch2[i] && !seen[i] && next(i).count() <= 1 {
            walk(i, &mut seen);
        }
    }
    for i in 0..n {
        if ch2[i] && !seen[i] {
            walk(i, &mut seen);
        }
    }
    let evidence = OrderingEvidence {
        chain_length: best.len(),
        chain_atoms: best,
        min_chain_length: min_len,
    };
    (evidence.chain_length >= min_len, evidence)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CarboxylMatch {
    #[serde(serialize_with = "one_based")]
    pub carbon: usize,
    #[serde(serialize_with = "one_based")]
    pub carbonyl_oxygen: usize,
    #[serde(serialize_with = "one_based")]
    pub hydroxyl_oxygen: usize,
    #[serde(serialize_with = "one_based")]
    pub hydrogen: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchorEvidence {
    pub matches: Vec<CarboxylMatch>,
}

/// Carboxyl groups: a carbon bonded to exactly one carbon and two oxygens,
/// one of which is terminal and the other bonded to a hydrogen. Formic acid
/// (carbon bonded to H) deliberately does not match.
pub fn detect_anchor_group(m: &Molecule, g: &BondGraph) -> (bool, AnchorEvidence) {
    let atoms = m.atoms();
    let el = |i: usize| atoms[i].element;
    let mut matches = Vec::new();
    for c in 0..m.len() {
        if el(c) != Element::C || g.degree(c) != 3 {
            continue;
        }
        let nb = g.neighbors(c);
        let oxygens: Vec<usize> = nb
            .iter()
            .copied()
            .filter(|&i| el(i) == Element::O)
            .collect();
        let carbons = nb.iter().filter(|&&i| el(i) == Element::C).count();
        if oxygens.len() != 2 || carbons != 1 {
            continue;
        }
        let terminal: Vec<usize> = oxygens
            .iter()
            .copied()
            .filter(|&o| g.degree(o) == 1)
            .collect();
        let hydroxyl: Vec<(usize, usize)> = oxygens
            .iter()
            .filter(|&&o| g.degree(o) == 2)
            .filter_map(|&o| {
                let other = g.neighbors(o).iter().copied().find(|&x| x != c)?;
                (el(other) == Element::H).then_some((o, other))
            })
            .collect();
        if let ([carbonyl], [(hydroxyl, hydrogen)]) = (terminal.as_slice(), hydroxyl.as_slice()) {
            matches.push(CarboxylMatch {
                carbon: c,
                carbonyl_oxygen: *carbonyl,
                hydroxyl_oxygen: *hydroxyl,
                hydrogen: *hydrogen,
            });
        }
    }
    (!matches.is_empty(), AnchorEvidence { matches })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiteSeparation {
    #[serde(serialize_with = "one_based")]
    pub a: usize,
    #[serde(serialize_with = "one_based")]
    pub b: usize,
    #[serde(serialize_with = "sig")]
    pub distance_bohr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinSite {
    #[serde(serialize_with = "one_based")]
    pub atom: usize,
    #[serde(serialize_with = "sig")]
    pub spin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizationEvidence {
    /// Sum of all supplied spin densities.
    #[serde(serialize_with = "sig")]
    pub net_spin: f64,
    /// The `k` atoms with the largest |spin|, largest first.
    #[serde(serialize_with = "one_based_vec")]
    pub top_atoms: Vec<usize>,
    #[serde(serialize_with = "sig_vec")]
    pub top_spins: Vec<f64>,
    /// `spin / net_spin` for each top atom.
    #[serde(serialize_with = "sig_vec")]
    pub fractions: Vec<f64>,
    #[serde(serialize_with = "sig")]
    pub top_fraction: f64,
    pub required_fraction: f64,
    pub same_sign: bool,
    /// Pairwise distances between the top atoms; empty without geometry.
    pub separations: Vec<SiteSeparation>,
    /// Atoms whose spin opposes the net spin by more than 0.1.
    pub antiferromagnetic: Vec<SpinSite>,
}

/// Passes when the `k` largest |spin| values all share the sign of the net
/// spin and together hold at least `f` of it. Sign alternation elsewhere is
/// reported but does not affect the verdict.
pub fn assess_spin_localization(
    spins: &[f64],
    k: usize,
    f: f64,
) -> Result<(bool, LocalizationEvidence)> {
    let net: f64 = spins.iter().sum();
    if net.abs() < ZERO_SPIN {
        return Err(Error::NotARadical);
    }
    let mut order: Vec<usize> = (0..spins.len()).collect();
    order.sort_by(|&a, &b| spins[b].abs().total_cmp(&spins[a].abs()).then(a.cmp(&b)));
    order.truncate(k.min(spins.len()));
    let top_spins: Vec<f64> = order.iter().map(|&i| spins[i]).collect();
    let fractions: Vec<f64> = top_spins.iter().map(|s| s / net).collect();
    let same_sign = top_spins.iter().all(|s| s.signum() == net.signum());
    let top_fraction: f64 = fractions.iter().sum();
    let antiferromagnetic = spins
        .iter()
        .enumerate()
        .filter(|(_, s)| s.signum() != net.signum() && s.abs() > ANTIFERROMAGNETIC_THRESHOLD)
        .map(|(atom, &spin)| SpinSite { atom, spin })
        .collect();
    let pass = same_sign && top_fraction >= f;
    Ok((
        pass,
        LocalizationEvidence {
            net_spin: net,
            top_atoms: order,
            top_spins,
            fractions,
            top_fraction,
            required_fraction: f,
            same_sign,
            separations: Vec::new(),
            antiferromagnetic,
        },
    ))
}

impl LocalizationEvidence {
    /// Fills in the pairwise distances between the top atoms.
    pub fn with_separations(mut self, m: &Molecule) -> Self {
        let t = &self.top_atoms;
        self.separations = (0..t.len())
            .flat_map(|i| (i + 1..t.len()).map(move |j| (t[i], t[j])))
            .map(|(a, b)| SiteSeparation {
                a,
                b,
                distance_bohr: m.distance(a, b),
            })
            .collect();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BondEntry {
    #[serde(serialize_with = "one_based")]
    pub a: usize,
    #[serde(serialize_with = "one_based")]
    pub b: usize,
    #[serde(serialize_with = "sig")]
    pub overlap_population: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityEvidence {
    #[serde(serialize_with = "sig")]
    pub min_overlap_population: f64,
    pub weakest: BondEntry,
    /// Every tabulated bond touching a spin-bearing atom.
    pub bonds: Vec<BondEntry>,
    pub threshold: f64,
}

/// Passes when every bond of the table that touches a spin-bearing atom has
/// an overlap population of at least `threshold`.
pub fn assess_bond_stability(
    bond_orders: &BondOrderTable,
    spin_atoms: &[usize],
    threshold: f64,
) -> Result<(bool, StabilityEvidence)> {
    if spin_atoms.is_empty() {
        return Err(Error::OutOfRange {
            what: "spin-bearing atom list",
            value: "empty".into(),
            allowed: "at least one atom".into(),
        });
    }
    for &atom in spin_atoms {
        if !bond_orders.iter().any(|(a, b, _)| a == atom || b == atom) {
            return Err(Error::IsolatedSpin { atom: atom + 1 });
        }
    }
    let bonds: Vec<BondEntry> = bond_orders
        .iter()
        .filter(|(a, b, _)| spin_atoms.contains(a) || spin_atoms.contains(b))
        .map(|(a, b, overlap_population)| BondEntry {
            a,
            b,
            overlap_population,
        })
        .collect();
    let weakest = *bonds
        .iter()
        .min_by(|x, y| x.overlap_population.total_cmp(&y.overlap_population))
        .expect("at least one incident bond");
    let min = weakest.overlap_population;
    Ok((
        min >= threshold,
        StabilityEvidence {
            min_overlap_population: min,
            weakest,
            bonds,
            threshold,
        },
    ))
}

/// Evidence for an electronic criterion, or the reason it could not be
/// evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Evidence<E> {
    Evaluated(E),
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict<E> {
    pub pass: bool,
    pub evidence: E,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuitabilityReport {
    pub formula: String,
    pub criterion_1_ordering: Verdict<OrderingEvidence>,
    pub criterion_2_anchor: Verdict<AnchorEvidence>,
    pub criterion_3_localization: Verdict<Evidence<LocalizationEvidence>>,
    pub criterion_4_stability: Verdict<Evidence<StabilityEvidence>>,
    pub overall: bool,
    /// Set when the electronic criteria could not be evaluated.
    pub reason: Option<String>,
}

fn structural(
    m: &Molecule,
    t: &ScreeningThresholds,
) -> (Verdict<OrderingEvidence>, Verdict<AnchorEvidence>) {
    let g = perceive_bonds(m);
    let (p1, e1) = detect_ordering_group(m, &g, t.min_chain_length);
    let (p2, e2) = if t.anchor_patterns.contains(&AnchorPattern::Carboxyl) {
        detect_anchor_group(m, &g)
    } else {
        (
            false,
            AnchorEvidence {
                matches: Vec::new(),
            },
        )
    };
    (
        Verdict {
            pass: p1,
            evidence: e1,
        },
        Verdict {
            pass: p2,
            evidence: e2,
        },
    )
}

/// Runs all four criteria on `m` with the given per-atom spin densities and
/// bond orders (computed or supplied from elsewhere).
pub fn screen(
    m: &Molecule,
    spins: &[f64],
    bond_orders: &BondOrderTable,
    thresholds: &ScreeningThresholds,
) -> Result<SuitabilityReport> {
    thresholds.validate()?;
    if spins.len() != m.len() {
        return Err(Error::OutOfRange {
            what: "spin vector length",
            value: spins.len().to_string(),
            allowed: m.len().to_string(),
        });
    }
    let (c1, c2) = structural(m, thresholds);
    let (p3, e3) = assess_spin_localization(
        spins,
        thresholds.localization_top_k,
        thresholds.localization_fraction,
    )?;
    let e3 = e3.with_separations(m);
    let (p4, e4) = assess_bond_stability(bond_orders, &e3.top_atoms, thresholds.bond_order_min)?;
    Ok(SuitabilityReport {
        formula: m.formula(),
        overall: c1.pass && c2.pass && p3 && p4,
        criterion_1_ordering: c1,
        criterion_2_anchor: c2,
        criterion_3_localization: Verdict {
            pass: p3,
            evidence: Evidence::Evaluated(e3),
        },
        criterion_4_stability: Verdict {
            pass: p4,
            evidence: Evidence::Evaluated(e4),
        },
        reason: None,
    })
}

/// [`screen`] on the output of [`crate::analysis::analyze`].
pub fn screen_analysis(
    m: &Molecule,
    analysis: &Analysis,
    thresholds: &ScreeningThresholds,
) -> Result<SuitabilityReport> {
    screen(
        m,
        &analysis.populations.spin,
        &analysis.bond_orders,
        thresholds,
    )
}

/// Report for a molecule whose SCF did not converge: the structural
/// criteria are still evaluated, the electronic ones fail.
pub fn screen_unconverged(
    m: &Molecule,
    thresholds: &ScreeningThresholds,
) -> Result<SuitabilityReport> {
    thresholds.validate()?;
    let (c1, c2) = structural(m, thresholds);
    Ok(SuitabilityReport {
        formula: m.formula(),
        criterion_1_ordering: c1,
        criterion_2_anchor: c2,
        criterion_3_localization: Verdict {
            pass: false,
            evidence: Evidence::Skipped {
                reason: "scf-unconverged".into(),
            },
        },
        criterion_4_stability: Verdict {
            pass: false,
            evidence: Evidence::Skipped {
                reason: "scf-unconverged".into(),
            },
        },
        overall: false,
        reason: Some("scf-unconverged".into()),
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

impl SuitabilityReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "molecule {}", self.formula);
        let c1 = &self.criterion_1_ordering;
        let _ = writeln!(
            out,
            "criterion 1 ordering group:   {}  longest CH2 chain {} (need {})",
            verdict(c1.pass),
            c1.evidence.chain_length,
            c1.evidence.min_chain_length
        );
        let c2 = &self.criterion_2_anchor;
        let _ = write!(out, "criterion 2 anchor group:     {}  ", verdict(c2.pass));
        if c2.evidence.matches.is_empty() {
            let _ = writeln!(out, "no carboxyl group");
        } else {
            let atoms: Vec<String> = c2
                .evidence
                .matches
                .iter()
                .map(|c| format!("C{}", c.carbon + 1))
                .collect();
            let _ = writeln!(out, "carboxyl at {}", atoms.join(", "));
        }
        let c3 = &self.criterion_3_localization;
        let _ = write!(out, "criterion 3 spin localization: {} ", verdict(c3.pass));
        match &c3.evidence {
            Evidence::Evaluated(e) => {
                let sites: Vec<String> = e
                    .top_atoms
                    .iter()
                    .zip(&e.top_spins)
                    .map(|(a, s)| format!("{}:{:+.4}", a + 1, s))
                    .collect();
                let _ = writeln!(
                    out,
                    " top {} hold {:.3} of net spin {:.4} (need {})",
                    sites.join(" "),
                    e.top_fraction,
                    e.net_spin,
                    e.required_fraction
                );
                for s in &e.separations {
                    let _ = writeln!(
                        out,
                        "    sites {}-{} {:.4} bohr",
                        s.a + 1,
                        s.b + 1,
                        s.distance_bohr
                    );
                }
                if !e.antiferromagnetic.is_empty() {
                    let sites: Vec<String> = e
                        .antiferromagnetic
                        .iter()
                        .map(|s| format!("{}:{:+.4}", s.atom + 1, s.spin))
                        .collect();
                    let _ = writeln!(out, "    antiferromagnetic structure: {}", sites.join(" "));
                }
            }
            Evidence::Skipped { reason } => {
                let _ = writeln!(out, " not evaluated ({reason})");
            }
        }
        let c4 = &self.criterion_4_stability;
        let _ = write!(out, "criterion 4 bond stability:   {}  ", verdict(c4.pass));
        match &c4.evidence {
            Evidence::Evaluated(e) => {
                let _ = writeln!(
                    out,
                    "weakest bond {}-{} A = {:.4} (need {})",
                    e.weakest.a + 1,
                    e.weakest.b + 1,
                    e.min_overlap_population,
                    e.threshold
                );
            }
            Evidence::Skipped { reason } => {
                let _ = writeln!(out, "not evaluated ({reason})");
            }
        }
        let _ = writeln!(out, "overall: {}", verdict(self.overall));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_spin_is_localized() {
        let (pass, e) = assess_spin_localization(&[0.0, 1.0, 0.0], 2, 1.0).unwrap();
        assert!(pass);
        assert_eq!(e.top_atoms, vec![1, 0]);
    }

    #[test]
    fn closed_shell_is_not_a_radical() {
        assert!(matches!(
            assess_spin_localization(&[0.3, -0.3], 2, 0.7),
            Err(Error::NotARadical)
        ));
    }

    #[test]
    fn opposite_sign_in_top_k_fails() {
        let (pass, e) = assess_spin_localization(&[1.2, -0.5, 0.3], 2, 0.5).unwrap();
        assert!(!pass);
        assert!(!e.same_sign);
        assert_eq!(e.antiferromagnetic.len(), 1);
    }

    #[test]
    fn spin_atom_without_bonds_is_isolated() {
        let t = BondOrderTable::from_pairs([(0, 1, 0.6)]).unwrap();
        assert!(matches!(
            assess_bond_stability(&t, &[2], 0.3),
            Err(Error::IsolatedSpin { atom: 3 })
        ));
    }

    #[test]
    fn thresholds_are_validated() {
        let mut t = ScreeningThresholds::default();
        assert!(t.validate().is_ok());
        t.localization_fraction = 1.5;
        assert!(t.validate().is_err());
        t.localization_fraction = 0.7;
        t.localization_top_k = 0;
        assert!(t.validate().is_err());
    }
}
