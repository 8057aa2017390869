//! Contracted Cartesian Gaussian basis sets.
//!
//! A [`BasisSet`] is the per-element table as read from a basis file. Placing
//! it on a molecule with [`assign_basis`] yields a [`MolecularBasis`]: the
//! ordered list of normalized [`BasisFunction`]s that the molecular orbitals
//! are expanded in, plus a shell-level view used by the integral engine.
//!
//! Basis files look like
//!
//! ```text
//! # comment
//! element H
//! S 3
//! 3.42525091 0.15432897
//! 0.62391373 0.53532814
//! 0.16885540 0.44463454
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::molsys::{Element, Molecule, Vec3};

/// Environment variable holding extra basis-file directories (`:`-separated).
pub const BASIS_PATH_VAR: &str = "RADSCF_BASIS_PATH";

pub const MAX_ANGULAR_MOMENTUM: u8 = 2;

const BUILTIN: &[(&str, &str)] = &[
    ("sto-3g", include_str!("../data/sto-3g")),
    ("3-21g", include_str!("../data/3-21g")),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub exponent: f64,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub angular_momentum: u8,
    pub primitives: Vec<Primitive>,
}

impl Shell {
    pub fn n_cartesian(&self) -> usize {
        n_cartesian(self.angular_momentum)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    pub name: String,
    pub shells: BTreeMap<Element, Vec<Shell>>,
}

impl BasisSet {
    /// Parses basis-file text. Coefficients are stored as written;
    /// normalization happens in [`assign_basis`].
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::BasisParse { line, message };
        let mut shells: BTreeMap<Element, Vec<Shell>> = BTreeMap::new();
        let mut current: Option<Element> = None;
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .peekable();

        while let Some((lineno, line)) = lines.next() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0].eq_ignore_ascii_case("element") {
                let sym = fields
                    .get(1)
                    .ok_or_else(|| err(lineno, "missing element symbol".into()))?;
                let el = Element::from_symbol(sym)
                    .ok_or_else(|| err(lineno, format!("unknown element '{sym}'")))?;
                shells.entry(el).or_default();
                current = Some(el);
                continue;
            }
            let el =
                current.ok_or_else(|| err(lineno, "shell before any 'element' line".into()))?;
            if fields.len() != 2 {
                return Err(err(lineno, format!("expected '<L> <nprim>', got '{line}'")));
            }
            let l = match fields[0].to_ascii_uppercase().as_str() {
                "S" => 0,
                "P" => 1,
                "D" => 2,
                other => return Err(err(lineno, format!("unknown angular momentum '{other}'"))),
            };
            let nprim: usize = fields[1]
                .parse()
                .map_err(|_| err(lineno, format!("bad primitive count '{}'", fields[1])))?;
            if nprim == 0 {
                return Err(err(lineno, "shell with zero primitives".into()));
            }
            let mut primitives = Vec::with_capacity(nprim);
            for k in 0..nprim {
                let primitive_line = match lines.peek() {
                    Some((_, next)) if looks_like_primitive(next) => lines.next().unwrap(),
                    _ => {
                        return Err(err(
                            lineno,
                            format!("shell declares {nprim} primitives but {k} follow"),
                        ))
                    }
                };
                let (pl, pline) = primitive_line;
                let nums: Vec<&str> = pline.split_whitespace().collect();
                if nums.len() != 2 {
                    return Err(err(
                        pl,
                        format!("expected '<exponent> <coefficient>', got '{pline}'"),
                    ));
                }
                let parse = |s: &str| -> Result<f64> {
                    s.replace(['D', 'd'], "e")
                        .parse()
                        .map_err(|_| err(pl, format!("bad number '{s}'")))
                };
                let exponent = parse(nums[0])?;
                let coefficient = parse(nums[1])?;
                if !exponent.is_finite() || exponent <= 0.0 {
                    return Err(err(pl, format!("non-positive exponent {exponent}")));
                }
                primitives.push(Primitive {
                    exponent,
                    coefficient,
                });
            }
            if let Some((pl, extra)) = lines.peek() {
                if looks_like_primitive(extra) {
                    return Err(err(
                        *pl,
                        format!("shell declares {nprim} primitives but more follow"),
                    ));
                }
            }
            shells.get_mut(&el).unwrap().push(Shell {
                angular_momentum: l,
                primitives,
            });
        }
        if shells.values().all(|s| s.is_empty()) {
            return Err(err(0, "no shells".into()));
        }
        Ok(Self {
            name: name.to_string(),
            shells,
        })
    }

    /// Looks up a basis by name: `RADSCF_BASIS_PATH` directories first (file
    /// name = lowercased set name), then the built-in tables.
    pub fn load(name: &str) -> Result<Self> {
        let key = name.to_ascii_lowercase();
        if let Ok(paths) = std::env::var(BASIS_PATH_VAR) {
            for dir in std::env::split_paths(&paths) {
                let candidate: PathBuf = dir.join(&key);
                if candidate.is_file() {
                    let text = std::fs::read_to_string(&candidate)?;
                    return Self::parse(&key, &text);
                }
            }
        }
        Self::builtin(&key)
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let key = name.to_ascii_lowercase();
        BUILTIN
            .iter()
            .find(|(n, _)| *n == key)
            .map(|(n, text)| Self::parse(n, text))
            .unwrap_or_else(|| Err(Error::UnknownBasis { name: name.into() }))
    }

    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTIN.iter().map(|(n, _)| *n)
    }

    pub fn shells_for(&self, element: Element) -> Option<&[Shell]> {
        self.shells
            .get(&element)
            .map(|v| v.as_slice())
            .filter(|s| !s.is_empty())
    }

    /// Serializes back to the basis-file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\n", self.name);
        for (el, shells) in &self.shells {
            out.push_str(&format!("element {}\n", el.symbol()));
            for sh in shells {
                let letter = ['S', 'P', 'D'][sh.angular_momentum as usize];
                out.push_str(&format!("{letter} {}\n", sh.primitives.len()));
                for p in &sh.primitives {
                    out.push_str(&format!("{:e} {:e}\n", p.exponent, p.coefficient));
                }
            }
        }
        out
    }
}

fn looks_like_primitive(line: &str) -> bool {
    line.split_whitespace()
        .next()
        .map(|t| t.replace(['D', 'd'], "e").parse::<f64>().is_ok())
        .unwrap_or(false)
}

/// Parses basis text under the name "custom".
pub fn load_basis(text: &str) -> Result<BasisSet> {
    BasisSet::parse("custom", text)
}

pub fn n_cartesian(l: u8) -> usize {
    (l as usize + 1) * (l as usize + 2) / 2
}

/// Cartesian exponent triples in emission order: x,y,z for p and
/// xx,yy,zz,xy,xz,yz for d.
pub fn cartesian_powers(l: u8) -> &'static [[u8; 3]] {
    match l {
        0 => &[[0, 0, 0]],
        1 => &[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        2 => &[
            [2, 0, 0],
            [0, 2, 0],
            [0, 0, 2],
            [1, 1, 0],
            [1, 0, 1],
            [0, 1, 1],
        ],
        _ => panic!("angular momentum {l} not supported"),
    }
}

fn double_factorial_odd(l: u8) -> f64 {
    // (2l - 1)!!
    (1..=l as i32).map(|k| (2 * k - 1) as f64).product()
}

/// `N` such that `N x^lx y^ly z^lz exp(-α r²)` has unit norm.
pub fn normalization_constant(exponent: f64, powers: [u8; 3]) -> f64 {
    let l: i32 = powers.iter().map(|&p| p as i32).sum();
    let denom: f64 = powers.iter().map(|&p| double_factorial_odd(p)).product();
    ((2.0 * exponent / PI).powf(1.5) * (4.0 * exponent).powi(l) / denom).sqrt()
}

/// Overlap of two unnormalized concentric primitives with identical powers.
fn concentric_overlap(a: f64, b: f64, powers: [u8; 3]) -> f64 {
    let p = a + b;
    let mut s = (PI / p).powf(1.5);
    for &l in &powers {
        s *= double_factorial_odd(l) / (2.0 * p).powi(l as i32);
    }
    s
}

/// A single normalized contracted Cartesian Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    /// Center in bohr.
    pub center: Vec3,
    pub powers: [u8; 3],
    pub exponents: Vec<f64>,
    /// Contraction coefficients with primitive and contraction
    /// normalization folded in.
    pub coefficients: Vec<f64>,
    pub atom_index: usize,
    /// Index into [`MolecularBasis::shells`].
    pub shell_index: usize,
}

impl BasisFunction {
    pub fn angular_momentum(&self) -> u8 {
        self.powers.iter().sum()
    }

    /// Normalized function built from raw (unnormalized) contraction weights.
    pub fn new(center: Vec3, powers: [u8; 3], primitives: &[Primitive]) -> Self {
        let exponents: Vec<f64> = primitives.iter().map(|p| p.exponent).collect();
        let mut coefficients: Vec<f64> = primitives
            .iter()
            .map(|p| p.coefficient * normalization_constant(p.exponent, powers))
            .collect();
        let mut norm = 0.0;
        for (ci, ai) in coefficients.iter().zip(&exponents) {
            for (cj, aj) in coefficients.iter().zip(&exponents) {
                norm += ci * cj * concentric_overlap(*ai, *aj, powers);
            }
        }
        let scale = norm.sqrt().recip();
        coefficients.iter_mut().for_each(|c| *c *= scale);
        Self {
            center,
            powers,
            exponents,
            coefficients,
            atom_index: 0,
            shell_index: 0,
        }
    }

    /// Evaluates the function at a point (bohr).
    pub fn value_at(&self, r: Vec3) -> f64 {
        let d = [
            r[0] - self.center[0],
            r[1] - self.center[1],
            r[2] - self.center[2],
        ];
        let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let angular = d[0].powi(self.powers[0] as i32)
            * d[1].powi(self.powers[1] as i32)
            * d[2].powi(self.powers[2] as i32);
        let radial: f64 = self
            .exponents
            .iter()
            .zip(&self.coefficients)
            .map(|(a, c)| c * (-a * r2).exp())
            .sum();
        angular * radial
    }
}

/// Shell-level grouping of consecutive basis functions that share a center
/// and exponents. The integral engine works on these blocks. A block may mix
/// angular momenta (an SP shell); `angular_momentum` is the highest one.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellBlock {
    pub center: Vec3,
    pub angular_momentum: u8,
    pub exponents: Vec<f64>,
    pub atom_index: usize,
    /// Index of the first function of the block in the molecular basis.
    pub first_function: usize,
    /// Cartesian powers of each component, in function order.
    pub components: Vec<[u8; 3]>,
    /// `coefficients[component][primitive]`.
    pub coefficients: Vec<Vec<f64>>,
}

impl ShellBlock {
    pub fn n_functions(&self) -> usize {
        self.components.len()
    }
}

/// Basis functions placed on a molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularBasis {
    pub name: String,
    functions: Vec<BasisFunction>,
    shells: Vec<ShellBlock>,
}

impl MolecularBasis {
    pub fn functions(&self) -> &[BasisFunction] {
        &self.functions
    }

    pub fn shells(&self) -> &[ShellBlock] {
        &self.shells
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Atom owning each basis function.
    pub fn owners(&self) -> Vec<usize> {
        self.functions.iter().map(|f| f.atom_index).collect()
    }

    /// Wraps an explicit function list; every function becomes its own
    /// single-component block.
    pub fn from_functions(mut functions: Vec<BasisFunction>) -> Self {
        let shells = functions
            .iter_mut()
            .enumerate()
            .map(|(i, f)| {
                f.shell_index = i;
                ShellBlock {
                    center: f.center,
                    angular_momentum: f.angular_momentum(),
                    exponents: f.exponents.clone(),
                    atom_index: f.atom_index,
                    first_function: i,
                    components: vec![f.powers],
                    coefficients: vec![f.coefficients.clone()],
                }
            })
            .collect();
        Self {
            name: "custom".into(),
            functions,
            shells,
        }
    }
}

/// Places `basis` on every atom of `m`, atom by atom in input order, shells in
/// file order, Cartesian components in the fixed order of
/// [`cartesian_powers`].
pub fn assign_basis(m: &Molecule, basis: &BasisSet) -> Result<MolecularBasis> {
    let mut functions = Vec::new();
    let mut shells = Vec::new();
    for (atom_index, atom) in m.atoms().iter().enumerate() {
        let atom_shells = basis
            .shells_for(atom.element)
            .ok_or_else(|| Error::MissingElement {
                basis: basis.name.clone(),
                element: atom.element.symbol().into(),
            })?;
        for sh in atom_shells {
            if sh.angular_momentum > MAX_ANGULAR_MOMENTUM {
                return Err(Error::OutOfRange {
                    what: "angular momentum",
                    value: sh.angular_momentum.to_string(),
                    allowed: format!("<= {MAX_ANGULAR_MOMENTUM}"),
                });
            }
            let exponents: Vec<f64> = sh.primitives.iter().map(|p| p.exponent).collect();
            // Shells sharing an atom and an exponent set (split SP shells)
            // go into one block so the engine evaluates them together.
            let merge = matches!(shells.last(), Some(ShellBlock { atom_index: a, exponents: e, .. })
                if *a == atom_index && *e == exponents);
            if !merge {
                shells.push(ShellBlock {
                    center: atom.position,
                    angular_momentum: sh.angular_momentum,
                    exponents,
                    atom_index,
                    first_function: functions.len(),
                    components: Vec::new(),
                    coefficients: Vec::new(),
                });
            }
            let shell_index = shells.len() - 1;
            let block = shells.last_mut().expect("block just ensured");
            block.angular_momentum = block.angular_momentum.max(sh.angular_momentum);
            for &powers in cartesian_powers(sh.angular_momentum) {
                let mut f = BasisFunction::new(atom.position, powers, &sh.primitives);
                f.atom_index = atom_index;
                f.shell_index = shell_index;
                block.components.push(powers);
                block.coefficients.push(f.coefficients.clone());
                functions.push(f);
            }
        }
    }
    Ok(MolecularBasis {
        name: basis.name.clone(),
        functions,
        shells,
    })
}
