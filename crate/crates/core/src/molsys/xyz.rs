//! XYZ reading and writing.
//!
//! ```text
//! <N>
//! <comment, may carry "charge=<int>" and "mult=<int>">
//! <symbol> <x> <y> <z>     (ångström)
//! ```

use super::{Atom, Element, Molecule, ANGSTROM_TO_BOHR};
use crate::error::{Error, Result, XyzErrorKind};

/// One parsed XYZ frame before spin-state validation.
#[derive(Debug, Clone, PartialEq)]
pub struct XyzDocument {
    pub atoms: Vec<Atom>,
    pub comment: String,
    pub charge: Option<i32>,
    pub multiplicity: Option<u32>,
}

impl XyzDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        let (doc, consumed) = parse_frame(&lines, 0)?;
        if let Some((i, _)) = lines
            .iter()
            .enumerate()
            .skip(consumed)
            .find(|(_, l)| !l.trim().is_empty())
        {
            return Err(Error::Xyz {
                line: i + 1,
                kind: XyzErrorKind::AtomCountMismatch {
                    declared: doc.atoms.len(),
                    found: doc.atoms.len()
                        + lines[consumed..]
                            .iter()
                            .filter(|l| !l.trim().is_empty())
                            .count(),
                },
            });
        }
        Ok(doc)
    }

    /// Builds a molecule. Explicit overrides win over comment-line metadata,
    /// which wins over the defaults (neutral; singlet or doublet by parity).
    pub fn into_molecule(self, charge: Option<i32>, multiplicity: Option<u32>) -> Result<Molecule> {
        let charge = charge.or(self.charge).unwrap_or(0);
        match multiplicity.or(self.multiplicity) {
            Some(mult) => Molecule::new(self.atoms, charge, mult),
            None => Molecule::with_default_multiplicity(self.atoms, charge),
        }
    }
}

/// Parses a single-frame XYZ text into a validated molecule.
pub fn parse_xyz(text: &str) -> Result<Molecule> {
    XyzDocument::parse(text)?.into_molecule(None, None)
}

/// Parses concatenated frames (trajectory files).
pub fn parse_xyz_frames(text: &str) -> Result<Vec<XyzDocument>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut frames = Vec::new();
    let mut start = 0;
    while start < lines.len() {
        if lines[start].trim().is_empty() {
            start += 1;
            continue;
        }
        let (doc, next) = parse_frame(&lines, start)?;
        frames.push(doc);
        start = next;
    }
    Ok(frames)
}

/// Writes a molecule as XYZ in ångström. `charge=` and `mult=` tokens are
/// appended to `comment`.
pub fn to_xyz(m: &Molecule, comment: &str) -> String {
    let mut out = format!("{}\n", m.len());
    let meta = format!("charge={} mult={}", m.charge(), m.multiplicity());
    if comment.is_empty() {
        out.push_str(&meta);
    } else {
        out.push_str(comment);
        out.push(' ');
        out.push_str(&meta);
    }
    out.push('\n');
    for a in m.atoms() {
        let p = a.position.map(|c| c / ANGSTROM_TO_BOHR);
        out.push_str(&format!(
            "{:<2} {:>20.12} {:>20.12} {:>20.12}\n",
            a.element.symbol(),
            p[0],
            p[1],
            p[2]
        ));
    }
    out
}

fn parse_frame(lines: &[&str], start: usize) -> Result<(XyzDocument, usize)> {
    let err = |line: usize, kind| Error::Xyz { line, kind };
    let count_line = lines
        .get(start)
        .ok_or_else(|| err(start + 1, XyzErrorKind::MalformedCount(String::new())))?;
    let n: usize = count_line.trim().parse().map_err(|_| {
        err(
            start + 1,
            XyzErrorKind::MalformedCount(count_line.trim().into()),
        )
    })?;
    let comment = lines
        .get(start + 1)
        .copied()
        .unwrap_or("")
        .trim()
        .to_string();
    let (charge, multiplicity) =
        parse_metadata(&comment).map_err(|t| err(start + 2, XyzErrorKind::BadMetadata(t)))?;

    let mut atoms = Vec::with_capacity(n);
    for k in 0..n {
        let idx = start + 2 + k;
        let line = lines.get(idx).map(|l| l.trim()).unwrap_or("");
        if line.is_empty() {
            return Err(err(
                idx + 1,
                XyzErrorKind::AtomCountMismatch {
                    declared: n,
                    found: k,
                },
            ));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 4 {
            return Err(err(idx + 1, XyzErrorKind::MissingField));
        }
        let element = Element::from_symbol(fields[0])
            .ok_or_else(|| err(idx + 1, XyzErrorKind::UnknownElement(fields[0].into())))?;
        let mut position = [0.0; 3];
        for (c, field) in position.iter_mut().zip(&fields[1..4]) {
            let v: f64 = field
                .parse()
                .map_err(|_| err(idx + 1, XyzErrorKind::BadCoordinate((*field).into())))?;
            if !v.is_finite() {
                return Err(err(idx + 1, XyzErrorKind::BadCoordinate((*field).into())));
            }
            *c = v * ANGSTROM_TO_BOHR;
        }
        atoms.push(Atom::new(element, position));
    }
    Ok((
        XyzDocument {
            atoms,
            comment,
            charge,
            multiplicity,
        },
        start + 2 + n,
    ))
}

fn parse_metadata(comment: &str) -> std::result::Result<(Option<i32>, Option<u32>), String> {
    let mut charge = None;
    let mut mult = None;
    for token in comment.split_whitespace() {
        if let Some(v) = token.strip_prefix("charge=") {
            charge = Some(v.parse().map_err(|_| token.to_string())?);
        } else if let Some(v) = token.strip_prefix("mult=") {
            mult = Some(v.parse().map_err(|_| token.to_string())?);
        }
    }
    Ok((charge, mult))
}
