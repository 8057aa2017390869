//! Binary dump of [`IntegralTables`]: the magic header, `n` as a
//! little-endian `u64`, then `S`, `T`, `V` row-major and the canonical ERI
//! list, all as little-endian `f64`.

use std::io::{Read, Write};

use nalgebra::DMatrix;

use super::{EriTensor, IntegralTables};
use crate::error::{Error, Result};

pub const DUMP_MAGIC: &[u8] = b"RADSCF-INT v1";

pub fn write_dump<W: Write>(tables: &IntegralTables, mut w: W) -> Result<()> {
    let n = tables.n_basis();
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&(n as u64).to_le_bytes())?;
    for m in [&tables.s, &tables.t, &tables.v] {
        for i in 0..n {
            for j in 0..n {
                w.write_all(&m[(i, j)].to_le_bytes())?;
            }
        }
    }
    for x in tables.eri.as_packed() {
        w.write_all(&x.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dump<R: Read>(mut r: R) -> Result<IntegralTables> {
    let mut magic = [0u8; DUMP_MAGIC.len()];
    r.read_exact(&mut magic)?;
    if magic != DUMP_MAGIC {
        return Err(Error::Dump("bad header".into()));
    }
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    let n = u64::from_le_bytes(word) as usize;
    let mut read_f64 = |r: &mut R| -> Result<f64> {
        r.read_exact(&mut word)?;
        Ok(f64::from_le_bytes(word))
    };
    let mut mats = Vec::with_capacity(3);
    for _ in 0..3 {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = read_f64(&mut r)?;
            }
        }
        mats.push(m);
    }
    let pairs = n * (n + 1) / 2;
    let count = pairs * (pairs + 1) / 2;
    let data = (0..count)
        .map(|_| read_f64(&mut r))
        .collect::<Result<Vec<_>>>()?;
    let eri =
        EriTensor::from_packed(n, data).ok_or_else(|| Error::Dump("ERI length mismatch".into()))?;
    let v = mats.pop().unwrap();
    let t = mats.pop().unwrap();
    let s = mats.pop().unwrap();
    Ok(IntegralTables { s, t, v, eri })
}
