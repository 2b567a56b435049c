//! `KPF1` binary field dump.
//!
//! Layout (little-endian): magic `"KPF1"`, `u32 n`, `u32 N`, `f64 L`, then
//! `N^n` `f64` samples in row-major order.

use std::io::{Read, Write};

use super::field::SpectralField;
use super::grid::GridSpec;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"KPF1";

pub fn encode(field: &SpectralField) -> Vec<u8> {
    let g = field.grid();
    let mut out = Vec::with_capacity(20 + 8 * g.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(g.n as u32).to_le_bytes());
    out.extend_from_slice(&(g.size as u32).to_le_bytes());
    out.extend_from_slice(&g.length.to_le_bytes());
    for x in field.samples() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<SpectralField> {
    if bytes.len() < 20 {
        return Err(Error::Format("truncated KPF1 header".into()));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Format("bad magic, expected KPF1".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let n = u32_at(4) as usize;
    let size = u32_at(8) as usize;
    let length = f64::from_le_bytes(bytes[12..20].try_into().unwrap());
    let grid = GridSpec::new(n, size, length)
        .map_err(|e| Error::Format(format!("invalid KPF1 dimensions: {e}")))?;
    let body = &bytes[20..];
    if body.len() != 8 * grid.len() {
        return Err(Error::Format(format!(
            "KPF1 body holds {} bytes, expected {}",
            body.len(),
            8 * grid.len()
        )));
    }
    let samples = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    SpectralField::from_samples(grid, samples)
}

pub fn write(field: &SpectralField, mut w: impl Write) -> Result<()> {
    w.write_all(&encode(field))?;
    Ok(())
}

pub fn read(mut r: impl Read) -> Result<SpectralField> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    decode(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let g = GridSpec::new(1, 16, 2.5).unwrap();
        let f = SpectralField::from_fn(g, |x| x[0]);
        let b = encode(&f);
        assert_eq!(&b[..4], b"KPF1");
        assert_eq!(&b[4..8], &1u32.to_le_bytes());
        assert_eq!(&b[8..12], &16u32.to_le_bytes());
        assert_eq!(&b[12..20], &2.5f64.to_le_bytes());
        assert_eq!(b.len(), 20 + 16 * 8);
        assert_eq!(encode(&decode(&b).unwrap()), b);
    }

    #[test]
    fn rejects_corrupt_input() {
        let g = GridSpec::new(2, 16, 1.0).unwrap();
        let mut b = encode(&SpectralField::zeros(g));
        assert!(decode(&b[..b.len() - 1]).is_err());
        b[0] = b'X';
        assert!(decode(&b).is_err());
        let mut b = encode(&SpectralField::zeros(g));
        b[8..12].copy_from_slice(&17u32.to_le_bytes());
        assert!(decode(&b).is_err());
        assert!(decode(b"KPF").is_err());
    }
}
