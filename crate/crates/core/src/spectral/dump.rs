//! 16-byte header `"ZASS"`, `u32 M`, two reserved `u32` zeros, then `M`
//! little-endian `(re, im)` f64 pairs.

use std::io::Write;

use num_complex::Complex64;

use super::{Grid, StateVector};
use crate::{Error, Result};

pub const DUMP_MAGIC: &[u8; 4] = b"ZASS";

pub fn write_state_dump<W: Write>(out: &mut W, u: &StateVector) -> Result<()> {
    let mut buf = Vec::with_capacity(16 + 16 * u.data().len());
    buf.extend_from_slice(DUMP_MAGIC);
    buf.extend_from_slice(&(u.data().len() as u32).to_le_bytes());
    buf.extend_from_slice(&[0u8; 8]);
    for z in u.data() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_state_dump(bytes: &[u8]) -> Result<StateVector> {
    if bytes.len() < 16 {
        return Err(Error::Format(format!("dump has {} bytes, header needs 16", bytes.len())));
    }
    if &bytes[..4] != DUMP_MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let word = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
    let m = word(4) as usize;
    if word(8) != 0 || word(12) != 0 {
        return Err(Error::Format("reserved header field is not zero".into()));
    }
    let body = &bytes[16..];
    if body.len() != m.checked_mul(16).ok_or_else(|| Error::Format("size overflow".into()))? {
        return Err(Error::Format(format!("expected {} payload bytes, found {}", m * 16, body.len())));
    }
    let grid = Grid::new(m).map_err(|e| Error::Format(e.to_string()))?;
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8 bytes"));
    let data = body
        .chunks_exact(16)
        .map(|c| Complex64::new(f(&c[..8]), f(&c[8..])))
        .collect();
    StateVector::new(grid, data).map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_rejects() {
        let g = Grid::new(8).unwrap();
        let u = StateVector::new(g, (0..8).map(|j| Complex64::new(j as f64, -0.5 * j as f64)).collect()).unwrap();
        let mut buf = Vec::new();
        write_state_dump(&mut buf, &u).unwrap();
        assert_eq!(buf.len(), 16 + 128);
        assert_eq!(&buf[..4], b"ZASS");
        assert_eq!(read_state_dump(&buf).unwrap(), u);
        assert!(read_state_dump(&buf[..20]).is_err());
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(read_state_dump(&bad).is_err());
        let mut bad = buf.clone();
        bad[8] = 1;
        assert!(read_state_dump(&bad).is_err());
        let mut bad = buf;
        bad[16..24].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(read_state_dump(&bad).is_err());
    }
}
