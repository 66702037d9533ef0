//! Binary field-slice dump for debugging.
//!
//! Layout, little-endian: `u32 rows`, `u32 cols`, then `rows·cols` `f32`
//! values in row-major order. A slice at fixed `i` has rows along `j`
//! and columns along `k`.

use std::io::Write;
use std::path::Path;

use super::{Axis, YeeState};
use crate::{Error, Result};

/// Writes the E component `c` on the local plane `i = plane`.
pub fn write_e_slice(state: &YeeState, c: Axis, plane: usize, path: &Path) -> Result<()> {
    let [ni, nj, nk] = state.dims();
    if plane >= ni {
        return Err(Error::Precondition(format!("plane {plane} outside 0..{ni}")));
    }
    let field = state.e(c);
    let mut buf = Vec::with_capacity(8 + 4 * nj * nk);
    buf.extend_from_slice(&(nj as u32).to_le_bytes());
    buf.extend_from_slice(&(nk as u32).to_le_bytes());
    for v in &field[plane * nj * nk..(plane + 1) * nj * nk] {
        buf.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(&buf)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Reads a slice written by [`write_e_slice`].
pub fn read_slice(path: &Path) -> Result<(usize, usize, Vec<f32>)> {
    let bytes = std::fs::read(path)?;
    let bad = || Error::Precondition("truncated field slice".into());
    if bytes.len() < 8 {
        return Err(bad());
    }
    let rows = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if bytes.len() != 8 + 4 * rows * cols {
        return Err(bad());
    }
    let data = bytes[8..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((rows, cols, data))
}
