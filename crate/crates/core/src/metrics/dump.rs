//! Binary cache format for distance maps.
//!
//! Layout: a 16-byte header followed by the raw little-endian cells.
//!
//! | bytes | content                                    |
//! |-------|--------------------------------------------|
//! | 0..3  | magic `NCD`                                |
//! | 3     | cell width in bytes (1, 2 or 4)            |
//! | 4..8  | FNV-1a 32-bit hash of the group descriptor |
//! | 8..16 | number of cells, `u64`                     |

use std::io::{Read, Write};

use super::bfs::{Cells, DistanceMap};
use crate::error::{Error, Result};
use crate::group::{GeneratingSet, GroupSpec};

const MAGIC: &[u8; 3] = b"NCD";

pub fn descriptor_hash(spec: &GroupSpec) -> u32 {
    spec.descriptor().bytes().fold(0x811c_9dc5u32, |h, b| (h ^ b as u32).wrapping_mul(0x0100_0193))
}

pub fn write_dump<W: Write>(dm: &DistanceMap, mut out: W) -> Result<()> {
    let mut header = [0u8; 16];
    header[..3].copy_from_slice(MAGIC);
    header[3] = dm.cell_width();
    header[4..8].copy_from_slice(&descriptor_hash(dm.spec()).to_le_bytes());
    header[8..].copy_from_slice(&(dm.len() as u64).to_le_bytes());
    out.write_all(&header)?;
    match dm.cells() {
        Cells::U8(v) => out.write_all(v)?,
        Cells::U16(v) => {
            let bytes: Vec<u8> = v.iter().flat_map(|c| c.to_le_bytes()).collect();
            out.write_all(&bytes)?
        }
        Cells::U32(v) => {
            let bytes: Vec<u8> = v.iter().flat_map(|c| c.to_le_bytes()).collect();
            out.write_all(&bytes)?
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads a dump written for `spec`; the generating set is not stored and
/// must be supplied by the caller.
pub fn read_dump<R: Read>(mut input: R, spec: &GroupSpec, gens: &GeneratingSet) -> Result<DistanceMap> {
    let mut header = [0u8; 16];
    input.read_exact(&mut header)?;
    if &header[..3] != MAGIC {
        return Err(Error::Parse("not a distance map dump".into()));
    }
    let hash = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes"));
    if hash != descriptor_hash(spec) {
        return Err(Error::Parse(format!("dump was written for a different group than {spec}")));
    }
    let len = u64::from_le_bytes(header[8..].try_into().expect("8 bytes"));
    if len != spec.order() {
        return Err(Error::Parse(format!("dump holds {len} cells, group has {}", spec.order())));
    }
    let width = header[3] as usize;
    let mut raw = vec![0u8; len as usize * width];
    input.read_exact(&mut raw)?;
    let cells = match width {
        1 => Cells::U8(raw),
        2 => Cells::U16(raw.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]])).collect()),
        4 => Cells::U32(raw.chunks_exact(4).map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect()),
        w => return Err(Error::Parse(format!("unsupported cell width {w}"))),
    };
    Ok(DistanceMap::from_parts(spec.clone(), gens.clone(), cells))
}
