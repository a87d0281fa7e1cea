//! Binary cache for count tables.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "GBQ2"            4 bytes
//! version           u16
//! n                 u64
//! q2[3..=n]         (n − 2) × u64
//! checksum          u64, wrapping sum of the q2 values
//! ```
//!
//! Prefix sums are rebuilt on load.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::table::{GoldbachCountTable, Method};

pub const MAGIC: &[u8; 4] = b"GBQ2";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 8;

pub fn encode(table: &GoldbachCountTable) -> Vec<u8> {
    let counts = table.counts();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * counts.len() + 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&table.n().to_le_bytes());
    let mut checksum = 0u64;
    for &q in counts {
        out.extend_from_slice(&q.to_le_bytes());
        checksum = checksum.wrapping_add(q);
    }
    out.extend_from_slice(&checksum.to_le_bytes());
    out
}

pub fn decode(bytes: &[u8]) -> Result<GoldbachCountTable> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::CorruptCache(format!(
            "{} bytes is shorter than the {HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::CorruptCache("bad magic bytes".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::CorruptCache(format!(
            "unsupported format version {version}"
        )));
    }
    let n = u64::from_le_bytes(bytes[6..14].try_into().expect("8 bytes"));
    if n < 3 {
        return Err(Error::CorruptCache(format!("n = {n} is below 3")));
    }
    let expected = (n - 2)
        .checked_mul(8)
        .and_then(|b| b.checked_add((HEADER_LEN + 8) as u64));
    if expected != Some(bytes.len() as u64) {
        return Err(Error::CorruptCache(format!(
            "length {} does not match n = {n}",
            bytes.len()
        )));
    }

    let body = &bytes[HEADER_LEN..bytes.len() - 8];
    let mut checksum = 0u64;
    let counts: Vec<u64> = body
        .chunks_exact(8)
        .map(|c| {
            let q = u64::from_le_bytes(c.try_into().expect("8 bytes"));
            checksum = checksum.wrapping_add(q);
            q
        })
        .collect();
    let stored = u64::from_le_bytes(bytes[bytes.len() - 8..].try_into().expect("8 bytes"));
    if stored != checksum {
        return Err(Error::CorruptCache(format!(
            "checksum mismatch: stored {stored}, computed {checksum}"
        )));
    }
    GoldbachCountTable::from_counts(counts, Method::Cache)
        .map_err(|e| Error::CorruptCache(e.to_string()))
}

pub fn save_table(table: &GoldbachCountTable, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(&encode(table))?;
    w.flush()?;
    Ok(())
}

pub fn load_table(path: &Path) -> Result<GoldbachCountTable> {
    decode(&fs::read(path)?)
}

/// Reads only the `n` field of a cache file, for skip-if-present checks.
pub fn peek_n(path: &Path) -> Option<u64> {
    let bytes = fs::read(path).ok()?;
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return None;
    }
    Some(u64::from_le_bytes(bytes[6..14].try_into().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::build_table_convolution;

    #[test]
    fn round_trip() {
        let t = build_table_convolution(100).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q2.bin");
        save_table(&t, &path).unwrap();
        let back = load_table(&path).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.counts(), t.counts());
        assert_eq!(back.prefix(), t.prefix());
        assert_eq!(back.method(), Method::Cache);
        assert_eq!(peek_n(&path), Some(100));
    }

    #[test]
    fn exact_layout() {
        let t = GoldbachCountTable::from_counts(vec![1, 1, 2], Method::Direct).unwrap();
        let bytes = encode(&t);
        let mut expect = b"GBQ2".to_vec();
        expect.extend_from_slice(&[1, 0]);
        expect.extend_from_slice(&[5, 0, 0, 0, 0, 0, 0, 0]);
        expect.extend_from_slice(&[1, 0, 0, 0, 0, 0, 0, 0]);
        expect.extend_from_slice(&[1, 0, 0, 0, 0, 0, 0, 0]);
        expect.extend_from_slice(&[2, 0, 0, 0, 0, 0, 0, 0]);
        expect.extend_from_slice(&[4, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(bytes, expect);
    }

    #[test]
    fn truncated_file_is_rejected() {
        let bytes = encode(&build_table_convolution(100).unwrap());
        for cut in [0, 3, 13, 14, bytes.len() - 1, bytes.len() - 8] {
            assert!(
                matches!(decode(&bytes[..cut]), Err(Error::CorruptCache(_))),
                "cut at {cut}"
            );
        }
        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(decode(&long), Err(Error::CorruptCache(_))));
    }

    #[test]
    fn checksum_mismatch_is_rejected() {
        let mut bytes = encode(&build_table_convolution(100).unwrap());
        bytes[HEADER_LEN] ^= 1;
        assert!(matches!(decode(&bytes), Err(Error::CorruptCache(_))));
    }

    #[test]
    fn bad_magic_and_version() {
        let good = encode(&build_table_convolution(10).unwrap());
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(decode(&bad), Err(Error::CorruptCache(_))));
        let mut bad = good.clone();
        bad[4] = 2;
        assert!(matches!(decode(&bad), Err(Error::CorruptCache(_))));
        let mut bad = good;
        bad[6] = 0xff;
        assert!(matches!(decode(&bad), Err(Error::CorruptCache(_))));
    }
}
