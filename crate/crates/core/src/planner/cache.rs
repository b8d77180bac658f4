//! Binary dump of the APSP tables keyed by map hash and weight mode.
//!
//! Layout (little endian): magic `APSP`, format version `u32`, map hash
//! (length-prefixed UTF-8), mode tag byte, alpha and beta as `f64`, scalar
//! width byte, grid length `u64`, node count `u64`, node indices `u32`,
//! distances, next hops `u32`.

use std::path::{Path, PathBuf};

use crate::gridworld::GeoMap;
use crate::scalar::Real;

use super::apsp::{build_apsp, ApspTables, WeightMode};
use super::PlanError;

const MAGIC: &[u8; 4] = b"APSP";
const VERSION: u32 = 1;

pub fn cache_file_name(map: &GeoMap, mode: WeightMode) -> String {
    format!("{}.{}.apsp", map.content_hash(), mode.tag())
}

fn mode_fields(mode: WeightMode) -> (u8, f64, f64) {
    match mode {
        WeightMode::Plain => (0, 0.0, 0.0),
        WeightMode::Modified { alpha, beta } => (1, alpha, beta),
    }
}

pub fn write_cache<T: Real>(tables: &ApspTables<T>, path: &Path) -> Result<(), PlanError> {
    let n = tables.nodes.len();
    let mut out = Vec::with_capacity(64 + n * 4 + n * n * (T::BYTES + 4));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(tables.map_hash.len() as u32).to_le_bytes());
    out.extend_from_slice(tables.map_hash.as_bytes());
    let (tag, alpha, beta) = mode_fields(tables.mode);
    out.push(tag);
    out.extend_from_slice(&alpha.to_le_bytes());
    out.extend_from_slice(&beta.to_le_bytes());
    out.push(T::BYTES as u8);
    out.extend_from_slice(&(tables.grid_len as u64).to_le_bytes());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for &v in &tables.nodes {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for &d in &tables.dist {
        d.write_le(&mut out);
    }
    for &h in &tables.next {
        out.extend_from_slice(&h.to_le_bytes());
    }
    std::fs::write(path, out)?;
    Ok(())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], PlanError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| PlanError::Cache("truncated file".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, PlanError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, PlanError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, PlanError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Reads a cache file, checking it against `map` and `mode`.
pub fn read_cache<T: Real>(path: &Path, map: &GeoMap, mode: WeightMode) -> Result<ApspTables<T>, PlanError> {
    let bytes = std::fs::read(path)?;
    let mut r = Reader { buf: &bytes, pos: 0 };
    if r.take(4)? != MAGIC || r.u32()? != VERSION {
        return Err(PlanError::Cache("bad magic or version".into()));
    }
    let hash_len = r.u32()? as usize;
    let hash = std::str::from_utf8(r.take(hash_len)?).map_err(|_| PlanError::Cache("bad hash".into()))?;
    if hash != map.content_hash() {
        return Err(PlanError::Cache("map hash mismatch".into()));
    }
    let tag = r.take(1)?[0];
    let (alpha, beta) = (r.f64()?, r.f64()?);
    if (tag, alpha, beta) != mode_fields(mode) {
        return Err(PlanError::Cache("weight mode mismatch".into()));
    }
    if r.take(1)?[0] as usize != T::BYTES {
        return Err(PlanError::Cache("scalar width mismatch".into()));
    }
    let grid_len = r.u64()? as usize;
    let n = r.u64()? as usize;
    if grid_len != map.cells().len() || n != map.water_indices().len() {
        return Err(PlanError::Cache("dimension mismatch".into()));
    }
    let nodes = (0..n).map(|_| r.u32()).collect::<Result<Vec<_>, _>>()?;
    let mut node_of = vec![u32::MAX; grid_len];
    for (k, &i) in nodes.iter().enumerate() {
        *node_of.get_mut(i as usize).ok_or_else(|| PlanError::Cache("node index out of range".into()))? = k as u32;
    }
    let raw = r.take(n * n * T::BYTES)?;
    let dist = raw.chunks_exact(T::BYTES).map(T::read_le).collect();
    let next = (0..n * n).map(|_| r.u32()).collect::<Result<Vec<_>, _>>()?;
    Ok(ApspTables { mode, map_hash: hash.to_string(), grid_len, nodes, node_of, dist, next })
}

/// Loads the tables from `cache_dir` when a matching file exists, otherwise
/// builds them and writes the cache. Any unreadable or mismatched cache
/// file is rebuilt.
pub fn load_or_build<T: Real>(
    map: &GeoMap,
    mode: WeightMode,
    cache_dir: Option<&Path>,
) -> Result<ApspTables<T>, PlanError> {
    let Some(dir) = cache_dir else {
        return build_apsp(map, mode);
    };
    let path: PathBuf = dir.join(cache_file_name(map, mode));
    if path.exists() {
        if let Ok(t) = read_cache(&path, map, mode) {
            return Ok(t);
        }
    }
    let tables = build_apsp(map, mode)?;
    std::fs::create_dir_all(dir)?;
    write_cache(&tables, &path)?;
    Ok(tables)
}
