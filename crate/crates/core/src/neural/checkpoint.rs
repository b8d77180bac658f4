//! Binary checkpoint container.
//!
//! Layout, all integers little-endian:
//! `"SNCK"`, u32 version, u32 meta length, meta bytes, u32 entry count, then
//! per entry: u32 name length, name, 32-byte spec digest, u8 scalar width,
//! u64 parameter count, parameters.

use std::fs;
use std::path::Path;

use super::{Network, NeuralError};
use crate::scalar::Real;

const MAGIC: &[u8; 4] = b"SNCK";
const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    name: String,
    digest: [u8; 32],
    width: u8,
    count: u64,
    data: Vec<u8>,
}

/// Named parameter sets plus a free-form metadata string.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Checkpoint {
    pub meta: String,
    entries: Vec<Entry>,
}

impl Checkpoint {
    pub fn new(meta: impl Into<String>) -> Self {
        Self { meta: meta.into(), entries: Vec::new() }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    pub fn push<R: Real>(&mut self, name: &str, net: &Network<R>) {
        let mut data = Vec::with_capacity(net.n_params() * R::BYTES);
        for &p in net.params() {
            p.write_le(&mut data);
        }
        self.entries.retain(|e| e.name != name);
        self.entries.push(Entry {
            name: name.to_string(),
            digest: net.spec().digest(),
            width: R::BYTES as u8,
            count: net.n_params() as u64,
            data,
        });
    }

    /// Loads the named entry into `net`, which must share its architecture
    /// and scalar width.
    pub fn restore<R: Real>(&self, name: &str, net: &mut Network<R>) -> Result<(), NeuralError> {
        let e = self
            .entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| NeuralError::Checkpoint(format!("no entry named {name:?}")))?;
        if e.digest != net.spec().digest() {
            return Err(NeuralError::Checkpoint(format!("{name}: architecture differs")));
        }
        if e.width as usize != R::BYTES || e.count as usize != net.n_params() {
            return Err(NeuralError::Checkpoint(format!("{name}: scalar width or size differs")));
        }
        for (p, chunk) in net.params_mut().iter_mut().zip(e.data.chunks_exact(R::BYTES)) {
            *p = R::read_le(chunk);
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.meta.len() as u32).to_le_bytes());
        out.extend_from_slice(self.meta.as_bytes());
        out.extend_from_slice(&(self.entries.len() as u32).to_le_bytes());
        for e in &self.entries {
            out.extend_from_slice(&(e.name.len() as u32).to_le_bytes());
            out.extend_from_slice(e.name.as_bytes());
            out.extend_from_slice(&e.digest);
            out.push(e.width);
            out.extend_from_slice(&e.count.to_le_bytes());
            out.extend_from_slice(&e.data);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, NeuralError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(NeuralError::Checkpoint("bad magic".into()));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(NeuralError::Checkpoint(format!("unsupported version {version}")));
        }
        let meta_len = r.u32()? as usize;
        let meta = r.string(meta_len)?;
        let n = r.u32()?;
        let mut entries = Vec::new();
        for _ in 0..n {
            let len = r.u32()? as usize;
            let name = r.string(len)?;
            let digest: [u8; 32] = r.take(32)?.try_into().expect("32 bytes");
            let width = r.take(1)?[0];
            let count = r.u64()?;
            let size = (count as usize)
                .checked_mul(width as usize)
                .ok_or_else(|| NeuralError::Checkpoint("entry size overflows".into()))?;
            let data = r.take(size)?.to_vec();
            entries.push(Entry { name, digest, width, count, data });
        }
        if r.pos != bytes.len() {
            return Err(NeuralError::Checkpoint("trailing bytes".into()));
        }
        Ok(Self { meta, entries })
    }

    pub fn save(&self, path: &Path) -> Result<(), NeuralError> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, NeuralError> {
        Self::from_bytes(&fs::read(path)?)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], NeuralError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| NeuralError::Checkpoint("truncated".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, NeuralError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64, NeuralError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn string(&mut self, n: usize) -> Result<String, NeuralError> {
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| NeuralError::Checkpoint("invalid utf-8".into()))
    }
}
