//! Persistent cache of invariants keyed by canonical code.
//!
//! One append-only file of records, each `magic | length (u32 LE) |
//! SHA-256 of the payload | JSON payload`. The last valid record for a code
//! wins. Writers serialize on an exclusive lock of `<file>.lock`; readers
//! never lock and treat a partial record at the end of the file as an append
//! in progress. Records failing their checksum are reported, and moved to
//! `<file>.quarantine` by [`Atlas::compact`].

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::canon::code_hex;
use crate::constructions::Family;
use crate::containment::family_index;
use crate::error::{Error, Result};
use crate::solvers::{chi_dir, omega_dir, Mode, SolverConfig};
use crate::tournament::Tournament;

pub const ATLAS_SCHEMA: u32 = 1;
const MAGIC: &[u8; 4] = b"TCA\x01";
const HEADER: usize = 4 + 4 + 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasRecord {
    pub schema: u32,
    /// Hex canonical code.
    pub code: String,
    pub n: usize,
    pub omega: Range,
    pub omega_mode: Mode,
    pub chi: Range,
    pub chi_mode: Mode,
    pub omega_a: usize,
    pub omega_d: usize,
    /// Unix seconds.
    pub created_at: u64,
    pub updated_at: u64,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl AtlasRecord {
    pub fn compute(t: &Tournament, config: &SolverConfig) -> Result<Self> {
        let om = omega_dir(t, config)?;
        let ch = chi_dir(t, config)?;
        let ts = now();
        Ok(AtlasRecord {
            schema: ATLAS_SCHEMA,
            code: code_hex(t)?,
            n: t.n(),
            omega: Range {
                lower: om.lower,
                upper: om.value,
            },
            omega_mode: om.mode,
            chi: Range {
                lower: ch.lower,
                upper: ch.value,
            },
            chi_mode: ch.mode,
            omega_a: family_index(t, Family::A)?,
            omega_d: family_index(t, Family::D)?,
            created_at: ts,
            updated_at: ts,
        })
    }

    /// Internal consistency problems, empty when the record is sound.
    pub fn problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        if self.schema != ATLAS_SCHEMA {
            p.push(format!("schema {} (expected {ATLAS_SCHEMA})", self.schema));
        }
        if hex::decode(&self.code).is_err() {
            p.push("code is not hex".into());
        }
        for (name, r) in [("omega", self.omega), ("chi", self.chi)] {
            if r.lower > r.upper {
                p.push(format!("{name} bounds inverted"));
            }
            if r.upper > self.n {
                p.push(format!("{name} exceeds n"));
            }
        }
        if self.omega.lower > self.chi.upper {
            p.push("clique number exceeds dichromatic number".into());
        }
        if self.n >= 1 && (self.omega_a < 1 || self.omega_d < 1) {
            p.push("family indices below 1 on a non-empty tournament".into());
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptRecord {
    pub offset: u64,
    pub len: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactReport {
    pub kept: usize,
    pub superseded: usize,
    pub quarantined: usize,
}

struct Scan {
    records: Vec<(u64, AtlasRecord)>,
    corrupt: Vec<CorruptRecord>,
    /// Offset of a trailing partial record.
    torn_tail: Option<u64>,
}

fn find_magic(buf: &[u8], from: usize) -> Option<usize> {
    buf.get(from..)?
        .windows(MAGIC.len())
        .position(|w| w == MAGIC)
        .map(|p| p + from)
}

fn scan(buf: &[u8]) -> Scan {
    let mut s = Scan {
        records: Vec::new(),
        corrupt: Vec::new(),
        torn_tail: None,
    };
    let mut o = 0usize;
    while o < buf.len() {
        let rest = &buf[o..];
        let bad = |s: &mut Scan, o: usize, reason: &str| -> usize {
            let next = find_magic(buf, o + 1).unwrap_or(buf.len());
            s.corrupt.push(CorruptRecord {
                offset: o as u64,
                len: (next - o) as u64,
                reason: reason.into(),
            });
            next
        };
        if rest.len() < HEADER {
            if rest.starts_with(&MAGIC[..rest.len().min(4)]) {
                s.torn_tail = Some(o as u64);
                break;
            }
            o = bad(&mut s, o, "garbage at end of file");
            continue;
        }
        if &rest[..4] != MAGIC {
            o = bad(&mut s, o, "missing record marker");
            continue;
        }
        let len = u32::from_le_bytes(rest[4..8].try_into().expect("4 bytes")) as usize;
        if HEADER + len > rest.len() {
            if find_magic(buf, o + 1).is_none() {
                s.torn_tail = Some(o as u64);
                break;
            }
            o = bad(&mut s, o, "length runs past the next record");
            continue;
        }
        let payload = &rest[HEADER..HEADER + len];
        let end = o + HEADER + len;
        if Sha256::digest(payload).as_slice() != &rest[8..40] {
            s.corrupt.push(CorruptRecord {
                offset: o as u64,
                len: (HEADER + len) as u64,
                reason: "checksum mismatch".into(),
            });
        } else {
            match serde_json::from_slice::<AtlasRecord>(payload) {
                Ok(r) => s.records.push((o as u64, r)),
                Err(e) => s.corrupt.push(CorruptRecord {
                    offset: o as u64,
                    len: (HEADER + len) as u64,
                    reason: format!("unreadable payload: {e}"),
                }),
            }
        }
        o = end;
    }
    s
}

fn encode(r: &AtlasRecord) -> Result<Vec<u8>> {
    let payload = serde_json::to_vec(r)?;
    let len = u32::try_from(payload.len()).map_err(|_| Error::InvalidArgument("record too large".into()))?;
    let mut out = Vec::with_capacity(HEADER + payload.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&len.to_le_bytes());
    out.extend_from_slice(Sha256::digest(&payload).as_slice());
    out.extend_from_slice(&payload);
    Ok(out)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn read_all(path: &Path) -> Result<Vec<u8>> {
    match File::open(path) {
        Ok(mut f) => {
            let mut buf = Vec::new();
            f.read_to_end(&mut buf)?;
            Ok(buf)
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(e) => Err(e.into()),
    }
}

/// Holds the writer lock until dropped.
struct WriterLock(File);

impl WriterLock {
    fn acquire(path: &Path) -> Result<Self> {
        let f = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(sibling(path, ".lock"))?;
        f.lock()?;
        Ok(WriterLock(f))
    }
}

impl Drop for WriterLock {
    fn drop(&mut self) {
        let _ = self.0.unlock();
    }
}

#[derive(Serialize)]
struct QuarantineEntry<'a> {
    offset: u64,
    reason: &'a str,
    bytes: String,
}

pub struct Atlas {
    path: PathBuf,
    index: BTreeMap<String, AtlasRecord>,
    valid: usize,
    corrupt: Vec<CorruptRecord>,
    torn_tail: Option<u64>,
}

impl Atlas {
    /// Opens (without creating) the atlas at `path`; a missing file is empty.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let mut a = Atlas {
            path: path.as_ref().to_path_buf(),
            index: BTreeMap::new(),
            valid: 0,
            corrupt: Vec::new(),
            torn_tail: None,
        };
        a.reload()?;
        Ok(a)
    }

    pub fn reload(&mut self) -> Result<()> {
        let s = scan(&read_all(&self.path)?);
        self.valid = s.records.len();
        self.index = s.records.into_iter().map(|(_, r)| (r.code.clone(), r)).collect();
        self.corrupt = s.corrupt;
        self.torn_tail = s.torn_tail;
        Ok(())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, code: &str) -> Option<&AtlasRecord> {
        self.index.get(code)
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &AtlasRecord> {
        self.index.values()
    }

    pub fn corrupt(&self) -> &[CorruptRecord] {
        &self.corrupt
    }

    pub fn torn_tail(&self) -> Option<u64> {
        self.torn_tail
    }

    fn quarantine(&self, buf: &[u8], items: &[CorruptRecord]) -> Result<usize> {
        if items.is_empty() {
            return Ok(0);
        }
        let mut q = OpenOptions::new()
            .create(true)
            .append(true)
            .open(sibling(&self.path, ".quarantine"))?;
        for c in items {
            let (a, b) = (c.offset as usize, (c.offset + c.len) as usize);
            let entry = QuarantineEntry {
                offset: c.offset,
                reason: &c.reason,
                bytes: hex::encode(&buf[a..b.min(buf.len())]),
            };
            serde_json::to_writer(&mut q, &entry)?;
            q.write_all(b"\n")?;
        }
        q.sync_all()?;
        Ok(items.len())
    }

    /// Validates and appends `record`, keeping the creation time of an
    /// existing record for the same code.
    pub fn upsert(&mut self, mut record: AtlasRecord) -> Result<()> {
        let problems = record.problems();
        if !problems.is_empty() {
            return Err(Error::InvalidArgument(format!("inconsistent record: {}", problems.join("; "))));
        }
        let _lock = WriterLock::acquire(&self.path)?;
        let buf = read_all(&self.path)?;
        let s = scan(&buf);
        if let Some((_, old)) = s.records.iter().rev().find(|(_, r)| r.code == record.code) {
            record.created_at = old.created_at.min(record.created_at);
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        if let Some(tail) = s.torn_tail {
            // A crashed writer left half a record: keep it aside, then cut it.
            let torn = CorruptRecord {
                offset: tail,
                len: buf.len() as u64 - tail,
                reason: "partial record left by an interrupted write".into(),
            };
            self.quarantine(&buf, &[torn])?;
            f.set_len(tail)?;
        }
        f.write_all(&encode(&record)?)?;
        f.sync_all()?;
        drop(f);
        self.reload()?;
        Ok(())
    }

    /// Rewrites the file with one record per code; corrupt records go to the
    /// quarantine file first.
    pub fn compact(&mut self) -> Result<CompactReport> {
        let _lock = WriterLock::acquire(&self.path)?;
        let buf = read_all(&self.path)?;
        let s = scan(&buf);
        let mut bad = s.corrupt.clone();
        if let Some(tail) = s.torn_tail {
            bad.push(CorruptRecord {
                offset: tail,
                len: buf.len() as u64 - tail,
                reason: "partial record".into(),
            });
        }
        let quarantined = self.quarantine(&buf, &bad)?;
        let total = s.records.len();
        let latest: BTreeMap<String, AtlasRecord> = s.records.into_iter().map(|(_, r)| (r.code.clone(), r)).collect();
        let tmp = sibling(&self.path, ".compact");
        {
            let mut f = File::create(&tmp)?;
            for r in latest.values() {
                f.write_all(&encode(r)?)?;
            }
            f.sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        self.reload()?;
        Ok(CompactReport {
            kept: latest.len(),
            superseded: total - latest.len(),
            quarantined,
        })
    }
}
