//! Versioned binary checkpoints for resolutions.
//!
//! The layout is self-describing and little-endian throughout; see
//! `docs/checkpoint-format.md` in the repository root for the byte-level
//! specification. A load refuses mismatched versions and validates the
//! monomial-count table against the algebra rebuilt from the stored
//! profile, so stale or foreign files fail loudly instead of producing
//! wrong mathematics.

use std::collections::BTreeMap;
use std::io::{self, Read};

use super::{GenId, GenRec, ModuleElement, Resolution, Term};
use crate::hopf::{Algebra, CoeffMode, Height, MotivicProfile};

pub const MAGIC: &[u8; 4] = b"MOTX";
pub const END_MAGIC: &[u8; 4] = b"XTOM";
pub const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CheckpointError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("not a checkpoint file (bad magic)")]
    BadMagic,
    #[error("checkpoint version {found} is not supported (expected {VERSION})")]
    VersionMismatch { found: u32 },
    #[error("checkpoint is corrupt: {0}")]
    Corrupt(&'static str),
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_i32(out: &mut Vec<u8>, v: i32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_i64(out: &mut Vec<u8>, v: i64) {
    out.extend_from_slice(&v.to_le_bytes());
}

struct Reader<R: Read> {
    inner: R,
}

impl<R: Read> Reader<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N], CheckpointError> {
        let mut buf = [0u8; N];
        self.inner
            .read_exact(&mut buf)
            .map_err(|_| CheckpointError::Corrupt("unexpected end of file"))?;
        Ok(buf)
    }

    fn u8(&mut self) -> Result<u8, CheckpointError> {
        Ok(self.bytes::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32, CheckpointError> {
        Ok(u32::from_le_bytes(self.bytes::<4>()?))
    }

    fn i32(&mut self) -> Result<i32, CheckpointError> {
        Ok(i32::from_le_bytes(self.bytes::<4>()?))
    }

    fn i64(&mut self) -> Result<i64, CheckpointError> {
        Ok(i64::from_le_bytes(self.bytes::<8>()?))
    }
}

fn put_height(out: &mut Vec<u8>, h: Height) {
    match h {
        Height::Bounded(v) => {
            out.push(0);
            put_u32(out, v);
        }
        Height::Unbounded => {
            out.push(1);
            put_u32(out, 0);
        }
    }
}

fn get_height<R: Read>(r: &mut Reader<R>) -> Result<Height, CheckpointError> {
    let tag = r.u8()?;
    let v = r.u32()?;
    match tag {
        0 => Ok(Height::Bounded(v)),
        1 => Ok(Height::Unbounded),
        _ => Err(CheckpointError::Corrupt("bad height tag")),
    }
}

fn put_profile(out: &mut Vec<u8>, p: &MotivicProfile) {
    out.push(match p.mode {
        CoeffMode::Motivic => 0,
        CoeffMode::Classical => 1,
    });
    put_u32(out, p.tau_present.len() as u32);
    for &b in &p.tau_present {
        out.push(u8::from(b));
    }
    out.push(u8::from(p.tau_tail));
    put_u32(out, p.xi_heights.len() as u32);
    for &h in &p.xi_heights {
        put_height(out, h);
    }
    match p.xi_tail {
        None => {
            out.push(0);
            put_u32(out, 0);
        }
        Some(h) => {
            out.push(1);
            put_height(out, h);
        }
    }
    put_u32(out, p.degree_cap);
}

fn get_profile<R: Read>(r: &mut Reader<R>) -> Result<MotivicProfile, CheckpointError> {
    let mode = match r.u8()? {
        0 => CoeffMode::Motivic,
        1 => CoeffMode::Classical,
        _ => return Err(CheckpointError::Corrupt("bad mode tag")),
    };
    let n = r.u32()? as usize;
    if n > 64 {
        return Err(CheckpointError::Corrupt("tau profile too long"));
    }
    let mut tau_present = Vec::with_capacity(n);
    for _ in 0..n {
        tau_present.push(r.u8()? != 0);
    }
    let tau_tail = r.u8()? != 0;
    let n = r.u32()? as usize;
    if n > 64 {
        return Err(CheckpointError::Corrupt("xi profile too long"));
    }
    let mut xi_heights = Vec::with_capacity(n);
    for _ in 0..n {
        xi_heights.push(get_height(r)?);
    }
    let xi_tail = match r.u8()? {
        0 => {
            r.u32()?;
            None
        }
        1 => Some(get_height(r)?),
        _ => return Err(CheckpointError::Corrupt("bad xi tail tag")),
    };
    let degree_cap = r.u32()?;
    Ok(MotivicProfile {
        mode,
        tau_present,
        tau_tail,
        xi_heights,
        xi_tail,
        degree_cap,
    })
}

/// Serializes a resolution to a self-contained blob.
pub fn checkpoint_save(res: &Resolution) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    put_u32(&mut out, VERSION);
    let algebra = res.algebra();
    put_profile(&mut out, algebra.profile());

    // Monomial counts per degree guard the id <-> monomial correspondence.
    let cap = algebra.profile().degree_cap;
    put_u32(&mut out, cap + 1);
    for t in 0..=cap {
        put_u32(&mut out, algebra.ids_of_degree(t).count() as u32);
    }

    let max_f = (0..)
        .take_while(|&f| res.frontier(f) >= 0 || f == 0)
        .count() as u32;
    put_u32(&mut out, max_f);
    for f in 0..max_f {
        put_i64(&mut out, if f == 0 { 0 } else { res.frontier(f) });
    }

    let cells = res.cells();
    put_u32(&mut out, cells.len() as u32);
    for (&(f, t), gens) in cells {
        put_u32(&mut out, f);
        put_u32(&mut out, t);
        put_u32(&mut out, gens.len() as u32);
        for g in gens {
            put_i32(&mut out, g.id.w);
            put_u32(&mut out, g.id.idx);
            put_u32(&mut out, g.diff.terms.len() as u32);
            for term in &g.diff.terms {
                put_u32(&mut out, term.gen.f);
                put_u32(&mut out, term.gen.t);
                put_i32(&mut out, term.gen.w);
                put_u32(&mut out, term.gen.idx);
                put_u32(&mut out, term.mono);
                put_u32(&mut out, term.tau);
            }
        }
    }
    out.extend_from_slice(END_MAGIC);
    out
}

/// Reconstructs a resolution from a blob produced by [`checkpoint_save`].
pub fn checkpoint_load(blob: &[u8]) -> Result<Resolution, CheckpointError> {
    let mut r = Reader { inner: blob };
    if &r.bytes::<4>()? != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(CheckpointError::VersionMismatch { found: version });
    }
    let profile = get_profile(&mut r)?;
    let algebra = Algebra::new(profile);

    let n = r.u32()? as usize;
    if n != algebra.profile().degree_cap as usize + 1 {
        return Err(CheckpointError::Corrupt("monomial count table mismatch"));
    }
    for t in 0..n as u32 {
        if r.u32()? as usize != algebra.ids_of_degree(t).count() {
            return Err(CheckpointError::Corrupt("monomial count table mismatch"));
        }
    }

    let max_f = r.u32()? as usize;
    let mut frontier = Vec::with_capacity(max_f);
    for f in 0..max_f {
        let v = r.i64()?;
        frontier.push(if f == 0 { i64::MAX } else { v });
    }
    if frontier.is_empty() {
        frontier.push(i64::MAX);
    }

    let ncells = r.u32()? as usize;
    let mut cells: BTreeMap<(u32, u32), Vec<GenRec>> = BTreeMap::new();
    let mono_count = algebra.len() as u32;
    for _ in 0..ncells {
        let f = r.u32()?;
        let t = r.u32()?;
        let ngens = r.u32()? as usize;
        let mut gens = Vec::with_capacity(ngens);
        for _ in 0..ngens {
            let w = r.i32()?;
            let idx = r.u32()?;
            let id = GenId { f, t, w, idx };
            let nterms = r.u32()? as usize;
            let mut terms = Vec::with_capacity(nterms);
            for _ in 0..nterms {
                let gf = r.u32()?;
                let gt = r.u32()?;
                let gw = r.i32()?;
                let gidx = r.u32()?;
                let mono = r.u32()?;
                let tau = r.u32()?;
                if mono >= mono_count {
                    return Err(CheckpointError::Corrupt("monomial id out of range"));
                }
                terms.push(Term {
                    gen: GenId {
                        f: gf,
                        t: gt,
                        w: gw,
                        idx: gidx,
                    },
                    mono,
                    tau,
                });
            }
            let (dt, dw) = if f == 0 {
                (0, 0)
            } else {
                (t, w as i64)
            };
            gens.push(GenRec {
                id,
                diff: ModuleElement {
                    t: dt,
                    w: dw,
                    terms,
                },
            });
        }
        cells.insert((f, t), gens);
    }
    if &r.bytes::<4>()? != END_MAGIC {
        return Err(CheckpointError::Corrupt("missing end marker"));
    }
    if !cells.contains_key(&(0, 0)) {
        return Err(CheckpointError::Corrupt("missing augmentation generator"));
    }
    Ok(Resolution::from_parts(algebra, cells, frontier))
}
