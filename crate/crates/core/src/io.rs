//! JSON file formats for matrices and states.
//!
//! Matrices: `{"rows": R, "cols": C, "entries": [{"re": x, "im": y}, ...]}`
//! in row-major order. States: `{"kind": "sym" | "full", "n": N, "d": D,
//! "amplitudes": [{"occ" | "idx": [...], "re": x, "im": y}, ...]}` with zero
//! amplitudes omitted. Floats are written in shortest round-trip form, so
//! values survive a write/read cycle bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::symspace::{FullState, SymState};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    re: f64,
    im: f64,
}

impl From<C64> for Entry {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> Self {
        C64::new(e.re, e.im)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Entry>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile {
            rows: self.rows(),
            cols: self.cols(),
            entries: self.as_slice().iter().map(|&z| z.into()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = MatrixFile::deserialize(d)?;
        CMatrix::new(f.rows, f.cols, f.entries.into_iter().map(C64::from).collect()).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AmplitudeEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    occ: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    idx: Option<Vec<usize>>,
    re: f64,
    im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Sym,
    Full,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    kind: Kind,
    n: usize,
    d: usize,
    amplitudes: Vec<AmplitudeEntry>,
}

/// A state in either representation.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Sym(SymState),
    Full(FullState),
}

impl State {
    pub fn n(&self) -> usize {
        match self {
            State::Sym(s) => s.n(),
            State::Full(f) => f.n(),
        }
    }

    pub fn d(&self) -> usize {
        match self {
            State::Sym(s) => s.d(),
            State::Full(f) => f.d(),
        }
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let zero = C64::new(0.0, 0.0);
        let file = match self {
            State::Sym(st) => StateFile {
                kind: Kind::Sym,
                n: st.n(),
                d: st.d(),
                amplitudes: st
                    .basis()
                    .iter()
                    .zip(st.amplitudes())
                    .filter(|(_, &a)| a != zero)
                    .map(|(occ, a)| AmplitudeEntry {
                        occ: Some(occ.to_vec()),
                        idx: None,
                        re: a.re,
                        im: a.im,
                    })
                    .collect(),
            },
            State::Full(f) => StateFile {
                kind: Kind::Full,
                n: f.n(),
                d: f.d(),
                amplitudes: f
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != zero)
                    .map(|(k, a)| AmplitudeEntry {
                        occ: None,
                        idx: Some(f.multi_index(k)),
                        re: a.re,
                        im: a.im,
                    })
                    .collect(),
            },
        };
        file.serialize(s)
    }
}

fn state_from_file(file: StateFile) -> Result<State> {
    let mut seen = std::collections::HashSet::new();
    match file.kind {
        Kind::Sym => {
            let mut pairs = Vec::with_capacity(file.amplitudes.len());
            for e in file.amplitudes {
                let occ = e
                    .occ
                    .ok_or_else(|| Error::Format("sym amplitude without \"occ\"".into()))?;
                if e.idx.is_some() {
                    return Err(Error::Format("sym amplitude with \"idx\"".into()));
                }
                if !seen.insert(occ.clone()) {
                    return Err(Error::Format(format!("repeated occupation {occ:?}")));
                }
                pairs.push((occ, C64::new(e.re, e.im)));
            }
            let s = SymState::from_pairs(file.n, file.d, pairs.iter().map(|(o, a)| (o.as_slice(), *a)))?;
            Ok(State::Sym(s))
        }
        Kind::Full => {
            let mut f = FullState::zeros(file.n, file.d)?;
            for e in file.amplitudes {
                let idx = e
                    .idx
                    .ok_or_else(|| Error::Format("full amplitude without \"idx\"".into()))?;
                if e.occ.is_some() {
                    return Err(Error::Format("full amplitude with \"occ\"".into()));
                }
                let flat = f.flat_index(&idx)?;
                if !seen.insert(vec![flat as u32]) {
                    return Err(Error::Format(format!("repeated index {idx:?}")));
                }
                f.amplitudes_mut()[flat] = C64::new(e.re, e.im);
            }
            if !f.amplitudes().iter().all(|z| z.is_finite()) {
                return Err(Error::NonFinite);
            }
            Ok(State::Full(f))
        }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization")
}

pub fn matrix_from_json(text: &str) -> Result<CMatrix> {
    let m: CMatrix = serde_json::from_str(text).map_err(json_error)?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(m)
}

pub fn state_to_json(s: &State) -> String {
    serde_json::to_string(s).expect("state serialization")
}

pub fn state_from_json(text: &str) -> Result<State> {
    let file: StateFile = serde_json::from_str(text).map_err(json_error)?;
    state_from_file(file)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    matrix_from_json(&read(path)?)
}

pub fn read_state(path: &Path) -> Result<State> {
    state_from_json(&read(path)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}
