use std::fmt;

use crate::error::{Error, Result};

/// Occupation numbers of every mode, in mode order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BareState(pub Vec<usize>);

impl BareState {
    pub fn new(occ: &[usize]) -> Self {
        BareState(occ.to_vec())
    }

    pub fn excitations(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn occupation(&self, mode: usize) -> usize {
        self.0[mode]
    }

    /// Compact label, e.g. `101`; comma separated when any occupation exceeds 9.
    pub fn compact(&self) -> String {
        if self.0.iter().all(|&n| n < 10) {
            self.0.iter().map(|n| n.to_string()).collect()
        } else {
            self.0
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Parses `101`, `|101>`, `|101⟩` or `1,0,1`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s
            .trim()
            .trim_start_matches('|')
            .trim_end_matches('>')
            .trim_end_matches('⟩');
        let occ: Option<Vec<usize>> = if t.contains(',') {
            t.split(',').map(|p| p.trim().parse().ok()).collect()
        } else {
            t.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        match occ {
            Some(v) if !v.is_empty() => Ok(BareState(v)),
            _ => Err(Error::UnknownState(s.to_string())),
        }
    }
}

impl serde::Serialize for BareState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.compact())
    }
}

impl fmt::Display for BareState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.compact())
    }
}

/// Mixed-radix product basis; the last mode varies fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BareBasis {
    dims: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl BareBasis {
    pub fn new(dims: &[usize]) -> Self {
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let size = dims.iter().product();
        BareBasis {
            dims: dims.to_vec(),
            strides,
            size,
        }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_modes(&self) -> usize {
        self.dims.len()
    }

    pub fn stride(&self, mode: usize) -> usize {
        self.strides[mode]
    }

    pub fn index_of(&self, state: &BareState) -> Option<usize> {
        if state.0.len() != self.dims.len() {
            return None;
        }
        let mut idx = 0;
        for (k, &n) in state.0.iter().enumerate() {
            if n >= self.dims[k] {
                return None;
            }
            idx += n * self.strides[k];
        }
        Some(idx)
    }

    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.strides[mode]) % self.dims[mode]
    }

    pub fn state(&self, index: usize) -> BareState {
        BareState((0..self.dims.len()).map(|k| self.occupation(index, k)).collect())
    }

    pub fn states(&self) -> Vec<BareState> {
        (0..self.size).map(|i| self.state(i)).collect()
    }

    pub fn excitations(&self, index: usize) -> usize {
        (0..self.dims.len()).map(|k| self.occupation(index, k)).sum()
    }
}
