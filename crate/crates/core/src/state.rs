//! Sparse quantum register states.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest register rank; keys are 64-bit words.
pub const MAX_RANK: usize = 64;
/// Largest rank for which dense `2^R` vectors and matrices are built.
pub const DENSE_RANK_LIMIT: usize = 12;

pub(crate) fn check_rank(rank: usize) -> Result<()> {
    if rank == 0 || rank > MAX_RANK {
        return Err(Error::InvalidRank {
            rank,
            min: 1,
            max: MAX_RANK,
        });
    }
    Ok(())
}

pub(crate) fn key_mask(rank: usize) -> u64 {
    if rank >= 64 {
        u64::MAX
    } else {
        (1u64 << rank) - 1
    }
}

/// A vector in the rank-`R` register Hilbert space, stored as a map from
/// basis key to amplitude. Exact zeros are never stored, so the zero vector
/// is the empty map and is distinct from the void state `|0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    rank: usize,
    amplitudes: BTreeMap<u64, Complex64>,
}

impl RegisterState {
    pub fn zero(rank: usize) -> Result<Self> {
        check_rank(rank)?;
        Ok(RegisterState {
            rank,
            amplitudes: BTreeMap::new(),
        })
    }

    pub fn basis(rank: usize, key: u64) -> Result<Self> {
        let mut s = Self::zero(rank)?;
        s.check_key(key)?;
        s.amplitudes.insert(key, Complex64::new(1.0, 0.0));
        Ok(s)
    }

    /// The all-zeros basis state `|0)`.
    pub fn void(rank: usize) -> Result<Self> {
        Self::basis(rank, 0)
    }

    pub fn from_amplitudes<I>(rank: usize, amps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Complex64)>,
    {
        let mut s = Self::zero(rank)?;
        for (k, a) in amps {
            s.check_key(k)?;
            s.accumulate(k, a);
        }
        Ok(s)
    }

    /// Builds a state without validating keys; used by gate kernels that
    /// only ever rewrite bits below `rank`.
    pub(crate) fn from_map_unchecked(rank: usize, mut amplitudes: BTreeMap<u64, Complex64>) -> Self {
        amplitudes.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        RegisterState { rank, amplitudes }
    }

    fn check_key(&self, key: u64) -> Result<()> {
        if key & !key_mask(self.rank) != 0 {
            return Err(Error::Parse(format!("key {key} does not fit rank {}", self.rank)));
        }
        Ok(())
    }

    fn accumulate(&mut self, key: u64, amp: Complex64) {
        let entry = self.amplitudes.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += amp;
        if *entry == Complex64::new(0.0, 0.0) {
            self.amplitudes.remove(&key);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn amplitude(&self, key: u64) -> Complex64 {
        self.amplitudes.get(&key).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amplitudes.iter().map(|(&k, &a)| (k, a))
    }

    pub fn keys(&self) -> impl Iterator<Item = u64> + '_ {
        self.amplitudes.keys().copied()
    }

    pub fn nnz(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    fn same_rank(&self, other: &RegisterState) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    /// `(self|other) = Σ conj(self_k)·other_k`.
    pub fn inner_product(&self, other: &RegisterState) -> Result<Complex64> {
        self.same_rank(other)?;
        let (small, large, flip) = if self.nnz() <= other.nnz() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in small.iter() {
            if let Some(&b) = large.amplitudes.get(&k) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn add(&self, other: &RegisterState) -> Result<Self> {
        self.same_rank(other)?;
        let mut out = self.clone();
        for (k, a) in other.iter() {
            out.accumulate(k, a);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RegisterState) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let amplitudes = self.amplitudes.iter().map(|(&k, &a)| (k, a * c)).collect();
        Self::from_map_unchecked(self.rank, amplitudes)
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// Drops amplitudes whose modulus is below `threshold`.
    pub fn pruned(&self, threshold: f64) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .filter(|(_, a)| a.norm() >= threshold)
            .map(|(&k, &a)| (k, a))
            .collect();
        Self::from_map_unchecked(self.rank, amplitudes)
    }

    /// Largest amplitude modulus of `self - other`.
    pub fn max_deviation(&self, other: &RegisterState) -> Result<f64> {
        Ok(self
            .sub(other)?
            .amplitudes
            .values()
            .map(|a| a.norm())
            .fold(0.0, f64::max))
    }

    pub fn to_dense(&self) -> Result<DVector<Complex64>> {
        if self.rank > DENSE_RANK_LIMIT {
            return Err(Error::RankTooLarge {
                rank: self.rank,
                limit: DENSE_RANK_LIMIT,
            });
        }
        let mut v = DVector::zeros(1usize << self.rank);
        for (k, a) in self.iter() {
            v[k as usize] = a;
        }
        Ok(v)
    }

    pub fn from_dense(rank: usize, v: &DVector<Complex64>) -> Result<Self> {
        if rank > DENSE_RANK_LIMIT {
            return Err(Error::RankTooLarge {
                rank,
                limit: DENSE_RANK_LIMIT,
            });
        }
        if v.len() != 1usize << rank {
            return Err(Error::RankMismatch {
                left: rank,
                right: v.len().trailing_zeros() as usize,
            });
        }
        Self::from_amplitudes(rank, v.iter().enumerate().map(|(k, &a)| (k as u64, a)))
    }

    pub fn to_document(&self) -> StateDocument {
        StateDocument {
            rank: self.rank,
            amplitudes: self.iter().map(|(k, a)| AmplitudeEntry(k, a)).collect(),
            tail_mass: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("finite amplitudes serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_state()
    }
}

/// Formats with 17 significant digits, enough to round-trip any `f64`.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON number written with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite number {}", self.0)));
        }
        let raw = serde_json::value::RawValue::from_string(format_sig17(self.0)).map_err(S::Error::custom)?;
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Sig17 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Sig17)
    }
}

/// One `[index, re, im]` triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeEntry(pub u64, pub Complex64);

impl Serialize for AmplitudeEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (self.0, Sig17(self.1.re), Sig17(self.1.im)).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AmplitudeEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (k, re, im) = <(u64, f64, f64)>::deserialize(deserializer)?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(D::Error::custom("non-finite amplitude"));
        }
        Ok(AmplitudeEntry(k, Complex64::new(re, im)))
    }
}

/// Serialised register state; `tail_mass` is present for coherent states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub rank: usize,
    pub amplitudes: Vec<AmplitudeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_mass: Option<Sig17>,
}

impl StateDocument {
    pub fn into_state(self) -> Result<RegisterState> {
        RegisterState::from_amplitudes(self.rank, self.amplitudes.into_iter().map(|e| (e.0, e.1)))
    }
}
