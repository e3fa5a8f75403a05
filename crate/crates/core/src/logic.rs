//! Logic functions, classical register indices and bit-sequence maps.
//!
//! Bit strings are written site-0 first: `"1101"` has sites 0, 1 and 3 set
//! and computational index `1 + 2 + 8 = 11`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("invalid bit {other:?} in {s:?}"))),
        })
        .collect()
}

fn write_bits(f: &mut fmt::Formatter<'_>, bits: &[bool]) -> fmt::Result {
    for &b in bits {
        f.write_str(if b { "1" } else { "0" })?;
    }
    Ok(())
}

/// A `{0,1}` value at each of `rank` sites.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogicFunction {
    bits: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryGate {
    And,
    Or,
    Xor,
}

impl LogicFunction {
    pub fn new(bits: Vec<bool>) -> Self {
        LogicFunction { bits }
    }

    pub fn yes(rank: usize) -> Self {
        LogicFunction { bits: vec![true; rank] }
    }

    pub fn no(rank: usize) -> Self {
        LogicFunction {
            bits: vec![false; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn negation(&self) -> Self {
        LogicFunction {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn combine(&self, gate: BinaryGate, other: &LogicFunction) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let op: fn(bool, bool) -> bool = match gate {
            BinaryGate::And => |a, b| a && b,
            BinaryGate::Or => |a, b| a || b,
            BinaryGate::Xor => |a, b| a ^ b,
        };
        Ok(LogicFunction {
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    /// Number of sites answering "yes".
    pub fn count_yes(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn count_no(&self) -> usize {
        self.rank() - self.count_yes()
    }

    /// Sum over sites of the σ³ expectation `(+1 for yes, -1 for no)`.
    pub fn sigma3_sum(&self) -> i64 {
        self.bits.iter().map(|&b| if b { 1 } else { -1 }).sum()
    }

    pub fn to_index(&self) -> Result<BasisIndex> {
        BasisIndex::from_bits(&self.bits)
    }
}

impl FromStr for LogicFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_bits(s).map(LogicFunction::new)
    }
}

impl fmt::Display for LogicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bits(f, &self.bits)
    }
}

/// Integer key of a register basis state, `Σ i_n 2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex(pub u64);

impl BasisIndex {
    pub const MAX_RANK: usize = 64;

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.len() > Self::MAX_RANK {
            return Err(Error::InvalidRank {
                rank: bits.len(),
                min: 0,
                max: Self::MAX_RANK,
            });
        }
        Ok(BasisIndex(computational_map(bits)))
    }

    pub fn bits(self, rank: usize) -> Vec<bool> {
        (0..rank).map(|n| self.bit(n)).collect()
    }

    pub fn bit(self, site: usize) -> bool {
        site < 64 && (self.0 >> site) & 1 == 1
    }
}

/// `Σ bits[n]·2^n`. Sequences longer than 64 sites must have zeros beyond
/// site 63 to fit; callers go through [`BasisIndex::from_bits`] for that check.
pub fn computational_map(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold(0u64, |acc, (n, _)| acc | (1u64 << n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceClass {
    FiniteCountable,
    RecurringSequence,
}

impl fmt::Display for SequenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequenceClass::FiniteCountable => "FiniteCountable",
            SequenceClass::RecurringSequence => "RecurringSequence",
        })
    }
}

/// An infinite bit sequence `prefix, period, period, ...`.
///
/// An all-zero period is normalised away, so a finite countable sequence
/// always has an empty period.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicSequence {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl EventuallyPeriodicSequence {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Self {
        let period = if period.iter().any(|&b| b) { period } else { Vec::new() };
        EventuallyPeriodicSequence { prefix, period }
    }

    pub fn finite(prefix: Vec<bool>) -> Self {
        Self::new(prefix, Vec::new())
    }

    pub fn parse(prefix: &str, period: &str) -> Result<Self> {
        Ok(Self::new(parse_bits(prefix)?, parse_bits(period)?))
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn classify(&self) -> SequenceClass {
        if self.period.is_empty() {
            SequenceClass::FiniteCountable
        } else {
            SequenceClass::RecurringSequence
        }
    }

    pub fn computational_map(&self) -> Result<BasisIndex> {
        if !self.period.is_empty() {
            return Err(Error::NotFiniteCountable);
        }
        let last_set = self.prefix.iter().rposition(|&b| b).map_or(0, |p| p + 1);
        BasisIndex::from_bits(&self.prefix[..last_set])
    }

    /// `i_0 + i_1/2 + i_2/4 + ...` summed exactly; the recurring tail is a
    /// geometric series.
    pub fn continuum_map(&self) -> BigRational {
        let two = BigInt::from(2);
        let mut value = BigRational::zero();
        let mut weight = BigRational::one();
        let half = BigRational::new(BigInt::one(), two.clone());
        for &b in &self.prefix {
            if b {
                value += &weight;
            }
            weight *= &half;
        }
        if self.period.is_empty() {
            return value;
        }
        // One period contributes Σ q_j 2^{-j}; repeats scale by 2^{-P}.
        let mut block = BigRational::zero();
        let mut w = BigRational::one();
        for &b in &self.period {
            if b {
                block += &w;
            }
            w *= &half;
        }
        let ratio = BigRational::one() - w;
        value + weight * block / ratio
    }

    /// [`continuum_map`](Self::continuum_map) rounded to the nearest `f64`.
    pub fn continuum_value(&self) -> f64 {
        self.continuum_map().to_f64().expect("value lies in [0, 2]")
    }
}

impl fmt::Display for EventuallyPeriodicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bits(f, &self.prefix)?;
        if self.period.is_empty() {
            f.write_str("(0)")
        } else {
            f.write_str("(")?;
            write_bits(f, &self.period)?;
            f.write_str(")")
        }
    }
}

pub const SEPARABILITY_TOL: f64 = 1e-12;

/// Rank-2 separability: `c00·c11 = c10·c01`.
pub fn separability_check(c00: Complex64, c01: Complex64, c10: Complex64, c11: Complex64) -> bool {
    separability_check_tol(c00, c01, c10, c11, SEPARABILITY_TOL)
}

pub fn separability_check_tol(c00: Complex64, c01: Complex64, c10: Complex64, c11: Complex64, tol: f64) -> bool {
    (c00 * c11 - c10 * c01).norm() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lf(s: &str) -> LogicFunction {
        s.parse().unwrap()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn negation_examples() {
        assert_eq!(lf("1010").negation(), lf("0101"));
        assert_eq!(LogicFunction::yes(4).negation(), LogicFunction::no(4));
        assert_eq!(LogicFunction::no(3).negation(), LogicFunction::yes(3));
    }

    #[test]
    fn binary_gate_examples() {
        assert_eq!(lf("1100").combine(BinaryGate::Xor, &lf("1010")).unwrap(), lf("0110"));
        assert_eq!(lf("1100").combine(BinaryGate::And, &lf("1010")).unwrap(), lf("1000"));
        let f = lf("10110");
        assert_eq!(f.combine(BinaryGate::Or, &LogicFunction::no(5)).unwrap(), f);
        assert_eq!(
            f.combine(BinaryGate::And, &lf("10")),
            Err(Error::RankMismatch { left: 5, right: 2 })
        );
    }

    #[test]
    fn counting() {
        let f = lf("1101");
        assert_eq!((f.count_yes(), f.count_no()), (3, 1));
        assert_eq!(f.sigma3_sum(), 2);
        assert_eq!(
            (LogicFunction::yes(5).count_yes(), LogicFunction::yes(5).count_no()),
            (5, 0)
        );
        assert_eq!(
            (LogicFunction::no(5).count_yes(), LogicFunction::no(5).count_no()),
            (0, 5)
        );
    }

    #[test]
    fn computational_map_examples() {
        let s = EventuallyPeriodicSequence::parse("1101000", "").unwrap();
        assert_eq!(s.computational_map().unwrap(), BasisIndex(11));
        assert_eq!(
            EventuallyPeriodicSequence::finite(vec![]).computational_map().unwrap(),
            BasisIndex(0)
        );
        assert_eq!(lf("111").to_index().unwrap(), BasisIndex(7));
        let rec = EventuallyPeriodicSequence::parse("", "10").unwrap();
        assert_eq!(rec.computational_map(), Err(Error::NotFiniteCountable));
    }

    #[test]
    fn long_zero_padded_prefix_still_maps() {
        let mut bits = vec![true, false, true];
        bits.extend(std::iter::repeat_n(false, 100));
        let s = EventuallyPeriodicSequence::finite(bits);
        assert_eq!(s.computational_map().unwrap(), BasisIndex(5));
    }

    #[test]
    fn continuum_map_examples() {
        let one = EventuallyPeriodicSequence::parse("1", "").unwrap();
        assert_eq!(one.continuum_map(), ratio(1, 1));
        let recurring = EventuallyPeriodicSequence::parse("0", "1").unwrap();
        assert_eq!(recurring.continuum_map(), ratio(1, 1));
        let full = EventuallyPeriodicSequence::parse("", "1").unwrap();
        assert_eq!(full.continuum_map(), ratio(2, 1));
        let alt = EventuallyPeriodicSequence::parse("", "10").unwrap();
        assert_eq!(alt.continuum_map(), ratio(4, 3));
        let void = EventuallyPeriodicSequence::parse("000", "0").unwrap();
        assert_eq!(void.continuum_map(), ratio(0, 1));
    }

    #[test]
    fn classification() {
        let s = EventuallyPeriodicSequence::parse("1101", "").unwrap();
        assert_eq!(s.classify(), SequenceClass::FiniteCountable);
        let s = EventuallyPeriodicSequence::parse("", "10").unwrap();
        assert_eq!(s.classify(), SequenceClass::RecurringSequence);
        let s = EventuallyPeriodicSequence::parse("1", "0").unwrap();
        assert_eq!(s.classify(), SequenceClass::FiniteCountable);
        assert!(s.period().is_empty());
    }

    #[test]
    fn separability_examples() {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!(separability_check(o, z, z, z));
        assert!(!separability_check(h, z, z, h));
    }

    #[test]
    fn index_bits_round_trip() {
        for rank in 0..=12 {
            for k in 0..(1u64 << rank) {
                let bits = BasisIndex(k).bits(rank);
                assert_eq!(BasisIndex::from_bits(&bits).unwrap(), BasisIndex(k));
            }
        }
    }
}
