//! Integer-valued functions on the vertex set: dimension vectors, stability
//! parameters and characters.
//!
//! All of them are stored in the fixed vertex order of the quiver they belong
//! to, so `values()[k]` is the value at the `k`-th vertex.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// A dimension vector `d`, one nonnegative integer per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DimensionVector(Vec<i64>);

impl DimensionVector {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if let Some((position, &value)) = values.iter().enumerate().find(|(_, v)| **v < 0) {
            return Err(Error::NegativeDimension { position, value });
        }
        Ok(Self(values))
    }

    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// The all-ones ("thin") dimension vector.
    pub fn thin(len: usize) -> Self {
        Self(vec![1; len])
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of all entries, written `|d|`.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    /// Greatest common divisor of the entries (0 for the zero vector).
    pub fn gcd(&self) -> i64 {
        self.0.iter().fold(0, |g, &v| num_integer::gcd(g, v))
    }

    /// Entrywise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other - self`, when `self <= other`.
    pub fn complement_in(&self, other: &Self) -> Option<Self> {
        if !self.le(other) {
            return None;
        }
        Some(Self(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    /// Number of vectors `e` with `0 <= e <= self`, i.e. the product of `d_i + 1`.
    pub fn subvector_count(&self) -> u128 {
        self.0
            .iter()
            .try_fold(1u128, |acc, &v| acc.checked_mul(v as u128 + 1))
            .unwrap_or(u128::MAX)
    }

    /// Iterates over all `e` with `0 <= e <= self` in lexicographic order.
    pub fn subvectors(&self) -> SubVectors {
        SubVectors {
            bound: self.0.clone(),
            next: Some(vec![0; self.0.len()]),
        }
    }

    pub(crate) fn check_on(&self, q: &Quiver) -> Result<()> {
        check_len(q, self.0.len())
    }

    pub(crate) fn from_raw(values: Vec<i64>) -> Self {
        debug_assert!(values.iter().all(|&v| v >= 0));
        Self(values)
    }
}

impl TryFrom<Vec<i64>> for DimensionVector {
    type Error = Error;
    fn try_from(values: Vec<i64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<DimensionVector> for Vec<i64> {
    fn from(d: DimensionVector) -> Self {
        d.0
    }
}

impl Index<usize> for DimensionVector {
    type Output = i64;
    fn index(&self, index: usize) -> &i64 {
        &self.0[index]
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Lexicographic enumeration of the box `0 <= e <= d`.
#[derive(Debug, Clone)]
pub struct SubVectors {
    bound: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl Iterator for SubVectors {
    type Item = DimensionVector;

    fn next(&mut self) -> Option<DimensionVector> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            if succ[k] < self.bound[k] {
                succ[k] += 1;
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(DimensionVector(current))
    }
}

/// A stability parameter `theta`, one integer weight per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StabilityParameter(Vec<i64>);

impl StabilityParameter {
    pub fn new(values: Vec<i64>) -> Self {
        Self(values)
    }

    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    /// `theta(e) = sum_i theta_i e_i`.
    pub fn pairing(&self, e: &DimensionVector) -> i64 {
        dot(&self.0, e.values())
    }

    pub fn scaled(&self, factor: i64) -> Self {
        Self(self.0.iter().map(|v| v * factor).collect())
    }

    pub(crate) fn check_on(&self, q: &Quiver) -> Result<()> {
        check_len(q, self.0.len())
    }

    /// Checks that `theta` lives on `q` and that `theta(d) = 0`.
    pub fn check_against(&self, q: &Quiver, d: &DimensionVector) -> Result<()> {
        self.check_on(q)?;
        d.check_on(q)?;
        match self.pairing(d) {
            0 => Ok(()),
            pairing => Err(Error::PairingNonzero { pairing }),
        }
    }
}

impl Index<usize> for StabilityParameter {
    type Output = i64;
    fn index(&self, index: usize) -> &i64 {
        &self.0[index]
    }
}

impl fmt::Display for StabilityParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// A character `a` of the base-change group with `a(d) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(Vec<i64>);

impl Character {
    pub(crate) fn new(values: Vec<i64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn pairing(&self, e: &DimensionVector) -> i64 {
        dot(&self.0, e.values())
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_len(q: &Quiver, found: usize) -> Result<()> {
    if found == q.vertex_count() {
        Ok(())
    } else {
        Err(Error::VertexMismatch {
            expected: q.vertex_count(),
            found,
        })
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, values: &[i64]) -> fmt::Result {
    write!(f, "(")?;
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, ")")
}
