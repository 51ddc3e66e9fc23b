use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite strict partial order on `0..size`, stored as a boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPoset")]
pub struct Poset {
    size: usize,
    lt: Vec<Vec<bool>>,
}

#[derive(Deserialize)]
struct RawPoset {
    size: usize,
    lt: Vec<Vec<bool>>,
}

impl TryFrom<RawPoset> for Poset {
    type Error = Error;

    fn try_from(raw: RawPoset) -> Result<Self> {
        Poset::new(raw.size, raw.lt)
    }
}

/// Largest poset accepted by the constructors that enumerate subsets.
pub const MAX_POINTS: usize = 16;

impl Poset {
    /// Validates shape, irreflexivity and transitivity.
    pub fn new(size: usize, lt: Vec<Vec<bool>>) -> Result<Self> {
        if lt.len() != size || lt.iter().any(|row| row.len() != size) {
            return Err(Error::InvalidData(format!(
                "order matrix must be {size}×{size}"
            )));
        }
        for i in 0..size {
            if lt[i][i] {
                return Err(Error::InvalidData(format!(
                    "order is not irreflexive at {i}"
                )));
            }
            for j in 0..size {
                for k in 0..size {
                    if lt[i][j] && lt[j][k] && !lt[i][k] {
                        return Err(Error::InvalidData(format!(
                            "order is not transitive: {i}<{j}<{k} but not {i}<{k}"
                        )));
                    }
                }
            }
        }
        Ok(Poset { size, lt })
    }

    pub fn from_fn(size: usize, lt: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let m = (0..size)
            .map(|i| (0..size).map(|j| lt(i, j)).collect())
            .collect();
        Poset::new(size, m)
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Poset {
        Poset::from_fn(n, |i, j| i < j).expect("chain is a strict order")
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_fn(n, |_, _| false).expect("empty relation is a strict order")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.lt[i][j]
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        i == j || self.lt[i][j]
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.lt
    }

    /// Bitmask of the points `≥ i`.
    pub(crate) fn up_mask(&self, i: usize) -> u32 {
        (0..self.size)
            .filter(|&j| self.le(i, j))
            .fold(0, |m, j| m | 1 << j)
    }

    /// Bitmask of the points `≤ i`.
    pub(crate) fn down_mask(&self, i: usize) -> u32 {
        (0..self.size)
            .filter(|&j| self.le(j, i))
            .fold(0, |m, j| m | 1 << j)
    }

    pub(crate) fn check_points(&self) -> Result<()> {
        if self.size > MAX_POINTS {
            return Err(Error::cap(
                "poset points",
                MAX_POINTS as u64,
                self.size as u64,
            ));
        }
        Ok(())
    }

    /// Whether the bitmask `set` is closed upwards.
    pub(crate) fn is_up_set(&self, set: u32) -> bool {
        (0..self.size)
            .filter(|&i| set >> i & 1 == 1)
            .all(|i| self.up_mask(i) & !set == 0)
    }
}

/// `2^n` with the top removed: points are the bitmasks `0..2^n - 1` ordered
/// by inclusion.
pub fn lev_poset(n: usize) -> Result<Poset> {
    if n == 0 {
        return Err(Error::Precondition("lev_poset needs n ≥ 1".into()));
    }
    if n > 4 {
        return Err(Error::cap("lev_poset exponent", 4, n as u64));
    }
    let points = (1usize << n) - 1;
    Poset::from_fn(points, |p, q| p != q && p & q == p)
}
