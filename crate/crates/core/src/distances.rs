//! Distances between the 1s of an AIR matrix.
//!
//! Each distance has a closed form in terms of the λ/β chain and a scan
//! counterpart that reads the matrix directly. The scans are exported so
//! callers can cross-check the closed forms on any matrix they build.

use crate::air::{residue, AirMatrix, Submatrix};
use crate::error::{Error, Result};

/// Distances attached to column `k`: the down-distance, the right-distance
/// `μ` at the bottom 1 of the column, and the offsets of the 1s found below
/// that point in column `k + μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile {
    pub k: usize,
    pub d_down: usize,
    pub mu: usize,
    /// Strictly increasing.
    pub taus: Vec<usize>,
    pub p: usize,
}

fn check_col(air: &AirMatrix, k: usize) -> Result<()> {
    if k >= air.n() {
        return Err(Error::IndexOutOfRange {
            row: 0,
            col: k,
            rows: air.m(),
            cols: air.n(),
        });
    }
    Ok(())
}

fn check_one(air: &AirMatrix, j: usize, k: usize) -> Result<()> {
    if j >= air.m() || k >= air.n() {
        return Err(Error::IndexOutOfRange {
            row: j,
            col: k,
            rows: air.m(),
            cols: air.n(),
        });
    }
    if !air.get(j, k) {
        return Err(Error::Precondition(format!("entry ({j}, {k}) is 0")));
    }
    Ok(())
}

/// Distance from `(k, k)` to the lowest 1 in column `k`.
///
/// A square AIR matrix is the identity, which has no such 1; that case is a
/// precondition error.
pub fn down_distance(air: &AirMatrix, k: usize) -> Result<usize> {
    check_col(air, k)?;
    let ch = air.chain();
    if ch.l() < 0 {
        return Err(Error::Precondition("a square AIR matrix has no down-distance".into()));
    }
    let (m, n) = (air.m(), air.n());
    let band = (0..=ch.half_ceil())
        .find(|&i| n - ch.lambda(2 * i - 1) <= k && k < n - ch.lambda(2 * i + 1))
        .ok_or_else(|| Error::Internal(format!("column {k} lies in no column band")))?;
    let width = ch.lambda(2 * band);
    if width == 0 {
        return Ok(m - n);
    }
    let c = residue(k, n - ch.lambda(2 * band - 1)) / width;
    Ok(m - n + ch.lambda(2 * band + 1) + (ch.beta(2 * band) - 1 - c) * width)
}

/// Distance from `(j, k)` up to the previous 1 in column `k`. Needs
/// `L(j, k) = 1` and `j >= n`.
pub fn up_distance(air: &AirMatrix, j: usize, k: usize) -> Result<usize> {
    check_one(air, j, k)?;
    if j < air.n() {
        return Err(Error::Precondition(format!("row {j} lies in the top identity")));
    }
    let ch = air.chain();
    let cell = air.locate(j, k)?;
    match cell.submatrix {
        Submatrix::Odd(i) => Ok(ch.lambda(2 * i as isize + 1)),
        Submatrix::Even(i) => {
            let e = 2 * i as isize;
            let c = cell.k_r / ch.lambda(e);
            Ok(ch.lambda(e - 1) - c * ch.lambda(e))
        }
        Submatrix::TopIdentity => Err(Error::Internal(format!("row {j} >= n located in the top identity"))),
    }
}

/// Distance from `(j, k)` to the next 1 on its right, for entries of an
/// even submatrix.
///
/// Entries of the last identity block of an even submatrix reach into the
/// odd submatrix to their right when one exists; otherwise the result is
/// [`Error::NoRightNeighbor`].
pub fn right_distance(air: &AirMatrix, j: usize, k: usize) -> Result<usize> {
    check_one(air, j, k)?;
    let ch = air.chain();
    let cell = air.locate(j, k)?;
    let Submatrix::Even(i) = cell.submatrix else {
        return Err(Error::NoRightNeighbor { row: j, col: k });
    };
    let e = 2 * i as isize;
    let block = ch.lambda(e);
    if cell.k_r < (ch.beta(e) - 1) * block {
        return Ok(block);
    }
    let next = ch.lambda(e + 1);
    if next == 0 {
        return Err(Error::NoRightNeighbor { row: j, col: k });
    }
    Ok(block - (cell.j_r / next) * next)
}

/// The full distance profile of column `k`, for `k < n - gcd(m, n)`.
pub fn tau_distances(air: &AirMatrix, k: usize) -> Result<DistanceProfile> {
    check_col(air, k)?;
    let limit = air.n() - air.chain().gcd();
    if k >= limit {
        return Err(Error::Precondition(format!("column {k} is outside [0, {limit})")));
    }
    let d_down = down_distance(air, k)?;
    let pivot_row = k + d_down;
    let mu = right_distance(air, pivot_row, k)?;
    let col = k + mu;
    let in_even = matches!(air.locate(pivot_row, col)?.submatrix, Submatrix::Even(_));
    let taus: Vec<usize> = if in_even {
        Vec::new()
    } else {
        air.col_support(col)
            .iter()
            .map(|&r| r as usize)
            .filter(|&r| r > pivot_row)
            .map(|r| r - pivot_row)
            .collect()
    };
    Ok(DistanceProfile {
        k,
        d_down,
        mu,
        p: taus.len(),
        taus,
    })
}

/// Scan version of [`down_distance`]. Returns 0 when column `k` has a single 1.
pub fn down_distance_scan(air: &AirMatrix, k: usize) -> Result<usize> {
    check_col(air, k)?;
    let last = *air.col_support(k).last().expect("every column has a 1") as usize;
    Ok(last - k)
}

/// Scan version of [`up_distance`].
pub fn up_distance_scan(air: &AirMatrix, j: usize, k: usize) -> Result<usize> {
    check_one(air, j, k)?;
    let support = air.col_support(k);
    let pos = support.partition_point(|&r| (r as usize) < j);
    if pos == 0 {
        return Err(Error::Precondition(format!("({j}, {k}) is the topmost 1 of its column")));
    }
    Ok(j - support[pos - 1] as usize)
}

/// Scan version of [`right_distance`], defined for any 1 in the matrix.
pub fn right_distance_scan(air: &AirMatrix, j: usize, k: usize) -> Result<usize> {
    check_one(air, j, k)?;
    air.row_support(j)
        .iter()
        .map(|&c| c as usize)
        .find(|&c| c > k)
        .map(|c| c - k)
        .ok_or(Error::NoRightNeighbor { row: j, col: k })
}

/// Scan version of [`tau_distances`], built only from the other scans.
pub fn tau_distances_scan(air: &AirMatrix, k: usize) -> Result<DistanceProfile> {
    let d_down = down_distance_scan(air, k)?;
    let pivot_row = k + d_down;
    let mu = right_distance_scan(air, pivot_row, k)?;
    let taus: Vec<usize> = air
        .col_support(k + mu)
        .iter()
        .map(|&r| r as usize)
        .filter(|&r| r > pivot_row)
        .map(|r| r - pivot_row)
        .collect();
    Ok(DistanceProfile {
        k,
        d_down,
        mu,
        p: taus.len(),
        taus,
    })
}
