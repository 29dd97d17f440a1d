//! AIR (adjacent independent row) matrices.
//!
//! An `m x n` AIR matrix is a 0/1 matrix in which any `n` cyclically adjacent
//! rows are linearly independent over every field. It is built by repeatedly
//! tiling the unfilled region with stacked identities, alternating between
//! filling whole rows and whole columns. The block sizes follow the
//! Euclidean remainder sequence of `(n, m - n)`, recorded in [`LambdaChain`].
//!
//! Submatrix naming follows the block layout: the `n x n` identity on top,
//! then for each `i` an *even* submatrix `I_{λ_{2i} x β_{2i}λ_{2i}}` (a row of
//! identities) and an *odd* submatrix `I_{β_{2i+1}λ_{2i+1} x λ_{2i+1}}` (a
//! column of identities). Together they tile the whole matrix.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;

/// The Euclidean recursion `λ_{i-1} = β_i λ_i + λ_{i+1}` started from
/// `λ_{-1} = n`, `λ_0 = m - n`, and stopped at the first zero remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaChain {
    m: usize,
    n: usize,
    /// `λ_{-1}, λ_0, …, λ_l`.
    lambdas: Vec<usize>,
    /// `β_0, …, β_l`.
    betas: Vec<usize>,
}

impl LambdaChain {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of the last nonzero λ. `-1` when `m == n`, where `λ_0 = 0`.
    pub fn l(&self) -> isize {
        self.lambdas.len() as isize - 2
    }

    /// `λ_i` for `i >= -1`; zero past the end of the chain.
    pub fn lambda(&self, i: isize) -> usize {
        assert!(i >= -1, "λ index {i}");
        if i == 0 && self.lambdas.len() == 1 {
            return 0;
        }
        self.lambdas.get((i + 1) as usize).copied().unwrap_or(0)
    }

    /// `β_i` for `i >= 0`; zero past the end of the chain.
    pub fn beta(&self, i: isize) -> usize {
        assert!(i >= 0, "β index {i}");
        self.betas.get(i as usize).copied().unwrap_or(0)
    }

    /// `λ_{-1}, …, λ_l` as stored.
    pub fn lambdas(&self) -> &[usize] {
        &self.lambdas
    }

    pub fn betas(&self) -> &[usize] {
        &self.betas
    }

    /// `λ_l`, which equals `gcd(m, n)`.
    pub fn gcd(&self) -> usize {
        *self.lambdas.last().expect("chain is never empty")
    }

    /// `⌊l/2⌋`, with `l = -1` mapping to `-1`.
    pub fn half_floor(&self) -> isize {
        self.l().div_euclid(2)
    }

    /// `⌈l/2⌉`, with `l = -1` mapping to `0`.
    pub fn half_ceil(&self) -> isize {
        (self.l() + 1).div_euclid(2)
    }
}

/// Runs the λ/β recursion for an `m x n` AIR matrix.
pub fn euclid_chain(m: usize, n: usize) -> Result<LambdaChain> {
    if n == 0 || m < n {
        return Err(Error::InvalidDimensions { m, n });
    }
    let mut lambdas = vec![n];
    let mut betas = Vec::new();
    if m > n {
        lambdas.push(m - n);
        let (mut prev, mut cur) = (n, m - n);
        loop {
            betas.push(prev / cur);
            let next = prev % cur;
            if next == 0 {
                break;
            }
            lambdas.push(next);
            prev = cur;
            cur = next;
        }
    }
    Ok(LambdaChain { m, n, lambdas, betas })
}

/// A block of the AIR layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Submatrix {
    /// The `n x n` identity occupying the first `n` rows.
    TopIdentity,
    /// `I_{λ_{2i} x β_{2i}λ_{2i}}`: `β_{2i}` identities side by side.
    Even(usize),
    /// `I_{β_{2i+1}λ_{2i+1} x λ_{2i+1}}`: `β_{2i+1}` identities stacked.
    Odd(usize),
}

impl Submatrix {
    /// The chain subscript whose λ sizes the identities of this block.
    pub fn chain_index(self) -> Option<usize> {
        match self {
            Submatrix::TopIdentity => None,
            Submatrix::Even(i) => Some(2 * i),
            Submatrix::Odd(i) => Some(2 * i + 1),
        }
    }
}

impl fmt::Display for Submatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Submatrix::TopIdentity => write!(f, "I_n"),
            Submatrix::Even(i) => write!(f, "even({i})"),
            Submatrix::Odd(i) => write!(f, "odd({i})"),
        }
    }
}

/// Position of a matrix entry within the block layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutCell {
    pub submatrix: Submatrix,
    /// Row index inside the submatrix, by the residue rule.
    pub j_r: usize,
    /// Column index inside the submatrix, by the residue rule.
    pub k_r: usize,
}

/// A half-open integer interval `[start, end)`. Empty intervals are values too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    /// `[start, end)`, collapsed to an empty interval at `start` when
    /// `end <= start`.
    pub fn new(start: i64, end: i64) -> Self {
        let start = start.max(0) as usize;
        let end = (end.max(0) as usize).max(start);
        Interval { start, end }
    }

    /// The inclusive interval `[first : last]`.
    pub fn inclusive(first: usize, last: usize) -> Self {
        Interval {
            start: first,
            end: last + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn contains(&self, x: usize) -> bool {
        self.start <= x && x < self.end
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "[{}:{}]", self.start, self.end - 1)
        }
    }
}

/// Row and column bands of the AIR layout.
///
/// `r[i]` are row bands, `c[i]` the column span of even submatrix `i`,
/// `c_tilde[i]` is `c[i]` shifted down by `λ_0`, and each `c_tilde[i]` splits
/// into `d_tilde[i]` followed by `e_tilde[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    pub r: Vec<Interval>,
    pub c: Vec<Interval>,
    pub c_tilde: Vec<Interval>,
    pub d_tilde: Vec<Interval>,
    pub e_tilde: Vec<Interval>,
}

/// Computes the interval partitions of a chain.
pub fn partitions(chain: &LambdaChain) -> IntervalPartition {
    let (m, n) = (chain.m() as i64, chain.n() as i64);
    let lam = |i: isize| -> i64 {
        if i == -2 {
            m
        } else {
            chain.lambda(i) as i64
        }
    };
    let bet = |i: isize| chain.beta(i) as i64;

    if chain.l() < 0 {
        // m == n: nothing below the top identity, λ_0 = 0.
        let all_rows = Interval::new(0, m);
        return IntervalPartition {
            r: vec![all_rows],
            c: vec![Interval::new(0, n)],
            c_tilde: vec![all_rows],
            d_tilde: vec![Interval::new(0, 0)],
            e_tilde: vec![all_rows],
        };
    }

    let r = (0..=chain.half_floor() + 1)
        .map(|i| Interval::new(m - lam(2 * i - 2), m - lam(2 * i)))
        .collect();
    let mut c = Vec::new();
    let mut c_tilde = Vec::new();
    let mut d_tilde = Vec::new();
    let mut e_tilde = Vec::new();
    for i in 0..=chain.half_ceil() {
        c.push(Interval::new(n - lam(2 * i - 1), n - lam(2 * i + 1)));
        let ct = Interval::new(m - lam(2 * i - 1), m - lam(2 * i + 1));
        let split = (m - lam(2 * i - 1) + (bet(2 * i) - 1) * lam(2 * i)).clamp(ct.start as i64, ct.end as i64);
        c_tilde.push(ct);
        d_tilde.push(Interval::new(ct.start as i64, split));
        e_tilde.push(Interval::new(split, ct.end as i64));
    }
    IntervalPartition {
        r,
        c,
        c_tilde,
        d_tilde,
        e_tilde,
    }
}

/// An AIR matrix together with its chain. Stored as sorted row and column
/// supports; [`AirMatrix::to_matrix`] gives the dense form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AirMatrix {
    chain: LambdaChain,
    row_ptr: Vec<usize>,
    row_cols: Vec<u32>,
    col_ptr: Vec<usize>,
    col_rows: Vec<u32>,
}

/// Builds the `m x n` AIR matrix.
pub fn build_air(m: usize, n: usize) -> Result<AirMatrix> {
    let chain = euclid_chain(m, n)?;
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); m];
    // Unfilled region: rows [r0, r0 + mm), columns [c0, c0 + nn).
    let (mut r0, mut c0, mut mm, mut nn) = (0usize, 0usize, m, n);
    loop {
        // Fill whole rows with a column of identities.
        let (q, r) = (mm / nn, mm % nn);
        for s in 0..q {
            for i in 0..nn {
                rows[r0 + s * nn + i].push((c0 + i) as u32);
            }
        }
        if r == 0 {
            break;
        }
        r0 += q * nn;
        mm = r;
        // Fill whole columns with a row of identities.
        let (q, r) = (nn / mm, nn % mm);
        for i in 0..mm {
            for s in 0..q {
                rows[r0 + i].push((c0 + s * mm + i) as u32);
            }
        }
        if r == 0 {
            break;
        }
        c0 += q * mm;
        nn = r;
    }
    Ok(AirMatrix::from_row_supports(chain, rows))
}

impl AirMatrix {
    fn from_row_supports(chain: LambdaChain, rows: Vec<Vec<u32>>) -> Self {
        let n = chain.n();
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        row_ptr.push(0);
        let mut row_cols = Vec::new();
        let mut col_cnt = vec![0usize; n];
        for r in &rows {
            debug_assert!(r.windows(2).all(|w| w[0] < w[1]));
            row_cols.extend_from_slice(r);
            row_ptr.push(row_cols.len());
            for &c in r {
                col_cnt[c as usize] += 1;
            }
        }
        let mut col_ptr = vec![0usize; n + 1];
        for c in 0..n {
            col_ptr[c + 1] = col_ptr[c] + col_cnt[c];
        }
        let mut fill = col_ptr.clone();
        let mut col_rows = vec![0u32; row_cols.len()];
        for (j, r) in rows.iter().enumerate() {
            for &c in r {
                col_rows[fill[c as usize]] = j as u32;
                fill[c as usize] += 1;
            }
        }
        AirMatrix {
            chain,
            row_ptr,
            row_cols,
            col_ptr,
            col_rows,
        }
    }

    pub fn m(&self) -> usize {
        self.chain.m()
    }

    pub fn n(&self) -> usize {
        self.chain.n()
    }

    pub fn chain(&self) -> &LambdaChain {
        &self.chain
    }

    pub fn nnz(&self) -> usize {
        self.row_cols.len()
    }

    /// Columns holding a 1 in row `j`, ascending.
    pub fn row_support(&self, j: usize) -> &[u32] {
        &self.row_cols[self.row_ptr[j]..self.row_ptr[j + 1]]
    }

    /// Rows holding a 1 in column `k`, ascending.
    pub fn col_support(&self, k: usize) -> &[u32] {
        &self.col_rows[self.col_ptr[k]..self.col_ptr[k + 1]]
    }

    pub fn get(&self, j: usize, k: usize) -> bool {
        self.row_support(j).binary_search(&(k as u32)).is_ok()
    }

    /// Dense copy with entries read in `field`.
    pub fn to_matrix(&self, field: PrimeField) -> Matrix {
        let mut mat = Matrix::zeros(field, self.m(), self.n());
        for j in 0..self.m() {
            for &k in self.row_support(j) {
                mat.set(j, k as usize, 1);
            }
        }
        mat
    }

    /// Row and column ranges covered by a submatrix, or `None` if the layout
    /// has no such block.
    pub fn region(&self, sub: Submatrix) -> Option<(Range<usize>, Range<usize>)> {
        let ch = &self.chain;
        let (m, n) = (self.m(), self.n());
        let l = ch.l();
        match sub {
            Submatrix::TopIdentity => Some((0..n, 0..n)),
            Submatrix::Even(i) => {
                let e = 2 * i as isize;
                if e > l || ch.beta(e) == 0 {
                    return None;
                }
                Some((m - ch.lambda(e)..m, n - ch.lambda(e - 1)..n - ch.lambda(e + 1)))
            }
            Submatrix::Odd(i) => {
                let o = 2 * i as isize + 1;
                if o > l {
                    return None;
                }
                Some((m - ch.lambda(o - 1)..m - ch.lambda(o + 1), n - ch.lambda(o)..n))
            }
        }
    }

    /// Every submatrix present in the layout, top to bottom.
    pub fn submatrices(&self) -> Vec<Submatrix> {
        let mut out = vec![Submatrix::TopIdentity];
        for i in 0..=(self.chain.l().max(0) as usize) / 2 {
            for s in [Submatrix::Even(i), Submatrix::Odd(i)] {
                if self.region(s).is_some() {
                    out.push(s);
                }
            }
        }
        out
    }

    /// Finds the submatrix containing entry `(j, k)` and the entry's indices
    /// inside it.
    pub fn locate(&self, j: usize, k: usize) -> Result<LayoutCell> {
        let (m, n) = (self.m(), self.n());
        if j >= m || k >= n {
            return Err(Error::IndexOutOfRange {
                row: j,
                col: k,
                rows: m,
                cols: n,
            });
        }
        let covers = |s: Submatrix| {
            self.region(s)
                .is_some_and(|(rows, cols)| rows.contains(&j) && cols.contains(&k))
        };
        let sub = if j < n {
            Submatrix::TopIdentity
        } else {
            (0..=(self.chain.l().max(0) as usize) / 2)
                .flat_map(|i| [Submatrix::Even(i), Submatrix::Odd(i)])
                .find(|&s| covers(s))
                .ok_or_else(|| Error::Internal(format!("({j}, {k}) is not covered by the AIR layout")))?
        };
        let ch = &self.chain;
        let (j_r, k_r) = match sub {
            Submatrix::TopIdentity => (j, k),
            Submatrix::Even(i) => {
                let e = 2 * i as isize;
                (residue(j, m - ch.lambda(e)), residue(k, n - ch.lambda(e - 1)))
            }
            Submatrix::Odd(i) => {
                let o = 2 * i as isize + 1;
                (residue(j, m - ch.lambda(o - 1)), residue(k, n - ch.lambda(o)))
            }
        };
        Ok(LayoutCell {
            submatrix: sub,
            j_r,
            k_r,
        })
    }

    /// The text form: `"m n"` on the first line, then one line of `0`/`1`
    /// characters per row.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut out = String::with_capacity(self.m() * (n + 1) + 16);
        out.push_str(&format!("{} {}\n", self.m(), n));
        let mut line = vec![b'0'; n];
        for j in 0..self.m() {
            line.fill(b'0');
            for &k in self.row_support(j) {
                line[k as usize] = b'1';
            }
            out.push_str(std::str::from_utf8(&line).expect("ascii"));
            out.push('\n');
        }
        out
    }

    /// One CSV row of `0`/`1` values per matrix row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut line = vec!["0"; self.n()];
        for j in 0..self.m() {
            line.fill("0");
            for &k in self.row_support(j) {
                line[k as usize] = "1";
            }
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses the text form and checks it is exactly the AIR matrix of its
    /// declared size.
    pub fn parse_text(text: &str) -> Result<AirMatrix> {
        let parsed = parse_matrix_text(text)?;
        let air = build_air(parsed.rows(), parsed.cols())?;
        if air.to_matrix(PrimeField::GF2) != parsed {
            return Err(Error::Parse {
                line: 1,
                reason: format!("matrix is not the {} x {} AIR matrix", parsed.rows(), parsed.cols()),
            });
        }
        Ok(air)
    }
}

/// `x mod modulus`, with the convention `x mod 0 = x`.
pub fn residue(x: usize, modulus: usize) -> usize {
    if modulus == 0 {
        x
    } else {
        x % modulus
    }
}

/// Parses any 0/1 matrix in the text form into a GF(2) matrix.
pub fn parse_matrix_text(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing header".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: 1,
            reason: format!("bad header: {e}"),
        })?;
    let [m, n] = dims[..] else {
        return Err(Error::Parse {
            line: 1,
            reason: "header must be \"m n\"".into(),
        });
    };
    let mut mat = Matrix::zeros(PrimeField::GF2, m, n);
    let mut count = 0;
    for (idx, line) in lines {
        if count == m {
            if line.is_empty() {
                continue;
            }
            return Err(Error::Parse {
                line: idx + 1,
                reason: "more rows than declared".into(),
            });
        }
        if line.len() != n {
            return Err(Error::Parse {
                line: idx + 1,
                reason: format!("expected {n} characters, found {}", line.len()),
            });
        }
        for (k, ch) in line.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => mat.set(count, k, 1),
                _ => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        reason: format!("unexpected character {:?}", ch as char),
                    })
                }
            }
        }
        count += 1;
    }
    if count != m {
        return Err(Error::Parse {
            line: count + 2,
            reason: format!("expected {m} rows, found {count}"),
        });
    }
    Ok(mat)
}
