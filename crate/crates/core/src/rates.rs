//! Problem instances, achievable `(a, b)` pairs and their rates.
//!
//! A pair `(a, b)` is achievable for `(K, D, U)` when
//! `gcd(bK, b(D+1)+a) >= b(U+1)`; it then yields rate `D + 1 + a/b` using
//! the `Kb x (b(D+1)+a)` AIR matrix.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact rate values.
pub type Rate = Ratio<u64>;

/// `K` receivers on a cycle; receiver `t` wants message `t` and is
/// interfered by the `U` messages before it and the `D` after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SniProblem {
    k: usize,
    d: usize,
    u: usize,
}

impl SniProblem {
    /// Requires `U <= D` and `U + D < K`. `U = 0` is accepted; see
    /// [`SniProblem::is_one_sided`].
    pub fn new(k: usize, d: usize, u: usize) -> Result<Self> {
        let bad = |reason| Err(Error::InvalidProblem { k, d, u, reason });
        if u > d {
            return bad("U must not exceed D");
        }
        if u + d >= k {
            return bad("U + D must be less than K");
        }
        Ok(SniProblem { k, d, u })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn u(&self) -> usize {
        self.u
    }

    /// True for `U = 0`, which has no backward interference.
    pub fn is_one_sided(&self) -> bool {
        self.u == 0
    }

    /// Messages interfering at receiver `t`: `t-U, …, t-1, t+1, …, t+D`
    /// (mod K), in that order.
    pub fn interference(&self, t: usize) -> Vec<usize> {
        let k = self.k;
        let before = (1..=self.u).rev().map(move |s| (t + k - s) % k);
        let after = (1..=self.d).map(move |s| (t + s) % k);
        before.chain(after).collect()
    }

    /// Messages known to receiver `t`, ascending.
    pub fn side_info(&self, t: usize) -> Vec<usize> {
        (0..self.k).filter(|&s| self.is_side_info(t, s)).collect()
    }

    /// Whether message `s` is side information at receiver `t`.
    #[inline]
    pub fn is_side_info(&self, t: usize, s: usize) -> bool {
        // Forward offset of s from t, mod K: the window [K-U, K) ∪ [0, D] is excluded.
        let off = (s + self.k - t % self.k) % self.k;
        off > self.d && off < self.k - self.u
    }
}

impl fmt::Display for SniProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(K={}, D={}, U={})", self.k, self.d, self.u)
    }
}

/// An achievable pair with its membership certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RatePair {
    a: usize,
    b: usize,
    d: usize,
    m: usize,
    n: usize,
    gcd_cert: usize,
}

impl RatePair {
    /// Certifies `(a, b)` for `problem`, failing with
    /// [`Error::NotAchievablePair`] when the gcd condition does not hold.
    pub fn new(problem: &SniProblem, a: usize, b: usize) -> Result<Self> {
        if b == 0 {
            return Err(Error::Precondition("b must be at least 1".into()));
        }
        let (m, n) = dims(problem, a, b);
        if n > m {
            return Err(Error::Precondition(format!(
                "a = {a} is too large: b(D+1)+a = {n} exceeds bK = {m}"
            )));
        }
        let gcd_cert = m.gcd(&n);
        let required = b * (problem.u() + 1);
        if gcd_cert < required {
            return Err(Error::NotAchievablePair {
                a,
                b,
                m,
                n,
                gcd: gcd_cert,
                required,
            });
        }
        Ok(RatePair {
            a,
            b,
            d: problem.d(),
            m,
            n,
            gcd_cert,
        })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Rows of the encoding matrix, `Kb`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Columns of the encoding matrix (broadcast symbols), `b(D+1)+a`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gcd_cert(&self) -> usize {
        self.gcd_cert
    }

    /// `D + 1 + a/b`, equal to `n / b`.
    pub fn rate(&self) -> Rate {
        Rate::new(self.n as u64, self.b as u64)
    }

    /// The rate as a float, for display only.
    pub fn rate_f64(&self) -> f64 {
        self.n as f64 / self.b as f64
    }

    /// Exceeds the `D + 1` lower bound by this much.
    pub fn gap(&self) -> Rate {
        self.rate() - Rate::from_integer(self.d as u64 + 1)
    }
}

fn dims(problem: &SniProblem, a: usize, b: usize) -> (usize, usize) {
    (b * problem.k(), b * (problem.d() + 1) + a)
}

/// The gcd condition `gcd(bK, b(D+1)+a) >= b(U+1)`.
pub fn in_s(problem: &SniProblem, a: usize, b: usize) -> bool {
    if b == 0 {
        return false;
    }
    let (m, n) = dims(problem, a, b);
    m.gcd(&n) >= b * (problem.u() + 1)
}

/// `(K mod (D+1), ⌊K/(D+1)⌋)`, achievable for every valid problem.
pub fn canonical_pair(problem: &SniProblem) -> RatePair {
    let span = problem.d() + 1;
    RatePair::new(problem, problem.k() % span, problem.k() / span)
        .expect("the canonical pair is always achievable")
}

/// For each `b` in `1..=b_max`, the smallest achievable `a`.
pub fn smallest_pairs(problem: &SniProblem, b_max: usize) -> Vec<RatePair> {
    let slack = problem.k() - problem.d() - 1;
    (1..=b_max)
        .filter_map(|b| {
            (0..=b * slack)
                .find(|&a| in_s(problem, a, b))
                .map(|a| RatePair::new(problem, a, b).expect("membership checked"))
        })
        .collect()
}

/// The lowest-rate pair with `b <= b_max`. Ties go to the smaller `b`.
pub fn search_best_pair(problem: &SniProblem, b_max: usize) -> Result<RatePair> {
    if b_max == 0 {
        return Err(Error::Config("b_max must be at least 1".into()));
    }
    let best = smallest_pairs(problem, b_max)
        .into_iter()
        .min_by(|x, y| x.rate().cmp(&y.rate()).then(x.b.cmp(&y.b)).then(x.a.cmp(&y.a)))
        .expect("a = b(K-D-1) is always achievable");
    Ok(best)
}

/// `rate - (D + 1)` for a certified pair of `problem`.
pub fn rate_gap(pair: &RatePair, problem: &SniProblem) -> Result<Rate> {
    if !in_s(problem, pair.a, pair.b) || pair.d != problem.d() {
        return Err(Error::NotAchievablePair {
            a: pair.a,
            b: pair.b,
            m: pair.m,
            n: pair.n,
            gcd: pair.gcd_cert,
            required: pair.b * (problem.u() + 1),
        });
    }
    Ok(pair.gap())
}

/// Checks that every pair achievable under `U2` is achievable under `U1`,
/// over `b <= b_max` and every admissible `a`.
pub fn monotonicity_check(k: usize, d: usize, u1: usize, u2: usize, b_max: usize) -> Result<bool> {
    if u1 >= u2 {
        return Err(Error::Precondition(format!("need U1 < U2, got {u1} and {u2}")));
    }
    let low = SniProblem::new(k, d, u1)?;
    let high = SniProblem::new(k, d, u2)?;
    let slack = k - d - 1;
    Ok((1..=b_max).all(|b| (0..=b * slack).all(|a| !in_s(&high, a, b) || in_s(&low, a, b))))
}

/// One row of a rate table: the best pair found for `(K, D, U)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub problem: SniProblem,
    pub pair: RatePair,
}

/// Best pairs for `D` in `1..=d_max` and `U` in `1..=D`, skipping
/// combinations with `U + D >= K`.
pub fn rate_table(k: usize, d_max: usize, b_max: usize) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for d in 1..=d_max {
        for u in 1..=d {
            let Ok(problem) = SniProblem::new(k, d, u) else {
                continue;
            };
            rows.push(TableRow {
                problem,
                pair: search_best_pair(&problem, b_max)?,
            });
        }
    }
    Ok(rows)
}
