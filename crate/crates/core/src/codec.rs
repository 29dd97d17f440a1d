//! Encoding with AIR matrices and decoding at the receivers.
//!
//! Message symbol `x_{t,j}` (receiver `t`, component `j` in `1..=b`) sits at
//! flattened index `k = bt + j - 1`, which is also the row of the encoding
//! matrix carrying it. The broadcast is `y = x · L`.
//!
//! Two decoders are provided. [`decode_plan`] builds per-symbol plans from the
//! matrix geometry: a handful of broadcast symbols plus side information,
//! summed over GF(2). [`OracleDecoder`] and [`oracle_decode`] use generic
//! linear algebra and work over any prime field and any encoding matrix.

use std::cell::RefCell;
use std::fmt;

use crate::air::{build_air, partitions, AirMatrix};
use crate::distances::{down_distance, right_distance, tau_distances};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{LeftSolution, Matrix, SolveError};
use crate::rates::{RatePair, SniProblem};
use crate::sparse::{SparseRow, SparseSolver};

/// Flattened index of `x_{t,j}`.
#[inline]
pub fn flat_index(b: usize, t: usize, j: usize) -> usize {
    b * t + j - 1
}

/// `(t, j)` of a flattened index.
#[inline]
pub fn split_index(b: usize, k: usize) -> (usize, usize) {
    (k / b, k % b + 1)
}

/// All `K·b` message symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageVector {
    k: usize,
    b: usize,
    field: PrimeField,
    values: Vec<u32>,
}

impl MessageVector {
    pub fn zeros(k: usize, b: usize, field: PrimeField) -> Self {
        MessageVector {
            k,
            b,
            field,
            values: vec![0; k * b],
        }
    }

    /// Wraps flattened values, reducing them into the field.
    pub fn from_values(k: usize, b: usize, field: PrimeField, values: Vec<u32>) -> Result<Self> {
        if values.len() != k * b {
            return Err(Error::DimensionMismatch {
                expected: k * b,
                got: values.len(),
            });
        }
        let p = field.modulus();
        Ok(MessageVector {
            k,
            b,
            field,
            values: values.into_iter().map(|v| v % p).collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `x_{t,j}` with `j` in `1..=b`.
    pub fn get(&self, t: usize, j: usize) -> u32 {
        self.values[flat_index(self.b, t, j)]
    }

    pub fn set(&mut self, t: usize, j: usize, v: u32) {
        self.values[flat_index(self.b, t, j)] = v % self.field.modulus();
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

/// The broadcast symbols `c_0, …, c_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    field: PrimeField,
    symbols: Vec<u32>,
}

impl Codeword {
    pub fn new(field: PrimeField, symbols: Vec<u32>) -> Self {
        let p = field.modulus();
        Codeword {
            field,
            symbols: symbols.into_iter().map(|v| v % p).collect(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// The `Kb x (b(D+1)+a)` AIR matrix for a certified pair.
pub fn encoding_matrix(problem: &SniProblem, pair: &RatePair) -> Result<AirMatrix> {
    RatePair::new(problem, pair.a(), pair.b())?;
    build_air(pair.m(), pair.n())
}

/// `y = x · L` over the message vector's field.
pub fn encode(air: &AirMatrix, x: &MessageVector) -> Result<Codeword> {
    if x.len() != air.m() {
        return Err(Error::DimensionMismatch {
            expected: air.m(),
            got: x.len(),
        });
    }
    let f = x.field();
    let symbols = (0..air.n())
        .map(|c| air.col_support(c).iter().fold(0, |acc, &r| f.add(acc, x.values[r as usize])))
        .collect();
    Ok(Codeword { field: f, symbols })
}

/// One line per broadcast symbol, e.g. `c_0 = x_{0,1} + x_{5,2} + x_{10,3}`.
pub fn symbolic_listing(air: &AirMatrix, b: usize) -> Vec<String> {
    (0..air.n())
        .map(|c| {
            let terms: Vec<String> = air
                .col_support(c)
                .iter()
                .map(|&r| {
                    let (t, j) = split_index(b, r as usize);
                    format!("x_{{{t},{j}}}")
                })
                .collect();
            format!("c_{c} = {}", terms.join(" + "))
        })
        .collect()
}

/// Which of the four decoding rules applies to a wanted symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecodeCase {
    /// One symbol, `c_{k mod n}`.
    I,
    /// Two symbols, `c_{k'}` and `c_{k'+μ}`.
    II,
    /// `c_{k'}`, `c_{k'+μ}` and one symbol per τ-distance.
    III,
    /// One symbol, `c_{k'}`.
    IV,
}

impl fmt::Display for DecodeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecodeCase::I => "I",
            DecodeCase::II => "II",
            DecodeCase::III => "III",
            DecodeCase::IV => "IV",
        })
    }
}

impl std::str::FromStr for DecodeCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(DecodeCase::I),
            "II" => Ok(DecodeCase::II),
            "III" => Ok(DecodeCase::III),
            "IV" => Ok(DecodeCase::IV),
            _ => Err(Error::Parse {
                line: 0,
                reason: format!("unknown case tag {s:?}"),
            }),
        }
    }
}

/// How receiver `t` recovers `x_{t,j}` over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolPlan {
    pub t: usize,
    pub j: usize,
    pub case: DecodeCase,
    /// Broadcast symbols to add, ascending.
    pub codes: Vec<usize>,
    /// Flattened side-information symbols to add, ascending.
    pub side_terms: Vec<usize>,
    /// Flattened symbols that appear in an even number of the chosen
    /// broadcast symbols and so drop out of the sum.
    pub cancelled: Vec<usize>,
}

impl SymbolPlan {
    pub fn k(&self, b: usize) -> usize {
        flat_index(b, self.t, self.j)
    }

    /// Side information used, γ.
    pub fn gamma(&self) -> usize {
        self.side_terms.len()
    }
}

/// Plans for every wanted symbol, indexed by flattened index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodePlan {
    problem: SniProblem,
    b: usize,
    entries: Vec<SymbolPlan>,
}

impl DecodePlan {
    pub fn problem(&self) -> &SniProblem {
        &self.problem
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn entries(&self) -> &[SymbolPlan] {
        &self.entries
    }

    pub fn entry(&self, t: usize, j: usize) -> &SymbolPlan {
        &self.entries[flat_index(self.b, t, j)]
    }

    /// Re-checks every plan against the side information of `problem`.
    ///
    /// The plan shape depends only on the matrix, so one plan can serve
    /// every `U` for which the pair is achievable.
    pub fn validate_for(&self, problem: &SniProblem) -> Result<()> {
        for e in &self.entries {
            check_side_terms(problem, self.b, e)?;
        }
        Ok(())
    }

    /// The same plans re-targeted at another `U` with the same `K` and `D`.
    pub fn retarget(&self, problem: &SniProblem) -> Result<DecodePlan> {
        if problem.k() != self.problem.k() || problem.d() != self.problem.d() {
            return Err(Error::Precondition(format!("{problem} does not share K and D with {}", self.problem)));
        }
        self.validate_for(problem)?;
        Ok(DecodePlan {
            problem: *problem,
            ..self.clone()
        })
    }
}

fn check_side_terms(problem: &SniProblem, b: usize, e: &SymbolPlan) -> Result<()> {
    for &s in &e.side_terms {
        let (t2, j2) = split_index(b, s);
        if !problem.is_side_info(e.t, t2) {
            return Err(Error::Internal(format!(
                "plan for x_{{{},{}}} uses x_{{{t2},{j2}}}, which receiver {} does not know",
                e.t, e.j, e.t
            )));
        }
    }
    Ok(())
}

/// Builds and validates the decoding plans for a certified pair.
pub fn decode_plan(problem: &SniProblem, pair: &RatePair) -> Result<DecodePlan> {
    let air = encoding_matrix(problem, pair)?;
    decode_plan_for(&air, problem, pair.b())
}

/// Like [`decode_plan`], reusing an already built encoding matrix.
pub fn decode_plan_for(air: &AirMatrix, problem: &SniProblem, b: usize) -> Result<DecodePlan> {
    if air.m() != problem.k() * b {
        return Err(Error::DimensionMismatch {
            expected: problem.k() * b,
            got: air.m(),
        });
    }
    let (m, n) = (air.m(), air.n());
    let ch = air.chain();
    let lam0 = ch.lambda(0);
    let last = m - ch.gcd();
    let parts = partitions(ch);
    let top = ch.half_ceil() as usize;

    let mut entries = Vec::with_capacity(m);
    let mut rows: Vec<u32> = Vec::new();
    for k in 0..m {
        let (t, j) = split_index(b, k);
        let (case, codes) = if k >= last {
            (DecodeCase::IV, vec![k - lam0])
        } else if k < lam0 {
            (DecodeCase::I, vec![k % n])
        } else {
            let kp = k - lam0;
            let band = parts
                .c_tilde
                .iter()
                .position(|iv| iv.contains(k))
                .ok_or_else(|| Error::Internal(format!("row {k} lies in no shifted column band")))?;
            if parts.d_tilde[band].contains(k) {
                let mu = right_distance(air, kp + down_distance(air, kp)?, kp)?;
                (DecodeCase::II, vec![kp, kp + mu])
            } else if band < top {
                let prof = tau_distances(air, kp)?;
                let mut codes = vec![kp, kp + prof.mu];
                codes.extend(prof.taus.iter().map(|&tau| kp + tau));
                (DecodeCase::III, codes)
            } else {
                (DecodeCase::IV, vec![kp])
            }
        };
        let mut codes = codes;
        codes.sort_unstable();
        if codes.windows(2).any(|w| w[0] == w[1]) || codes.last().is_some_and(|&c| c >= n) {
            return Err(Error::Internal(format!("invalid symbol set {codes:?} for row {k}")));
        }

        rows.clear();
        for &c in &codes {
            rows.extend_from_slice(air.col_support(c));
        }
        rows.sort_unstable();
        let mut side_terms = Vec::new();
        let mut cancelled = Vec::new();
        let mut wanted_present = false;
        for run in rows.chunk_by(|x, y| x == y) {
            let r = run[0] as usize;
            if run.len() % 2 == 0 {
                cancelled.push(r);
            } else if r == k {
                wanted_present = true;
            } else {
                side_terms.push(r);
            }
        }
        if !wanted_present {
            return Err(Error::Internal(format!("plan for row {k} does not contain x_{{{t},{j}}}")));
        }
        let entry = SymbolPlan {
            t,
            j,
            case,
            codes,
            side_terms,
            cancelled,
        };
        check_side_terms(problem, b, &entry)?;
        entries.push(entry);
    }
    Ok(DecodePlan {
        problem: *problem,
        b,
        entries,
    })
}

/// Receiver `t`'s view of the messages: only its side information.
///
/// Reads of anything else fail with [`Error::MissingSideInfo`]. With
/// [`SideInfo::with_audit`] every successful read is logged.
#[derive(Debug)]
pub struct SideInfo<'a> {
    x: &'a MessageVector,
    problem: SniProblem,
    t: usize,
    log: Option<RefCell<Vec<(usize, usize)>>>,
}

impl<'a> SideInfo<'a> {
    pub fn new(x: &'a MessageVector, problem: &SniProblem, t: usize) -> Result<Self> {
        if x.k() != problem.k() || t >= problem.k() {
            return Err(Error::Precondition(format!(
                "receiver {t} and a {}-message vector do not fit {problem}",
                x.k()
            )));
        }
        Ok(SideInfo {
            x,
            problem: *problem,
            t,
            log: None,
        })
    }

    pub fn with_audit(mut self) -> Self {
        self.log = Some(RefCell::new(Vec::new()));
        self
    }

    pub fn receiver(&self) -> usize {
        self.t
    }

    pub fn problem(&self) -> &SniProblem {
        &self.problem
    }

    pub fn field(&self) -> PrimeField {
        self.x.field()
    }

    pub fn b(&self) -> usize {
        self.x.b()
    }

    /// Messages visible to this receiver, ascending.
    pub fn exposed(&self) -> Vec<usize> {
        self.problem.side_info(self.t)
    }

    pub fn get(&self, t: usize, j: usize) -> Result<u32> {
        if !self.problem.is_side_info(self.t, t) || j == 0 || j > self.x.b() {
            return Err(Error::MissingSideInfo { t, j });
        }
        if let Some(log) = &self.log {
            log.borrow_mut().push((t, j));
        }
        Ok(self.x.get(t, j))
    }

    /// Reads by flattened index.
    pub fn get_flat(&self, idx: usize) -> Result<u32> {
        let (t, j) = split_index(self.x.b(), idx);
        self.get(t, j)
    }

    /// Reads logged so far, in order. Empty unless auditing.
    pub fn accesses(&self) -> Vec<(usize, usize)> {
        self.log.as_ref().map(|l| l.borrow().clone()).unwrap_or_default()
    }
}

/// Recovers `x_{t,j}` by running its plan over GF(2).
pub fn plan_decode(plan: &DecodePlan, y: &Codeword, side: &SideInfo<'_>, t: usize, j: usize) -> Result<u32> {
    if !y.field().is_binary() {
        return Err(Error::Config(format!("plan decoding runs over GF(2), not {}", y.field())));
    }
    if side.receiver() != t {
        return Err(Error::Precondition(format!("side information belongs to receiver {}", side.receiver())));
    }
    let e = plan.entry(t, j);
    let mut acc = 0u32;
    for &c in &e.codes {
        acc ^= y.symbols()[c];
    }
    for &s in &e.side_terms {
        acc ^= side.get_flat(s)?;
    }
    Ok(acc)
}

/// Row supports with values, plus column incidence.
struct SparseMat {
    ncols: usize,
    row_ptr: Vec<usize>,
    row_cols: Vec<u32>,
    row_vals: Vec<u32>,
    col_ptr: Vec<usize>,
    /// `(row, value)` pairs, column by column.
    col_entries: Vec<(u32, u32)>,
}

impl SparseMat {
    fn from_air(air: &AirMatrix) -> Self {
        let mut row_ptr = Vec::with_capacity(air.m() + 1);
        let mut row_cols = Vec::with_capacity(air.nnz());
        row_ptr.push(0);
        for r in 0..air.m() {
            row_cols.extend_from_slice(air.row_support(r));
            row_ptr.push(row_cols.len());
        }
        let row_vals = vec![1; row_cols.len()];
        Self::finish(air.n(), row_ptr, row_cols, row_vals)
    }

    fn from_matrix(l: &Matrix) -> Self {
        let mut row_ptr = vec![0];
        let mut row_cols = Vec::new();
        let mut row_vals = Vec::new();
        for r in 0..l.rows() {
            for (c, &v) in l.row(r).iter().enumerate().filter(|&(_, &v)| v != 0) {
                row_cols.push(c as u32);
                row_vals.push(v);
            }
            row_ptr.push(row_cols.len());
        }
        Self::finish(l.cols(), row_ptr, row_cols, row_vals)
    }

    fn finish(ncols: usize, row_ptr: Vec<usize>, row_cols: Vec<u32>, row_vals: Vec<u32>) -> Self {
        let mut col_ptr = vec![0usize; ncols + 1];
        for &c in &row_cols {
            col_ptr[c as usize + 1] += 1;
        }
        for c in 0..ncols {
            col_ptr[c + 1] += col_ptr[c];
        }
        let mut fill = col_ptr.clone();
        let mut col_entries = vec![(0, 0); row_cols.len()];
        for r in 0..row_ptr.len() - 1 {
            for e in row_ptr[r]..row_ptr[r + 1] {
                let c = row_cols[e] as usize;
                col_entries[fill[c]] = (r as u32, row_vals[e]);
                fill[c] += 1;
            }
        }
        SparseMat {
            ncols,
            row_ptr,
            row_cols,
            row_vals,
            col_ptr,
            col_entries,
        }
    }

    fn rows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    fn sparse_row(&self, r: usize) -> SparseRow<'_> {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        SparseRow {
            cols: &self.row_cols[span.clone()],
            vals: Some(&self.row_vals[span]),
        }
    }

    fn column(&self, c: usize) -> &[(u32, u32)] {
        &self.col_entries[self.col_ptr[c]..self.col_ptr[c + 1]]
    }
}

/// Whether row `r` carries a message receiver `t` does not know.
#[inline]
fn in_window(problem: &SniProblem, b: usize, t: usize, r: usize) -> bool {
    !problem.is_side_info(t, r / b)
}

/// Rows interfering at receiver `t`, followed by its own rows.
fn window_rows(problem: &SniProblem, b: usize, t: usize) -> (Vec<usize>, Vec<usize>) {
    let interference = problem
        .interference(t)
        .into_iter()
        .flat_map(|s| (0..b).map(move |i| s * b + i))
        .collect();
    let own = (0..b).map(|i| t * b + i).collect();
    (interference, own)
}

/// Precomputed linear decoder for one receiver's symbol.
///
/// `x_{t,j} = Σ w_c · y_c − Σ coef_r · x_r`, where `w` kills every
/// interfering and unwanted own row of `L` and the corrections run over
/// side-information rows only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolDecoder<'a> {
    pub weights: &'a [(u32, u32)],
    pub corrections: &'a [(u32, u32)],
}

/// Generic linear decoder, valid for any encoding matrix meeting the
/// decodability condition, over any prime field.
#[derive(Debug, Clone)]
pub struct OracleDecoder {
    problem: SniProblem,
    b: usize,
    field: PrimeField,
    /// Per flattened symbol, `weights[weight_ptr[k]..weight_ptr[k + 1]]`.
    weight_ptr: Vec<usize>,
    weights: Vec<(u32, u32)>,
    correction_ptr: Vec<usize>,
    corrections: Vec<(u32, u32)>,
}

impl OracleDecoder {
    /// Prepares decoders for the AIR encoding matrix, reading its 0/1
    /// entries in `field`.
    pub fn new(air: &AirMatrix, problem: &SniProblem, b: usize, field: PrimeField) -> Result<Self> {
        Self::build(&SparseMat::from_air(air), problem, b, field)
    }

    /// Prepares decoders for an arbitrary encoding matrix.
    pub fn from_matrix(l: &Matrix, problem: &SniProblem, b: usize) -> Result<Self> {
        Self::build(&SparseMat::from_matrix(l), problem, b, l.field())
    }

    fn build(l: &SparseMat, problem: &SniProblem, b: usize, field: PrimeField) -> Result<Self> {
        let kb = problem.k() * b;
        if l.rows() != kb {
            return Err(Error::DimensionMismatch {
                expected: kb,
                got: l.rows(),
            });
        }
        let mut dec = OracleDecoder {
            problem: *problem,
            b,
            field,
            weight_ptr: Vec::with_capacity(kb + 1),
            weights: Vec::new(),
            correction_ptr: Vec::with_capacity(kb + 1),
            corrections: Vec::new(),
        };
        dec.weight_ptr.push(0);
        dec.correction_ptr.push(0);
        let mut solver = SparseSolver::new(field, l.ncols);
        let mut scratch = FinishScratch {
            acc: vec![0u32; kb],
            touched: Vec::new(),
        };
        let mut private: Vec<Option<(u32, u32)>> = vec![None; b];
        let mut hard = Vec::new();
        for t in 0..problem.k() {
            let in_window = |r: usize| in_window(problem, b, t, r);
            hard.clear();
            for (i, slot) in private.iter_mut().enumerate() {
                let r = t * b + i;
                let span = l.row_ptr[r]..l.row_ptr[r + 1];
                *slot = l.row_cols[span.clone()]
                    .iter()
                    .zip(&l.row_vals[span])
                    .find(|&(&c, _)| {
                        l.column(c as usize)
                            .iter()
                            .all(|&(r2, _)| r2 as usize == r || !in_window(r2 as usize))
                    })
                    .map(|(&c, &v)| (c, field.inv(v)));
                if slot.is_none() {
                    hard.push(i);
                }
            }
            let mut solved = Vec::new();
            if !hard.is_empty() {
                let (interference, own) = window_rows(problem, b, t);
                let window: Vec<usize> = interference.iter().chain(&own).copied().collect();
                let rows: Vec<SparseRow<'_>> = window.iter().map(|&r| l.sparse_row(r)).collect();
                let rhs: Vec<Vec<u32>> = hard
                    .iter()
                    .map(|&i| {
                        let mut e = vec![0u32; window.len()];
                        e[interference.len() + i] = 1;
                        e
                    })
                    .collect();
                solved = solver.solve_right(&rows, &rhs).solutions;
            }
            let mut solved = solved.into_iter();
            for (i, slot) in private.iter().enumerate() {
                match slot {
                    Some(w) => dec.weights.push(*w),
                    None => {
                        let w = solved.next().flatten().ok_or(Error::NotDecodable { t })?;
                        dec.weights.extend_from_slice(&w);
                    }
                }
                let start = *dec.weight_ptr.last().expect("pointer arrays start at 0");
                dec.weight_ptr.push(dec.weights.len());
                finish_symbol(
                    l,
                    field,
                    t * b + i,
                    &dec.weights[start..],
                    &in_window,
                    &mut scratch,
                    &mut dec.corrections,
                )?;
                dec.correction_ptr.push(dec.corrections.len());
            }
        }
        Ok(dec)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn problem(&self) -> &SniProblem {
        &self.problem
    }

    /// The same decoder for another `U` of the same `K` and `D`.
    ///
    /// Shrinking `U` only turns window rows into side information, so a
    /// decoder for a larger `U` stays valid. Every correction is re-checked
    /// against the new side information.
    pub fn retarget(&self, problem: &SniProblem) -> Result<Self> {
        if problem.k() != self.problem.k() || problem.d() != self.problem.d() || problem.u() > self.problem.u() {
            return Err(Error::Precondition(format!(
                "an oracle for {} cannot serve {problem}",
                self.problem
            )));
        }
        for k in 0..self.weight_ptr.len() - 1 {
            let t = k / self.b;
            for &(r, _) in self.symbol(k).corrections {
                if !problem.is_side_info(t, r as usize / self.b) {
                    return Err(Error::NotDecodable { t });
                }
            }
        }
        Ok(OracleDecoder {
            problem: *problem,
            ..self.clone()
        })
    }

    /// The decoder of flattened symbol `k`.
    pub fn symbol(&self, k: usize) -> SymbolDecoder<'_> {
        SymbolDecoder {
            weights: &self.weights[self.weight_ptr[k]..self.weight_ptr[k + 1]],
            corrections: &self.corrections[self.correction_ptr[k]..self.correction_ptr[k + 1]],
        }
    }

    /// Recovers all `b` symbols of receiver `side.receiver()`.
    pub fn decode(&self, y: &Codeword, side: &SideInfo<'_>) -> Result<Vec<u32>> {
        let f = self.field;
        if y.field() != f || side.field() != f {
            return Err(Error::Config(format!("decoder runs over {f}")));
        }
        let t = side.receiver();
        (0..self.b)
            .map(|i| {
                let dec = self.symbol(t * self.b + i);
                let mut v = dec
                    .weights
                    .iter()
                    .fold(0, |acc, &(c, w)| f.add(acc, f.mul(w, y.symbols()[c as usize])));
                for &(r, coef) in dec.corrections {
                    v = f.sub(v, f.mul(coef, side.get_flat(r as usize)?));
                }
                Ok(v)
            })
            .collect()
    }
}

struct FinishScratch {
    acc: Vec<u32>,
    touched: Vec<usize>,
}

/// Computes `L · w`, checks it is the unit vector of `target` on the
/// window, and appends its side-information part to `corrections`.
fn finish_symbol(
    l: &SparseMat,
    field: PrimeField,
    target: usize,
    weights: &[(u32, u32)],
    in_window: &impl Fn(usize) -> bool,
    scratch: &mut FinishScratch,
    corrections: &mut Vec<(u32, u32)>,
) -> Result<()> {
    let FinishScratch { acc, touched } = scratch;
    touched.clear();
    for &(c, wc) in weights {
        for &(r, v) in l.column(c as usize) {
            let r = r as usize;
            if acc[r] == 0 {
                touched.push(r);
            }
            acc[r] = field.add(acc[r], field.mul(v, wc));
        }
    }
    touched.sort_unstable();
    touched.dedup();
    let mut hit_target = false;
    let mut leak = None;
    for &r in touched.iter() {
        let v = std::mem::take(&mut acc[r]);
        if v == 0 {
            continue;
        }
        if !in_window(r) {
            corrections.push((r as u32, v));
        } else if r == target && v == 1 {
            hit_target = true;
        } else {
            leak.get_or_insert(r);
        }
    }
    if let Some(r) = leak {
        return Err(Error::Internal(format!("decoder for row {target} leaks row {r}")));
    }
    if !hit_target {
        return Err(Error::Internal(format!("decoder for row {target} misses its own row")));
    }
    Ok(())
}

/// Recovers receiver `t`'s `b` symbols from `y` and its side information
/// by solving `x_window · L_window = y − x_side · L_side` directly.
pub fn oracle_decode(l: &Matrix, y: &Codeword, side: &SideInfo<'_>) -> Result<Vec<u32>> {
    let problem = side.problem();
    let b = side.b();
    let t = side.receiver();
    let f = l.field();
    if l.rows() != problem.k() * b {
        return Err(Error::DimensionMismatch {
            expected: problem.k() * b,
            got: l.rows(),
        });
    }
    if y.len() != l.cols() {
        return Err(Error::DimensionMismatch {
            expected: l.cols(),
            got: y.len(),
        });
    }
    let mut z: Vec<u32> = y.symbols().iter().map(|&v| v % f.modulus()).collect();
    for s in side.exposed() {
        for j in 1..=b {
            let xv = side.get(s, j)?;
            if xv == 0 {
                continue;
            }
            for (zc, &lc) in z.iter_mut().zip(l.row(flat_index(b, s, j))) {
                *zc = f.sub(*zc, f.mul(xv, lc));
            }
        }
    }
    let (interference, own) = window_rows(problem, b, t);
    let window: Vec<usize> = interference.iter().chain(&own).copied().collect();
    let a = l.select_rows(&window);
    let designated: Vec<usize> = (interference.len()..window.len()).collect();
    match a.solve_left(&z, &designated) {
        Ok(LeftSolution::Unique(x)) => Ok(x[interference.len()..].to_vec()),
        Ok(LeftSolution::NonUnique { .. }) => Err(Error::NotDecodable { t }),
        Err(SolveError::NoSolution) => Err(Error::Precondition(
            "codeword is inconsistent with the side information".into(),
        )),
        Err(SolveError::Dimension(e)) => Err(e),
    }
}

fn check_rows(air: &AirMatrix, problem: &SniProblem, b: usize) -> Result<()> {
    if air.m() != problem.k() * b {
        return Err(Error::DimensionMismatch {
            expected: problem.k() * b,
            got: air.m(),
        });
    }
    Ok(())
}

/// The decodability condition: for every receiver `t` and own row `r`,
/// `L_r` is outside the span of the interfering rows and the other own rows.
///
/// An own row with a nonzero in some column that no other window row
/// touches is outside that span outright. The remaining own rows `H` are
/// checked by rank: `rank(interfering ∪ H) = rank(interfering) + |H|`.
pub fn verify_lemma1(air: &AirMatrix, problem: &SniProblem, b: usize, field: PrimeField) -> Result<bool> {
    check_rows(air, problem, b)?;
    let mut solver = SparseSolver::new(field, air.n());
    for t in 0..problem.k() {
        let hard: Vec<usize> = (t * b..(t + 1) * b)
            .filter(|&r| {
                !air.row_support(r).iter().any(|&c| {
                    air.col_support(c as usize)
                        .iter()
                        .all(|&r2| r2 as usize == r || !in_window(problem, b, t, r2 as usize))
                })
            })
            .collect();
        if hard.is_empty() {
            continue;
        }
        let (interference, _) = window_rows(problem, b, t);
        let mut rows: Vec<SparseRow<'_>> = interference.iter().map(|&r| SparseRow::ones(air.row_support(r))).collect();
        let base = solver.rank(&rows);
        rows.extend(hard.iter().map(|&r| SparseRow::ones(air.row_support(r))));
        if solver.rank(&rows) != base + hard.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`verify_lemma1`] checked literally, one row-span test per own row, with
/// dense elimination. Slow; meant for cross-checking.
pub fn verify_lemma1_rowwise(air: &AirMatrix, problem: &SniProblem, b: usize, field: PrimeField) -> Result<bool> {
    check_rows(air, problem, b)?;
    let l = air.to_matrix(field);
    for t in 0..problem.k() {
        let (interference, own) = window_rows(problem, b, t);
        for &r in &own {
            let others: Vec<usize> = interference.iter().chain(&own).copied().filter(|&x| x != r).collect();
            let span = l.select_rows(&others);
            if span.rank_dense() == span.with_row_appended(l.row(r))?.rank_dense() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Decoding cost of one wanted symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolStats {
    pub t: usize,
    pub j: usize,
    pub case: DecodeCase,
    pub num_codes: usize,
    /// Side-information symbols used, counted from the plan.
    pub gamma: usize,
    /// The same count predicted from column weights alone.
    pub gamma_formula: usize,
}

/// Per-symbol statistics of a plan, with γ from both the plan and the
/// column-weight formula.
pub fn complexity_stats(plan: &DecodePlan, air: &AirMatrix) -> Vec<SymbolStats> {
    plan.entries()
        .iter()
        .map(|e| {
            let weight = |c: usize| air.col_support(c).len();
            let total: usize = e.codes.iter().map(|&c| weight(c)).sum();
            let gamma_formula = match e.case {
                DecodeCase::I | DecodeCase::IV => total - 1,
                DecodeCase::II => total - 3,
                DecodeCase::III => total - 2 * (e.codes.len() - 2) - 3,
            };
            SymbolStats {
                t: e.t,
                j: e.j,
                case: e.case,
                num_codes: e.codes.len(),
                gamma: e.gamma(),
                gamma_formula,
            }
        })
        .collect()
}
