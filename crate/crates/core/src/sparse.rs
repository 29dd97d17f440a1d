//! Sparse exact elimination with singleton pivoting.
//!
//! Rows whose live part is a single entry, and columns with a single live
//! row, are pivoted first. Neither kind of pivot changes the remaining
//! entries, so the cascade runs in time linear in the number of nonzeros.
//! Whatever survives the cascade is handed to dense Gaussian elimination.
//! On AIR windows the cascade usually consumes every row.

use crate::field::PrimeField;

/// One row of a sparse matrix. A missing `vals` means every listed entry is 1.
#[derive(Debug, Clone, Copy)]
pub struct SparseRow<'a> {
    pub cols: &'a [u32],
    pub vals: Option<&'a [u32]>,
}

impl<'a> SparseRow<'a> {
    pub fn ones(cols: &'a [u32]) -> Self {
        SparseRow { cols, vals: None }
    }

    #[inline]
    fn val(&self, i: usize) -> u32 {
        match self.vals {
            Some(v) => v[i],
            None => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColState {
    Live,
    Determined,
    Postponed,
}

/// Result of [`solve_right`]: the rank of the row set and, for every
/// right-hand side, a solution `w` with `rows · w = rhs` if one exists.
#[derive(Debug, Clone)]
pub struct RightSolve {
    pub rank: usize,
    /// Nonzero entries `(column, value)` of each solution, by column.
    pub solutions: Vec<Option<Vec<(u32, u32)>>>,
    /// Rows that survived the singleton cascade.
    pub dense_rows: usize,
}

/// Rank over `field` of the given rows, each with entries in `[0, ncols)`.
pub fn rank(field: PrimeField, ncols: usize, rows: &[SparseRow<'_>]) -> usize {
    SparseSolver::new(field, ncols).rank(rows)
}

/// Solves `rows · w = rhs_j` for every right-hand side `rhs_j`, given as a
/// vector with one entry per row.
pub fn solve_right(field: PrimeField, ncols: usize, rows: &[SparseRow<'_>], rhs: &[Vec<u32>]) -> RightSolve {
    SparseSolver::new(field, ncols).solve_right(rows, rhs)
}

/// Reusable solver state for many systems over the same column range.
///
/// Each call works only on the columns its rows touch, so repeated solves
/// on small row subsets of a wide matrix stay cheap.
#[derive(Debug, Clone)]
pub struct SparseSolver {
    field: PrimeField,
    local: Vec<u32>,
    touched: Vec<u32>,
    cols: Vec<u32>,
    vals: Vec<u32>,
    bounds: Vec<usize>,
    scratch: Scratch,
}

const UNMAPPED: u32 = u32::MAX;

impl SparseSolver {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        SparseSolver {
            field,
            local: vec![UNMAPPED; ncols],
            touched: Vec::new(),
            cols: Vec::new(),
            vals: Vec::new(),
            bounds: Vec::new(),
            scratch: Scratch::default(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rank(&mut self, rows: &[SparseRow<'_>]) -> usize {
        self.solve_right(rows, &[]).rank
    }

    pub fn solve_right(&mut self, rows: &[SparseRow<'_>], rhs: &[Vec<u32>]) -> RightSolve {
        for r in rhs {
            assert_eq!(r.len(), rows.len(), "right-hand side length");
        }
        self.cols.clear();
        self.vals.clear();
        self.bounds.clear();
        self.bounds.push(0);
        for row in rows {
            for (i, &c) in row.cols.iter().enumerate() {
                let slot = &mut self.local[c as usize];
                if *slot == UNMAPPED {
                    *slot = self.touched.len() as u32;
                    self.touched.push(c);
                }
                self.cols.push(*slot);
                self.vals.push(row.val(i));
            }
            self.bounds.push(self.cols.len());
        }
        let local_rows: Vec<SparseRow<'_>> = self
            .bounds
            .windows(2)
            .map(|w| SparseRow {
                cols: &self.cols[w[0]..w[1]],
                vals: Some(&self.vals[w[0]..w[1]]),
            })
            .collect();
        let mut out = run(&mut self.scratch, self.field, self.touched.len(), &local_rows, rhs);
        for sol in out.solutions.iter_mut().flatten() {
            for entry in sol.iter_mut() {
                entry.0 = self.touched[entry.0 as usize];
            }
            sol.sort_unstable();
        }
        for &c in &self.touched {
            self.local[c as usize] = UNMAPPED;
        }
        self.touched.clear();
        out
    }
}

/// Buffers reused across eliminations.
#[derive(Debug, Clone, Default)]
struct Scratch {
    col_cnt: Vec<usize>,
    row_cnt: Vec<usize>,
    col_start: Vec<usize>,
    fill: Vec<usize>,
    inc_row: Vec<u32>,
    inc_val: Vec<u32>,
    row_alive: Vec<bool>,
    col_state: Vec<ColState>,
    det_time: Vec<usize>,
    row_stack: Vec<usize>,
    col_stack: Vec<usize>,
}

fn refill<T: Clone>(v: &mut Vec<T>, len: usize, value: T) {
    v.clear();
    v.resize(len, value);
}

fn run(
    sc: &mut Scratch,
    field: PrimeField,
    ncols: usize,
    rows: &[SparseRow<'_>],
    rhs_in: &[Vec<u32>],
) -> RightSolve {
    let nr = rows.len();
    let s = rhs_in.len();

    // rhs stored row-major: row r owns rhs[r*s .. r*s+s].
    let mut rhs = vec![0u32; nr * s];
    for (j, col) in rhs_in.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            rhs[r * s + j] = v % field.modulus();
        }
    }

    // Column incidence in CSR form, skipping explicit zeros.
    let Scratch {
        col_cnt,
        row_cnt,
        col_start,
        fill,
        inc_row,
        inc_val,
        row_alive,
        col_state,
        det_time,
        row_stack,
        col_stack,
    } = sc;
    refill(col_cnt, ncols, 0);
    refill(row_cnt, nr, 0);
    for (r, row) in rows.iter().enumerate() {
        for (i, &c) in row.cols.iter().enumerate() {
            if row.val(i) % field.modulus() != 0 {
                col_cnt[c as usize] += 1;
                row_cnt[r] += 1;
            }
        }
    }
    refill(col_start, ncols + 1, 0);
    for c in 0..ncols {
        col_start[c + 1] = col_start[c] + col_cnt[c];
    }
    let nnz = col_start[ncols];
    fill.clear();
    fill.extend_from_slice(col_start);
    refill(inc_row, nnz, 0);
    refill(inc_val, nnz, 0);
    for (r, row) in rows.iter().enumerate() {
        for (i, &c) in row.cols.iter().enumerate() {
            let v = row.val(i) % field.modulus();
            if v != 0 {
                let slot = &mut fill[c as usize];
                inc_row[*slot] = r as u32;
                inc_val[*slot] = v;
                *slot += 1;
            }
        }
    }

    refill(row_alive, nr, true);
    refill(col_state, ncols, ColState::Live);
    refill(det_time, ncols, 0);
    let mut clock = 1usize;
    let mut w = vec![0u32; ncols * s];
    let mut consistent = vec![true; s];
    let mut rank = 0usize;
    // (row, col, pivot value, rhs snapshot offset, time)
    let mut postponed: Vec<(usize, usize, u32, usize, usize)> = Vec::new();
    let mut snapshots: Vec<u32> = Vec::new();

    row_stack.clear();
    row_stack.extend((0..nr).filter(|&r| row_cnt[r] <= 1));
    col_stack.clear();
    col_stack.extend((0..ncols).filter(|&c| col_cnt[c] <= 1));

    loop {
        if let Some(r) = row_stack.pop() {
            if !row_alive[r] {
                continue;
            }
            match row_cnt[r] {
                0 => {
                    row_alive[r] = false;
                    for j in 0..s {
                        if rhs[r * s + j] != 0 {
                            consistent[j] = false;
                        }
                    }
                }
                1 => {
                    let row = &rows[r];
                    let (c, a) = (0..row.cols.len())
                        .map(|i| (row.cols[i] as usize, row.val(i) % field.modulus()))
                        .find(|&(c, a)| a != 0 && col_state[c] == ColState::Live)
                        .expect("row count out of sync");
                    rank += 1;
                    row_alive[r] = false;
                    col_state[c] = ColState::Determined;
                    det_time[c] = clock;
                    clock += 1;
                    if s > 0 {
                        let inv = field.inv(a);
                        for j in 0..s {
                            w[c * s + j] = field.mul(rhs[r * s + j], inv);
                        }
                    }
                    for idx in col_start[c]..col_start[c + 1] {
                        let i = inc_row[idx] as usize;
                        if !row_alive[i] {
                            continue;
                        }
                        if s > 0 {
                            let a_ic = inc_val[idx];
                            for j in 0..s {
                                let t = field.mul(a_ic, w[c * s + j]);
                                rhs[i * s + j] = field.sub(rhs[i * s + j], t);
                            }
                        }
                        row_cnt[i] -= 1;
                        if row_cnt[i] <= 1 {
                            row_stack.push(i);
                        }
                    }
                }
                _ => {}
            }
            continue;
        }
        if let Some(c) = col_stack.pop() {
            if col_state[c] != ColState::Live {
                continue;
            }
            match col_cnt[c] {
                0 => {
                    col_state[c] = ColState::Determined;
                    det_time[c] = clock;
                    clock += 1;
                }
                1 => {
                    let (r, a) = (col_start[c]..col_start[c + 1])
                        .map(|idx| (inc_row[idx] as usize, inc_val[idx]))
                        .find(|&(r, _)| row_alive[r])
                        .expect("column count out of sync");
                    rank += 1;
                    row_alive[r] = false;
                    col_state[c] = ColState::Postponed;
                    det_time[c] = clock;
                    let off = snapshots.len();
                    snapshots.extend_from_slice(&rhs[r * s..r * s + s]);
                    postponed.push((r, c, a, off, clock));
                    clock += 1;
                    let row = &rows[r];
                    for (i, &c2) in row.cols.iter().enumerate() {
                        let c2 = c2 as usize;
                        if c2 != c && col_state[c2] == ColState::Live && !row.val(i).is_multiple_of(field.modulus()) {
                            col_cnt[c2] -= 1;
                            if col_cnt[c2] <= 1 {
                                col_stack.push(c2);
                            }
                        }
                    }
                }
                _ => {}
            }
            continue;
        }
        break;
    }

    // Dense remainder.
    let live_rows: Vec<usize> = (0..nr).filter(|&r| row_alive[r]).collect();
    let live_cols: Vec<usize> = (0..ncols).filter(|&c| col_state[c] == ColState::Live).collect();
    if !live_rows.is_empty() || !live_cols.is_empty() {
        let mut col_pos = vec![usize::MAX; ncols];
        for (i, &c) in live_cols.iter().enumerate() {
            col_pos[c] = i;
        }
        let width = live_cols.len() + s;
        let mut dense = vec![0u32; live_rows.len() * width];
        for (ri, &r) in live_rows.iter().enumerate() {
            let row = &rows[r];
            for (i, &c) in row.cols.iter().enumerate() {
                let pos = col_pos[c as usize];
                if pos != usize::MAX {
                    dense[ri * width + pos] = field.add(dense[ri * width + pos], row.val(i) % field.modulus());
                }
            }
            dense[ri * width + live_cols.len()..(ri + 1) * width].copy_from_slice(&rhs[r * s..r * s + s]);
        }
        let pivots = rref(field, &mut dense, live_rows.len(), width, live_cols.len());
        rank += pivots.len();
        for (pr, &pc) in pivots.iter().enumerate() {
            let c = live_cols[pc];
            for j in 0..s {
                w[c * s + j] = dense[pr * width + live_cols.len() + j];
            }
        }
        for ri in pivots.len()..live_rows.len() {
            for j in 0..s {
                if dense[ri * width + live_cols.len() + j] != 0 {
                    consistent[j] = false;
                }
            }
        }
        for &c in &live_cols {
            det_time[c] = clock;
        }
    }
    let dense_rows = live_rows.len();

    if s > 0 {
        for &(r, c, a, off, t0) in postponed.iter().rev() {
            let row = &rows[r];
            let inv = field.inv(a);
            for j in 0..s {
                let mut acc = snapshots[off + j];
                for (i, &c2) in row.cols.iter().enumerate() {
                    let c2 = c2 as usize;
                    if c2 != c && det_time[c2] > t0 {
                        let t = field.mul(row.val(i) % field.modulus(), w[c2 * s + j]);
                        acc = field.sub(acc, t);
                    }
                }
                w[c * s + j] = field.mul(acc, inv);
            }
        }
    }

    let solutions = (0..s)
        .map(|j| {
            consistent[j].then(|| {
                (0..ncols)
                    .filter(|&c| w[c * s + j] != 0)
                    .map(|c| (c as u32, w[c * s + j]))
                    .collect()
            })
        })
        .collect();
    RightSolve {
        rank,
        solutions,
        dense_rows,
    }
}

/// Reduced row echelon form of a row-major `rows x width` block, pivoting only
/// within the first `pivot_cols` columns. Returns the pivot column of each
/// leading row; rows past the pivots are zero on `[0, pivot_cols)`.
pub(crate) fn rref(
    field: PrimeField,
    a: &mut [u32],
    rows: usize,
    width: usize,
    pivot_cols: usize,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i * width + c] != 0) else {
            continue;
        };
        if p != r {
            for k in 0..width {
                a.swap(p * width + k, r * width + k);
            }
        }
        let inv = field.inv(a[r * width + c]);
        if inv != 1 {
            for k in c..width {
                a[r * width + k] = field.mul(a[r * width + k], inv);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a[i * width + c];
            if f == 0 {
                continue;
            }
            for k in c..width {
                let t = field.mul(f, a[r * width + k]);
                a[i * width + k] = field.sub(a[i * width + k], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_to_rows(m: &[Vec<u32>]) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
        let cols = m
            .iter()
            .map(|r| (0..r.len() as u32).filter(|&c| r[c as usize] != 0).collect())
            .collect();
        let vals = m
            .iter()
            .map(|r| r.iter().copied().filter(|&v| v != 0).collect())
            .collect();
        (cols, vals)
    }

    #[test]
    fn cascade_and_dense_remainder_agree_with_rref() {
        let f = PrimeField::new(3).unwrap();
        // A 3-cycle pattern defeats the singleton cascade entirely.
        let m = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        let (cols, vals) = dense_to_rows(&m);
        let rows: Vec<_> = cols
            .iter()
            .zip(&vals)
            .map(|(c, v)| SparseRow {
                cols: c,
                vals: Some(v),
            })
            .collect();
        let res = solve_right(f, 3, &rows, &[vec![1, 0, 0]]);
        // The determinant is 2: invertible over GF(3), singular over GF(2).
        assert_eq!(res.rank, 3);
        assert_eq!(res.dense_rows, 3);
        let w = densify(res.solutions[0].as_ref().unwrap(), 3);
        for (r, row) in m.iter().enumerate() {
            let dot = row.iter().zip(&w).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
            assert_eq!(dot, u32::from(r == 0));
        }
        assert_eq!(rank(PrimeField::GF2, 3, &rows), 2);
    }

    #[test]
    fn inconsistent_rhs_is_reported() {
        let cols = [vec![0u32], vec![0u32]];
        let rows: Vec<_> = cols.iter().map(|c| SparseRow::ones(c)).collect();
        let res = solve_right(PrimeField::GF2, 1, &rows, &[vec![1, 0], vec![1, 1]]);
        assert_eq!(res.rank, 1);
        assert!(res.solutions[0].is_none());
        assert_eq!(res.solutions[1].as_deref(), Some(&[(0u32, 1u32)][..]));
    }

    fn densify(sol: &[(u32, u32)], ncols: usize) -> Vec<u32> {
        let mut w = vec![0; ncols];
        for &(c, v) in sol {
            w[c as usize] = v;
        }
        w
    }

    #[test]
    fn reused_solver_maps_columns_per_call() {
        let mut solver = SparseSolver::new(PrimeField::GF2, 10);
        let a = [vec![7u32, 9], vec![9u32]];
        let rows: Vec<_> = a.iter().map(|c| SparseRow::ones(c)).collect();
        let res = solver.solve_right(&rows, &[vec![1, 0]]);
        assert_eq!(res.solutions[0].as_deref(), Some(&[(7u32, 1u32)][..]));
        let b = [vec![2u32], vec![2u32, 7]];
        let rows: Vec<_> = b.iter().map(|c| SparseRow::ones(c)).collect();
        let res = solver.solve_right(&rows, &[vec![0, 1]]);
        assert_eq!(res.rank, 2);
        assert_eq!(res.solutions[0].as_deref(), Some(&[(7u32, 1u32)][..]));
        assert_eq!(solver.rank(&[]), 0);
    }
}
