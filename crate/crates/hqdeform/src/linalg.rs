//! Exact Gaussian elimination with infeasibility certificates.
//!
//! Provides:
//! * [`Matrix`]: a dense matrix over one coefficient field.
//! * [`solve`]: solves `A x = b` exactly, returning either a solution or a
//!   Farkas-style certificate `y` with `y^T A = 0` and `y^T b != 0`.
//! * [`rank`]: the rank of a dense matrix.
//! * [`Eliminator`]: the incremental sparse engine behind both, exposed
//!   because large cochain systems are assembled row by row and are far too
//!   sparse to densify first.
//!
//! All arithmetic is exact; there is no pivot threshold or tolerance anywhere.

use crate::scalar::{FieldSpec, Scalar};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: matrix has {rows} rows, vector has {len}")]
    DimensionMismatch { rows: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldSpec,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Matrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in &rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix { rows: nrows, cols: ncols, field, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `A x` for a dense vector.
    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    if !self.get(i, j).is_zero() && !x[j].is_zero() {
                        acc += self.get(i, j).clone() * x[j].clone();
                    }
                }
                acc
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// One exact solution; free variables are set to zero.
    Solution(Vec<Scalar>),
    /// `certificate` is `y` with `y^T A = 0` and `y^T b != 0`, indexed by row.
    Infeasible { certificate: Vec<Scalar> },
}

/// One echelon row of the incremental eliminator: unit leading coefficient at
/// `coeffs`' first key, plus the combination of original rows that produced it.
#[derive(Debug, Clone)]
struct EchRow {
    coeffs: BTreeMap<usize, Scalar>,
    rhs: Scalar,
    combo: BTreeMap<usize, Scalar>,
}

/// Result of feeding one row into the [`Eliminator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOutcome {
    /// Row was reduced to zero and its right side vanished: redundant.
    Redundant,
    /// Row contributed a new pivot.
    Pivot(usize),
    /// Row reduced to `0 = nonzero`; the map is `y` over original row indices.
    Inconsistent(BTreeMap<usize, Scalar>),
}

/// Incremental exact row reduction over sparse rows. Rows are pushed one at a
/// time; each is reduced against the pivots found so far. Tracks, per echelon
/// row, the combination of input rows that produced it, which is what turns an
/// inconsistent reduction into a verifiable certificate.
pub struct Eliminator {
    field: FieldSpec,
    pivots: BTreeMap<usize, EchRow>,
    rows_seen: usize,
    track_combos: bool,
}

impl Eliminator {
    pub fn new(field: FieldSpec) -> Eliminator {
        Eliminator { field, pivots: BTreeMap::new(), rows_seen: 0, track_combos: true }
    }

    /// Disables certificate bookkeeping (used by rank computations).
    pub fn without_combos(field: FieldSpec) -> Eliminator {
        Eliminator { field, pivots: BTreeMap::new(), rows_seen: 0, track_combos: false }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows_seen(&self) -> usize {
        self.rows_seen
    }

    pub fn push_row(&mut self, coeffs: BTreeMap<usize, Scalar>, rhs: Scalar) -> RowOutcome {
        let row_index = self.rows_seen;
        self.rows_seen += 1;
        let mut coeffs: BTreeMap<usize, Scalar> =
            coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut rhs = rhs;
        let mut combo = BTreeMap::new();
        if self.track_combos {
            combo.insert(row_index, self.field.one());
        }
        loop {
            let lead = match coeffs.first_key_value() {
                Some((&c, _)) => c,
                None => break,
            };
            let Some(piv) = self.pivots.get(&lead) else { break };
            // row -= row[lead] * pivot (pivot row has unit lead)
            let factor = coeffs.get(&lead).unwrap().clone();
            for (c, v) in &piv.coeffs {
                let delta = factor.clone() * v.clone();
                merge_sub(&mut coeffs, *c, delta);
            }
            rhs -= factor.clone() * piv.rhs.clone();
            if self.track_combos {
                for (r, v) in &piv.combo {
                    let delta = factor.clone() * v.clone();
                    merge_sub(&mut combo, *r, delta);
                }
            }
        }
        if coeffs.is_empty() {
            if rhs.is_zero() {
                RowOutcome::Redundant
            } else {
                RowOutcome::Inconsistent(combo)
            }
        } else {
            let (&lead, lead_val) = coeffs.first_key_value().unwrap();
            let inv = lead_val.inv().expect("nonzero by construction");
            let coeffs: BTreeMap<usize, Scalar> = coeffs
                .into_iter()
                .map(|(c, v)| (c, v * inv.clone()))
                .collect();
            let rhs = rhs * inv.clone();
            let combo: BTreeMap<usize, Scalar> =
                combo.into_iter().map(|(r, v)| (r, v * inv.clone())).collect();
            self.pivots.insert(lead, EchRow { coeffs, rhs, combo });
            RowOutcome::Pivot(lead)
        }
    }

    /// Back-substitutes the echelon system. Free columns are set to zero.
    pub fn solution(&self, ncols: usize) -> Vec<Scalar> {
        let mut x = vec![self.field.zero(); ncols];
        for (&col, row) in self.pivots.iter().rev() {
            let mut val = row.rhs.clone();
            for (&c, v) in row.coeffs.iter().skip(1) {
                if !x[c].is_zero() {
                    val -= v.clone() * x[c].clone();
                }
            }
            x[col] = val;
        }
        x
    }
}

fn merge_sub(m: &mut BTreeMap<usize, Scalar>, key: usize, delta: Scalar) {
    if delta.is_zero() {
        return;
    }
    match m.entry(key) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let v = e.get().clone() - delta;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(-delta);
        }
    }
}

/// Solves `A x = b` exactly.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<SolveOutcome, LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch { rows: a.rows, len: b.len() });
    }
    let mut elim = Eliminator::new(a.field);
    for i in 0..a.rows {
        let coeffs: BTreeMap<usize, Scalar> = (0..a.cols)
            .filter(|&j| !a.get(i, j).is_zero())
            .map(|j| (j, a.get(i, j).clone()))
            .collect();
        match elim.push_row(coeffs, b[i].clone()) {
            RowOutcome::Inconsistent(combo) => {
                let mut cert = vec![a.field.zero(); a.rows];
                for (r, v) in combo {
                    cert[r] = v;
                }
                debug_assert!(verify_certificate(a, b, &cert));
                return Ok(SolveOutcome::Infeasible { certificate: cert });
            }
            RowOutcome::Redundant | RowOutcome::Pivot(_) => {}
        }
    }
    Ok(SolveOutcome::Solution(elim.solution(a.cols)))
}

/// Rank of `A`, by the same elimination without certificate bookkeeping.
pub fn rank(a: &Matrix) -> usize {
    let mut elim = Eliminator::without_combos(a.field);
    for i in 0..a.rows {
        let coeffs: BTreeMap<usize, Scalar> = (0..a.cols)
            .filter(|&j| !a.get(i, j).is_zero())
            .map(|j| (j, a.get(i, j).clone()))
            .collect();
        elim.push_row(coeffs, a.field.zero());
    }
    elim.rank()
}

/// Determinant of a square matrix, by fraction-preserving elimination.
pub fn determinant(a: &Matrix) -> Scalar {
    assert_eq!(a.rows, a.cols, "determinant needs a square matrix");
    let n = a.rows;
    let mut m: Vec<Vec<Scalar>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut det = a.field.one();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return a.field.zero();
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= pivot.clone();
        let inv = pivot.inv().expect("pivot nonzero");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() * inv.clone();
            for c in col..n {
                let delta = factor.clone() * m[col][c].clone();
                let v = m[r][c].clone() - delta;
                m[r][c] = v;
            }
        }
    }
    det
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(a: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows, a.cols, "inverse needs a square matrix");
    let n = a.rows;
    let mut m: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            for j in 0..n {
                row.push(if i == j { a.field.one() } else { a.field.zero() });
            }
            row
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, col);
        let inv = m[col][col].inv().expect("pivot nonzero");
        for c in 0..2 * n {
            let v = m[col][c].clone() * inv.clone();
            m[col][c] = v;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..2 * n {
                let delta = factor.clone() * m[col][c].clone();
                let v = m[r][c].clone() - delta;
                m[r][c] = v;
            }
        }
    }
    let mut out = Matrix::zero(n, n, a.field);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, m[i][n + j].clone());
        }
    }
    Some(out)
}

/// Direct check that `y^T A = 0` and `y^T b != 0`.
pub fn verify_certificate(a: &Matrix, b: &[Scalar], y: &[Scalar]) -> bool {
    if y.len() != a.rows {
        return false;
    }
    for j in 0..a.cols {
        let mut acc = a.field.zero();
        for i in 0..a.rows {
            if !y[i].is_zero() && !a.get(i, j).is_zero() {
                acc += y[i].clone() * a.get(i, j).clone();
            }
        }
        if !acc.is_zero() {
            return false;
        }
    }
    let mut dot = a.field.zero();
    for i in 0..a.rows {
        if !y[i].is_zero() {
            dot += y[i].clone() * b[i].clone();
        }
    }
    !dot.is_zero()
}
