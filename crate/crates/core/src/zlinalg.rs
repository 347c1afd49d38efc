//! Dense integer matrices: Smith normal form, integer linear systems and
//! cokernels of integer matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Dimension(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(IntegerMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::Dimension(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::Dimension("hcat row mismatch".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let nz = invariant_factors(self);
        nz.len()
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// A finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/torsion_i`, with
/// `torsion` listed as invariant factors `d_1 | d_2 | ...`, each `> 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Smith normal form with transforms: returns `(D, U, V)` with `U·A·V = D`.
pub fn smith_normal_form(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
    let mut w = Work::new(a, true);
    w.run();
    let u = w.u.take().expect("tracked");
    let v = w.v.take().expect("tracked");
    (w.into_matrix(), u, v)
}

/// Nonzero diagonal entries of the Smith form, without transforms.
pub fn invariant_factors(a: &IntegerMatrix) -> Vec<BigInt> {
    let mut w = Work::new(a, false);
    w.run();
    let k = a.rows.min(a.cols);
    (0..k).map(|i| w.a[i][i].clone()).filter(|d| !d.is_zero()).collect()
}

/// Structure of `Z^rows / column-span(A)`.
pub fn cokernel_structure(a: &IntegerMatrix) -> FgAbelianGroup {
    let d = invariant_factors(a);
    FgAbelianGroup { free_rank: a.rows - d.len(), torsion: d.into_iter().filter(|x| !x.is_one()).collect() }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Option<IntegerMatrix>,
    v: Option<IntegerMatrix>,
    rows: usize,
    cols: usize,
}

impl Work {
    fn new(a: &IntegerMatrix, track: bool) -> Self {
        Work {
            a: (0..a.rows).map(|i| a.row(i).to_vec()).collect(),
            u: track.then(|| IntegerMatrix::identity(a.rows)),
            v: track.then(|| IntegerMatrix::identity(a.cols)),
            rows: a.rows,
            cols: a.cols,
        }
    }

    fn into_matrix(self) -> IntegerMatrix {
        let entries = self.a.into_iter().flatten().collect();
        IntegerMatrix { rows: self.rows, cols: self.cols, entries }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            for k in 0..u.cols {
                u.entries.swap(i * u.cols + k, j * u.cols + k);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for k in 0..v.rows {
                v.entries.swap(k * v.cols + i, k * v.cols + j);
            }
        }
    }

    /// row_dst -= q * row_src
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        let (s, d) = pair_mut(&mut self.a, src, dst);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x -= q * y;
            }
        }
        if let Some(u) = &mut self.u {
            let c = u.cols;
            for k in 0..c {
                let y = u.entries[src * c + k].clone();
                if !y.is_zero() {
                    u.entries[dst * c + k] -= q * y;
                }
            }
        }
    }

    /// col_dst -= q * col_src
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for row in &mut self.a {
            if !row[src].is_zero() {
                let y = &row[src] * q;
                row[dst] -= y;
            }
        }
        if let Some(v) = &mut self.v {
            let c = v.cols;
            for k in 0..v.rows {
                let y = v.entries[k * c + src].clone();
                if !y.is_zero() {
                    v.entries[k * c + dst] -= q * y;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            let c = u.cols;
            for k in 0..c {
                let x = &u.entries[i * c + k];
                u.entries[i * c + k] = -x;
            }
        }
    }

    fn run(&mut self) {
        let k = self.rows.min(self.cols);
        for t in 0..k {
            let Some((pi, pj)) = self.min_nonzero(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&self.a[t][t]);
                    self.row_axpy(i, t, &q);
                    if !self.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&self.a[t][t]);
                    self.col_axpy(j, t, &q);
                    if !self.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // Move the smallest remaining entry of row/column t to the pivot.
                    let mut best: Option<(usize, usize)> = None;
                    let mut consider = |i: usize, j: usize, a: &Vec<Vec<BigInt>>| {
                        if a[i][j].is_zero() {
                            return;
                        }
                        if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    };
                    for i in t..self.rows {
                        consider(i, t, &self.a);
                    }
                    for j in t..self.cols {
                        consider(t, j, &self.a);
                    }
                    let (bi, bj) = best.expect("pivot row or column nonzero");
                    self.swap_rows(t, bi);
                    self.swap_cols(t, bj);
                    continue;
                }
                // Row and column cleared; enforce divisibility of the rest.
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        self.row_axpy(t, i, &-BigInt::one());
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }

    fn min_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = &self.a[i][j];
                if v.is_zero() {
                    continue;
                }
                if v.abs().is_one() {
                    return Some((i, j));
                }
                if best.is_none_or(|(bi, bj)| v.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (l, r) = v.split_at_mut(b);
        (&l[a], &mut r[0])
    } else {
        let (l, r) = v.split_at_mut(a);
        (&r[0], &mut l[b])
    }
}

/// Finds one integer solution of `A·x = b`, if any exists.
///
/// Column-style Hermite reduction `A·V = H` with `H` lower echelon, then
/// forward substitution; free coordinates are set to zero.
pub fn solve_integer_linear(a: &IntegerMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::Dimension(format!("right-hand side of length {} for {} rows", b.len(), a.rows)));
    }
    let (rows, cols) = (a.rows, a.cols);
    // Column-major stack of [A; I]: each column carries its V column below.
    let mut col: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| {
            let mut c: Vec<BigInt> = (0..rows).map(|i| a.get(i, j).clone()).collect();
            c.extend((0..cols).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            c
        })
        .collect();
    let mut pivots: Vec<Option<usize>> = vec![None; rows];
    let mut pc = 0;
    for i in 0..rows {
        if pc == cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for (j, c) in col.iter().enumerate().skip(pc) {
                if c[i].is_zero() {
                    continue;
                }
                if best.is_none_or(|bj| c[i].abs() < col[bj][i].abs()) {
                    best = Some(j);
                }
            }
            let Some(bj) = best else { break };
            col.swap(pc, bj);
            let mut done = true;
            for j in pc + 1..cols {
                if col[j][i].is_zero() {
                    continue;
                }
                let q = col[j][i].div_floor(&col[pc][i]);
                let (src, dst) = pair_mut(&mut col, pc, j);
                for (x, y) in dst.iter_mut().zip(src.iter()).skip(i) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
                if !dst[i].is_zero() {
                    done = false;
                }
            }
            if done {
                pivots[i] = Some(pc);
                pc += 1;
                break;
            }
        }
    }
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows {
        let upto = match pivots[i] {
            Some(p) => p,
            None => pc,
        };
        let mut s = b[i].clone();
        for (k, yk) in y.iter().enumerate().take(upto) {
            if !yk.is_zero() && !col[k][i].is_zero() {
                s -= &col[k][i] * yk;
            }
        }
        match pivots[i] {
            Some(p) => {
                let (q, r) = s.div_rem(&col[p][i]);
                if !r.is_zero() {
                    return Ok(None);
                }
                y[p] = q;
            }
            None => {
                if !s.is_zero() {
                    return Ok(None);
                }
            }
        }
    }
    let mut x = vec![BigInt::zero(); cols];
    for (k, yk) in y.iter().enumerate() {
        if yk.is_zero() {
            continue;
        }
        for (xj, v) in x.iter_mut().zip(&col[k][rows..]) {
            if !v.is_zero() {
                *xj += v * yk;
            }
        }
    }
    debug_assert_eq!(a.mul_vec(&x).unwrap(), b);
    Ok(Some(x))
}
