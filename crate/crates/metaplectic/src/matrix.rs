//! Dense matrices over Q_p scalars, with the elimination routines used by
//! the group-theoretic layers.
//!
//! Elimination follows a "designed zero" discipline: an entry that the
//! algorithm eliminates by construction is *set* to literal zero instead of
//! recomputed, so structural zeros never degenerate into exhausted
//! capped-precision values.  Rank-sensitive computations are expected to be
//! fed exact (`Exact`/`Cyc`) entries by the callers; genuinely approximate
//! entries surface [`Error::PrecisionExhausted`] when a pivot decision
//! cannot be made, rather than guessing.

use crate::error::{Error, Result};
use crate::padic::PadicNumber;

/// A dense rows x cols matrix of Q_p scalars, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<PadicNumber>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![PadicNumber::Zero; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, PadicNumber::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> PadicNumber) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from integer entries (rows of equal length).
    pub fn from_ints(entries: &[&[i64]]) -> Self {
        let rows = entries.len();
        let cols = if rows == 0 { 0 } else { entries[0].len() };
        Mat::from_fn(rows, cols, |i, j| PadicNumber::from_int(entries[i][j]))
    }

    pub fn at(&self, i: usize, j: usize) -> &PadicNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PadicNumber) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Mat {
        Mat {
            rows: 1,
            cols: self.cols,
            data: self.data[i * self.cols..(i + 1) * self.cols].to_vec(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn t(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn neg(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).neg())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut m = Mat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).add(other.at(i, j))?);
            }
        }
        Ok(m)
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut m = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = PadicNumber::Zero;
                for k in 0..self.cols {
                    let t = self.at(i, k).mul(other.at(k, j))?;
                    acc = acc.add(&t)?;
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    pub fn scale(&self, c: &PadicNumber) -> Result<Mat> {
        let mut m = Mat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).mul(c)?);
            }
        }
        Ok(m)
    }

    /// Stack vertically: [self; other].
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Assemble from four blocks [[a, b], [c, d]].
    pub fn from_blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        Mat::from_fn(rows, cols, |i, j| {
            if i < a.rows {
                if j < a.cols { a.at(i, j).clone() } else { b.at(i, j - a.cols).clone() }
            } else if j < a.cols {
                c.at(i - a.rows, j).clone()
            } else {
                d.at(i - a.rows, j - a.cols).clone()
            }
        })
    }

    /// Extract the sub-block with rows r0..r1, cols c0..c1.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        Mat::from_fn(r1 - r0, c1 - c0, |i, j| self.at(r0 + i, c0 + j).clone())
    }

    /// Entry-wise mathematical equality to available precision.
    pub fn eq_check(&self, other: &Mat, p: u64) -> Result<bool> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Ok(false);
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.at(i, j).eq_check(other.at(i, j), p)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Gauss-Jordan inverse.  Errors with `DomainError` on a singular matrix
    /// and propagates `PrecisionExhausted` from undecidable pivots.
    pub fn inverse(&self, p: u64) -> Result<Mat> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            // find pivot row
            let mut pivot = None;
            for r in col..n {
                if !a.at(r, col).is_zero()? {
                    pivot = Some(r);
                    break;
                }
            }
            let pr = pivot.ok_or_else(|| {
                Error::DomainError(format!("singular matrix: no pivot in column {col}"))
            })?;
            if pr != col {
                for j in 0..n {
                    let tmp = a.at(col, j).clone();
                    a.set(col, j, a.at(pr, j).clone());
                    a.set(pr, j, tmp);
                    let tmp = inv.at(col, j).clone();
                    inv.set(col, j, inv.at(pr, j).clone());
                    inv.set(pr, j, tmp);
                }
            }
            let d = a.at(col, col).clone();
            let dinv = d.inv(p)?;
            for j in 0..n {
                let v = a.at(col, j).mul(&dinv)?;
                a.set(col, j, v);
                let v = inv.at(col, j).mul(&dinv)?;
                inv.set(col, j, v);
            }
            a.set(col, col, PadicNumber::one());
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.at(r, col).clone();
                if f.is_zero().unwrap_or(false) {
                    a.set(r, col, PadicNumber::Zero);
                    continue;
                }
                for j in 0..n {
                    let sub = f.mul(a.at(col, j))?;
                    let v = a.at(r, j).sub(&sub)?;
                    a.set(r, j, v);
                    let sub = f.mul(inv.at(col, j))?;
                    let v = inv.at(r, j).sub(&sub)?;
                    inv.set(r, j, v);
                }
                // eliminated by construction
                a.set(r, col, PadicNumber::Zero);
            }
        }
        Ok(inv)
    }
}

/// Determinant by forward elimination (designed zeros, sign-tracked swaps).
pub fn det(p: u64, m: &Mat) -> Result<PadicNumber> {
    assert!(m.is_square(), "determinant of non-square matrix");
    let n = m.rows;
    let mut a = m.clone();
    let mut acc = PadicNumber::one();
    for col in 0..n {
        let mut pivot = None;
        for r in col..n {
            if !a.at(r, col).is_zero()? {
                pivot = Some(r);
                break;
            }
        }
        let pr = match pivot {
            Some(r) => r,
            None => return Ok(PadicNumber::Zero),
        };
        if pr != col {
            for j in 0..n {
                let tmp = a.at(col, j).clone();
                a.set(col, j, a.at(pr, j).clone());
                a.set(pr, j, tmp);
            }
            acc = acc.neg();
        }
        let d = a.at(col, col).clone();
        acc = acc.mul(&d)?;
        let dinv = d.inv(p)?;
        for r in (col + 1)..n {
            let f = a.at(r, col).mul(&dinv)?;
            if f.is_zero().unwrap_or(false) {
                a.set(r, col, PadicNumber::Zero);
                continue;
            }
            for j in (col + 1)..n {
                let sub = f.mul(a.at(col, j))?;
                let v = a.at(r, j).sub(&sub)?;
                a.set(r, j, v);
            }
            a.set(r, col, PadicNumber::Zero);
        }
    }
    Ok(acc)
}

/// Row echelon state: the reduced matrix, the pivot column of each pivot
/// row, and the rank.
#[derive(Debug, Clone)]
pub struct Rref {
    pub mat: Mat,
    pub pivot_cols: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Reduced row echelon form with designed zeros.
pub fn rref(p: u64, m: &Mat) -> Result<Rref> {
    let mut a = m.clone();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for col in 0..a.cols {
        if r == a.rows {
            break;
        }
        let mut pivot = None;
        for i in r..a.rows {
            if !a.at(i, col).is_zero()? {
                pivot = Some(i);
                break;
            }
        }
        let pi = match pivot {
            Some(i) => i,
            None => continue,
        };
        if pi != r {
            for j in 0..a.cols {
                let tmp = a.at(r, j).clone();
                a.set(r, j, a.at(pi, j).clone());
                a.set(pi, j, tmp);
            }
        }
        let d = a.at(r, col).clone();
        let dinv = d.inv(p)?;
        for j in col..a.cols {
            let v = a.at(r, j).mul(&dinv)?;
            a.set(r, j, v);
        }
        a.set(r, col, PadicNumber::one());
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a.at(i, col).clone();
            if f.is_zero().unwrap_or(false) {
                a.set(i, col, PadicNumber::Zero);
                continue;
            }
            for j in col..a.cols {
                let sub = f.mul(a.at(r, j))?;
                let v = a.at(i, j).sub(&sub)?;
                a.set(i, j, v);
            }
            a.set(i, col, PadicNumber::Zero);
        }
        pivot_cols.push(col);
        r += 1;
    }
    Ok(Rref { mat: a, pivot_cols })
}

/// Rank of a matrix.
pub fn rank(p: u64, m: &Mat) -> Result<usize> {
    Ok(rref(p, m)?.rank())
}

/// Canonical basis of the row space: the nonzero rows of the rref.
pub fn row_basis(p: u64, m: &Mat) -> Result<Mat> {
    let r = rref(p, m)?;
    Ok(r.mat.block(0, r.rank(), 0, m.cols))
}

/// Basis of the right kernel {x : M x = 0}, returned as rows.
pub fn kernel_basis(p: u64, m: &Mat) -> Result<Mat> {
    let r = rref(p, m)?;
    let rank = r.rank();
    let free: Vec<usize> = (0..m.cols).filter(|c| !r.pivot_cols.contains(c)).collect();
    let mut k = Mat::zeros(free.len(), m.cols);
    for (idx, &fc) in free.iter().enumerate() {
        k.set(idx, fc, PadicNumber::one());
        for (prow, &pc) in r.pivot_cols.iter().enumerate().take(rank) {
            k.set(idx, pc, r.mat.at(prow, fc).neg());
        }
    }
    Ok(k)
}

/// Basis of the left kernel {w : w M = 0}, returned as rows.
pub fn left_kernel(p: u64, m: &Mat) -> Result<Mat> {
    kernel_basis(p, &m.t())
}

/// Solve M X = B.  Returns None when the system is inconsistent.
pub fn solve_right(p: u64, m: &Mat, b: &Mat) -> Result<Option<Mat>> {
    assert_eq!(m.rows, b.rows, "shape mismatch in solve");
    let aug = Mat::from_fn(m.rows, m.cols + b.cols, |i, j| {
        if j < m.cols { m.at(i, j).clone() } else { b.at(i, j - m.cols).clone() }
    });
    let r = rref(p, &aug)?;
    // inconsistent iff a pivot lands in the augmented columns
    for &c in &r.pivot_cols {
        if c >= m.cols {
            return Ok(None);
        }
    }
    let mut x = Mat::zeros(m.cols, b.cols);
    for (prow, &pc) in r.pivot_cols.iter().enumerate() {
        for j in 0..b.cols {
            x.set(pc, j, r.mat.at(prow, m.cols + j).clone());
        }
    }
    Ok(Some(x))
}

/// Basis (rows) of the intersection of the row spaces of A and B.
pub fn intersect_rowspaces(p: u64, a: &Mat, b: &Mat) -> Result<Mat> {
    assert_eq!(a.cols, b.cols, "ambient dimension mismatch");
    let ab = row_basis(p, a)?;
    let bb = row_basis(p, b)?;
    if ab.rows == 0 || bb.rows == 0 {
        return Ok(Mat::zeros(0, a.cols));
    }
    // w = (u, v) with u A - v B = 0  <=>  w [A; -B] = 0
    let stacked = ab.vstack(&bb.neg());
    let lk = left_kernel(p, &stacked)?;
    if lk.rows == 0 {
        return Ok(Mat::zeros(0, a.cols));
    }
    let u = lk.block(0, lk.rows, 0, ab.rows);
    let inter = u.mul(&ab)?;
    row_basis(p, &inter)
}

/// Rows of `candidates` that extend the row space of `base`: returns the
/// selected original rows, in order, whose addition strictly grows the span.
pub fn extend_basis(p: u64, base: &Mat, candidates: &Mat) -> Result<Mat> {
    assert_eq!(base.cols, candidates.cols, "ambient dimension mismatch");
    let mut current = row_basis(p, base)?;
    let mut picked = Mat::zeros(0, base.cols);
    for i in 0..candidates.rows {
        let row = candidates.row(i);
        let trial = current.vstack(&row);
        if rank(p, &trial)? > current.rows {
            picked = picked.vstack(&row);
            current = row_basis(p, &trial)?;
        }
    }
    Ok(picked)
}
