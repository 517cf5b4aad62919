//! The symplectic similitude group GSp(W) for W = F^(2m), and the
//! decomposition theory relative to the Siegel parabolic.
//!
//! Conventions: W consists of row vectors with the group acting on the
//! right; the Gram matrix of the symplectic form is J = (0, I; -I, 0), so
//! <e_i, e*_j> = delta_ij for the standard basis e_1..e_m, e*_1..e*_m.  An
//! element g with g J g^t = lambda J has similitude factor lambda; Sp(W) is
//! the kernel lambda = 1.  The Siegel parabolic P stabilizes the Lagrangian
//! X* spanned by the e*_i and consists of block matrices (a, b; 0, (a^t)^-1)
//! with a b^t symmetric.
//!
//! Every isometry factors as g = p_1 w_S p_2 with p_i in P and w_S a
//! standard involution indexed by a subset S of {1..m}; the factorization is
//! computed constructively by rank-normalizing the lower-left block.  The
//! exposed invariants j(g) = |S| (the rank of that block) and
//! x(g) = det(a_1 a_2) mod squares do not depend on the choices made, which
//! the verification harness checks by replaying the normalization under two
//! pivot rules.  The module also computes the Leray Gram form of a triple of
//! Lagrangians specialized to (X*, X* g_2^-1, X* g_1), whose Weil index is
//! the two-cocycle implemented downstream.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{
    det, extend_basis, intersect_rowspaces, rank, row_basis, solve_right, Mat,
};
use crate::padic::{PadicNumber, PrimeContext, SquareClass};
use crate::quadform::{diagonalize, Diagonalization, GramForm, PivotStrategy};

/// Gram matrix J of the symplectic form on F^(2m).
pub fn j_mat(m: usize) -> Mat {
    let z = Mat::zeros(m, m);
    let i = Mat::identity(m);
    Mat::from_blocks(&z, &i, &i.neg(), &z)
}

/// An element of GSp(W): a 2m x 2m matrix with g J g^t = lambda J.
#[derive(Debug, Clone)]
pub struct GSpElement {
    pub m: usize,
    pub mat: Mat,
    pub lambda: PadicNumber,
}

impl GSpElement {
    /// Validate a similitude: extracts lambda from g J g^t and checks the
    /// full matrix identity.
    pub fn new(p: u64, mat: Mat) -> Result<Self> {
        if !mat.is_square() || mat.rows % 2 != 0 {
            return Err(Error::NotSymplectic(format!(
                "matrix must be square of even size, got {}x{}",
                mat.rows, mat.cols
            )));
        }
        let m = mat.rows / 2;
        let j = j_mat(m);
        let k = mat.mul(&j)?.mul(&mat.t())?;
        let lambda = k.at(0, m).clone();
        if lambda.is_zero().map_err(|_| {
            Error::PrecisionExhausted("similitude factor has no known digits".into())
        })? {
            return Err(Error::NotSymplectic("degenerate similitude factor".into()));
        }
        let lj = j.scale(&lambda)?;
        if !k.eq_check(&lj, p)? {
            return Err(Error::NotSymplectic(
                "g J g^t is not a scalar multiple of J".into(),
            ));
        }
        Ok(GSpElement { m, mat, lambda })
    }

    /// Validate an isometry (lambda = 1).
    pub fn new_sp(p: u64, mat: Mat) -> Result<Self> {
        let g = Self::new(p, mat)?;
        if !g.lambda.eq_check(&PadicNumber::one(), p)? {
            return Err(Error::NotSymplectic(format!(
                "similitude factor {} is not 1",
                g.lambda
            )));
        }
        Ok(GSpElement { lambda: PadicNumber::one(), ..g })
    }

    pub fn identity(m: usize) -> Self {
        GSpElement { m, mat: Mat::identity(2 * m), lambda: PadicNumber::one() }
    }

    /// The four m x m blocks (a, b; c, d).
    pub fn a(&self) -> Mat {
        self.mat.block(0, self.m, 0, self.m)
    }
    pub fn b(&self) -> Mat {
        self.mat.block(0, self.m, self.m, 2 * self.m)
    }
    pub fn c(&self) -> Mat {
        self.mat.block(self.m, 2 * self.m, 0, self.m)
    }
    pub fn d(&self) -> Mat {
        self.mat.block(self.m, 2 * self.m, self.m, 2 * self.m)
    }

    pub fn mul(&self, other: &GSpElement) -> Result<GSpElement> {
        assert_eq!(self.m, other.m, "rank mismatch");
        Ok(GSpElement {
            m: self.m,
            mat: self.mat.mul(&other.mat)?,
            lambda: self.lambda.mul(&other.lambda)?,
        })
    }

    /// Group inverse via the similitude relation:
    /// g^-1 = lambda^-1 * J^-1 g^t J, no elimination involved.
    pub fn inverse(&self, p: u64) -> Result<GSpElement> {
        let j = j_mat(self.m);
        let jinv = j.neg(); // J^-1 = -J
        let li = self.lambda.inv(p)?;
        let mat = jinv.mul(&self.mat.t())?.mul(&j)?.scale(&li)?;
        Ok(GSpElement { m: self.m, mat, lambda: li })
    }

    /// g^n by repeated multiplication, through the inverse for n < 0.
    pub fn pow(&self, p: u64, n: i64) -> Result<GSpElement> {
        let base = if n < 0 { self.inverse(p)? } else { self.clone() };
        let mut out = GSpElement::identity(self.m);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    /// Conjugate self by h: h^-1 * self * h.  The similitude factor is
    /// unchanged.
    pub fn conj_by(&self, h: &GSpElement, p: u64) -> Result<GSpElement> {
        let hi = h.inverse(p)?;
        let mat = hi.mat.mul(&self.mat)?.mul(&h.mat)?;
        Ok(GSpElement { m: self.m, mat, lambda: self.lambda.clone() })
    }

    /// Is the lower-left block zero (i.e. does g lie in the Siegel
    /// parabolic of its similitude class)?
    pub fn c_is_zero(&self) -> Result<bool> {
        let c = self.c();
        for i in 0..self.m {
            for j in 0..self.m {
                if !c.at(i, j).is_zero()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn eq_check(&self, other: &GSpElement, p: u64) -> Result<bool> {
        self.mat.eq_check(&other.mat, p)
    }
}

/// The standard sector involution w_S for S encoded as a boolean mask over
/// {1..m}: blocks (A, -E; E, A) with E = diag(chi_S), A = diag(1 - chi_S).
/// For m = 1, S = {1} this is (0, -1; 1, 0).
pub fn omega_s(m: usize, mask: &[bool]) -> GSpElement {
    assert_eq!(mask.len(), m, "mask length");
    let e = Mat::from_fn(m, m, |i, j| {
        if i == j && mask[i] { PadicNumber::one() } else { PadicNumber::Zero }
    });
    let a = Mat::from_fn(m, m, |i, j| {
        if i == j && !mask[i] { PadicNumber::one() } else { PadicNumber::Zero }
    });
    let mat = Mat::from_blocks(&a, &e.neg(), &e, &a);
    GSpElement { m, mat, lambda: PadicNumber::one() }
}

/// The scaling section s(y) = diag(I, yI), a similitude with factor y.
pub fn s_scale(m: usize, y: &PadicNumber) -> Result<GSpElement> {
    if y.is_zero().unwrap_or(true) && matches!(y, PadicNumber::Zero) {
        return Err(Error::ZeroArgument("similitude scale must be nonzero".into()));
    }
    let z = Mat::zeros(m, m);
    let i = Mat::identity(m);
    let yi = i.scale(y)?;
    Ok(GSpElement {
        m,
        mat: Mat::from_blocks(&i, &z, &z, &yi),
        lambda: y.clone(),
    })
}

/// Levi element m(x) = diag(x, (x^t)^-1) for invertible x.
pub fn m_levi(p: u64, x: &Mat) -> Result<GSpElement> {
    assert!(x.is_square());
    let m = x.rows;
    let xti = x.t().inverse(p)?;
    let z = Mat::zeros(m, m);
    Ok(GSpElement {
        m,
        mat: Mat::from_blocks(x, &z, &z, &xti),
        lambda: PadicNumber::one(),
    })
}

/// Unipotent element n(b) = (I, b; 0, I) for symmetric b.
pub fn n_unipotent(p: u64, b: &Mat) -> Result<GSpElement> {
    assert!(b.is_square());
    let m = b.rows;
    if !b.eq_check(&b.t(), p)? {
        return Err(Error::NotSymplectic("unipotent block must be symmetric".into()));
    }
    let z = Mat::zeros(m, m);
    let i = Mat::identity(m);
    Ok(GSpElement {
        m,
        mat: Mat::from_blocks(&i, b, &z, &i),
        lambda: PadicNumber::one(),
    })
}

/// The scalar similitude cI (factor c^2).
pub fn scalar_element(m: usize, c: &PadicNumber) -> Result<GSpElement> {
    if matches!(c, PadicNumber::Zero) {
        return Err(Error::ZeroArgument("scalar similitude must be nonzero".into()));
    }
    Ok(GSpElement {
        m,
        mat: Mat::identity(2 * m).scale(c)?,
        lambda: c.mul(c)?,
    })
}

// ---------------------------------------------------------------------------
// Bruhat-type factorization g = p1 w_S p2
// ---------------------------------------------------------------------------

/// The factorization data: g = p1 * w_S * p2 with p1, p2 in the Siegel
/// parabolic, plus the invariants j(g) = |S| and x(g) = det(a_1 a_2) mod
/// squares.
#[derive(Debug, Clone)]
pub struct BruhatData {
    pub p1: GSpElement,
    pub s_mask: Vec<bool>,
    pub p2: GSpElement,
    pub j: usize,
    pub x_class: SquareClass,
}

impl BruhatData {
    pub fn omega(&self) -> GSpElement {
        omega_s(self.s_mask.len(), &self.s_mask)
    }
}

fn swap_rows(m: &mut Mat, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..m.cols {
        let tmp = m.at(i, c).clone();
        m.set(i, c, m.at(j, c).clone());
        m.set(j, c, tmp);
    }
}

fn swap_cols(m: &mut Mat, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..m.rows {
        let tmp = m.at(r, i).clone();
        m.set(r, i, m.at(r, j).clone());
        m.set(r, j, tmp);
    }
}

fn scale_row(m: &mut Mat, i: usize, s: &PadicNumber) -> Result<()> {
    for c in 0..m.cols {
        let v = m.at(i, c).mul(s)?;
        m.set(i, c, v);
    }
    Ok(())
}

fn scale_col(m: &mut Mat, j: usize, s: &PadicNumber) -> Result<()> {
    for r in 0..m.rows {
        let v = m.at(r, j).mul(s)?;
        m.set(r, j, v);
    }
    Ok(())
}

/// row_dst += coef * row_src
fn row_axpy(m: &mut Mat, dst: usize, src: usize, coef: &PadicNumber) -> Result<()> {
    for c in 0..m.cols {
        let t = coef.mul(m.at(src, c))?;
        let v = m.at(dst, c).add(&t)?;
        m.set(dst, c, v);
    }
    Ok(())
}

/// col_dst += coef * col_src
fn col_axpy(m: &mut Mat, dst: usize, src: usize, coef: &PadicNumber) -> Result<()> {
    for r in 0..m.rows {
        let t = coef.mul(m.at(r, src))?;
        let v = m.at(r, dst).add(&t)?;
        m.set(r, dst, v);
    }
    Ok(())
}

/// Constructive factorization g = p1 w_S p2 of an isometry.
///
/// The lower-left block is rank-normalized to diag(I_r, 0) by tracked row
/// and column operations (the pivot rule is a parameter; all exposed
/// invariants are pivot-independent), the remaining blocks are then read off
/// and the result is verified by exact reconstruction.
pub fn bruhat(ctx: &PrimeContext, g: &GSpElement, strategy: PivotStrategy) -> Result<BruhatData> {
    let p = ctx.p;
    if !g.lambda.eq_check(&PadicNumber::one(), p)? {
        return Err(Error::NotSymplectic(
            "factorization applies to isometries; scale the similitude away first".into(),
        ));
    }
    let mm = g.m;
    // fast path: g already in the parabolic
    if g.c_is_zero()? {
        let x_class = ctx.square_class(&det(p, &g.a())?)?;
        return Ok(BruhatData {
            p1: g.clone(),
            s_mask: vec![false; mm],
            p2: GSpElement::identity(mm),
            j: 0,
            x_class,
        });
    }

    // rank-normalize c: left * c * right = diag(I_r, 0)
    let mut c = g.c();
    let mut left = Mat::identity(mm);
    let mut left_inv = Mat::identity(mm);
    let mut right = Mat::identity(mm);
    let mut right_inv = Mat::identity(mm);
    let mut r = 0usize;
    for step in 0..mm {
        let mut pivot: Option<(usize, usize)> = None;
        match strategy {
            PivotStrategy::FirstNonzero => {
                'scan: for i in step..mm {
                    for j in step..mm {
                        if !c.at(i, j).is_zero()? {
                            pivot = Some((i, j));
                            break 'scan;
                        }
                    }
                }
            }
            PivotStrategy::MinValuation => {
                let mut best: Option<((usize, usize), i64)> = None;
                for i in step..mm {
                    for j in step..mm {
                        if !c.at(i, j).is_zero()? {
                            let v = c.at(i, j).valuation(p)?.finite()?;
                            if best.map(|(_, bv)| v < bv).unwrap_or(true) {
                                best = Some(((i, j), v));
                            }
                        }
                    }
                }
                pivot = best.map(|(ij, _)| ij);
            }
        }
        let (pi, pj) = match pivot {
            Some(ij) => ij,
            None => break,
        };
        swap_rows(&mut c, step, pi);
        swap_rows(&mut left, step, pi);
        swap_cols(&mut left_inv, step, pi);
        swap_cols(&mut c, step, pj);
        swap_cols(&mut right, step, pj);
        swap_rows(&mut right_inv, step, pj);
        let d0 = c.at(step, step).clone();
        let dinv = d0.inv(p)?;
        scale_row(&mut c, step, &dinv)?;
        scale_row(&mut left, step, &dinv)?;
        scale_col(&mut left_inv, step, &d0)?;
        c.set(step, step, PadicNumber::one());
        for i in (step + 1)..mm {
            let f = c.at(i, step).clone();
            if f.is_zero().unwrap_or(false) {
                c.set(i, step, PadicNumber::Zero);
                continue;
            }
            let nf = f.neg();
            row_axpy(&mut c, i, step, &nf)?;
            row_axpy(&mut left, i, step, &nf)?;
            col_axpy(&mut left_inv, step, i, &f)?;
            c.set(i, step, PadicNumber::Zero);
        }
        for j in (step + 1)..mm {
            let f = c.at(step, j).clone();
            if f.is_zero().unwrap_or(false) {
                c.set(step, j, PadicNumber::Zero);
                continue;
            }
            let nf = f.neg();
            col_axpy(&mut c, j, step, &nf)?;
            col_axpy(&mut right, j, step, &nf)?;
            row_axpy(&mut right_inv, step, j, &f)?;
            c.set(step, j, PadicNumber::Zero);
        }
        r += 1;
    }
    // c must now be exactly diag(I_r, 0)
    for i in 0..mm {
        for j in 0..mm {
            let expect = if i == j && i < r { PadicNumber::one() } else { PadicNumber::Zero };
            if !c.at(i, j).eq_check(&expect, p)? {
                return Err(Error::InternalIdentityViolation(format!(
                    "rank normalization left entry ({i}, {j}) = {}",
                    c.at(i, j)
                )));
            }
        }
    }

    // g' = m(x1) g m(x2) with (x1^t)^-1 = left, x2 = right
    let x1 = left_inv.t();
    let z = Mat::zeros(mm, mm);
    let m_x1 = Mat::from_blocks(&x1, &z, &z, &left);
    let m_x2 = Mat::from_blocks(&right, &z, &z, &right_inv.t());
    let gp = m_x1.mul(&g.mat)?.mul(&m_x2)?;
    let ap = gp.block(0, mm, 0, mm);
    let bp = gp.block(0, mm, mm, 2 * mm);
    let dp = gp.block(mm, 2 * mm, mm, 2 * mm);

    // structural zeros and symmetry forced by the symplectic relations
    let mut ap = ap;
    for i in 0..r {
        for j in r..mm {
            if !ap.at(i, j).eq_check(&PadicNumber::Zero, p)? {
                return Err(Error::InternalIdentityViolation(format!(
                    "upper-left block not supported on the expected pattern at ({i}, {j})"
                )));
            }
            ap.set(i, j, PadicNumber::Zero);
        }
    }
    let mut dp = dp;
    for i in r..mm {
        for j in 0..r {
            if !dp.at(i, j).eq_check(&PadicNumber::Zero, p)? {
                return Err(Error::InternalIdentityViolation(format!(
                    "lower-right block not supported on the expected pattern at ({i}, {j})"
                )));
            }
            dp.set(i, j, PadicNumber::Zero);
        }
    }
    let a11 = ap.block(0, r, 0, r);
    if !a11.eq_check(&a11.t(), p)? {
        return Err(Error::InternalIdentityViolation(
            "pivot block of the upper-left corner is not symmetric".into(),
        ));
    }

    // p1' = n(b1) with b1 = diag-embedded a11
    let mut b1 = Mat::zeros(mm, mm);
    for i in 0..r {
        for j in 0..r {
            b1.set(i, j, a11.at(i, j).clone());
        }
    }
    let i_m = Mat::identity(mm);
    let p1p = Mat::from_blocks(&i_m, &b1, &z, &i_m);

    // p2' = (a2, b2; 0, (a2^t)^-1)
    let mut a2 = Mat::identity(mm);
    for i in r..mm {
        for j in 0..mm {
            a2.set(i, j, ap.at(i, j).clone());
        }
        a2.set(i, i, ap.at(i, i).clone());
    }
    let bmb1d = bp.sub(&b1.mul(&dp)?)?;
    let b2 = Mat::from_fn(mm, mm, |i, j| {
        if i < r { dp.at(i, j).clone() } else { bmb1d.at(i, j).clone() }
    });
    let a2ti = a2.t().inverse(p)?;
    let p2p = Mat::from_blocks(&a2, &b2, &z, &a2ti);

    let mask: Vec<bool> = (0..mm).map(|i| i < r).collect();
    let w = omega_s(mm, &mask);

    // verify the normalized reconstruction
    let rec = p1p.mul(&w.mat)?.mul(&p2p)?;
    if !rec.eq_check(&gp, p)? {
        return Err(Error::InternalIdentityViolation(
            "normalized factorization does not reproduce the normalized element".into(),
        ));
    }

    // undo the normalization: p1 = m(x1)^-1 p1', p2 = p2' m(x2)^-1
    let m_x1_inv = Mat::from_blocks(&left.t(), &z, &z, &left_inv);
    let m_x2_inv = Mat::from_blocks(&right_inv, &z, &z, &right.t());
    let p1_mat = m_x1_inv.mul(&p1p)?;
    let p2_mat = p2p.mul(&m_x2_inv)?;
    let p1 = GSpElement::new_sp(p, p1_mat).map_err(|e| {
        Error::InternalIdentityViolation(format!("first parabolic factor invalid: {e}"))
    })?;
    let p2 = GSpElement::new_sp(p, p2_mat).map_err(|e| {
        Error::InternalIdentityViolation(format!("second parabolic factor invalid: {e}"))
    })?;
    let rec = p1.mat.mul(&w.mat)?.mul(&p2.mat)?;
    if !rec.eq_check(&g.mat, p)? {
        return Err(Error::InternalIdentityViolation(
            "factorization does not reproduce the input".into(),
        ));
    }

    let da1 = det(p, &p1.a())?;
    let da2 = det(p, &p2.a())?;
    let x_class = ctx.square_class(&da1.mul(&da2)?)?;
    Ok(BruhatData { p1, s_mask: mask, p2, j: r, x_class })
}

/// j(g): the rank of the lower-left block (pivot-independent by definition).
pub fn j_invariant(p: u64, g: &GSpElement) -> Result<usize> {
    rank(p, &g.c())
}

/// x(g): the determinant square class of the parabolic parts.
pub fn x_invariant(ctx: &PrimeContext, g: &GSpElement, strategy: PivotStrategy) -> Result<SquareClass> {
    Ok(bruhat(ctx, g, strategy)?.x_class)
}

// ---------------------------------------------------------------------------
// Leray Gram form of (X*, X* g2^-1, X* g1)
// ---------------------------------------------------------------------------

/// The diagonalized Leray form q(X*, X* g2^-1, X* g1) together with its
/// ambient quotient dimension.
#[derive(Debug, Clone)]
pub struct LerayForm {
    pub diag: Diagonalization,
}

impl LerayForm {
    /// Rank of the induced non-degenerate form.
    pub fn dim(&self) -> usize {
        self.diag.form.dim()
    }
}

/// Compute the Leray form of the Lagrangian triple attached to a pair of
/// isometries: l1 = X*, l2 = X* g2^-1, l3 = X* g1, the quadratic form living
/// on l2 meet (l1 + l3) modulo (l2 meet l1) + (l2 meet l3), with
/// Q(x) = <x_1, x_3> for any decomposition x = x_1 + x_3.
pub fn leray_form(
    ctx: &PrimeContext,
    g1: &GSpElement,
    g2: &GSpElement,
    strategy: PivotStrategy,
) -> Result<LerayForm> {
    let p = ctx.p;
    let mm = g1.m;
    assert_eq!(mm, g2.m, "rank mismatch");
    let n = 2 * mm;
    let l1 = Mat::from_fn(mm, n, |i, j| {
        if j == mm + i { PadicNumber::one() } else { PadicNumber::Zero }
    });
    let g2i = g2.inverse(p)?;
    let l2 = g2i.mat.block(mm, n, 0, n);
    let l3 = g1.mat.block(mm, n, 0, n);

    let sum13 = row_basis(p, &l1.vstack(&l3))?;
    let v = intersect_rowspaces(p, &l2, &sum13)?;
    let wa = intersect_rowspaces(p, &l2, &l1)?;
    let wb = intersect_rowspaces(p, &l2, &l3)?;
    let w0 = row_basis(p, &wa.vstack(&wb))?;
    let reps = extend_basis(p, &w0, &v)?;
    let k = reps.rows;

    if k == 0 {
        let empty = GramForm::new(p, vec![])?;
        let diag = diagonalize(ctx, &empty, strategy)?;
        return Ok(LerayForm { diag });
    }

    // decompose each representative as x = x1 + x3 with x1 in l1, x3 in l3
    let stacked = l1.vstack(&l3);
    let st = stacked.t();
    let mut x1s: Vec<Mat> = Vec::with_capacity(k);
    let mut x3s: Vec<Mat> = Vec::with_capacity(k);
    for i in 0..k {
        let x = reps.row(i);
        let sol = solve_right(p, &st, &x.t())?.ok_or_else(|| {
            Error::InternalIdentityViolation(
                "quotient representative does not lie in l1 + l3".into(),
            )
        })?;
        let u = sol.block(0, l1.rows, 0, 1).t();
        let w = sol.block(l1.rows, l1.rows + l3.rows, 0, 1).t();
        x1s.push(u.mul(&l1)?);
        x3s.push(w.mul(&l3)?);
    }
    let jm = j_mat(mm);
    let pair = |u: &Mat, w: &Mat| -> Result<PadicNumber> {
        Ok(u.mul(&jm)?.mul(&w.t())?.at(0, 0).clone())
    };
    let half = PadicNumber::ratio(1, 2);
    let mut entries = vec![vec![PadicNumber::Zero; k]; k];
    for i in 0..k {
        for j in i..k {
            let t1 = pair(&x1s[i], &x3s[j])?;
            let t2 = pair(&x1s[j], &x3s[i])?;
            let s = t1.add(&t2)?.mul(&half)?;
            entries[i][j] = s.clone();
            entries[j][i] = s;
        }
    }
    let gram = GramForm::new(p, entries)?;
    let diag = diagonalize(ctx, &gram, strategy)?;
    Ok(LerayForm { diag })
}

// ---------------------------------------------------------------------------
// seeded random elements
// ---------------------------------------------------------------------------

/// A random isometry: a short word in the generators n(b), m(a), w_S with
/// small exact integer data.  Words of length up to 12 reach every rank of
/// the lower-left block.
pub fn random_sp(p: u64, m: usize, rng: &mut impl Rng) -> Result<GSpElement> {
    let len = rng.gen_range(1..=12);
    let mut g = GSpElement::identity(m);
    for _ in 0..len {
        let kind = rng.gen_range(0..3);
        let f = match kind {
            0 => {
                // symmetric integer block
                let mut b = Mat::zeros(m, m);
                for i in 0..m {
                    for j in i..m {
                        let v: i64 = rng.gen_range(-3..=3);
                        b.set(i, j, PadicNumber::from_int(v));
                        if i != j {
                            b.set(j, i, PadicNumber::from_int(v));
                        }
                    }
                }
                n_unipotent(p, &b)?
            }
            1 => {
                // small invertible integer matrix
                loop {
                    let a = Mat::from_fn(m, m, |_, _| {
                        PadicNumber::from_int(rng.gen_range(-3..=3))
                    });
                    if !matches!(det(p, &a)?, PadicNumber::Zero) {
                        break m_levi(p, &a)?;
                    }
                }
            }
            _ => {
                let mask: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
                omega_s(m, &mask)
            }
        };
        g = g.mul(&f)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::{det_class, hasse_invariant};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::with_default_precision(p).unwrap()
    }

    #[test]
    fn omega_conventions() {
        let w = omega_s(1, &[true]);
        assert_eq!(w.mat, Mat::from_ints(&[&[0, -1], &[1, 0]]));
        let w0 = omega_s(1, &[false]);
        assert_eq!(w0.mat, Mat::identity(2));
        let w2 = omega_s(2, &[true, false]);
        assert_eq!(
            w2.mat,
            Mat::from_ints(&[
                &[0, 0, -1, 0],
                &[0, 1, 0, 0],
                &[1, 0, 0, 0],
                &[0, 0, 0, 1]
            ])
        );
        // all are isometries
        GSpElement::new_sp(7, w2.mat.clone()).unwrap();
    }

    #[test]
    fn similitude_validation() {
        let s = s_scale(1, &PadicNumber::from_int(5)).unwrap();
        let g = GSpElement::new(7, s.mat.clone()).unwrap();
        assert_eq!(g.lambda, PadicNumber::from_int(5));
        assert!(GSpElement::new_sp(7, s.mat.clone()).is_err());
        // in the 2x2 case every invertible matrix is a similitude with
        // factor det g, so lambda extraction must agree with the determinant
        let gl2 = GSpElement::new(7, Mat::from_ints(&[&[1, 1], &[0, 2]])).unwrap();
        assert!(gl2.lambda.eq_check(&PadicNumber::from_int(2), 7).unwrap());
        // singular: degenerate similitude factor
        assert!(GSpElement::new(7, Mat::from_ints(&[&[1, 2], &[2, 4]])).is_err());
        // 4x4 invertible but not a similitude
        let bad = Mat::from_ints(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 2, 0],
            &[0, 0, 0, 1],
        ]);
        assert!(GSpElement::new(7, bad).is_err());
    }

    #[test]
    fn inverse_via_transpose_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let g = random_sp(7, 2, &mut rng).unwrap();
            let gi = g.inverse(7).unwrap();
            let prod = g.mul(&gi).unwrap();
            assert!(prod.mat.eq_check(&Mat::identity(4), 7).unwrap());
        }
        // a genuine similitude
        let y = PadicNumber::from_int(7);
        let s = s_scale(2, &y).unwrap();
        let si = s.inverse(7).unwrap();
        assert!(s.mul(&si).unwrap().mat.eq_check(&Mat::identity(4), 7).unwrap());
        assert!(si.lambda.eq_check(&y.inv(7).unwrap(), 7).unwrap());
    }

    #[test]
    fn lambda_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let g = random_sp(5, 2, &mut rng).unwrap();
            let y = PadicNumber::from_int(rng.gen_range(1..20));
            let s = s_scale(2, &y).unwrap();
            let prod = g.mul(&s).unwrap();
            let check = GSpElement::new(5, prod.mat.clone()).unwrap();
            assert!(prod.lambda.eq_check(&check.lambda, 5).unwrap());
            assert!(prod.lambda.eq_check(&y, 5).unwrap());
        }
    }

    #[test]
    fn random_sp_rank_coverage() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut seen = [false; 3];
        for _ in 0..1000 {
            let g = random_sp(7, 2, &mut rng).unwrap();
            let j = j_invariant(7, &g).unwrap();
            seen[j] = true;
        }
        assert!(seen.iter().all(|&s| s), "ranks 0..=2 must all occur: {seen:?}");
    }

    #[test]
    fn bruhat_reconstruction_and_pivot_invariance() {
        for p in [3u64, 5, 7, 13] {
            let c = ctx(p);
            let mut rng = ChaCha8Rng::seed_from_u64(100 + p);
            for m in [1usize, 2] {
                for _ in 0..40 {
                    let g = random_sp(p, m, &mut rng).unwrap();
                    let da = bruhat(&c, &g, PivotStrategy::MinValuation).unwrap();
                    let db = bruhat(&c, &g, PivotStrategy::FirstNonzero).unwrap();
                    // reconstruction is asserted inside; cross-check anyway
                    let rec = da
                        .p1
                        .mat
                        .mul(&da.omega().mat)
                        .unwrap()
                        .mul(&da.p2.mat)
                        .unwrap();
                    assert!(rec.eq_check(&g.mat, p).unwrap());
                    assert_eq!(da.j, db.j, "p={p}, m={m}");
                    assert_eq!(da.x_class, db.x_class, "p={p}, m={m}");
                    assert_eq!(da.j, j_invariant(p, &g).unwrap());
                }
            }
        }
    }

    #[test]
    fn bruhat_rejects_proper_similitudes() {
        let c = ctx(5);
        let s = s_scale(1, &PadicNumber::from_int(5)).unwrap();
        assert!(matches!(
            bruhat(&c, &s, PivotStrategy::FirstNonzero),
            Err(Error::NotSymplectic(_))
        ));
    }

    #[test]
    fn sl2_reference_invariants() {
        // for g = (a, b; c, d) with c != 0: j = 1 and x(g) = class(c);
        // for c = 0: j = 0 and x(g) = class(a)
        let c = ctx(7);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut seen_czero = 0;
        for _ in 0..200 {
            let g = random_sp(7, 1, &mut rng).unwrap();
            let data = bruhat(&c, &g, PivotStrategy::FirstNonzero).unwrap();
            let cval = g.mat.at(1, 0);
            if cval.is_zero().unwrap() {
                seen_czero += 1;
                assert_eq!(data.j, 0);
                assert_eq!(data.x_class, c.square_class(g.mat.at(0, 0)).unwrap());
            } else {
                assert_eq!(data.j, 1);
                assert_eq!(data.x_class, c.square_class(cval).unwrap());
            }
        }
        assert!(seen_czero > 0, "the parabolic stratum must be sampled");
    }

    #[test]
    fn x_invariant_parabolic_translation() {
        // x(p0 g) = class(det a0) * x(g) for p0 in the parabolic
        let c = ctx(5);
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for m in [1usize, 2] {
            for _ in 0..30 {
                let g = random_sp(5, m, &mut rng).unwrap();
                // random parabolic element: n(b) m(a)
                let mut b = Mat::zeros(m, m);
                for i in 0..m {
                    for j in i..m {
                        let v: i64 = rng.gen_range(-2..=2);
                        b.set(i, j, PadicNumber::from_int(v));
                        if i != j {
                            b.set(j, i, PadicNumber::from_int(v));
                        }
                    }
                }
                let a = loop {
                    let cand = Mat::from_fn(m, m, |_, _| {
                        PadicNumber::from_int(rng.gen_range(-3..=3))
                    });
                    if !matches!(det(5, &cand).unwrap(), PadicNumber::Zero) {
                        break cand;
                    }
                };
                let p0 = n_unipotent(5, &b).unwrap().mul(&m_levi(5, &a).unwrap()).unwrap();
                let pg = p0.mul(&g).unwrap();
                let lhs = x_invariant(&c, &pg, PivotStrategy::MinValuation).unwrap();
                let da = c.square_class(&det(5, &p0.a()).unwrap()).unwrap();
                let rhs = da.mul(x_invariant(&c, &g, PivotStrategy::MinValuation).unwrap());
                assert_eq!(lhs, rhs, "m={m}");
            }
        }
    }

    #[test]
    fn leray_sl2_anchor() {
        // generic SL2 pairs: dim 1 and det class = class(c1 c2 c3)
        let c = ctx(7);
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let mut generic = 0;
        for _ in 0..300 {
            let g1 = random_sp(7, 1, &mut rng).unwrap();
            let g2 = random_sp(7, 1, &mut rng).unwrap();
            let g3 = g1.mul(&g2).unwrap();
            let c1 = g1.mat.at(1, 0);
            let c2 = g2.mat.at(1, 0);
            let c3 = g3.mat.at(1, 0);
            if c1.is_zero().unwrap() || c2.is_zero().unwrap() || c3.is_zero().unwrap() {
                continue;
            }
            generic += 1;
            let lf = leray_form(&c, &g1, &g2, PivotStrategy::MinValuation).unwrap();
            assert_eq!(lf.dim(), 1);
            assert_eq!(lf.diag.radical_dim, 0);
            let prod = c1.mul(c2).unwrap().mul(c3).unwrap();
            assert_eq!(
                det_class(&c, &lf.diag.form).unwrap(),
                c.square_class(&prod).unwrap()
            );
            if generic > 60 {
                break;
            }
        }
        assert!(generic >= 30, "need generic samples");
    }

    #[test]
    fn leray_degenerate_cases() {
        let c = ctx(5);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for m in [1usize, 2] {
            for _ in 0..20 {
                let g = random_sp(5, m, &mut rng).unwrap();
                let gi = g.inverse(5).unwrap();
                // (h, h^-1): the triple collapses
                let lf = leray_form(&c, &g, &gi, PivotStrategy::FirstNonzero).unwrap();
                assert_eq!(lf.dim(), 0, "m={m}");
                // first argument parabolic: l3 = X*
                let b = Mat::from_fn(m, m, |i, j| {
                    if i == j { PadicNumber::from_int(2) } else { PadicNumber::Zero }
                });
                let pe = n_unipotent(5, &b).unwrap();
                let lf = leray_form(&c, &pe, &g, PivotStrategy::FirstNonzero).unwrap();
                assert_eq!(lf.dim(), 0, "m={m}");
                let lf = leray_form(&c, &g, &pe, PivotStrategy::FirstNonzero).unwrap();
                assert_eq!(lf.dim(), 0, "m={m}");
            }
        }
    }

    #[test]
    fn leray_pivot_invariance() {
        for p in [5u64, 7] {
            let c = ctx(p);
            let mut rng = ChaCha8Rng::seed_from_u64(200 + p);
            for _ in 0..40 {
                let g1 = random_sp(p, 2, &mut rng).unwrap();
                let g2 = random_sp(p, 2, &mut rng).unwrap();
                let la = leray_form(&c, &g1, &g2, PivotStrategy::MinValuation).unwrap();
                let lb = leray_form(&c, &g1, &g2, PivotStrategy::FirstNonzero).unwrap();
                assert_eq!(la.dim(), lb.dim(), "p={p}");
                if la.dim() > 0 {
                    assert_eq!(
                        det_class(&c, &la.diag.form).unwrap(),
                        det_class(&c, &lb.diag.form).unwrap()
                    );
                    assert_eq!(
                        hasse_invariant(&c, &la.diag.form).unwrap(),
                        hasse_invariant(&c, &lb.diag.form).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn conjugation_preserves_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(88);
        let g = random_sp(5, 2, &mut rng).unwrap();
        let y = s_scale(2, &PadicNumber::from_int(5)).unwrap();
        let gc = g.conj_by(&y, 5).unwrap();
        assert!(gc.lambda.eq_check(&PadicNumber::one(), 5).unwrap());
        // and the conjugate is again symplectic
        GSpElement::new_sp(5, gc.mat.clone()).unwrap();
    }
}
