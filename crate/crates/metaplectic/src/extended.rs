//! Extended scalar groups inside the symplectic similitude group.
//!
//! The scalar matrices a.I sit inside GSp(W) with similitude factor a^2, so
//! scalars alone only reach the trivial square class of the similitude
//! character.  This module builds, for each residue case of the odd prime p,
//! an "extended scalar" group whose similitude factors cover all of F^x:
//!
//! * p = 3 (mod 4).  A section kappa of the square classes
//!       kappa(1) = I,            kappa(-1) = diag(I, -I),
//!       kappa(w)  = (0, -I; wI, 0),   kappa(-w) = (0, -I; -wI, 0)
//!   generates, together with the scalars, the group
//!       F~x = F^x kappa(1) u F^x kappa(-1) u F^x kappa(w) u F^x kappa(-w),
//!   and the section multiplies with an F^x-valued defect:
//!       kappa(c1) kappa(c2) = c'(c1, c2) . kappa(c1 c2).
//!
//! * p = 1 (mod 4).  Here -1 is a square and no matrix section over F^x
//!   exists with the right squares, so the scalars are first extended by a
//!   sign slot.  With the canonical square root
//!       sqrt : (F^x)^2 -> F^x   (Hensel root = 1 mod p on principal units,
//!       sqrt(z1^(2i) z2^(2j)) = (-z1)^i z2^j, sqrt(w^2) = -w)
//!   and its defect  sqrt(a) sqrt(b) = c_sqrt(a, b) sqrt(ab),  the group
//!       F~x = { (t, eps) : t in F^x, eps = +-1 },
//!       (t1, e1)(t2, e2) = (t1 t2, e1 e2 c'''(t1, t2)),
//!   doubles F^x, where c''' couples c_sqrt with the defect c' of the class
//!   representatives {1, z1, w, z1 w}.  The same twist on similitude factors
//!   doubles the similitude group:  G~Sp = GSp x {+-1}  with
//!       [g1, e1][g2, e2] = [g1 g2, e1 e2 c'''(lambda_1, lambda_2)].
//!   An embedding of F~x into G~Sp
//!       (u in U1, 1)       -> (sqrt(u).I, 1)
//!       (x in f_2, 1)      -> (sqrt(x).I, 1)
//!       (z1^(2i), 1)       -> ((-z1)^i.I, 1)
//!       (z1^(2i-1), 1)     -> ((-z1)^(i-1).(0, -I; z1 I, 0), 1)
//!       (1, eps)           -> (eps.I, eps)
//!       (w, 1)             -> ((0, -I; wI, 0), 1)
//!   (multiplied in coordinate order f~1, f_2, U1, <w>) is multiplicative on
//!   each coordinate subgroup but not globally: the sections of z1 and w
//!   commute only up to
//!       d0 = (diag(w^-1 z1 . I, w z1^-1 . I), 1),
//!   an isometry generating an infinite cyclic group D.  The image group
//!       F^x = <embedded F~x>  =  D . F~x_+ . {sections of 1, z1, w, z1 w}
//!   (normal form), where F~x_+ is the embedded copy of the squares,
//!       F~x_+ = { (sqrt(a).eps.I, eps) },
//!   and the quotient by F~x_+ D^2 is dihedral of order 8:
//!       D4 = <a, b | a^4 = b^2 = 1, b a = a^3 b>,
//!       a = [section of z1 w],  b = [section of z1],  d0 -> a^2.
//!   On D4 lives a mu4-valued 2-cocycle (odd rank only)
//!       c(x, a^j) = 1,   c(x, b a^j) = i^(rot x),
//!   extending the boundary sign data on <a^2> x D4; no mu2-valued 2-cocycle
//!   does, which `mu2_extension_certificate` certifies by eliminating the
//!   64-unknown linear system over GF(2).

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::padic::{
    c_sqrt, sqrt_canonical, CaseTag, Mu8, PadicNumber, PrimeContext, SqrtDomain, SquareClass,
};
use crate::symplectic::{scalar_element, GSpElement};

// ---------------------------------------------------------------------------
// shared matrix builders
// ---------------------------------------------------------------------------

/// Block matrix (0, -I; low.I, 0) of size 2m.
fn anti_block(m: usize, low: &PadicNumber) -> Mat {
    Mat::from_fn(2 * m, 2 * m, |i, j| {
        if i < m && j >= m && j - m == i {
            PadicNumber::from_int(-1)
        } else if i >= m && j < m && i - m == j {
            low.clone()
        } else {
            PadicNumber::Zero
        }
    })
}

/// Block matrix diag(top.I, bottom.I) of size 2m.
fn diag_pair(m: usize, top: &PadicNumber, bottom: &PadicNumber) -> Mat {
    Mat::from_fn(2 * m, 2 * m, |i, j| {
        if i != j {
            PadicNumber::Zero
        } else if i < m {
            top.clone()
        } else {
            bottom.clone()
        }
    })
}

/// If mat = s.I, return s.
fn as_scalar(p: u64, mat: &Mat) -> Result<Option<PadicNumber>> {
    let s = mat.at(0, 0).clone();
    for i in 0..mat.rows {
        for j in 0..mat.cols {
            if i == j {
                if !mat.at(i, j).eq_check(&s, p)? {
                    return Ok(None);
                }
            } else if !mat.at(i, j).is_zero()? {
                return Ok(None);
            }
        }
    }
    Ok(Some(s))
}

fn check_sign(eps: i8) -> Result<()> {
    if eps == 1 || eps == -1 {
        Ok(())
    } else {
        Err(Error::NotPlusMinusOne(format!("sign slot must be +-1, got {eps}")))
    }
}

// ---------------------------------------------------------------------------
// canonical square root on all of (F^x)^2
// ---------------------------------------------------------------------------

/// Canonical square root of an arbitrary square, as the product of the three
/// component roots: Teichmueller part, principal-unit part (Hensel root
/// = 1 mod p), and sqrt(w^(2n)) = (-w)^n on the uniformizer part.
pub fn sqrt_square(ctx: &PrimeContext, s: &PadicNumber) -> Result<PadicNumber> {
    let (v, e, u1) = ctx.teich_decompose(s)?;
    if v % 2 != 0 {
        return Err(Error::NotASquareInDomain(format!(
            "valuation {v} is odd, not a square"
        )));
    }
    let t = ctx.teich(ctx.root_pow(e))?;
    let st = sqrt_canonical(ctx, &t, SqrtDomain::ResidueSquares)?;
    let su = sqrt_canonical(ctx, &u1, SqrtDomain::PrincipalUnits)?;
    let sp = PadicNumber::pi_pow(ctx.p, 1).neg().pow(v.div_euclid(2), ctx.p)?;
    st.mul(&su)?.mul(&sp)
}

// ---------------------------------------------------------------------------
// p = 3 (mod 4): matrix section over the square classes
// ---------------------------------------------------------------------------

fn require_case(ctx: &PrimeContext, case: CaseTag, what: &str) -> Result<()> {
    if ctx.case != case {
        return Err(Error::WrongResidueCase(format!(
            "{what} is defined for {case}, context has p = {}",
            ctx.p
        )));
    }
    Ok(())
}

/// The section kappa of F^x / (F^x)^2 into GSp(W), p = 3 (mod 4):
/// kappa(1) = I, kappa(-1) = diag(I, -I), kappa(w) = (0, -I; wI, 0),
/// kappa(-w) = (0, -I; -wI, 0).  The similitude factor of kappa(c) is the
/// class representative of c.
pub fn class_section3(ctx: &PrimeContext, m: usize, c: SquareClass) -> Result<GSpElement> {
    require_case(ctx, CaseTag::ResidueThree, "the matrix class section")?;
    let p = ctx.p;
    let pi = PadicNumber::pi_pow(p, 1);
    let mat = match (c.nonsquare_unit, c.odd_val) {
        (false, false) => Mat::identity(2 * m),
        (true, false) => diag_pair(m, &PadicNumber::one(), &PadicNumber::from_int(-1)),
        (false, true) => anti_block(m, &pi),
        (true, true) => anti_block(m, &pi.neg()),
    };
    GSpElement::new(p, mat)
}

/// Multiplication defect of the section, valued in F^x:
/// kappa(c1) kappa(c2) = c'(c1, c2) . kappa(c1 c2).  Rows with c1 of even
/// valuation are trivial; for c1 in the classes of w and -w the value runs
/// through {1, -1, -w, w} as c2 runs through {1, -1, w, -w}.
pub fn c_prime3(ctx: &PrimeContext, c1: SquareClass, c2: SquareClass) -> Result<PadicNumber> {
    require_case(ctx, CaseTag::ResidueThree, "the section defect table")?;
    let pi = PadicNumber::pi_pow(ctx.p, 1);
    Ok(if !c1.odd_val {
        PadicNumber::one()
    } else {
        match (c2.nonsquare_unit, c2.odd_val) {
            (false, false) => PadicNumber::one(),
            (true, false) => PadicNumber::from_int(-1),
            (false, true) => pi.neg(),
            (true, true) => pi,
        }
    })
}

/// Embedding of F^x into the extended scalar group, p = 3 (mod 4).  The
/// argument is decomposed as a = zeta^e u1 w^v; the residue-field part
/// (including its sign), the principal unit, and the uniformizer part are
/// embedded in that order:
///   squares of the residue field and U1 by their canonical roots as
///   scalars, -1 and the odd part of v by the section, even powers of w by
///   sqrt(w^2) = -w.  The similitude factor of the image is exactly a.
pub fn scalar_embedding3(ctx: &PrimeContext, m: usize, a: &PadicNumber) -> Result<GSpElement> {
    require_case(ctx, CaseTag::ResidueThree, "the scalar embedding")?;
    let p = ctx.p;
    let (v, e, u1) = ctx.teich_decompose(a)?;
    // residue-field part: zeta^e = (-1)^(e mod 2) * (even zeta power)
    let sign_odd = e % 2 == 1;
    let e_even = if sign_odd { (e + ctx.l) % (ctx.p - 1) } else { e };
    let sq = ctx.teich(ctx.root_pow(e_even))?;
    let s_f = sqrt_canonical(ctx, &sq, SqrtDomain::ResidueSquares)?;
    let s_u = sqrt_canonical(ctx, &u1, SqrtDomain::PrincipalUnits)?;
    let s_pi = PadicNumber::pi_pow(p, 1).neg().pow(v.div_euclid(2), p)?;
    let scalar = s_f.mul(&s_u)?.mul(&s_pi)?;
    let mut g = scalar_element(m, &scalar)?;
    if sign_odd {
        let c = SquareClass { nonsquare_unit: true, odd_val: false };
        g = g.mul(&class_section3(ctx, m, c)?)?;
    }
    if v.rem_euclid(2) == 1 {
        let c = SquareClass { nonsquare_unit: false, odd_val: true };
        g = g.mul(&class_section3(ctx, m, c)?)?;
    }
    Ok(g)
}

/// Split an element of the p = 3 (mod 4) extended scalar group as
/// y = a . kappa(c).  The class is read off the similitude factor; an
/// element not of this shape is rejected.
pub fn scalar_section_split3(
    ctx: &PrimeContext,
    y: &GSpElement,
) -> Result<(PadicNumber, SquareClass)> {
    require_case(ctx, CaseTag::ResidueThree, "the scalar/section split")?;
    let c = ctx.square_class(&y.lambda)?;
    let k = class_section3(ctx, y.m, c)?;
    let w = y.mul(&k.inverse(ctx.p)?)?;
    match as_scalar(ctx.p, &w.mat)? {
        Some(a) => Ok((a, c)),
        None => Err(Error::NotInGroup(
            "not of the form scalar times class section".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// p = 1 (mod 4): sign-extended scalars and similitudes
// ---------------------------------------------------------------------------

/// Multiplication defect of the class representatives {1, z1, w, z1 w},
/// valued in the squares: rep(c1) rep(c2) = c'(c1, c2) rep(c1 c2).
pub fn c_prime1(ctx: &PrimeContext, c1: SquareClass, c2: SquareClass) -> Result<PadicNumber> {
    require_case(ctx, CaseTag::ResidueOne, "the representative defect table")?;
    let r1 = ctx.class_representative(c1);
    let r2 = ctx.class_representative(c2);
    let r12 = ctx.class_representative(c1.mul(c2));
    r1.mul(&r2)?.div(&r12, ctx.p)
}

/// The sign defect coupling the canonical square root with the class
/// representatives: for t_i = a_i^2 rep(c_i),
///     c'''(t1, t2) = c_sqrt(a1^2, a2^2) . c_sqrt(a1^2 a2^2, c'(c1, c2)).
/// This is the 2-cocycle twisting the doubled scalar group; it is symmetric
/// and depends only on the zeta1-data of its arguments.
pub fn c_triple_prime(ctx: &PrimeContext, t1: &PadicNumber, t2: &PadicNumber) -> Result<i8> {
    require_case(ctx, CaseTag::ResidueOne, "the sign defect")?;
    let c1 = ctx.square_class(t1)?;
    let c2 = ctx.square_class(t2)?;
    let a1 = t1.div(&ctx.class_representative(c1), ctx.p)?;
    let a2 = t2.div(&ctx.class_representative(c2), ctx.p)?;
    let cp = c_prime1(ctx, c1, c2)?;
    Ok(c_sqrt(ctx, &a1, &a2)? * c_sqrt(ctx, &a1.mul(&a2)?, &cp)?)
}

/// An element (t, eps) of the doubled scalar group F~x, p = 1 (mod 4):
/// multiplication is twisted by the sign defect c'''.
#[derive(Debug, Clone)]
pub struct SignedScalar {
    pub t: PadicNumber,
    pub eps: i8,
}

impl SignedScalar {
    pub fn new(t: PadicNumber, eps: i8) -> Result<Self> {
        check_sign(eps)?;
        if matches!(t, PadicNumber::Zero) {
            return Err(Error::ZeroArgument("scalar part must be nonzero".into()));
        }
        Ok(SignedScalar { t, eps })
    }

    pub fn one() -> Self {
        SignedScalar { t: PadicNumber::one(), eps: 1 }
    }

    pub fn mul(&self, ctx: &PrimeContext, other: &SignedScalar) -> Result<SignedScalar> {
        let eps = self.eps * other.eps * c_triple_prime(ctx, &self.t, &other.t)?;
        Ok(SignedScalar { t: self.t.mul(&other.t)?, eps })
    }

    pub fn inverse(&self, ctx: &PrimeContext) -> Result<SignedScalar> {
        let ti = self.t.inv(ctx.p)?;
        let eps = self.eps * c_triple_prime(ctx, &self.t, &ti)?;
        Ok(SignedScalar { t: ti, eps })
    }

    pub fn eq_check(&self, other: &SignedScalar, p: u64) -> Result<bool> {
        Ok(self.eps == other.eps && self.t.eq_check(&other.t, p)?)
    }
}

/// An element [g, eps] of the doubled similitude group G~Sp = GSp x {+-1},
/// p = 1 (mod 4): multiplication is twisted by the sign defect of the
/// similitude factors,
///     [g1, e1][g2, e2] = [g1 g2, e1 e2 c'''(lambda_1, lambda_2)].
#[derive(Debug, Clone)]
pub struct SignedSimilitude {
    pub el: GSpElement,
    pub eps: i8,
}

impl SignedSimilitude {
    pub fn new(ctx: &PrimeContext, el: GSpElement, eps: i8) -> Result<Self> {
        require_case(ctx, CaseTag::ResidueOne, "the doubled similitude group")?;
        check_sign(eps)?;
        Ok(SignedSimilitude { el, eps })
    }

    pub fn identity(m: usize) -> Self {
        SignedSimilitude { el: GSpElement::identity(m), eps: 1 }
    }

    pub fn mul(&self, ctx: &PrimeContext, other: &SignedSimilitude) -> Result<SignedSimilitude> {
        let c3 = c_triple_prime(ctx, &self.el.lambda, &other.el.lambda)?;
        Ok(SignedSimilitude {
            el: self.el.mul(&other.el)?,
            eps: self.eps * other.eps * c3,
        })
    }

    pub fn inverse(&self, ctx: &PrimeContext) -> Result<SignedSimilitude> {
        let el = self.el.inverse(ctx.p)?;
        let c3 = c_triple_prime(ctx, &self.el.lambda, &el.lambda)?;
        Ok(SignedSimilitude { el, eps: self.eps * c3 })
    }

    pub fn eq_check(&self, other: &SignedSimilitude, p: u64) -> Result<bool> {
        Ok(self.eps == other.eps && self.el.eq_check(&other.el, p)?)
    }

    /// The doubled similitude character [g, eps] -> (lambda_g, eps), a
    /// homomorphism onto the doubled scalars.
    pub fn lambda_tilde(&self) -> SignedScalar {
        SignedScalar { t: self.el.lambda.clone(), eps: self.eps }
    }
}

/// The central embedding of the squares: sqrt of (s2, eps) is the doubled
/// similitude (sqrt(s2).eps.I, eps).  Its image F~x_+ meets the isometries
/// only in the identity.
pub fn sqrt_signed_square(
    ctx: &PrimeContext,
    m: usize,
    s2: &PadicNumber,
    eps: i8,
) -> Result<SignedSimilitude> {
    require_case(ctx, CaseTag::ResidueOne, "the square-root embedding")?;
    check_sign(eps)?;
    let r = sqrt_square(ctx, s2)?;
    let s = if eps == -1 { r.neg() } else { r };
    Ok(SignedSimilitude { el: scalar_element(m, &s)?, eps })
}

/// If x lies in F~x_+ (a scalar matrix s.I whose sign slot is the sign of s
/// against the canonical root of s^2), return s.
pub fn plus_scalar_part(ctx: &PrimeContext, x: &SignedSimilitude) -> Result<Option<PadicNumber>> {
    let s = match as_scalar(ctx.p, &x.el.mat)? {
        Some(s) => s,
        None => return Ok(None),
    };
    let r = sqrt_square(ctx, &s.mul(&s)?)?;
    let expect = if x.eps == -1 { r.neg() } else { r };
    Ok(if expect.eq_check(&s, ctx.p)? { Some(s) } else { None })
}

// ---------------------------------------------------------------------------
// the dihedral quotient
// ---------------------------------------------------------------------------

/// An element b^flip a^rot of D4 = <a, b | a^4 = b^2 = 1, b a = a^3 b>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct D4Class {
    pub flip: bool,
    pub rot: u8,
}

impl D4Class {
    pub fn identity() -> Self {
        D4Class { flip: false, rot: 0 }
    }

    pub fn rotation(n: i64) -> Self {
        D4Class { flip: false, rot: n.rem_euclid(4) as u8 }
    }

    pub fn reflection(n: i64) -> Self {
        D4Class { flip: true, rot: n.rem_euclid(4) as u8 }
    }

    /// (b^f1 a^r1)(b^f2 a^r2) = b^(f1+f2) a^((-1)^f2 r1 + r2).
    pub fn mul(self, other: D4Class) -> D4Class {
        let r1 = if other.flip { -(self.rot as i64) } else { self.rot as i64 };
        D4Class {
            flip: self.flip ^ other.flip,
            rot: (r1 + other.rot as i64).rem_euclid(4) as u8,
        }
    }

    pub fn inverse(self) -> D4Class {
        if self.flip {
            self
        } else {
            D4Class::rotation(-(self.rot as i64))
        }
    }

    pub fn all() -> [D4Class; 8] {
        let mut out = [D4Class::identity(); 8];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = D4Class { flip: i >= 4, rot: (i % 4) as u8 };
        }
        out
    }

    pub fn label(self) -> String {
        match (self.flip, self.rot) {
            (false, 0) => "1".into(),
            (false, r) => format!("a^{r}"),
            (true, 0) => "b".into(),
            (true, r) => format!("b.a^{r}"),
        }
    }
}

/// The mu4-valued 2-cocycle on D4 carried by the extended scalar group at
/// odd rank m (trivial at even m):
///     c(x, a^j) = 1,    c(x, b a^j) = i^(rot x).
/// It extends the boundary sign data: c(a^2, b a^j) = -1, c(a^2, a^j) = 1,
/// c(x, a^2) = 1.
pub fn scalar_cover_cocycle(m: usize, x: D4Class, y: D4Class) -> Mu8 {
    if m % 2 == 0 || !y.flip {
        Mu8::one()
    } else {
        Mu8::i().pow(x.rot as i64)
    }
}

/// Certificate that no mu2-valued 2-cocycle on D4 restricts to the boundary
/// sign data of the extended scalar cover at odd rank.  The 64 unknowns
/// f(x, y) in GF(2) are eliminated under all 512 cocycle constraints plus
/// the boundary rows; an inconsistent reduced row certifies infeasibility.
#[derive(Debug, Clone, Copy)]
pub struct Mu2ExtensionSystem {
    pub unknowns: usize,
    pub rows: usize,
    pub rank: usize,
    pub inconsistent_rows: usize,
}

pub fn mu2_extension_certificate() -> Result<Mu2ExtensionSystem> {
    let all = D4Class::all();
    let idx = |d: D4Class| (d.flip as usize) * 4 + d.rot as usize;
    let var = |x: D4Class, y: D4Class| idx(x) * 8 + idx(y);
    let mut rows: Vec<(u64, bool)> = Vec::new();
    // additive 2-cocycle identity: f(x,y) + f(xy,z) + f(x,yz) + f(y,z) = 0
    for &x in &all {
        for &y in &all {
            for &z in &all {
                let mut mask = 0u64;
                for v in [var(x, y), var(x.mul(y), z), var(x, y.mul(z)), var(y, z)] {
                    mask ^= 1u64 << v;
                }
                rows.push((mask, false));
            }
        }
    }
    // boundary data: trivial on the identity rows and the a^2 column, sign
    // (-1)^(flip y) on the a^2 row
    let id = D4Class::identity();
    let a2 = D4Class::rotation(2);
    for &y in &all {
        rows.push((1u64 << var(id, y), false));
        rows.push((1u64 << var(y, id), false));
        rows.push((1u64 << var(y, a2), false));
        rows.push((1u64 << var(a2, y), y.flip));
    }
    let total = rows.len();
    // Gaussian elimination over GF(2)
    let mut rank = 0usize;
    for col in 0..64 {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].0 & (1u64 << col) != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (pm, pr) = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.0 & (1u64 << col) != 0 {
                row.0 ^= pm;
                row.1 ^= pr;
            }
        }
        rank += 1;
    }
    let inconsistent = rows.iter().filter(|&&(m, r)| m == 0 && r).count();
    if inconsistent == 0 {
        return Err(Error::FeasibleUnexpectedly(
            "a mu2-valued 2-cocycle on D4 matches the boundary sign data".into(),
        ));
    }
    Ok(Mu2ExtensionSystem {
        unknowns: 64,
        rows: total,
        rank,
        inconsistent_rows: inconsistent,
    })
}

// ---------------------------------------------------------------------------
// p = 1 (mod 4): the embedded extended scalar group
// ---------------------------------------------------------------------------

/// An element of the embedded extended scalar group (the subgroup of G~Sp
/// generated by the embedded doubled scalars), carrying its class in the D4
/// quotient alongside the group element.  The class is bookkeeping: normal
/// forms recompute it independently and cross-check.
#[derive(Debug, Clone)]
pub struct ExtendedScalar {
    pub el: SignedSimilitude,
    pub d4: D4Class,
}

/// Normal form of an extended scalar: y = d0^d_power . t1 . section(x_class)
/// with t1 = (plus_scalar . I, plus_eps) in F~x_+.
#[derive(Debug, Clone)]
pub struct ExtendedScalarForm {
    pub d_power: i64,
    pub plus_scalar: PadicNumber,
    pub plus_eps: i8,
    pub x_class: SquareClass,
    pub d4: D4Class,
}

fn d4_of_class(c: SquareClass) -> D4Class {
    match (c.nonsquare_unit, c.odd_val) {
        (false, false) => D4Class::identity(),
        (true, false) => D4Class::reflection(0),
        (false, true) => D4Class::reflection(1),
        (true, true) => D4Class::rotation(1),
    }
}

impl ExtendedScalar {
    pub fn identity(m: usize) -> Self {
        ExtendedScalar { el: SignedSimilitude::identity(m), d4: D4Class::identity() }
    }

    /// Embed a doubled scalar (t, eps), multiplying the coordinate images in
    /// the order f~1, f_2, U1, <w>.  The doubled similitude character of the
    /// image is (t, eps) again.
    pub fn embed(ctx: &PrimeContext, m: usize, y: &SignedScalar) -> Result<ExtendedScalar> {
        require_case(ctx, CaseTag::ResidueOne, "the doubled scalar embedding")?;
        check_sign(y.eps)?;
        let p = ctx.p;
        let (v, e, u1) = ctx.teich_decompose(&y.t)?;
        let (e1, e2) = ctx.zeta_split(e)?;
        let z1 = ctx.zeta1();
        let mz1 = z1.neg();
        let eps_scalar = PadicNumber::from_int(y.eps as i64);
        // f~1-part (carries the sign slot)
        let p1 = if e1 % 2 == 0 {
            let s = mz1.pow((e1 / 2) as i64, p)?.mul(&eps_scalar)?;
            SignedSimilitude { el: scalar_element(m, &s)?, eps: y.eps }
        } else {
            let i = (e1 + 1) / 2;
            let s = mz1.pow((i - 1) as i64, p)?.mul(&eps_scalar)?;
            let sect = GSpElement::new(p, anti_block(m, &z1))?;
            SignedSimilitude { el: scalar_element(m, &s)?.mul(&sect)?, eps: y.eps }
        };
        // odd-order residue part
        let z2e = ctx.zeta2()?.pow(e2 as i64, p)?;
        let s2 = sqrt_canonical(ctx, &z2e, SqrtDomain::ResidueSquares)?;
        let p2 = SignedSimilitude { el: scalar_element(m, &s2)?, eps: 1 };
        // principal-unit part
        let s3 = sqrt_canonical(ctx, &u1, SqrtDomain::PrincipalUnits)?;
        let p3 = SignedSimilitude { el: scalar_element(m, &s3)?, eps: 1 };
        // uniformizer part
        let s4 = PadicNumber::pi_pow(p, 1).neg().pow(v.div_euclid(2), p)?;
        let mut el4 = scalar_element(m, &s4)?;
        if v.rem_euclid(2) == 1 {
            let pi = PadicNumber::pi_pow(p, 1);
            el4 = el4.mul(&GSpElement::new(p, anti_block(m, &pi))?)?;
        }
        let p4 = SignedSimilitude { el: el4, eps: 1 };
        let el = p1.mul(ctx, &p2)?.mul(ctx, &p3)?.mul(ctx, &p4)?;
        // D4 class: b^(e1 mod 2) . (b a)^(v mod 2), multiplied in embedding order
        let mut d4 = D4Class::identity();
        if e1 % 2 == 1 {
            d4 = d4.mul(D4Class::reflection(0));
        }
        if v.rem_euclid(2) == 1 {
            d4 = d4.mul(D4Class::reflection(1));
        }
        Ok(ExtendedScalar { el, d4 })
    }

    /// The generator d0 = (diag(w^-1 z1 . I, w z1^-1 . I), 1) of the
    /// isometry subgroup D: the commutator defect of the sections of w and
    /// z1.  Its D4 class is a^2.
    pub fn d_generator(ctx: &PrimeContext, m: usize) -> Result<ExtendedScalar> {
        require_case(ctx, CaseTag::ResidueOne, "the commutator generator")?;
        let p = ctx.p;
        let z1 = ctx.zeta1();
        let top = PadicNumber::pi_pow(p, -1).mul(&z1)?;
        let bottom = PadicNumber::pi_pow(p, 1).mul(&z1.inv(p)?)?;
        let el = GSpElement::new(p, diag_pair(m, &top, &bottom))?;
        Ok(ExtendedScalar {
            el: SignedSimilitude { el, eps: 1 },
            d4: D4Class::rotation(2),
        })
    }

    /// Embed a square with its sign slot; lands in F~x_+, trivial D4 class.
    pub fn sqrt_embed(
        ctx: &PrimeContext,
        m: usize,
        s2: &PadicNumber,
        eps: i8,
    ) -> Result<ExtendedScalar> {
        Ok(ExtendedScalar {
            el: sqrt_signed_square(ctx, m, s2, eps)?,
            d4: D4Class::identity(),
        })
    }

    pub fn mul(&self, ctx: &PrimeContext, other: &ExtendedScalar) -> Result<ExtendedScalar> {
        Ok(ExtendedScalar {
            el: self.el.mul(ctx, &other.el)?,
            d4: self.d4.mul(other.d4),
        })
    }

    pub fn inverse(&self, ctx: &PrimeContext) -> Result<ExtendedScalar> {
        Ok(ExtendedScalar { el: self.el.inverse(ctx)?, d4: self.d4.inverse() })
    }

    pub fn pow(&self, ctx: &PrimeContext, n: i64) -> Result<ExtendedScalar> {
        let m = self.el.el.m;
        let base = if n < 0 { self.inverse(ctx)? } else { self.clone() };
        let mut out = ExtendedScalar::identity(m);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(ctx, &base)?;
        }
        Ok(out)
    }

    pub fn eq_check(&self, other: &ExtendedScalar, p: u64) -> Result<bool> {
        self.el.eq_check(&other.el, p)
    }

    /// Normal form y = d0^n . t1 . section(x): strips the section read off
    /// the similitude class, then the d0-power read off the block
    /// valuations, and requires the remainder to lie in F~x_+.  Elements
    /// outside the group (for instance (I, -1)) are rejected; the D4 class
    /// recomputed from the normal form must agree with the carried class.
    pub fn normal_form(&self, ctx: &PrimeContext) -> Result<ExtendedScalarForm> {
        let p = ctx.p;
        let m = self.el.el.m;
        let x_class = ctx.square_class(&self.el.el.lambda)?;
        let xrep = ExtendedScalar::embed(
            ctx,
            m,
            &SignedScalar { t: ctx.class_representative(x_class), eps: 1 },
        )?;
        let w = self.mul(ctx, &xrep.inverse(ctx)?)?;
        // the remainder must be block-scalar diag(alpha.I, beta.I)
        let half = |mat: &Mat, which: usize| -> Mat {
            Mat::from_fn(m, m, |i, j| mat.at(i + which * m, j + which * m).clone())
        };
        let alpha = match as_scalar(p, &half(&w.el.el.mat, 0))? {
            Some(a) => a,
            None => return Err(Error::NotInGroup("top block is not scalar".into())),
        };
        let beta = match as_scalar(p, &half(&w.el.el.mat, 1))? {
            Some(b) => b,
            None => return Err(Error::NotInGroup("bottom block is not scalar".into())),
        };
        for i in 0..m {
            for j in 0..m {
                if !w.el.el.mat.at(i, j + m).is_zero()? || !w.el.el.mat.at(i + m, j).is_zero()? {
                    return Err(Error::NotInGroup("off-diagonal blocks are nonzero".into()));
                }
            }
        }
        let va = alpha.valuation(p)?.finite()?;
        let vb = beta.valuation(p)?.finite()?;
        if (vb - va) % 2 != 0 {
            return Err(Error::NotInGroup("block valuations differ by an odd amount".into()));
        }
        let n = (vb - va) / 2;
        let t1 = w.mul(ctx, &ExtendedScalar::d_generator(ctx, m)?.pow(ctx, -n)?)?;
        let s = match as_scalar(p, &t1.el.el.mat)? {
            Some(s) => s,
            None => return Err(Error::NotInGroup("remainder is not scalar".into())),
        };
        let r = sqrt_square(ctx, &s.mul(&s)?)?;
        let expect = if t1.el.eps == -1 { r.neg() } else { r };
        if !expect.eq_check(&s, p)? {
            return Err(Error::NotInGroup(
                "sign slot disagrees with the canonical root of the square".into(),
            ));
        }
        let d4 = D4Class::rotation(2 * n).mul(d4_of_class(x_class));
        if d4 != self.d4 {
            return Err(Error::InternalIdentityViolation(format!(
                "carried D4 class {} disagrees with recomputed {}",
                self.d4.label(),
                d4.label()
            )));
        }
        Ok(ExtendedScalarForm {
            d_power: n,
            plus_scalar: s,
            plus_eps: t1.el.eps,
            x_class,
            d4,
        })
    }
}
