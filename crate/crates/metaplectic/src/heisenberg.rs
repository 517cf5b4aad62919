//! The Heisenberg group H(W) = W (+) F and the twisted right actions of
//! the scaled similitude covers on it.
//!
//! Elements are pairs (w, t) with w a row vector in F^(2m), multiplying as
//!
//!     (w, t)(w', t') = (w + w', t + t' + <w, w'>/2),
//!
//! where <u, w> = u J w^T is the symplectic pairing.  Isometries act
//! linearly on the w part and fix the center, but a similitude g scales the
//! pairing by lambda_g, so it cannot act on H(W) while fixing the center.
//! The twisted actions below repair this by first dividing g by a canonical
//! square root of the square part of lambda_g; the residual class
//! representative (a fourth-root-free scalar) then scales the center.
//! Because the canonical square root is multiplicative only up to a defect,
//! the acting group is a cover carrying one extra coordinate that absorbs
//! exactly that defect:
//!
//!   * residue 3: pairs (h, eps) with h in F~x x| Sp(W), eps in F^x, and
//!     (h, eps)(h', eps') = (h h', c'(h, h') eps eps'), acting by
//!
//!         (v, t) . (h, eps) = (a_h^-1 v h eps,  r_h eps^2 t),
//!
//!     where the scalar part of h splits as t_h = a_h kappa(class) and
//!     r_h = lambda(kappa(class)) is the class representative;
//!
//!   * residue 1: pairs (g~, k) with g~ a doubled similitude, k in the
//!     positive square-root copy F~x_+, and
//!     (g~, k)(g~', k') = (g~ g~', c''^(1/2)(g~, g~') k k'), acting by
//!
//!         (v, t) . (g~, k) = (a_g~^-1 v g~ k,  r_g lambda_k t),
//!
//!     where lambda_g = a_g^2 r_g with r_g the class representative and
//!     a_g~ = sqrt(a_g^2, eps) in F~x_+.
//!
//! In both cases the pure scalar copy (F^x x 1, resp. F~x_+ x 1) acts
//! trivially, so the action descends to the projective covers, and the
//! restriction to Sp(W) is the usual linear action.

use crate::barthel::SemidirectElement;
use crate::error::{Error, Result};
use crate::extended::{
    c_prime1, c_prime3, plus_scalar_part, scalar_section_split3, sqrt_signed_square,
    SignedSimilitude,
};
use crate::matrix::Mat;
use crate::padic::{PadicNumber, PrimeContext};
use crate::symplectic::j_mat;
use rand::Rng;

/// The symplectic pairing <u, w> = u J w^T of two row vectors.
pub fn pairing(u: &Mat, w: &Mat) -> Result<PadicNumber> {
    if u.rows != 1 || w.rows != 1 || u.cols != w.cols || u.cols % 2 != 0 || u.cols == 0 {
        return Err(Error::DomainError(
            "pairing expects two 1 x 2m row vectors".into(),
        ));
    }
    let m = u.cols / 2;
    let v = u.mul(&j_mat(m))?.mul(&w.t())?;
    Ok(v.at(0, 0).clone())
}

/// An element (w, t) of the Heisenberg group H(W) = W (+) F.
#[derive(Debug, Clone)]
pub struct HeisenbergElement {
    pub w: Mat,
    pub t: PadicNumber,
}

impl HeisenbergElement {
    pub fn new(w: Mat, t: PadicNumber) -> Result<Self> {
        if w.rows != 1 || w.cols % 2 != 0 || w.cols == 0 {
            return Err(Error::DomainError(
                "the vector part must be a 1 x 2m row vector".into(),
            ));
        }
        Ok(HeisenbergElement { w, t })
    }

    pub fn identity(m: usize) -> Self {
        HeisenbergElement { w: Mat::zeros(1, 2 * m), t: PadicNumber::Zero }
    }

    /// Half the symplectic rank: w lives in F^(2m).
    pub fn genus(&self) -> usize {
        self.w.cols / 2
    }

    pub fn mul(&self, other: &HeisenbergElement, p: u64) -> Result<HeisenbergElement> {
        let w = self.w.add(&other.w)?;
        let half = PadicNumber::ratio(1, 2);
        let t = self
            .t
            .add(&other.t)?
            .add(&pairing(&self.w, &other.w)?.mul(&half)?)?;
        let _ = p;
        Ok(HeisenbergElement { w, t })
    }

    /// (w, t)^-1 = (-w, -t), since <w, w> = 0.
    pub fn inverse(&self) -> HeisenbergElement {
        HeisenbergElement { w: self.w.neg(), t: self.t.neg() }
    }

    pub fn eq_check(&self, other: &HeisenbergElement, p: u64) -> Result<bool> {
        if self.w.cols != other.w.cols {
            return Ok(false);
        }
        for j in 0..self.w.cols {
            if !self.w.at(0, j).eq_check(other.w.at(0, j), p)? {
                return Ok(false);
            }
        }
        self.t.eq_check(&other.t, p)
    }
}

// ---------------------------------------------------------------------------
// residue 3: the F^x-cover of F~x x| Sp(W)
// ---------------------------------------------------------------------------

/// An element (h, eps) of the F^x-cover of F~x x| Sp(W) in the residue-3
/// case: the scalar part of h must lie in the extended scalar group, and
/// eps ranges over F^x.
#[derive(Debug, Clone)]
pub struct ScaledCover3 {
    pub h: SemidirectElement,
    pub eps: PadicNumber,
}

impl ScaledCover3 {
    pub fn new(ctx: &PrimeContext, h: SemidirectElement, eps: PadicNumber) -> Result<Self> {
        scalar_section_split3(ctx, &h.y)?;
        if eps
            .is_zero()
            .map_err(|_| Error::PrecisionExhausted("cover coordinate has no known digits".into()))?
        {
            return Err(Error::ZeroArgument("cover coordinate must be nonzero".into()));
        }
        Ok(ScaledCover3 { h, eps })
    }

    pub fn identity(m: usize) -> Self {
        ScaledCover3 {
            h: SemidirectElement {
                y: crate::symplectic::GSpElement::identity(m),
                g: crate::symplectic::GSpElement::identity(m),
            },
            eps: PadicNumber::one(),
        }
    }

    /// (h, eps)(h', eps') = (h h', c'(h, h') eps eps').
    pub fn mul(&self, ctx: &PrimeContext, other: &ScaledCover3) -> Result<ScaledCover3> {
        let (_, c1) = scalar_section_split3(ctx, &self.h.y)?;
        let (_, c2) = scalar_section_split3(ctx, &other.h.y)?;
        let twist = c_prime3(ctx, c1, c2)?;
        Ok(ScaledCover3 {
            h: self.h.mul(&other.h, ctx.p)?,
            eps: twist.mul(&self.eps)?.mul(&other.eps)?,
        })
    }

    pub fn inverse(&self, ctx: &PrimeContext) -> Result<ScaledCover3> {
        let p = ctx.p;
        let yi = self.h.y.inverse(p)?;
        let hi = SemidirectElement::new(p, yi.clone(), self.h.g.inverse(p)?.conj_by(&yi, p)?)?;
        let (_, c) = scalar_section_split3(ctx, &self.h.y)?;
        // classes of t and t^-1 agree, so the defect is c'(c, c)
        let twist = c_prime3(ctx, c, c)?;
        let eps = twist.mul(&self.eps)?.inv(p)?;
        Ok(ScaledCover3 { h: hi, eps })
    }
}

/// The twisted right action of the residue-3 cover on H(W):
/// (v, t) . (h, eps) = (a_h^-1 v h eps, r_h eps^2 t).
pub fn action3(
    ctx: &PrimeContext,
    x: &HeisenbergElement,
    c: &ScaledCover3,
) -> Result<HeisenbergElement> {
    let p = ctx.p;
    let (a, cls) = scalar_section_split3(ctx, &c.h.y)?;
    let rep = ctx.class_representative(cls);
    let scale = a.inv(p)?.mul(&c.eps)?;
    let w = x.w.mul(&c.h.ambient()?.mat)?.scale(&scale)?;
    let t = rep.mul(&c.eps)?.mul(&c.eps)?.mul(&x.t)?;
    Ok(HeisenbergElement { w, t })
}

// ---------------------------------------------------------------------------
// residue 1: the F~x_+-cover of the doubled similitude group
// ---------------------------------------------------------------------------

/// Split a doubled similitude along the square/class decomposition of its
/// similitude factor: lambda_g = a_g^2 r_g with r_g the class
/// representative, returning (a_g~, r_g) with a_g~ = sqrt(a_g^2, eps) in
/// the positive square-root copy F~x_+.
pub fn similitude_sqrt_split1(
    ctx: &PrimeContext,
    g: &SignedSimilitude,
) -> Result<(SignedSimilitude, PadicNumber)> {
    let cls = ctx.square_class(&g.el.lambda)?;
    let rep = ctx.class_representative(cls);
    let a2 = g.el.lambda.div(&rep, ctx.p)?;
    let a = sqrt_signed_square(ctx, g.el.m, &a2, g.eps)?;
    Ok((a, rep))
}

/// An element (g~, k) of the F~x_+-cover of the doubled similitude group in
/// the residue-1 case: k must lie in the positive square-root copy.
#[derive(Debug, Clone)]
pub struct ScaledCover1 {
    pub g: SignedSimilitude,
    pub k: SignedSimilitude,
}

impl ScaledCover1 {
    pub fn new(ctx: &PrimeContext, g: SignedSimilitude, k: SignedSimilitude) -> Result<Self> {
        if plus_scalar_part(ctx, &k)?.is_none() {
            return Err(Error::NotInGroup(
                "cover coordinate must lie in the positive square-root copy".into(),
            ));
        }
        Ok(ScaledCover1 { g, k })
    }

    pub fn identity(m: usize) -> Self {
        ScaledCover1 {
            g: SignedSimilitude::identity(m),
            k: SignedSimilitude::identity(m),
        }
    }

    /// (g~, k)(g~', k') = (g~ g~', c''^(1/2)(g~, g~') k k').
    pub fn mul(&self, ctx: &PrimeContext, other: &ScaledCover1) -> Result<ScaledCover1> {
        let c1 = ctx.square_class(&self.g.el.lambda)?;
        let c2 = ctx.square_class(&other.g.el.lambda)?;
        let twist = sqrt_signed_square(ctx, self.g.el.m, &c_prime1(ctx, c1, c2)?, 1)?;
        Ok(ScaledCover1 {
            g: self.g.mul(ctx, &other.g)?,
            k: twist.mul(ctx, &self.k)?.mul(ctx, &other.k)?,
        })
    }

    pub fn inverse(&self, ctx: &PrimeContext) -> Result<ScaledCover1> {
        let c = ctx.square_class(&self.g.el.lambda)?;
        let twist = sqrt_signed_square(ctx, self.g.el.m, &c_prime1(ctx, c, c)?, 1)?;
        Ok(ScaledCover1 {
            g: self.g.inverse(ctx)?,
            k: twist.mul(ctx, &self.k)?.inverse(ctx)?,
        })
    }
}

/// The twisted right action of the residue-1 cover on H(W):
/// (v, t) . (g~, k) = (a_g~^-1 v g~ k, r_g lambda_k t).
pub fn action1(
    ctx: &PrimeContext,
    x: &HeisenbergElement,
    c: &ScaledCover1,
) -> Result<HeisenbergElement> {
    let p = ctx.p;
    let (a, rep) = similitude_sqrt_split1(ctx, &c.g)?;
    let w = x
        .w
        .mul(&a.el.inverse(p)?.mat)?
        .mul(&c.g.el.mat)?
        .mul(&c.k.el.mat)?;
    let t = rep.mul(&c.k.el.lambda)?.mul(&x.t)?;
    Ok(HeisenbergElement { w, t })
}

// ---------------------------------------------------------------------------
// sampling
// ---------------------------------------------------------------------------

/// A random Heisenberg element with small integer coordinates.
pub fn random_heisenberg(m: usize, rng: &mut impl Rng) -> HeisenbergElement {
    let w = Mat::from_fn(1, 2 * m, |_, _| PadicNumber::from_int(rng.gen_range(-4..=4)));
    let t = PadicNumber::from_int(rng.gen_range(-4..=4));
    HeisenbergElement { w, t }
}

/// A random residue-3 cover element.
pub fn random_cover3(ctx: &PrimeContext, m: usize, rng: &mut impl Rng) -> Result<ScaledCover3> {
    let h = crate::cover::random_semidirect3(ctx, m, rng)?;
    let eps = crate::cover::random_scalar_fx(ctx.p, rng);
    ScaledCover3::new(ctx, h, eps)
}

/// A random residue-1 cover element.
pub fn random_cover1(ctx: &PrimeContext, m: usize, rng: &mut impl Rng) -> Result<ScaledCover1> {
    let g = crate::cover::random_signed_similitude(ctx, m, rng)?;
    let s = crate::cover::random_scalar_fx(ctx.p, rng);
    let eps = if rng.gen_bool(0.5) { 1 } else { -1 };
    let k = sqrt_signed_square(ctx, m, &s.mul(&s)?, eps)?;
    ScaledCover1::new(ctx, g, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{random_scalar_fx, random_semidirect3, random_signed_similitude};
    use crate::symplectic::{random_sp, scalar_element, GSpElement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::with_default_precision(p).unwrap()
    }

    #[test]
    fn heisenberg_group_axioms() {
        let p = 7u64;
        let m = 2usize;
        let mut rng = ChaCha8Rng::seed_from_u64(700);
        for _ in 0..6 {
            let x = random_heisenberg(m, &mut rng);
            let y = random_heisenberg(m, &mut rng);
            let z = random_heisenberg(m, &mut rng);
            let a = x.mul(&y, p).unwrap().mul(&z, p).unwrap();
            let b = x.mul(&y.mul(&z, p).unwrap(), p).unwrap();
            assert!(a.eq_check(&b, p).unwrap(), "associativity");

            let e = HeisenbergElement::identity(m);
            assert!(x.mul(&e, p).unwrap().eq_check(&x, p).unwrap());
            assert!(e.mul(&x, p).unwrap().eq_check(&x, p).unwrap());
            assert!(x.mul(&x.inverse(), p).unwrap().eq_check(&e, p).unwrap());

            // the commutator of two vector elements is the central pairing
            let u = HeisenbergElement { w: x.w.clone(), t: PadicNumber::Zero };
            let v = HeisenbergElement { w: y.w.clone(), t: PadicNumber::Zero };
            let comm = u
                .mul(&v, p)
                .unwrap()
                .mul(&u.inverse(), p)
                .unwrap()
                .mul(&v.inverse(), p)
                .unwrap();
            let expect = HeisenbergElement {
                w: Mat::zeros(1, 2 * m),
                t: pairing(&x.w, &y.w).unwrap(),
            };
            assert!(comm.eq_check(&expect, p).unwrap(), "commutator = pairing");

            // central elements commute with everything
            let c = HeisenbergElement { w: Mat::zeros(1, 2 * m), t: z.t.clone() };
            let xc = x.mul(&c, p).unwrap();
            let cx = c.mul(&x, p).unwrap();
            assert!(xc.eq_check(&cx, p).unwrap(), "center");
        }
    }

    #[test]
    fn twisted_action_residue3() {
        for &p in &[3u64, 7] {
            let cx = ctx(p);
            let mut rng = ChaCha8Rng::seed_from_u64(710 + p);
            for m in 1..=2usize {
                for _ in 0..4 {
                    let x = random_heisenberg(m, &mut rng);
                    let y = random_heisenberg(m, &mut rng);
                    let c1 = random_cover3(&cx, m, &mut rng).unwrap();
                    let c2 = random_cover3(&cx, m, &mut rng).unwrap();

                    // right action through the cover multiplication
                    let lhs = action3(&cx, &action3(&cx, &x, &c1).unwrap(), &c2).unwrap();
                    let rhs = action3(&cx, &x, &c1.mul(&cx, &c2).unwrap()).unwrap();
                    assert!(lhs.eq_check(&rhs, p).unwrap(), "action axiom p={p} m={m}");

                    // each element acts as an automorphism of H(W)
                    let a = action3(&cx, &x.mul(&y, p).unwrap(), &c1).unwrap();
                    let b = action3(&cx, &x, &c1)
                        .unwrap()
                        .mul(&action3(&cx, &y, &c1).unwrap(), p)
                        .unwrap();
                    assert!(a.eq_check(&b, p).unwrap(), "automorphism p={p} m={m}");

                    // inverses act as inverses
                    let back = action3(&cx, &lhs, &c1.mul(&cx, &c2).unwrap().inverse(&cx).unwrap())
                        .unwrap();
                    assert!(back.eq_check(&x, p).unwrap(), "inverse action p={p} m={m}");
                }

                // the scalar copy F^x x 1 acts trivially
                let k = random_scalar_fx(p, &mut rng);
                let h = SemidirectElement::new(
                    p,
                    scalar_element(m, &k).unwrap(),
                    GSpElement::identity(m),
                )
                .unwrap();
                let c = ScaledCover3::new(&cx, h, PadicNumber::one()).unwrap();
                let x = random_heisenberg(m, &mut rng);
                assert!(
                    action3(&cx, &x, &c).unwrap().eq_check(&x, p).unwrap(),
                    "central triviality p={p} m={m}"
                );

                // restricted to Sp the action is the usual linear one
                let g = random_sp(p, m, &mut rng).unwrap();
                let c = ScaledCover3::new(
                    &cx,
                    SemidirectElement::new(p, GSpElement::identity(m), g.clone()).unwrap(),
                    PadicNumber::one(),
                )
                .unwrap();
                let moved = action3(&cx, &x, &c).unwrap();
                let expect = HeisenbergElement {
                    w: x.w.mul(&g.mat).unwrap(),
                    t: x.t.clone(),
                };
                assert!(moved.eq_check(&expect, p).unwrap(), "isometry restriction p={p} m={m}");
            }
        }
    }

    #[test]
    fn twisted_action_residue1() {
        for &p in &[5u64, 13] {
            let cx = ctx(p);
            let mut rng = ChaCha8Rng::seed_from_u64(720 + p);
            let m = 1usize;
            for _ in 0..4 {
                let x = random_heisenberg(m, &mut rng);
                let y = random_heisenberg(m, &mut rng);
                let c1 = random_cover1(&cx, m, &mut rng).unwrap();
                let c2 = random_cover1(&cx, m, &mut rng).unwrap();

                let lhs = action1(&cx, &action1(&cx, &x, &c1).unwrap(), &c2).unwrap();
                let rhs = action1(&cx, &x, &c1.mul(&cx, &c2).unwrap()).unwrap();
                assert!(lhs.eq_check(&rhs, p).unwrap(), "action axiom p={p}");

                let a = action1(&cx, &x.mul(&y, p).unwrap(), &c1).unwrap();
                let b = action1(&cx, &x, &c1)
                    .unwrap()
                    .mul(&action1(&cx, &y, &c1).unwrap(), p)
                    .unwrap();
                assert!(a.eq_check(&b, p).unwrap(), "automorphism p={p}");

                let back =
                    action1(&cx, &lhs, &c1.mul(&cx, &c2).unwrap().inverse(&cx).unwrap()).unwrap();
                assert!(back.eq_check(&x, p).unwrap(), "inverse action p={p}");
            }

            // the positive square-root copy acts trivially
            let s = random_scalar_fx(p, &mut rng);
            let eps = if rng.gen_bool(0.5) { 1 } else { -1 };
            let kt = sqrt_signed_square(&cx, m, &s.mul(&s).unwrap(), eps).unwrap();
            let c = ScaledCover1::new(&cx, kt, SignedSimilitude::identity(m)).unwrap();
            let x = random_heisenberg(m, &mut rng);
            assert!(
                action1(&cx, &x, &c).unwrap().eq_check(&x, p).unwrap(),
                "central triviality p={p}"
            );

            // restricted to Sp the action is the usual linear one
            let g = random_sp(p, m, &mut rng).unwrap();
            let c = ScaledCover1::new(
                &cx,
                SignedSimilitude::new(&cx, g.clone(), 1).unwrap(),
                SignedSimilitude::identity(m),
            )
            .unwrap();
            let moved = action1(&cx, &x, &c).unwrap();
            let expect = HeisenbergElement { w: x.w.mul(&g.mat).unwrap(), t: x.t.clone() };
            assert!(moved.eq_check(&expect, p).unwrap(), "isometry restriction p={p}");
        }
    }

    #[test]
    fn square_root_defect_identities() {
        // residue 3: a_h a_h' = c'(h, h')^-1 a_hh' as F^x scalars
        for &p in &[3u64, 7] {
            let cx = ctx(p);
            let mut rng = ChaCha8Rng::seed_from_u64(730 + p);
            let m = 2usize;
            for _ in 0..6 {
                let h1 = random_semidirect3(&cx, m, &mut rng).unwrap();
                let h2 = random_semidirect3(&cx, m, &mut rng).unwrap();
                let (a1, cl1) = scalar_section_split3(&cx, &h1.y).unwrap();
                let (a2, cl2) = scalar_section_split3(&cx, &h2.y).unwrap();
                let h12 = h1.mul(&h2, p).unwrap();
                let (a12, _) = scalar_section_split3(&cx, &h12.y).unwrap();
                let twist = c_prime3(&cx, cl1, cl2).unwrap();
                let lhs = a1.inv(p).unwrap().mul(&a2.inv(p).unwrap()).unwrap();
                let rhs = twist.mul(&a12.inv(p).unwrap()).unwrap();
                assert!(lhs.eq_check(&rhs, p).unwrap(), "scalar defect p={p}");

                // and the centered similitude factors compose with c'^2
                let r1 = cx.class_representative(cl1);
                let r2 = cx.class_representative(cl2);
                let r12 = cx.class_representative(cl1.mul(cl2));
                let lhs = r1.mul(&r2).unwrap();
                let rhs = twist.mul(&twist).unwrap().mul(&r12).unwrap();
                assert!(lhs.eq_check(&rhs, p).unwrap(), "centered lambda defect p={p}");
            }
        }
        // residue 1: a_g~ a_g~' = c''^(1/2)(g~, g~')^-1 a_g~g~' in F~x_+
        for &p in &[5u64, 13] {
            let cx = ctx(p);
            let mut rng = ChaCha8Rng::seed_from_u64(740 + p);
            let m = 1usize;
            for _ in 0..6 {
                let g1 = random_signed_similitude(&cx, m, &mut rng).unwrap();
                let g2 = random_signed_similitude(&cx, m, &mut rng).unwrap();
                let (a1, _) = similitude_sqrt_split1(&cx, &g1).unwrap();
                let (a2, _) = similitude_sqrt_split1(&cx, &g2).unwrap();
                let g12 = g1.mul(&cx, &g2).unwrap();
                let (a12, _) = similitude_sqrt_split1(&cx, &g12).unwrap();
                let c1 = cx.square_class(&g1.el.lambda).unwrap();
                let c2 = cx.square_class(&g2.el.lambda).unwrap();
                let twist =
                    sqrt_signed_square(&cx, m, &c_prime1(&cx, c1, c2).unwrap(), 1).unwrap();
                let lhs = a1.mul(&cx, &a2).unwrap();
                let rhs = twist.inverse(&cx).unwrap().mul(&cx, &a12).unwrap();
                assert!(lhs.eq_check(&rhs, p).unwrap(), "square-root defect p={p}");
            }
        }
    }
}
