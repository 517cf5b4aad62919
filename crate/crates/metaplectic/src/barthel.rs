//! Transport of the metaplectic cocycles from Sp(W) to similitude
//! semidirect products.
//!
//! An automorphism alpha of Sp(W) lifts uniquely to the mu_8-cover once the
//! compensating factor nu(alpha, g) is known, characterized by
//!
//!     c_L(g, g') = c_L(g^alpha, g'^alpha) nu(alpha, g) nu(alpha, g')
//!                  nu(alpha, g g')^-1.
//!
//! Two building blocks assemble nu for every similitude alpha:
//!
//! * conjugation by h in Sp(W) itself:
//!   nu(h, g) = c_L(h^-1, g h) c_L(g, h);
//! * the scaling section s(y) = diag(I, yI):
//!   nu(s(y), g) = (x(g), y)_F gamma(y, psi^(1/2))^(-j(g)).
//!
//! A general similitude factors as alpha = s(lambda) h with h in Sp(W), and
//! the composition rule nu(a b, g) = nu(a, g) nu(b, g^a) glues the pieces.
//! On the twofold cover the compensating factor is
//! nu_2(alpha, g) = nu(alpha, g) m(g) / m(g^alpha), always a sign.
//!
//! The induced cocycles on a semidirect product E x| Sp(W) (E a group of
//! similitudes mapping onto the scale group) are
//!
//!     C_LE([y_1, g_1], [y_2, g_2]) = nu(y_2, g_1) c_L(g_1^(y_2), g_2)
//!     C_E([y_1, g_1], [y_2, g_2])  = nu_2(y_2, g_1) c(g_1^(y_2), g_2)
//!                                  = m(g_1^(y_2) g_2)^-1 m(g_1) m(g_2) C_LE,
//!
//! and the last equality is evaluated from both sides on every call.

use crate::error::{Error, Result};
use crate::matrix::det;
use crate::padic::{Mu8, PadicNumber, PrimeContext};
use crate::quadform::{gamma_norm, PivotStrategy, PsiCharacter};
use crate::rao::{c_pr, m_norm, rao_cocycle};
use crate::symplectic::{bruhat, s_scale, GSpElement};

/// nu for the scaling section s(y):
/// (x(g), y)_F * gamma(y, psi^(1/2))^(-j(g)).
pub fn nu_scale(
    ctx: &PrimeContext,
    y: &PadicNumber,
    g: &GSpElement,
    psi: &PsiCharacter,
    strategy: PivotStrategy,
) -> Result<Mu8> {
    if matches!(y, PadicNumber::Zero) {
        return Err(Error::ZeroArgument("scale factor must be nonzero".into()));
    }
    let data = bruhat(ctx, g, strategy)?;
    let x_rep = ctx.class_representative(data.x_class);
    let hs = ctx.hilbert_symbol(&x_rep, y)?;
    let psi_half = psi.scaled(&PadicNumber::ratio(1, 2))?;
    let ghalf = gamma_norm(ctx, y, &psi_half)?;
    Ok(Mu8::from_sign(hs).mul(ghalf.pow(-(data.j as i64))))
}

/// nu for conjugation by an isometry h:
/// c_L(h^-1, g h) * c_L(g, h).
pub fn nu_conj(
    ctx: &PrimeContext,
    h: &GSpElement,
    g: &GSpElement,
    psi: &PsiCharacter,
    strategy: PivotStrategy,
) -> Result<Mu8> {
    let p = ctx.p;
    if !h.lambda.eq_check(&PadicNumber::one(), p)? {
        return Err(Error::NotSymplectic(
            "conjugation factor applies to isometries".into(),
        ));
    }
    let hi = h.inverse(p)?;
    let gh = g.mul(h)?;
    let first = c_pr(ctx, &hi, &gh, psi, strategy)?;
    let second = c_pr(ctx, g, h, psi, strategy)?;
    Ok(first.mul(second))
}

/// nu for an arbitrary similitude alpha, through the factorization
/// alpha = s(lambda_alpha) h and the composition rule.
pub fn nu(
    ctx: &PrimeContext,
    alpha: &GSpElement,
    g: &GSpElement,
    psi: &PsiCharacter,
    strategy: PivotStrategy,
) -> Result<Mu8> {
    let p = ctx.p;
    let s = s_scale(alpha.m, &alpha.lambda)?;
    let h = s.inverse(p)?.mul(alpha)?;
    let h = GSpElement::new_sp(p, h.mat)?;
    let scale_part = nu_scale(ctx, &alpha.lambda, g, psi, strategy)?;
    let gs = g.conj_by(&s, p)?;
    let conj_part = nu_conj(ctx, &h, &gs, psi, strategy)?;
    Ok(scale_part.mul(conj_part))
}

/// The twofold-cover compensating factor
/// nu_2(alpha, g) = nu(alpha, g) m(g) / m(g^alpha), guaranteed a sign.
pub fn nu2(
    ctx: &PrimeContext,
    alpha: &GSpElement,
    g: &GSpElement,
    psi: &PsiCharacter,
    strategy: PivotStrategy,
) -> Result<Mu8> {
    let p = ctx.p;
    let n = nu(ctx, alpha, g, psi, strategy)?;
    let mg = m_norm(ctx, g, psi, strategy)?;
    let ga = g.conj_by(alpha, p)?;
    let mga = m_norm(ctx, &ga, psi, strategy)?;
    let out = n.mul(mg).mul(mga.inv());
    if out.try_sign().is_err() {
        return Err(Error::NotPlusMinusOne(format!(
            "twofold compensating factor came out as {out}"
        )));
    }
    Ok(out)
}

/// An element [y, g] of a semidirect product E x| Sp(W), where y is a
/// similitude acting by conjugation and g is an isometry.
#[derive(Debug, Clone)]
pub struct SemidirectElement {
    pub y: GSpElement,
    pub g: GSpElement,
}

impl SemidirectElement {
    pub fn new(p: u64, y: GSpElement, g: GSpElement) -> Result<Self> {
        let g = GSpElement::new_sp(p, g.mat)?;
        Ok(SemidirectElement { y, g })
    }

    /// Split an arbitrary similitude h as [s(lambda_h), s(lambda_h)^-1 h].
    pub fn split(p: u64, h: &GSpElement) -> Result<Self> {
        let s = s_scale(h.m, &h.lambda)?;
        let g = s.inverse(p)?.mul(h)?;
        Self::new(p, s, g)
    }

    /// (y_1, g_1)(y_2, g_2) = (y_1 y_2, g_1^(y_2) g_2).
    pub fn mul(&self, other: &SemidirectElement, p: u64) -> Result<SemidirectElement> {
        let y = self.y.mul(&other.y)?;
        let g1c = self.g.conj_by(&other.y, p)?;
        let g = g1c.mul(&other.g)?;
        Ok(SemidirectElement { y, g })
    }

    /// The underlying similitude y * g.
    pub fn ambient(&self) -> Result<GSpElement> {
        self.y.mul(&self.g)
    }
}

/// The mu_8-valued cocycle of the semidirect cover:
/// C_LE = nu(y_2, g_1) c_L(g_1^(y_2), g_2).
pub fn c_bpr(
    ctx: &PrimeContext,
    e1: &SemidirectElement,
    e2: &SemidirectElement,
    psi: &PsiCharacter,
    strategy: PivotStrategy,
) -> Result<Mu8> {
    let p = ctx.p;
    let n = nu(ctx, &e2.y, &e1.g, psi, strategy)?;
    let g1c = e1.g.conj_by(&e2.y, p)?;
    Ok(n.mul(c_pr(ctx, &g1c, &e2.g, psi, strategy)?))
}

/// The sign-valued cocycle of the semidirect twofold cover, evaluated both
/// as nu_2(y_2, g_1) c(g_1^(y_2), g_2) and as the m-corrected C_LE; the two
/// must agree.
pub fn c_b(
    ctx: &PrimeContext,
    e1: &SemidirectElement,
    e2: &SemidirectElement,
    psi: &PsiCharacter,
    strategy: PivotStrategy,
) -> Result<Mu8> {
    let p = ctx.p;
    let g1c = e1.g.conj_by(&e2.y, p)?;

    let route1 = nu2(ctx, &e2.y, &e1.g, psi, strategy)?
        .mul(rao_cocycle(ctx, &g1c, &e2.g, psi, strategy)?);

    let m12 = m_norm(ctx, &g1c.mul(&e2.g)?, psi, strategy)?;
    let m1 = m_norm(ctx, &e1.g, psi, strategy)?;
    let m2 = m_norm(ctx, &e2.g, psi, strategy)?;
    let route2 = m12
        .inv()
        .mul(m1)
        .mul(m2)
        .mul(c_bpr(ctx, e1, e2, psi, strategy)?);

    if route1 != route2 {
        return Err(Error::RouteMismatch(format!(
            "semidirect sign cocycle routes disagree: {route1} vs {route2}"
        )));
    }
    route1.try_sign()?;
    Ok(route1)
}

/// Closed forms for the 2x2 similitude group, used as independent oracles.
pub mod gl2 {
    use super::*;
    use crate::quadform::gamma_psi;

    /// C_LE(h_1, h_2) from the matrix entries of h_1, h_2 in GL_2 under the
    /// canonical splitting h = s(det h) g:
    /// * lower-left of h_1 zero: (a_1, det h_2)_F;
    /// * otherwise: (c_1 det h_1, det h_2)_F gamma(det h_2, psi^(1/2))^-1
    ///   gamma_psi(c_1 c_2 c_3 det h_2 / 2), c_i the lower-left entries of
    ///   h_1, h_2, h_3 = h_1 h_2 (a vanishing c_2 folds into the convention
    ///   gamma_psi(0) = 1).
    pub fn c_bpr_oracle(
        ctx: &PrimeContext,
        h1: &GSpElement,
        h2: &GSpElement,
        psi: &PsiCharacter,
    ) -> Result<Mu8> {
        let h3 = h1.mul(h2)?;
        let c1 = h1.mat.at(1, 0).clone();
        let c2 = h2.mat.at(1, 0).clone();
        let c3 = h3.mat.at(1, 0).clone();
        let a1 = h1.mat.at(0, 0).clone();
        let y1 = det(ctx.p, &h1.mat)?;
        let y2 = det(ctx.p, &h2.mat)?;
        if c1.is_zero()? {
            return Ok(Mu8::from_sign(ctx.hilbert_symbol(&a1, &y2)?));
        }
        let hs = ctx.hilbert_symbol(&c1.mul(&y1)?, &y2)?;
        let psi_half = psi.scaled(&PadicNumber::ratio(1, 2))?;
        let gn = gamma_norm(ctx, &y2, &psi_half)?.inv();
        let arg = c1
            .mul(&c2)?
            .mul(&c3)?
            .mul(&y2)?
            .mul(&PadicNumber::ratio(1, 2))?;
        Ok(Mu8::from_sign(hs).mul(gn).mul(gamma_psi(ctx, &arg, psi)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat;
    use crate::quadform::gamma_psi;
    use crate::symplectic::{m_levi, omega_s, random_sp, scalar_element};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::with_default_precision(p).unwrap()
    }

    fn random_similitude(
        p: u64,
        m: usize,
        rng: &mut impl Rng,
    ) -> GSpElement {
        let g = random_sp(p, m, rng).unwrap();
        let v: i64 = rng.gen_range(-1..=1);
        let u: i64 = *[1, 2, 3, -1, -2].iter().filter(|&&x| x % p as i64 != 0).nth(rng.gen_range(0..3)).unwrap();
        let y = PadicNumber::pi_pow(p, v).mul(&PadicNumber::from_int(u)).unwrap();
        s_scale(m, &y).unwrap().mul(&g).unwrap()
    }

    #[test]
    fn nu_satisfies_defining_relation() {
        // c_L(g, g') = c_L(g^a, g'^a) nu(a, g) nu(a, g') nu(a, g g')^-1
        for p in [3u64, 5] {
            let c = ctx(p);
            let psi = PsiCharacter::standard();
            let st = PivotStrategy::MinValuation;
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + p);
            for m in [1usize, 2] {
                for _ in 0..12 {
                    let alpha = random_similitude(p, m, &mut rng);
                    let g = random_sp(p, m, &mut rng).unwrap();
                    let gp = random_sp(p, m, &mut rng).unwrap();
                    let ga = g.conj_by(&alpha, p).unwrap();
                    let gpa = gp.conj_by(&alpha, p).unwrap();
                    let ggp = g.mul(&gp).unwrap();
                    let lhs = c_pr(&c, &g, &gp, &psi, st).unwrap();
                    let rhs = c_pr(&c, &ga, &gpa, &psi, st)
                        .unwrap()
                        .mul(nu(&c, &alpha, &g, &psi, st).unwrap())
                        .mul(nu(&c, &alpha, &gp, &psi, st).unwrap())
                        .mul(nu(&c, &alpha, &ggp, &psi, st).unwrap().inv());
                    assert_eq!(lhs, rhs, "p={p}, m={m}");
                }
            }
        }
    }

    #[test]
    fn nu_composes_along_automorphisms() {
        // nu(a1 a2, g) = nu(a1, g) nu(a2, g^(a1))
        let p = 7u64;
        let c = ctx(p);
        let psi = PsiCharacter::standard();
        let st = PivotStrategy::MinValuation;
        let mut rng = ChaCha8Rng::seed_from_u64(1100);
        for m in [1usize, 2] {
            for _ in 0..10 {
                let a1 = random_similitude(p, m, &mut rng);
                let a2 = random_similitude(p, m, &mut rng);
                let g = random_sp(p, m, &mut rng).unwrap();
                let lhs = nu(&c, &a1.mul(&a2).unwrap(), &g, &psi, st).unwrap();
                let rhs = nu(&c, &a1, &g, &psi, st)
                    .unwrap()
                    .mul(nu(&c, &a2, &g.conj_by(&a1, p).unwrap(), &psi, st).unwrap());
                assert_eq!(lhs, rhs, "p={p}, m={m}");
            }
        }
    }

    #[test]
    fn nu_trivial_on_scalars_and_isometry_center() {
        let p = 5u64;
        let c = ctx(p);
        let psi = PsiCharacter::standard();
        let st = PivotStrategy::MinValuation;
        let mut rng = ChaCha8Rng::seed_from_u64(1200);
        for m in [1usize, 2] {
            for _ in 0..10 {
                let g = random_sp(p, m, &mut rng).unwrap();
                // scalar similitudes act trivially
                for s in [2i64, 5, -10] {
                    let z = scalar_element(m, &PadicNumber::from_int(s)).unwrap();
                    assert!(nu(&c, &z, &g, &psi, st).unwrap().is_one(), "scalar {s}");
                }
                // -1 in Sp(W) is a conjugation fixing everything
                let neg = scalar_element(m, &PadicNumber::from_int(-1)).unwrap();
                assert!(nu(&c, &neg, &g, &psi, st).unwrap().is_one());
            }
        }
    }

    #[test]
    fn nu_scale_on_sector_involutions_and_levi() {
        // nu(s(y), w_S) = gamma(y, psi^(1/2))^(-|S|),
        // nu(s(y), m(a)) = (det a, y)_F, and Levi factors split off
        let p = 7u64;
        let c = ctx(p);
        let psi = PsiCharacter::standard();
        let psi_half = psi.scaled(&PadicNumber::ratio(1, 2)).unwrap();
        let st = PivotStrategy::MinValuation;
        let mut rng = ChaCha8Rng::seed_from_u64(1300);
        let ys = [
            PadicNumber::from_int(3),
            PadicNumber::from_int(7),
            PadicNumber::from_int(-21),
            PadicNumber::ratio(2, 7),
        ];
        for m in [1usize, 2] {
            for y in &ys {
                let sy = s_scale(m, y).unwrap();
                for mask_bits in 0..(1u32 << m) {
                    let mask: Vec<bool> = (0..m).map(|i| mask_bits >> i & 1 == 1).collect();
                    let w = omega_s(m, &mask);
                    let js = mask.iter().filter(|&&b| b).count() as i64;
                    let got = nu(&c, &sy, &w, &psi, st).unwrap();
                    let want = gamma_norm(&c, y, &psi_half).unwrap().pow(-js);
                    assert_eq!(got, want, "m={m}, |S|={js}");
                }
                for _ in 0..6 {
                    let a0 = loop {
                        let cand = Mat::from_fn(m, m, |_, _| {
                            PadicNumber::from_int(rng.gen_range(-3..=3))
                        });
                        if !matches!(det(p, &cand).unwrap(), PadicNumber::Zero) {
                            break cand;
                        }
                    };
                    let g0 = m_levi(p, &a0).unwrap();
                    let got = nu(&c, &sy, &g0, &psi, st).unwrap();
                    let want = Mu8::from_sign(
                        c.hilbert_symbol(&det(p, &a0).unwrap(), y).unwrap(),
                    );
                    assert_eq!(got, want, "levi, m={m}");
                    // translation: nu(y, g0 g) = nu(y, g0) nu(y, g)
                    let g = random_sp(p, m, &mut rng).unwrap();
                    let lhs = nu(&c, &sy, &g0.mul(&g).unwrap(), &psi, st).unwrap();
                    let rhs = got.mul(nu(&c, &sy, &g, &psi, st).unwrap());
                    assert_eq!(lhs, rhs, "levi translation, m={m}");
                }
            }
        }
    }

    #[test]
    fn nu_depends_only_on_scale_class_within_section_cosets() {
        // multiplying the similitude by a central scalar leaves nu unchanged
        let p = 5u64;
        let c = ctx(p);
        let psi = PsiCharacter::standard();
        let st = PivotStrategy::MinValuation;
        let mut rng = ChaCha8Rng::seed_from_u64(1400);
        for m in [1usize, 2] {
            for _ in 0..8 {
                let alpha = random_similitude(p, m, &mut rng);
                let g = random_sp(p, m, &mut rng).unwrap();
                let base = nu(&c, &alpha, &g, &psi, st).unwrap();
                for s in [2i64, -5] {
                    let z = scalar_element(m, &PadicNumber::from_int(s)).unwrap();
                    let shifted = nu(&c, &z.mul(&alpha).unwrap(), &g, &psi, st).unwrap();
                    assert_eq!(base, shifted, "m={m}, scalar {s}");
                }
            }
        }
    }

    #[test]
    fn nu_sl2_sector_tables() {
        // closed tables for the four nontrivial section cosets in the 2x2
        // case, against the generic pipeline
        let psi = PsiCharacter::standard();
        let st = PivotStrategy::MinValuation;
        for p in [3u64, 7, 5, 13] {
            let c = ctx(p);
            let psi_half = psi.scaled(&PadicNumber::ratio(1, 2)).unwrap();
            let pi = PadicNumber::pi_pow(p, 1);
            // omega-type representatives (0, -1; lam, 0) and the diagonal
            // (scalar-type) representative diag(1, lam)
            let mut omega_type: Vec<PadicNumber> = vec![pi.clone()];
            let mut diag_type: Vec<PadicNumber> = Vec::new();
            if p % 4 == 3 {
                omega_type.push(pi.neg());
                diag_type.push(PadicNumber::from_int(-1));
            } else {
                let z1 = c.zeta1();
                omega_type.push(z1.clone());
                diag_type.push(z1.mul(&pi).unwrap());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(1500 + p);
            for _ in 0..25 {
                let g = random_sp(p, 1, &mut rng).unwrap();
                let (a, b, cc, d) = (
                    g.mat.at(0, 0).clone(),
                    g.mat.at(0, 1).clone(),
                    g.mat.at(1, 0).clone(),
                    g.mat.at(1, 1).clone(),
                );
                let half = PadicNumber::ratio(1, 2);
                for lam in &omega_type {
                    let y = GSpElement::new(
                        p,
                        Mat::from_fn(2, 2, |i, j| match (i, j) {
                            (0, 1) => PadicNumber::from_int(-1),
                            (1, 0) => lam.clone(),
                            _ => PadicNumber::Zero,
                        }),
                    )
                    .unwrap();
                    let got = nu(&c, &y, &g, &psi, st).unwrap();
                    let want = if !cc.is_zero().unwrap() {
                        let t1 = Mu8::from_sign(c.hilbert_symbol(&cc, lam).unwrap());
                        let t2 = gamma_norm(&c, lam, &psi_half).unwrap().inv();
                        let bd = b.mul(&d).unwrap().mul(lam).unwrap().mul(&half).unwrap();
                        let cd = cc.mul(&d).unwrap().mul(lam).unwrap().mul(&half).unwrap();
                        t1.mul(t2)
                            .mul(gamma_psi(&c, &bd, &psi).unwrap())
                            .mul(gamma_psi(&c, &cd, &psi).unwrap())
                    } else {
                        let ab = a.mul(&b).unwrap().mul(lam).unwrap().mul(&half).unwrap();
                        Mu8::from_sign(c.hilbert_symbol(&a, lam).unwrap())
                            .mul(gamma_psi(&c, &ab, &psi).unwrap())
                    };
                    assert_eq!(got, want, "omega-type, p={p}, lam={lam}");
                }
                for lam in &diag_type {
                    let y = GSpElement::new(
                        p,
                        Mat::from_fn(2, 2, |i, j| match (i, j) {
                            (0, 0) => PadicNumber::one(),
                            (1, 1) => lam.clone(),
                            _ => PadicNumber::Zero,
                        }),
                    )
                    .unwrap();
                    let got = nu(&c, &y, &g, &psi, st).unwrap();
                    let want = if !cc.is_zero().unwrap() {
                        Mu8::from_sign(c.hilbert_symbol(&cc, lam).unwrap())
                            .mul(gamma_norm(&c, lam, &psi_half).unwrap().inv())
                    } else {
                        Mu8::from_sign(c.hilbert_symbol(&a, lam).unwrap())
                    };
                    assert_eq!(got, want, "diag-type, p={p}, lam={lam}");
                }
            }
        }
    }

    #[test]
    fn semidirect_cocycles_satisfy_cocycle_identity() {
        for p in [3u64, 5] {
            let c = ctx(p);
            let psi = PsiCharacter::standard();
            let st = PivotStrategy::MinValuation;
            let mut rng = ChaCha8Rng::seed_from_u64(1600 + p);
            for m in [1usize, 2] {
                for _ in 0..8 {
                    let es: Vec<SemidirectElement> = (0..3)
                        .map(|_| {
                            SemidirectElement::split(p, &random_similitude(p, m, &mut rng))
                                .unwrap()
                        })
                        .collect();
                    let e12 = es[0].mul(&es[1], p).unwrap();
                    let e23 = es[1].mul(&es[2], p).unwrap();
                    let lhs = c_bpr(&c, &es[0], &es[1], &psi, st)
                        .unwrap()
                        .mul(c_bpr(&c, &e12, &es[2], &psi, st).unwrap());
                    let rhs = c_bpr(&c, &es[0], &e23, &psi, st)
                        .unwrap()
                        .mul(c_bpr(&c, &es[1], &es[2], &psi, st).unwrap());
                    assert_eq!(lhs, rhs, "mu8 cocycle, p={p}, m={m}");
                    let lhs = c_b(&c, &es[0], &es[1], &psi, st)
                        .unwrap()
                        .mul(c_b(&c, &e12, &es[2], &psi, st).unwrap());
                    let rhs = c_b(&c, &es[0], &e23, &psi, st)
                        .unwrap()
                        .mul(c_b(&c, &es[1], &es[2], &psi, st).unwrap());
                    assert_eq!(lhs, rhs, "sign cocycle, p={p}, m={m}");
                }
            }
        }
    }

    #[test]
    fn gl2_cocycle_matches_closed_form() {
        for p in [3u64, 5, 7, 13] {
            let c = ctx(p);
            let psi = PsiCharacter::standard();
            let st = PivotStrategy::MinValuation;
            let mut rng = ChaCha8Rng::seed_from_u64(1700 + p);
            let mut c1_zero = 0;
            for _ in 0..60 {
                let mut hs = Vec::new();
                for _ in 0..2 {
                    let h = loop {
                        let mut cand = Mat::from_fn(2, 2, |_, _| {
                            PadicNumber::from_int(rng.gen_range(-4..=4))
                        });
                        if rng.gen_bool(0.25) {
                            cand.set(1, 0, PadicNumber::Zero);
                        }
                        if !matches!(det(p, &cand).unwrap(), PadicNumber::Zero) {
                            break cand;
                        }
                    };
                    hs.push(GSpElement::new(p, h).unwrap());
                }
                if hs[0].mat.at(1, 0).is_zero().unwrap() {
                    c1_zero += 1;
                }
                let e1 = SemidirectElement::split(p, &hs[0]).unwrap();
                let e2 = SemidirectElement::split(p, &hs[1]).unwrap();
                let got = c_bpr(&c, &e1, &e2, &psi, st).unwrap();
                let want = gl2::c_bpr_oracle(&c, &hs[0], &hs[1], &psi).unwrap();
                assert_eq!(got, want, "p={p}");
            }
            assert!(c1_zero > 0, "upper-triangular stratum sampled at p={p}");
        }
    }

    #[test]
    fn gl2_twofold_factor_branches() {
        // nu_2(s(y2), g1) = (y2, a1)_F when the lower-left entry vanishes,
        // and 1 otherwise
        for p in [3u64, 5] {
            let c = ctx(p);
            let psi = PsiCharacter::standard();
            let st = PivotStrategy::MinValuation;
            let mut rng = ChaCha8Rng::seed_from_u64(1800 + p);
            for _ in 0..40 {
                let h1 = loop {
                    let mut cand = Mat::from_fn(2, 2, |_, _| {
                        PadicNumber::from_int(rng.gen_range(-4..=4))
                    });
                    if rng.gen_bool(0.4) {
                        cand.set(1, 0, PadicNumber::Zero);
                    }
                    if !matches!(det(p, &cand).unwrap(), PadicNumber::Zero) {
                        break cand;
                    }
                };
                let h1 = GSpElement::new(p, h1).unwrap();
                let e1 = SemidirectElement::split(p, &h1).unwrap();
                let uy: i64 = [2, 3, -1, 6][rng.gen_range(0..4)];
                let vy: i64 = rng.gen_range(-1..=1);
                let y2 = PadicNumber::pi_pow(p, vy)
                    .mul(&PadicNumber::from_int(uy))
                    .unwrap();
                let sy2 = s_scale(1, &y2).unwrap();
                let got = nu2(&c, &sy2, &e1.g, &psi, st).unwrap();
                if h1.mat.at(1, 0).is_zero().unwrap() {
                    let a1 = h1.mat.at(0, 0);
                    let want = Mu8::from_sign(c.hilbert_symbol(&y2, a1).unwrap());
                    assert_eq!(got, want, "p={p}, parabolic branch");
                } else {
                    assert!(got.is_one(), "p={p}, open-cell branch");
                }
            }
        }
    }
}
