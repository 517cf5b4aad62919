//! The mu_8-valued metaplectic cocycle on Sp(W) and its normalization.
//!
//! c_pr(g1, g2) is the Weil index of the Leray quadratic form attached to
//! the Lagrangian triple (X*, X* g1^-1, X* g2); renormalizing by the
//! constants m(g) turns it into a {+-1}-valued cocycle c.  On Sp_2 both
//! admit closed entry formulas, which this example checks against the
//! generic pipeline.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run --example metaplectic_cocycle
//! ```

use metaplectic::harness::{random_sl2_stratified, trial_rng};
use metaplectic::padic::{PrimeContext, DEFAULT_DIGITS};
use metaplectic::quadform::{PivotStrategy, PsiCharacter};
use metaplectic::rao::{c_pr, m_norm, rao_cocycle, sl2};
use metaplectic::symplectic::random_sp;

fn main() -> metaplectic::Result<()> {
    let st = PivotStrategy::MinValuation;
    let psi = PsiCharacter::standard();

    for p in [3u64, 5] {
        let cx = PrimeContext::new(p, DEFAULT_DIGITS)?;
        let mut rng = trial_rng(11, p);

        // the 2-cocycle identity on Sp_4:
        //   c_pr(g1,g2) c_pr(g1g2,g3) = c_pr(g1,g2g3) c_pr(g2,g3)
        let g1 = random_sp(p, 2, &mut rng)?;
        let g2 = random_sp(p, 2, &mut rng)?;
        let g3 = random_sp(p, 2, &mut rng)?;
        let lhs = c_pr(&cx, &g1, &g2, &psi, st)?.mul(c_pr(&cx, &g1.mul(&g2)?, &g3, &psi, st)?);
        let rhs = c_pr(&cx, &g1, &g2.mul(&g3)?, &psi, st)?.mul(c_pr(&cx, &g2, &g3, &psi, st)?);
        assert_eq!(lhs, rhs);
        println!("p = {p}: cocycle identity on Sp_4, both sides = {lhs}");

        // the normalized route: c = m(g1g2)^-1 m(g1) m(g2) c_pr
        let c = rao_cocycle(&cx, &g1, &g2, &psi, st)?;
        let via_m = m_norm(&cx, &g1.mul(&g2)?, &psi, st)?
            .inv()
            .mul(m_norm(&cx, &g1, &psi, st)?)
            .mul(m_norm(&cx, &g2, &psi, st)?)
            .mul(c_pr(&cx, &g1, &g2, &psi, st)?);
        assert_eq!(c, via_m);
        println!(
            "  c(g1,g2) = {c} = m(g1g2)^-1 m(g1) m(g2) c_pr(g1,g2),  c_pr = {}",
            c_pr(&cx, &g1, &g2, &psi, st)?
        );

        // on Sp_2 every ingredient has a closed entry formula
        let a = random_sl2_stratified(p, &mut rng)?;
        let b = random_sl2_stratified(p, &mut rng)?;
        println!(
            "  Sp_2 closed forms: x = {}, m = {}, c_pr = {}, c = {}",
            cx.class_label(sl2::x_oracle(&cx, &a)?),
            sl2::m_oracle(&cx, &a, &psi)?,
            sl2::c_pr_oracle(&cx, &a, &b, &psi)?,
            sl2::c_oracle(&cx, &a, &b)?
        );
        assert_eq!(sl2::c_pr_oracle(&cx, &a, &b, &psi)?, c_pr(&cx, &a, &b, &psi, st)?);
        assert_eq!(sl2::c_oracle(&cx, &a, &b)?, rao_cocycle(&cx, &a, &b, &psi, st)?);
        println!("  entry formulas match the generic pipeline");
    }
    Ok(())
}
