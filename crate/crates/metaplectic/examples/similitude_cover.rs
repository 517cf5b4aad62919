//! Extending the metaplectic cocycle from Sp(W) to the similitude group.
//!
//! A similitude h with factor lambda splits as h = s(lambda) g with g an
//! isometry, and conjugation by s(lambda) is an outer automorphism of
//! Sp(W).  The compatibility factor nu(alpha, g) measures how the cocycle
//! moves under that automorphism; out of it the crate builds cocycles
//! c_bpr (eightfold) and c_b (twofold) on the semidirect product
//! F^x x| Sp(W).  On 2 x 2 matrices c_bpr collapses to a two-branch entry
//! formula.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run --example similitude_cover
//! ```

use metaplectic::barthel::{c_b, c_bpr, gl2, nu, nu2, SemidirectElement};
use metaplectic::harness::{random_similitude, trial_rng};
use metaplectic::padic::{PadicNumber, PrimeContext, DEFAULT_DIGITS};
use metaplectic::quadform::{PivotStrategy, PsiCharacter};
use metaplectic::symplectic::{random_sp, s_scale};

fn main() -> metaplectic::Result<()> {
    let st = PivotStrategy::MinValuation;
    let psi = PsiCharacter::standard();

    for p in [3u64, 5] {
        let cx = PrimeContext::new(p, DEFAULT_DIGITS)?;
        let mut rng = trial_rng(23, p);

        // the compatibility factor against a scale section
        let y = PadicNumber::pi_pow(p, 1).mul(&PadicNumber::from_int(2))?;
        let alpha = s_scale(2, &y)?;
        let g = random_sp(p, 2, &mut rng)?;
        println!(
            "p = {p}: nu(s({y}), g) = {}, twofold factor nu_2 = {}",
            nu(&cx, &alpha, &g, &psi, st)?,
            nu2(&cx, &alpha, &g, &psi, st)?
        );

        // similitudes split into scale and isometry parts, and the cover
        // cocycles satisfy the 2-cocycle identity on the semidirect product
        let hs: Vec<SemidirectElement> = (0..3)
            .map(|_| {
                let h = random_similitude(p, 2, &mut rng)?;
                SemidirectElement::split(p, &h)
            })
            .collect::<metaplectic::Result<_>>()?;
        let (e1, e2, e3) = (&hs[0], &hs[1], &hs[2]);
        println!(
            "  split h1: lambda = {} with isometry part lambda = {}",
            e1.y.lambda, e1.g.lambda
        );
        for (name, f) in [
            ("c_bpr", c_bpr as fn(_, _, _, _, _) -> metaplectic::Result<_>),
            ("c_b", c_b as fn(_, _, _, _, _) -> metaplectic::Result<_>),
        ] {
            let lhs = f(&cx, e1, e2, &psi, st)?.mul(f(&cx, &e1.mul(e2, p)?, e3, &psi, st)?);
            let rhs = f(&cx, e1, &e2.mul(e3, p)?, &psi, st)?.mul(f(&cx, e2, e3, &psi, st)?);
            assert_eq!(lhs, rhs);
            println!("  {name}: 2-cocycle identity holds, both sides = {lhs}");
        }
    }

    // the 2 x 2 entry formula, both branches
    let p = 5u64;
    let cx = PrimeContext::new(p, DEFAULT_DIGITS)?;
    let mut rng = trial_rng(29, 0);
    for _ in 0..2 {
        let h1 = random_similitude(p, 1, &mut rng)?;
        let h2 = random_similitude(p, 1, &mut rng)?;
        let e1 = SemidirectElement::split(p, &h1)?;
        let e2 = SemidirectElement::split(p, &h2)?;
        let pipeline = c_bpr(&cx, &e1, &e2, &psi, st)?;
        let table = gl2::c_bpr_oracle(&cx, &h1, &h2, &psi)?;
        assert_eq!(pipeline, table);
        println!("p = {p}: 2 x 2 entry formula = pipeline = {table}");
    }
    Ok(())
}
