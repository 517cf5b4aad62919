//! Weil indices over Q_p and the numeric character-sum oracle.
//!
//! The Weil index gamma_psi(a) of the rank-one form a x^2 is an eighth root
//! of unity.  The crate stores it exactly in mu_8 exponent arithmetic; this
//! example recomputes a sample of entries with the floating-point Gauss-sum
//! oracle (which snaps to the nearest mu_8 element within 1e-9) and prints
//! the derived invariants of a small quadratic form.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run --example gamma_factors
//! ```

use metaplectic::padic::{PadicNumber, PrimeContext, SquareClass, DEFAULT_DIGITS};
use metaplectic::quadform::{
    det_class, diagonalize, gamma_form, gamma_psi, hasse_invariant, kappa, weil_index_oracle,
    GramForm, PivotStrategy, PsiCharacter,
};

fn main() -> metaplectic::Result<()> {
    for p in [3u64, 5, 7, 13] {
        let cx = PrimeContext::new(p, DEFAULT_DIGITS)?;
        let psi = PsiCharacter::standard();
        println!("p = {p}: kappa = {}", kappa(&cx)?);

        // gamma on the four square classes, against the numeric oracle
        for c in SquareClass::all() {
            let rep = cx.class_representative(c);
            let exact = gamma_psi(&cx, &rep, &psi)?;
            let (v, u, _) = cx.teich_decompose(&rep)?;
            let numeric = weil_index_oracle(p, v, u)?;
            assert_eq!(exact, numeric, "table entry drifted from the Gauss sum");
            println!(
                "  gamma({:>4}) = {:>5}   (numeric oracle agrees)",
                cx.class_label(c),
                exact.to_string()
            );
        }

        // gamma is a quadratic-form invariant: diagonalize a Gram matrix
        // and multiply the rank-one indices
        let gram = GramForm::new(
            p,
            vec![
                vec![
                    PadicNumber::from_int(2),
                    PadicNumber::one(),
                    PadicNumber::Zero,
                ],
                vec![
                    PadicNumber::one(),
                    PadicNumber::from_int(3),
                    PadicNumber::pi_pow(p, 1),
                ],
                vec![
                    PadicNumber::Zero,
                    PadicNumber::pi_pow(p, 1),
                    PadicNumber::from_int(-1),
                ],
            ],
        )?;
        let diag = diagonalize(&cx, &gram, PivotStrategy::MinValuation)?;
        let coeffs: Vec<String> = diag.form.coeffs.iter().map(|c| c.to_string()).collect();
        println!("  diagonalized <{}>", coeffs.join(", "));
        println!(
            "  det class {:>4}, hasse {:>2}, gamma {}",
            cx.class_label(det_class(&cx, &diag.form)?),
            hasse_invariant(&cx, &diag.form)?,
            gamma_form(&cx, &diag.form, &psi)?
        );
        println!();
    }
    Ok(())
}
