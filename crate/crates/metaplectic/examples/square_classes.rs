//! Square classes of F^x and the Hilbert symbol, F = Q_p with p odd.
//!
//! F^x/(F^x)^2 has exactly four classes.  Writing u for a non-residue unit
//! and pi for the uniformizer, representatives are {1, u, pi, u pi}; the
//! Hilbert symbol (a, b)_F in {+-1} detects whether z^2 = a x^2 + b y^2 has
//! a nontrivial solution, and on odd residue characteristic it only depends
//! on the square classes of a and b.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run --example square_classes
//! ```

use metaplectic::padic::{
    hilbert_solubility_oracle, PadicNumber, PrimeContext, SquareClass, DEFAULT_DIGITS,
};

fn main() -> metaplectic::Result<()> {
    for p in [3u64, 5, 13] {
        let cx = PrimeContext::new(p, DEFAULT_DIGITS)?;
        println!("p = {p}  (residue {} mod 4)", p % 4);

        // capped-precision arithmetic on a few elements
        let a = PadicNumber::ratio(7, 9);
        let b = PadicNumber::pi_pow(p, 2).mul(&PadicNumber::from_int(5))?;
        println!("  7/9 has valuation {:?}", a.valuation(p)?.finite()?);
        println!("  5 pi^2 = {}", b);
        println!("  (7/9) * (5 pi^2) = {}", a.mul(&b)?);
        println!("  teichmuller lift of 2: {}", cx.teich(2)?);

        // the four square classes and their canonical representatives
        println!("  class representatives:");
        for c in SquareClass::all() {
            println!(
            "    {:4}  ->  {}",
                cx.class_label(c),
                cx.class_representative(c)
            );
        }

        // 4 x 4 Hilbert symbol table, cross-checked against the conic
        // solubility oracle
        print!("  hilbert:");
        for c in SquareClass::all() {
            print!(" {:>4}", cx.class_label(c));
        }
        println!();
        for a in SquareClass::all() {
            print!("  {:>7}:", cx.class_label(a));
            for b in SquareClass::all() {
                let closed = cx.hilbert_on_classes(a, b);
                let oracle = hilbert_solubility_oracle(&cx, a, b);
                assert_eq!(closed, oracle, "closed form disagrees with solubility");
                print!(" {closed:>4}");
            }
            println!();
        }

        // the symbol is computed from values, not just class labels
        let x = PadicNumber::ratio(-50, 27);
        let y = PadicNumber::from_int(14);
        println!(
            "  ({x}, {y})_F = {}  [classes {} and {}]",
            cx.hilbert_symbol(&x, &y)?,
            cx.class_label(cx.square_class(&x)?),
            cx.class_label(cx.square_class(&y)?),
        );
        println!();
    }
    Ok(())
}
