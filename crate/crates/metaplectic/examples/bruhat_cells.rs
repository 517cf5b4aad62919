//! Cell decomposition of Sp(W) relative to the Siegel parabolic.
//!
//! Every g in Sp(W) factors as p1 omega_S p2 with p1, p2 in the parabolic
//! P(X*) and omega_S a partial involution indexed by a subset S of the
//! symplectic basis; |S| = j(g) is the cell index and the decomposition
//! carries a square-class invariant x(g).  Both are independent of the
//! pivot choices made along the way, which this example demonstrates by
//! decomposing the same element under two strategies.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run --example bruhat_cells
//! ```

use metaplectic::harness::trial_rng;
use metaplectic::matrix::Mat;
use metaplectic::padic::{PrimeContext, DEFAULT_DIGITS};
use metaplectic::quadform::PivotStrategy;
use metaplectic::symplectic::{
    bruhat, j_invariant, m_levi, n_unipotent, omega_s, random_sp, x_invariant,
};

fn main() -> metaplectic::Result<()> {
    let p = 5u64;
    let cx = PrimeContext::new(p, DEFAULT_DIGITS)?;

    // assemble an Sp_4 element from cell generators: a Levi block, a
    // symmetric unipotent, and the full involution
    let x = Mat::from_ints(&[&[1, 2], &[0, 1]]);
    let b = Mat::from_ints(&[&[3, 1], &[1, -1]]);
    let g = m_levi(p, &x)?
        .mul(&omega_s(2, &[true, true]))?
        .mul(&n_unipotent(p, &b)?)?;
    println!("g =");
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| g.mat.at(i, j).to_string()).collect();
        println!("  [{}]", row.join(", "));
    }
    println!("lambda(g) = {}, j(g) = {}", g.lambda, j_invariant(p, &g)?);

    for strategy in [PivotStrategy::MinValuation, PivotStrategy::FirstNonzero] {
        let cell = bruhat(&cx, &g, strategy)?;
        let back = cell.p1.mul(&cell.omega())?.mul(&cell.p2)?;
        assert!(back.eq_check(&g, p)?, "reconstruction must be exact");
        println!(
            "{strategy:?}: S = {:?}, j = {}, x(g) = {}, p1 omega p2 == g exact",
            cell.s_mask,
            cell.j,
            cx.class_label(cell.x_class)
        );
    }

    // the invariants agree across strategies on random samples too
    let mut rng = trial_rng(7, 0);
    let mut counts = [0usize; 3];
    for _ in 0..50 {
        let h = random_sp(p, 2, &mut rng)?;
        let a = x_invariant(&cx, &h, PivotStrategy::MinValuation)?;
        let b = x_invariant(&cx, &h, PivotStrategy::FirstNonzero)?;
        assert_eq!(a, b, "cell invariant depended on the pivot strategy");
        counts[j_invariant(p, &h)?] += 1;
    }
    println!(
        "50 random Sp_4 elements: cells j=0/1/2 hit {}/{}/{} times, invariants strategy-independent",
        counts[0], counts[1], counts[2]
    );

    // a parabolic element never leaves the closed cell
    let par = m_levi(p, &Mat::from_ints(&[&[2, 0], &[1, 3]]))?
        .mul(&n_unipotent(p, &Mat::from_ints(&[&[1, 0], &[0, 2]]))?)?;
    println!("parabolic element: j = {}", j_invariant(p, &par)?);
    Ok(())
}
