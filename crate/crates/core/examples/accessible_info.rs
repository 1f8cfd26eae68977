//! Lower-bounds the accessible information of the {|0⟩, |+⟩} ensemble and
//! compares it with the Holevo bound.
//!
//! cargo run --release --example accessible_info -- [restarts] [iters]

use holevo::measurements::{default_outcomes, mutual_information, optimize_accessible_info, Povm};
use holevo::{ComplexMatrix, DensityMatrix, Ensemble, PureState, Rng};

fn main() -> holevo::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let restarts = args.next().unwrap_or(20);
    let iters = args.next().unwrap_or(2000);

    let e = Ensemble::uniform(vec![DensityMatrix::basis(2, 0), PureState::plus().density()])?;

    // Projective measurement along the axis perpendicular to the bisector.
    let t = -std::f64::consts::PI / 8.0;
    let basis = ComplexMatrix::from_real_rows(&[&[t.cos(), -t.sin()], &[t.sin(), t.cos()]]);
    let helstrom = mutual_information(&e, &Povm::projective(&basis)?)?;

    let result = optimize_accessible_info(&e, default_outcomes(&e), restarts, iters, &Rng::new(0, 0))?;
    println!("chi upper bound        {:.9}", result.chi_upper_bound);
    println!("optimized I(X:Y)       {:.9}", result.best_mutual_info);
    println!("symmetric projective   {helstrom:.9}");
    println!("restarts {}  converged {}", result.restarts_used, result.converged);
    for (i, el) in result.best_povm.elements().iter().enumerate() {
        println!("E{i} trace {:.4}", el.trace().re);
    }
    Ok(())
}
