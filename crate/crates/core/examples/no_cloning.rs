//! Factorizing processes and the cloning χ-gain.
//!
//! A process `U|φ⟩|s⟩ = |φ⟩|f(φ)⟩` that leaves two inputs undisturbed must
//! leave the overlap of their pointer states at 1 unless the inputs are
//! orthogonal. CNOT is the textbook case: it copies basis states and
//! entangles superpositions.

use holevo::no_go::{cloning_chi_gain, controlled_unitary, extract_pointer_state, no_cloning_residual};
use holevo::{ComplexMatrix, DensityMatrix, Ensemble, PureState};

fn main() -> holevo::Result<()> {
    let cnot = controlled_unitary(2, &[ComplexMatrix::identity(2), ComplexMatrix::pauli_x()])?;
    let s = PureState::basis(2, 0);
    for (label, phi) in [("|0>", PureState::basis(2, 0)), ("|1>", PureState::basis(2, 1)), ("|+>", PureState::plus())] {
        let r = extract_pointer_state(&cnot, &phi, &s, (2, 2))?;
        println!("CNOT on {label}: factorizes = {:<5} fidelity = {:.6}", r.factorizes, r.fidelity);
    }
    let residual = no_cloning_residual(&cnot, &PureState::basis(2, 0), &PureState::basis(2, 1), &s, (2, 2))?;
    println!("residual for |0>, |1> = {residual:.1e}");

    for theta in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let angle = theta * std::f64::consts::FRAC_PI_2;
        let tilted = PureState::from_real(&[angle.cos(), angle.sin()])?;
        let e = Ensemble::uniform(vec![DensityMatrix::basis(2, 0), tilted.density()])?;
        println!("angle {:>4.2}·π/2  cloning gain = {:.6}", theta, cloning_chi_gain(&e)?);
    }
    Ok(())
}
