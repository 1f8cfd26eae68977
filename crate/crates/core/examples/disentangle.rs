//! Replacing an entangled pure state by the product of its marginals.
//! The χ-gain equals twice the entanglement entropy.

use holevo::entropy::von_neumann_entropy;
use holevo::no_go::{disentangle, disentangle_chi_gain, schmidt_state};

fn main() -> holevo::Result<()> {
    for w in [1.0, 0.99, 0.9, 0.75, 0.5] {
        let psi = schmidt_state(2, &[w, 1.0 - w])?;
        let rho = psi.density();
        let product = disentangle(&rho, (2, 2))?;
        let marginal = rho.partial_trace(&[2, 2], &[0])?;
        println!(
            "weight {w:<5} S(product) = {:.6}  2·S(marginal) = {:.6}  gain = {:.6}",
            von_neumann_entropy(&product)?,
            2.0 * von_neumann_entropy(&marginal)?,
            disentangle_chi_gain(&psi, (2, 2))?
        );
    }
    Ok(())
}
