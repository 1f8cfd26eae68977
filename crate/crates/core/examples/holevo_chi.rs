//! Holevo χ of a few small ensembles, and the classical-quantum entropy
//! identity on one of them.

use holevo::entropy::{cq_state, holevo_chi, shannon_entropy, von_neumann_entropy};
use holevo::{DensityMatrix, Ensemble, PureState};

fn main() -> holevo::Result<()> {
    let zero = DensityMatrix::basis(2, 0);
    let one = DensityMatrix::basis(2, 1);
    let plus = PureState::plus().density();

    let cases = [
        ("orthogonal pair", Ensemble::uniform(vec![zero.clone(), one.clone()])?),
        ("|0>, |+>", Ensemble::uniform(vec![zero.clone(), plus.clone()])?),
        ("identical members", Ensemble::uniform(vec![plus.clone(), plus.clone()])?),
        ("mixed members", Ensemble::new(vec![0.3, 0.7], vec![DensityMatrix::maximally_mixed(2), zero.clone()])?),
    ];
    for (name, e) in &cases {
        let r = holevo_chi(e)?;
        println!(
            "{name:<18} chi = {:.6}  S(mix) = {:.6}  S(members) = {:?}",
            r.chi, r.mixture_entropy, r.member_entropies
        );
    }

    let probs = [0.25, 0.75];
    let states = [zero, plus];
    let joint = cq_state(&probs, 2, &states)?;
    let lhs = von_neumann_entropy(&joint)?;
    let rhs =
        shannon_entropy(&probs)? + 0.25 * von_neumann_entropy(&states[0])? + 0.75 * von_neumann_entropy(&states[1])?;
    println!("S(rho_XY) = {lhs:.12}, H(p) + sum p S = {rhs:.12}");
    Ok(())
}
