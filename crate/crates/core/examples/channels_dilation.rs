//! Builds Kraus channels, dilates them to a unitary on system ⊗ environment,
//! checks the round trip and shows χ shrinking under each channel.

use holevo::channels::{
    channel_from_dilation, chi_monotonicity_slack, dilation_from_kraus, QuantumChannel, StinespringDilation,
};
use holevo::random::ginibre_density;
use holevo::{DensityMatrix, Ensemble, PureState, Rng};

fn main() -> holevo::Result<()> {
    let mut rng = Rng::new(1, 0);
    let e = Ensemble::uniform(vec![DensityMatrix::basis(2, 0), PureState::plus().density()])?;
    let haar = channel_from_dilation(&StinespringDilation::haar(2, 3, &mut rng))?;

    let channels = [
        ("depolarizing 0.5", QuantumChannel::depolarizing(2, 0.5)?),
        ("amplitude damping 0.3", QuantumChannel::amplitude_damping(2, 0.3)?),
        ("dephasing", QuantumChannel::dephasing(2)),
        ("random, 3-dim environment", haar),
    ];
    for (name, ch) in &channels {
        let dil = dilation_from_kraus(ch, &mut rng)?;
        let back = channel_from_dilation(&dil)?;
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let rho = DensityMatrix::new(ginibre_density(2, 2, &mut rng)?)?;
            worst = worst.max(ch.apply(&rho)?.matrix().max_abs_diff(back.apply(&rho)?.matrix()));
        }
        println!(
            "{name:<26} kraus = {}  dim_env = {}  round trip = {worst:.1e}  chi loss = {:.6}",
            ch.kraus().len(),
            dil.dim_env(),
            chi_monotonicity_slack(ch, &e)?
        );
    }
    Ok(())
}
