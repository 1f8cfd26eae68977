//! Runs a small seeded campaign over every check and replays one trial.
//!
//! cargo run --release --example campaign -- [dim] [trials] [seed]

use holevo::harness::{replay, run_campaign, CampaignConfig, Check};

fn main() -> holevo::Result<()> {
    let mut args = std::env::args().skip(1);
    let dim = args.next().map_or(2, |a| a.parse().expect("dimension"));
    let trials = args.next().map_or(200, |a| a.parse().expect("trial count"));
    let seed = args.next().map_or(7, |a| a.parse().expect("seed"));

    let cfg = CampaignConfig::new("all", dim, trials, seed);
    let report = run_campaign(&cfg)?;
    for c in &report.checks {
        println!(
            "{:<28} min slack {:+.3e}  violations {}  {:.3}s",
            c.check,
            c.min_slack,
            c.violations.len(),
            c.wall_time
        );
    }
    println!("passed: {}", report.passed());

    let check = Check::Ssa;
    let (_, slack) = replay(check, &cfg, check.stream(0));
    println!("replayed {check} trial 0: slack {:.6}", slack?);
    Ok(())
}
