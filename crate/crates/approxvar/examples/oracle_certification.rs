//! Fast engines against brute force on seeded random instances.
use approxvar::oracle::{run_oracle, Engine, OracleConfig};

fn main() -> approxvar::Result<()> {
    let cfg = OracleConfig { instances: 200, seed: 7, ..Default::default() };
    for e in [Engine::Taut, Engine::Candidate, Engine::Finite] {
        let s = run_oracle(e, &cfg)?;
        println!("{e:?}: {} passed, {} failed, max gap {:.2e}", s.passed, s.failed, s.max_gap);
    }
    Ok(())
}
