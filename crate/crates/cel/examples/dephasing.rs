//! Effect of the decay-rate ratio gamma/Gamma on squeezing.
//!
//! Only the ratio of coherence decay to population decay enters the
//! reduced coefficients, so the sweep scales the population decay at
//! fixed coherence decay.  As with phase fluctuations, faster dephasing
//! helps under a strong drive and hurts under a weak one.

use cel::closed_form::Solution;
use cel::params::SystemParams;
use cel::sweep_io::{linspace, Axis};

fn main() -> cel::Result<()> {
    let grid = linspace(0.0, 5.0, 512);
    for (label, drive) in [("strong", 10.0), ("weak", 0.5)] {
        println!("{label} drive, Omega = {drive}:");
        println!("{:>12} {:>16} {:>8}", "gamma/Gamma", "min dc_minus_sq", "at t");
        for ratio in [1.0, 1.25, 1.5, 1.75, 2.0] {
            let base = SystemParams { drive, ..SystemParams::default() };
            let params = Axis::DecayRatio.apply(&base, ratio);
            let sol = Solution::new(params)?;
            let mut best = (f64::INFINITY, 0.0);
            for m in sol.moments_grid(&grid)? {
                if m.dc_minus_sq() < best.0 {
                    best = (m.dc_minus_sq(), m.t);
                }
            }
            println!("{ratio:>12.2} {:>16.6} {:>8.3}", best.0, best.1);
        }
        println!();
    }
    Ok(())
}
