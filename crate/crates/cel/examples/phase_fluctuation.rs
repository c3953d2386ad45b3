//! Effect of the pump phase-fluctuation variance on squeezing.
//!
//! The direction of the effect depends on the drive: under a strong drive
//! larger variance deepens the best squeezing, under a weak drive it
//! destroys it.

use cel::closed_form::Solution;
use cel::params::SystemParams;
use cel::sweep_io::linspace;

fn best_squeezing(params: SystemParams) -> cel::Result<(f64, f64)> {
    let sol = Solution::new(params)?;
    let mut best = (f64::INFINITY, 0.0);
    for m in sol.moments_grid(&linspace(0.0, 5.0, 512))? {
        if m.dc_minus_sq() < best.0 {
            best = (m.dc_minus_sq(), m.t);
        }
    }
    Ok(best)
}

fn main() -> cel::Result<()> {
    for (label, drive) in [("strong", 10.0), ("weak", 0.5)] {
        println!("{label} drive, Omega = {drive}:");
        println!("{:>7} {:>16} {:>8}", "theta", "min dc_minus_sq", "at t");
        for theta in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let params =
                SystemParams { drive, phase_variance: theta, ..SystemParams::default() };
            let (min, t) = best_squeezing(params)?;
            println!("{theta:>7.2} {min:>16.6} {t:>8.3}");
        }
        println!();
    }
    Ok(())
}
