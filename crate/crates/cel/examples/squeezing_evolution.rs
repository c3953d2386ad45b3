//! Time evolution of the collective quadrature variances at fixed gain
//! for a weak, a moderate, and a strong drive.
//!
//! The minus-quadrature variance dips below the vacuum level (transient
//! two-mode squeezing) and then recedes; the drive strength sets how deep
//! and how long-lived the dip is.

use cel::closed_form::Solution;
use cel::params::SystemParams;

fn main() -> cel::Result<()> {
    for (label, drive) in [("weak", 0.5), ("moderate", 2.5), ("strong", 10.0)] {
        let params = SystemParams { drive, ..SystemParams::default() };
        let sol = Solution::new(params)?;
        println!(
            "Omega = {drive:<4} ({label}); relaxes to a steady state: {}",
            if sol.unstable() { "no" } else { "yes" }
        );
        println!("{:>5} {:>13} {:>13} {:>10}", "t", "dc_minus_sq", "dc_plus_sq", "nbar");
        for t in [0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0] {
            let m = sol.moments(t)?;
            println!(
                "{t:>5.2} {:>13.6} {:>13.6} {:>10.4}",
                m.dc_minus_sq(),
                m.dc_plus_sq(),
                m.nbar()
            );
        }
        println!();
    }
    Ok(())
}
