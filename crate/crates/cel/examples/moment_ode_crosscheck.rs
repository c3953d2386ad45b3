//! Cross-check of the closed form against fixed-step fourth-order
//! integration of the moment equations.
//!
//! The two must agree to integrator accuracy at every time; halving the
//! step shrinks the deviation sixteen-fold.

use cel::closed_form::Solution;
use cel::moment_ode::MomentOde;
use cel::params::SystemParams;

fn main() -> cel::Result<()> {
    // The coarsest step below must respect dt * max_rate <= 0.1.
    let params = SystemParams { gain: 5.0, ..SystemParams::default() };
    let sol = Solution::new(params)?;
    let ode = MomentOde::from_params(&params)?;
    let grid = [0.5, 1.0, 2.0, 3.0, 5.0];

    println!("dt = 1e-3:");
    println!("{:>5} {:>12} {:>12} {:>12}", "t", "|du|", "|dv|", "|dw|");
    for (exact, num) in sol.moments_grid(&grid)?.iter().zip(ode.integrate(&grid, 1e-3)?) {
        println!(
            "{:>5.1} {:>12.2e} {:>12.2e} {:>12.2e}",
            exact.t,
            (exact.u - num.u).abs(),
            (exact.v - num.v).abs(),
            (exact.w - num.w).abs()
        );
    }

    println!();
    println!("step-halving at t = 2:");
    let truth = sol.moments(2.0)?;
    let mut previous: Option<f64> = None;
    for dt in [0.04, 0.02, 0.01, 0.005] {
        let m = &ode.integrate(&[2.0], dt)?[0];
        let err = (m.u - truth.u).abs().max((m.v - truth.v).abs()).max((m.w - truth.w).abs());
        match previous {
            Some(last) => {
                println!("dt = {dt:<6} max err = {err:.3e}  order = {:.2}", (last / err).log2())
            }
            None => println!("dt = {dt:<6} max err = {err:.3e}"),
        }
        previous = Some(err);
    }
    Ok(())
}
