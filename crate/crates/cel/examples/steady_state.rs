//! Steady state below threshold and the threshold itself.
//!
//! Below the stability threshold the drift matrix is invertible and the
//! moments relax to the algebraic fixed point; the threshold is the gain
//! at which the slow spectral rate crosses zero.

use cel::closed_form::Solution;
use cel::moment_ode::MomentOde;
use cel::params::SystemParams;

fn slow_rate(gain: f64) -> f64 {
    let params = SystemParams { gain, ..SystemParams::default() };
    Solution::new(params).expect("valid parameters").spectral().mu_minus.re
}

fn main() -> cel::Result<()> {
    let params = SystemParams { gain: 5.0, ..SystemParams::default() };
    let ss = MomentOde::from_params(&params)?.steady_state()?;
    let late = Solution::new(params)?.moments(600.0)?;
    println!("A = {} steady state:", params.gain);
    println!("  algebraic fixed point: u={:.6} v={:.6} w={:.6}", ss.u, ss.v, ss.w);
    println!("  closed form at t=600:  u={:.6} v={:.6} w={:.6}", late.u, late.v, late.w);
    println!("  dc_minus_sq = {:.6}, nbar = {:.6}", ss.dc_minus_sq(), ss.nbar());

    // Bisect the threshold gain where the slow rate changes sign.
    let (mut lo, mut hi) = (5.0, 10.0);
    assert!(slow_rate(lo) > 0.0 && slow_rate(hi) < 0.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if slow_rate(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    println!();
    println!("threshold gain for the default weak drive: A* = {:.12}", 0.5 * (lo + hi));
    for gain in [5.0, 6.5, 7.0, 10.0] {
        println!(
            "  A = {gain:<5} slow rate = {:>12.6}  ({})",
            slow_rate(gain),
            if slow_rate(gain) > 0.0 { "stable" } else { "unstable" }
        );
    }
    Ok(())
}
