//! Mean photon-pair number against time for several gains.
//!
//! Below the stability threshold the pair number saturates; above it the
//! closed form still applies but the moments grow without bound.

use cel::closed_form::Solution;
use cel::moment_ode::MomentOde;
use cel::params::SystemParams;

fn main() -> cel::Result<()> {
    let gains = [5.0, 10.0, 15.0];
    let times = [0.5, 1.0, 2.0, 3.0, 5.0];

    print!("{:>5}", "t");
    for a in gains {
        print!(" {:>14}", format!("nbar @ A={a}"));
    }
    println!();
    for t in times {
        print!("{t:>5.1}");
        for a in gains {
            let sol = Solution::new(SystemParams { gain: a, ..SystemParams::default() })?;
            print!(" {:>14.6}", sol.moments(t)?.nbar());
        }
        println!();
    }

    println!();
    for a in gains {
        let params = SystemParams { gain: a, ..SystemParams::default() };
        let sol = Solution::new(params)?;
        if sol.unstable() {
            println!("A = {a}: above threshold, pair number keeps growing");
        } else {
            let ss = MomentOde::from_params(&params)?.steady_state()?;
            println!("A = {a}: saturates at nbar = {:.6}", ss.nbar());
        }
    }
    Ok(())
}
