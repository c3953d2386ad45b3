//! Cross-check of the closed form against the truncated Fock-space
//! master equation — the oracle that knows nothing about moment algebra.
//!
//! The generator preserves the trace exactly; the only systematic error
//! is the truncation, monitored through the boundary-shell occupancy.

use cel::closed_form::Solution;
use cel::fock_oracle::FockOracle;
use cel::params::SystemParams;

fn main() -> cel::Result<()> {
    let params = SystemParams { gain: 2.0, ..SystemParams::default() };
    let oracle = FockOracle::new(&params, 10, 10)?;
    let sol = Solution::new(params)?;
    let grid = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];

    println!(
        "A = {}, cutoffs ({}, {}), dimension {}",
        params.gain,
        oracle.n_max_a(),
        oracle.n_max_b(),
        oracle.dim()
    );
    println!(
        "{:>5} {:>11} {:>11} {:>11} {:>10} {:>10}",
        "t", "|du|", "|dv|", "|dw|", "tail", "trace-1"
    );
    for s in oracle.evolve_flagged(&grid, 1e-3, 1e-6)? {
        let m = sol.moments(s.t)?;
        let f = s.moment_state();
        println!(
            "{:>5.2} {:>11.2e} {:>11.2e} {:>11.2e} {:>10.2e} {:>10.2e}{}",
            s.t,
            (m.u - f.u).abs(),
            (m.v - f.v).abs(),
            (m.w - f.w).abs(),
            s.tail,
            (s.trace - 1.0).abs(),
            if s.cutoff_limited { "  [cutoff-limited]" } else { "" }
        );
    }
    Ok(())
}
