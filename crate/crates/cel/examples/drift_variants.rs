//! The documented drift-split discrepancy, made visible.
//!
//! The self-consistent drift split reproduces the spectral rates exactly:
//! their sum matches the drift-matrix trace and their product matches its
//! determinant.  The legacy as-printed split still matches the trace —
//! which is why it looks plausible — but fails the determinant identity.

use cel::closed_form::decompose;
use cel::params::{DriftVariant, SystemParams};

fn main() -> cel::Result<()> {
    let params = SystemParams { drive: 2.5, phase_variance: 0.3, ..SystemParams::default() };
    let r = params.reduced()?;
    let sp = decompose(&params, &r);
    let sum = (sp.mu_plus + sp.mu_minus).re;
    let product = (sp.mu_plus * sp.mu_minus).re;
    println!("spectral rates: mu_plus + mu_minus = {sum:.12}, mu_plus * mu_minus = {product:.12}");
    println!();
    for variant in [DriftVariant::Consistent, DriftVariant::Legacy] {
        let d = r.drift_diffusion_with(&params, variant);
        let trace = d.eta_a + d.eta_b;
        let det = d.eta_a * d.eta_b - d.xi_a * d.xi_b;
        println!("{variant:?} split:");
        println!("  trace       = {trace:.12}  (dev {:.1e})", (trace - sum).abs());
        println!("  determinant = {det:.12}  (dev {:.1e})", (det - product).abs());
    }
    Ok(())
}
