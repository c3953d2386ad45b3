//! Closed-form time evolution of the second moments and the derived
//! two-mode squeezing observables.
//!
//! The coupled amplitude equations are linear, so the intracavity moments
//! `u = <a†a>`, `v = <b†b>`, `w = Re<ab>` relax through the two-rate
//! spectrum `mu±` of the drift matrix.  Everything in this module is
//! evaluated in closed form — no time stepping — and is therefore the
//! reference the numerical engines are checked against.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::{DriftDiffusion, ReducedParams, SystemParams};

/// Relative degeneracy threshold on the spectral discriminant.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Relative shift applied to a degenerate discriminant before decomposing.
pub const DEGENERACY_SHIFT: f64 = 1e-8;
/// Imaginary residuals above `IM_RESIDUAL_TOL * max(1, |Re|)` are errors.
pub const IM_RESIDUAL_TOL: f64 = 1e-9;
/// Largest growth exponent evaluated before declaring instability overflow.
pub const OVERFLOW_HORIZON: f64 = 700.0;

/// Second moments of the two cavity modes at one instant.
///
/// `w` is the pair correlation `<ab>`, real for the phase-averaged initial
/// vacuum considered throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    /// Time.
    pub t: f64,
    /// Mean photon number of the gain mode, `<a†a>`.
    pub u: f64,
    /// Mean photon number of the partner mode, `<b†b>`.
    pub v: f64,
    /// Pair correlation `Re <ab>`.
    pub w: f64,
}

impl MomentState {
    /// Variance of the squeezed collective quadrature, `1 + u + v - 2w`.
    pub fn dc_minus_sq(&self) -> f64 {
        1.0 + self.u + self.v - 2.0 * self.w
    }

    /// Variance of the stretched collective quadrature, `1 + u + v + 2w`.
    pub fn dc_plus_sq(&self) -> f64 {
        1.0 + self.u + self.v + 2.0 * self.w
    }

    /// Mean photon-pair number, `(u + v) / 2`.
    pub fn nbar(&self) -> f64 {
        0.5 * (self.u + self.v)
    }

    /// Product of the two quadrature variances; at least 1 for any
    /// physical state.
    pub fn uncertainty_product(&self) -> f64 {
        self.dc_minus_sq() * self.dc_plus_sq()
    }
}

/// Relaxation spectrum of the drift matrix together with the mixing
/// coefficients that diagonalize the amplitude propagation.
#[derive(Debug, Clone, Copy)]
pub struct SpectralDecomposition {
    /// Fast relaxation rate.
    pub mu_plus: C64,
    /// Slow relaxation rate; a negative real part means exponential growth.
    pub mu_minus: C64,
    /// Hyperbolic mixing weight, `rate_split / sqrt(disc)`.
    pub p: C64,
    /// Off-diagonal weight into the gain mode.
    pub q_plus: C64,
    /// Off-diagonal weight into the partner mode.
    pub q_minus: C64,
    /// Raw spectral discriminant, before any degeneracy shift.
    pub discriminant: f64,
    /// True when the discriminant fell inside the degeneracy threshold and
    /// a relative shift of `DEGENERACY_SHIFT` was applied.
    pub degenerate: bool,
}

impl SpectralDecomposition {
    /// Both relaxation rates damp out, so a steady state exists.
    pub fn stable(&self) -> bool {
        self.mu_minus.re > 0.0 && self.mu_plus.re > 0.0
    }

    /// Amplitude propagators at time `t`.
    pub fn propagators(&self, t: f64) -> Propagators {
        let one = C64::new(1.0, 0.0);
        let em = (-self.mu_minus * t).exp();
        let ep = (-self.mu_plus * t).exp();
        Propagators {
            f_plus: 0.5 * ((one + self.p) * em + (one - self.p) * ep),
            f_minus: 0.5 * ((one - self.p) * em + (one + self.p) * ep),
            g_plus: 0.5 * self.q_plus * (ep - em),
            g_minus: 0.5 * self.q_minus * (ep - em),
        }
    }
}

/// Fundamental solutions of the homogeneous amplitude equations:
/// `a(t) = F+ a(0) + G+ b*(0)`, `b*(t) = G- a(0) + F- b*(0)`.
///
/// They satisfy `F+ F- - G+ G- = exp(-(mu+ + mu-) t)` identically.
#[derive(Debug, Clone, Copy)]
pub struct Propagators {
    pub f_plus: C64,
    pub f_minus: C64,
    pub g_plus: C64,
    pub g_minus: C64,
}

/// Spectral decomposition of the drift for the given parameter point.
///
/// Infallible: a degenerate discriminant is shifted by
/// `DEGENERACY_SHIFT` relative to its natural scale and flagged.
pub fn decompose(params: &SystemParams, r: &ReducedParams) -> SpectralDecomposition {
    let pump = r.zeta_prime * (1.0 + r.zeta_prime * r.zeta);
    let scale = pump * pump + r.rate_split * r.rate_split + r.coupling * r.coupling;
    let raw = pump * pump + r.rate_split * r.rate_split - r.coupling * r.coupling;
    let degenerate = raw.abs() < DEGENERACY_TOL * scale;
    let disc = if degenerate { raw + DEGENERACY_SHIFT * scale } else { raw };
    let sqrt_disc = if disc >= 0.0 {
        C64::new(disc.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-disc).sqrt())
    };
    let half_gain = params.gain / (2.0 * r.norm);
    let base = params.kappa / 2.0 + half_gain * r.rate_shift;
    SpectralDecomposition {
        mu_plus: base + half_gain * sqrt_disc,
        mu_minus: base - half_gain * sqrt_disc,
        p: r.rate_split / sqrt_disc,
        q_plus: (r.coupling - pump) / sqrt_disc,
        q_minus: (-r.coupling - pump) / sqrt_disc,
        discriminant: raw,
        degenerate,
    }
}

/// `(1 - exp(-z t)) / z`, the accumulated weight of a decay channel.
///
/// Switches to the series `t (1 - x/2 + x²/6 - x³/24)`, `x = z t`, when
/// `|z t| < 1e-4`, where the direct form loses digits to cancellation; the
/// truncation error there is below 1e-18 relative.
pub fn ramp(z: C64, t: f64) -> C64 {
    let x = z * t;
    if x.norm() < 1e-4 {
        let one = C64::new(1.0, 0.0);
        t * (one - x / 2.0 + x * x / 6.0 - x * x * x / 24.0)
    } else {
        (C64::new(1.0, 0.0) - (-x).exp()) / z
    }
}

/// Fully assembled closed-form solution at one parameter point.
///
/// Construction validates the parameters and precomputes the spectral
/// decomposition and the moment expansion coefficients; evaluation at any
/// time is then a handful of exponentials.
#[derive(Debug, Clone)]
pub struct Solution {
    params: SystemParams,
    reduced: ReducedParams,
    drift: DriftDiffusion,
    spectral: SpectralDecomposition,
    /// Expansion coefficients of u, v, w over the decay channels `rates`.
    cu: [C64; 3],
    cv: [C64; 3],
    cw: [C64; 3],
    /// Decay channels of the second moments: 2mu+, 2mu-, mu+ + mu-.
    rates: [C64; 3],
}

impl Solution {
    /// Builds the solution, shifting and flagging a degenerate spectrum.
    pub fn new(params: SystemParams) -> Result<Self> {
        let reduced = params.reduced()?;
        let drift = reduced.drift_diffusion(&params);
        let spectral = decompose(&params, &reduced);
        Ok(Self::assemble(params, reduced, drift, spectral))
    }

    /// Builds the solution, rejecting a degenerate spectrum instead of
    /// shifting it.
    pub fn strict(params: SystemParams) -> Result<Self> {
        let s = Self::new(params)?;
        if s.spectral.degenerate {
            let r = &s.reduced;
            let pump = r.zeta_prime * (1.0 + r.zeta_prime * r.zeta);
            let scale = pump * pump + r.rate_split * r.rate_split + r.coupling * r.coupling;
            return Err(Error::DegenerateSpectrum {
                discriminant: s.spectral.discriminant,
                tolerance: DEGENERACY_TOL * scale,
            });
        }
        Ok(s)
    }

    fn assemble(
        params: SystemParams,
        reduced: ReducedParams,
        drift: DriftDiffusion,
        spectral: SpectralDecomposition,
    ) -> Self {
        let one = C64::new(1.0, 0.0);
        let (l, m) = (reduced.diff_self, reduced.diff_cross);
        let (p, qp, qm) = (spectral.p, spectral.q_plus, spectral.q_minus);
        let (omp, opp) = (one - p, one + p);
        let a4 = params.gain / (4.0 * reduced.norm);
        let a8 = 0.5 * a4;
        let cu = [
            a4 * (l * omp * omp + m * qp * omp),
            a4 * (l * opp * opp - m * qp * opp),
            2.0 * a4 * (l * (one - p * p) + m * qp * p),
        ];
        let cv = [
            a4 * (l * qm * qm + m * qm * opp),
            a4 * (l * qm * qm - m * qm * omp),
            -2.0 * a4 * (l * qm * qm + m * qm * p),
        ];
        let cross = one - p * p + qm * qp;
        let cw = [
            a8 * (2.0 * l * qm * omp + m * cross),
            -a8 * (2.0 * l * qm * opp - m * cross),
            2.0 * a8 * (2.0 * l * qm * p + m * (one + p * p - qm * qp)),
        ];
        let rates = [
            2.0 * spectral.mu_plus,
            2.0 * spectral.mu_minus,
            spectral.mu_plus + spectral.mu_minus,
        ];
        Solution { params, reduced, drift, spectral, cu, cv, cw, rates }
    }

    /// Parameter point this solution was built for.
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// Reduced coefficient set.
    pub fn reduced(&self) -> &ReducedParams {
        &self.reduced
    }

    /// Drift/diffusion coefficients of the amplitude equations.
    pub fn drift(&self) -> &DriftDiffusion {
        &self.drift
    }

    /// Relaxation spectrum.
    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    /// True when the slow relaxation rate has a nonpositive real part, so
    /// the moments grow without bound.
    pub fn unstable(&self) -> bool {
        !self.spectral.stable()
    }

    /// True when the spectrum needed a degeneracy shift.
    pub fn degenerate(&self) -> bool {
        self.spectral.degenerate
    }

    /// Second moments at time `t`, starting from two-mode vacuum.
    pub fn moments(&self, t: f64) -> Result<MomentState> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidGrid("time must be finite and nonnegative"));
        }
        let exponent = 2.0 * (-self.spectral.mu_minus.re).max(0.0) * t;
        if exponent > OVERFLOW_HORIZON {
            return Err(Error::NumericalInstability { t, exponent, horizon: OVERFLOW_HORIZON });
        }
        let r = [ramp(self.rates[0], t), ramp(self.rates[1], t), ramp(self.rates[2], t)];
        let sum = |c: &[C64; 3]| c[0] * r[0] + c[1] * r[1] + c[2] * r[2];
        Ok(MomentState {
            t,
            u: real_part(sum(&self.cu))?,
            v: real_part(sum(&self.cv))?,
            w: real_part(sum(&self.cw))?,
        })
    }

    /// Second moments on a whole time grid.
    pub fn moments_grid(&self, ts: &[f64]) -> Result<Vec<MomentState>> {
        ts.iter().map(|&t| self.moments(t)).collect()
    }
}

/// Extracts the real part, rejecting an imaginary residual beyond
/// `IM_RESIDUAL_TOL * max(1, |Re|)`.
fn real_part(z: C64) -> Result<f64> {
    let tolerance = IM_RESIDUAL_TOL * z.re.abs().max(1.0);
    if z.im.abs() > tolerance {
        return Err(Error::ImaginaryResidual { magnitude: z.im.abs(), tolerance });
    }
    Ok(z.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::testing::admissible;
    use proptest::prelude::*;

    const TOL: f64 = 1e-13;

    fn close(x: f64, expect: f64, tol: f64) -> bool {
        (x - expect).abs() <= tol * expect.abs().max(1.0)
    }

    fn weak_drive(gain: f64) -> SystemParams {
        SystemParams { gain, ..SystemParams::default() }
    }

    fn solution(p: SystemParams) -> Solution {
        Solution::new(p).unwrap()
    }

    #[test]
    fn spectrum_weak_drive_gain_ten() {
        let s = solution(weak_drive(10.0));
        let sp = s.spectral();
        assert_eq!(sp.discriminant, 3.578125);
        assert!(!sp.degenerate);
        assert!(close(sp.mu_plus.re, 3.442_087_758_873_124_2, TOL));
        assert!(close(sp.mu_minus.re, -0.118_558_347_108_418_34, TOL));
        assert_eq!(sp.mu_plus.im, 0.0);
        assert_eq!(sp.mu_minus.im, 0.0);
        assert!(close(sp.p.re, 1.321_637_200_910_179_6, TOL));
        assert!(close(sp.q_plus.re, 0.594_736_740_409_580_8, TOL));
        assert!(close(sp.q_minus.re, -1.255_555_340_864_670_6, TOL));
        assert!(!sp.stable());
        assert!(s.unstable());
    }

    #[test]
    fn spectrum_sum_and_product_identities() {
        let p = weak_drive(10.0);
        let s = solution(p);
        let (sp, r, d) = (s.spectral(), s.reduced(), s.drift());
        let sum = sp.mu_plus + sp.mu_minus;
        assert!(close(sum.re, p.kappa + p.gain / r.norm * r.rate_shift, TOL));
        let prod = sp.mu_plus * sp.mu_minus;
        assert!(close(prod.re, d.eta_a * d.eta_b - d.xi_a * d.xi_b, TOL));
        assert!(sum.im.abs() < 1e-15 && prod.im.abs() < 1e-15);
    }

    #[test]
    fn propagators_weak_drive_unit_time() {
        let s = solution(weak_drive(10.0));
        let pr = s.spectral().propagators(1.0);
        assert!(close(pr.f_plus.re, 1.301_787_970_246_172_8, TOL));
        assert!(close(pr.f_minus.re, -0.143_917_594_823_354_16, TOL));
        assert!(close(pr.g_plus.re, -0.325_283_752_140_643_56, TOL));
        assert!(close(pr.g_minus.re, 0.686_710_143_408_025_3, TOL));
        let wron = pr.f_plus * pr.f_minus - pr.g_plus * pr.g_minus;
        assert!(close(wron.re, 0.036_025_458_432_996_58, TOL));
    }

    #[test]
    fn moments_weak_drive_gain_ten() {
        let s = solution(weak_drive(10.0));
        let m = s.moments(0.25).unwrap();
        assert!(close(m.u, 0.415_132_956_169_135_86, TOL));
        assert!(close(m.v, 0.152_612_694_604_235_34, TOL));
        assert!(close(m.w, 0.459_257_774_864_937_8, TOL));
        assert!(close(m.dc_minus_sq(), 0.649_230_101_043_495_8, TOL));
        assert!(close(m.dc_plus_sq(), 2.486_261_200_503_246_7, TOL));
        assert!(close(m.nbar(), 0.283_872_825_386_685_73, TOL));

        let m = s.moments(0.5).unwrap();
        assert!(close(m.u, 0.761_042_741_642_186, TOL));
        assert!(close(m.v, 0.342_956_543_933_405_66, TOL));
        assert!(close(m.w, 0.765_606_981_393_889_7, TOL));
        assert!(close(m.dc_minus_sq(), 0.572_785_322_787_812_8, TOL));

        let m = s.moments(1.0).unwrap();
        assert!(close(m.u, 1.402_717_215_349_990_3, TOL));
        assert!(close(m.v, 0.608_233_174_987_276_7, TOL));
        assert!(close(m.w, 1.192_145_257_552_368_1, TOL));
        assert!(close(m.dc_minus_sq(), 0.626_659_875_232_531_4, TOL));

        let m = s.moments(2.0).unwrap();
        assert!(close(m.u, 2.834_562_544_520_087, TOL));
        assert!(close(m.v, 1.046_672_926_191_133_2, TOL));
        assert!(close(m.w, 1.984_934_712_485_338_2, TOL));
        assert!(close(m.dc_minus_sq(), 0.911_366_045_740_544_8, TOL));
    }

    #[test]
    fn vacuum_at_time_zero() {
        let m = solution(weak_drive(10.0)).moments(0.0).unwrap();
        assert_eq!((m.u, m.v, m.w), (0.0, 0.0, 0.0));
        assert_eq!(m.dc_minus_sq(), 1.0);
        assert_eq!(m.dc_plus_sq(), 1.0);
        assert_eq!(m.uncertainty_product(), 1.0);
    }

    #[test]
    fn initial_slopes_match_diffusion_inflow() {
        for params in [weak_drive(10.0), weak_drive(5.0), SystemParams {
            gain: 3.0,
            kappa: 0.3,
            drive: 0.1,
            coherence_decay: 1.0,
            atomic_decay: 10.0,
            phase_variance: 0.2,
        }] {
            let s = solution(params);
            let d = *s.drift();
            let t = 1e-9;
            let m = s.moments(t).unwrap();
            assert!(close(m.u / t, d.d_aa, 1e-8));
            assert!((m.v / t).abs() <= 1e-8 * d.d_aa.abs().max(1.0));
            assert!(close(m.w / t, d.d_ab, 1e-8));
        }
    }

    #[test]
    fn slow_rate_and_steady_moments_below_threshold() {
        let s = solution(weak_drive(5.0));
        let sp = s.spectral();
        assert!(close(sp.mu_minus.re, 0.065_720_826_445_790_83, TOL));
        assert!(sp.stable());
        // By t = 600 the slowest channel has decayed by e^{-78}.
        let m = s.moments(600.0).unwrap();
        assert!(close(m.u, 4.031_701_631_701_631_7, 1e-12));
        assert!(close(m.v, 1.346_386_946_386_946_4, 1e-12));
        assert!(close(m.w, 2.568_764_568_764_568_8, 1e-12));
        assert!(close(m.dc_minus_sq(), 1.240_559_440_559_440_6, 1e-12));
    }

    #[test]
    fn gain_threshold_of_weak_drive_family() {
        let at = |gain: f64| solution(weak_drive(gain));
        assert!(at(6.783_186_487_605_389).spectral().mu_minus.re.abs() < 1e-12);
        assert!(at(6.78).spectral().stable());
        assert!(!at(6.79).spectral().stable());
    }

    #[test]
    fn complex_spectrum_regime() {
        let p = SystemParams {
            gain: 3.0,
            kappa: 0.3,
            drive: 0.1,
            coherence_decay: 1.0,
            atomic_decay: 10.0,
            phase_variance: 0.2,
        };
        let s = solution(p);
        let sp = s.spectral();
        assert!(close(sp.discriminant, -2.638_419_334_178_460_6, TOL));
        assert!(close(sp.mu_plus.re, 0.186_714_292_080_497_24, TOL));
        assert!(close(sp.mu_plus.im, 0.606_994_448_873_348_97, TOL));
        assert!(close(sp.mu_minus.re, 0.186_714_292_080_497_24, TOL));
        assert!(close(sp.mu_minus.im, -0.606_994_448_873_348_97, TOL));
        assert!(sp.p.re.abs() < 1e-15);
        assert!(close(sp.p.im, -0.123_251_485_610_632_51, TOL));
        assert!(close(sp.q_plus.im, -1.001_423_107_449_310_7, TOL));
        assert!(close(sp.q_minus.im, 1.013_748_256_010_373_9, TOL));
        // The moments stay real even though every spectral quantity is
        // complex; u may legitimately go negative in this regime.
        let m = s.moments(1.0).unwrap();
        assert!(close(m.u, -0.212_327_569_930_401_5, TOL));
        assert!(close(m.v, 0.256_881_195_452_902_04, TOL));
        assert!(close(m.w, 0.422_385_954_710_525_17, TOL));
    }

    #[test]
    fn degenerate_spectrum_is_shifted_or_rejected() {
        let p = SystemParams { drive: 0.0, gain: 2.0, ..SystemParams::default() };
        let s = Solution::new(p).unwrap();
        assert!(s.degenerate());
        assert_eq!(s.spectral().discriminant, 0.0);
        let m = s.moments(1.0).unwrap();
        assert!(m.u.is_finite() && m.v.is_finite() && m.w.is_finite());
        match Solution::strict(p) {
            Err(Error::DegenerateSpectrum { .. }) => {}
            other => panic!("expected DegenerateSpectrum, got {other:?}"),
        }
    }

    #[test]
    fn instability_horizon_guards_overflow() {
        let s = solution(weak_drive(10.0));
        // 2 |Re mu-| t crosses 700 near t = 2952.
        assert!(s.moments(2000.0).unwrap().u.is_finite());
        match s.moments(4000.0) {
            Err(Error::NumericalInstability { exponent, .. }) => assert!(exponent > 700.0),
            other => panic!("expected NumericalInstability, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_times() {
        let s = solution(weak_drive(10.0));
        assert!(matches!(s.moments(-1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(s.moments(f64::NAN), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn ramp_series_matches_direct_form() {
        assert_eq!(ramp(C64::new(0.0, 0.0), 0.7), C64::new(0.7, 0.0));
        let direct = |z: C64, t: f64| (C64::new(1.0, 0.0) - (-z * t).exp()) / z;
        for z in [C64::new(1.1e-4, 0.0), C64::new(0.0, 1.1e-4), C64::new(-8e-5, 6e-5)] {
            let (series_side, direct_side) = (ramp(z, 0.9), direct(z, 0.9));
            assert!((series_side - direct_side).norm() <= 1e-12 * direct_side.norm());
        }
        let got = ramp(C64::new(1.0, 0.0), 1.0);
        assert!(close(got.re, 0.632_120_558_828_557_7, TOL));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn mixing_weights_resolve_identity(p in admissible()) {
            let s = solution(p);
            if s.degenerate() { return Ok(()); }
            let sp = s.spectral();
            let res = sp.p * sp.p + sp.q_plus * sp.q_minus - C64::new(1.0, 0.0);
            prop_assert!(res.norm() <= 1e-10);
        }

        #[test]
        fn spectrum_sum_matches_drift_trace(p in admissible()) {
            let s = solution(p);
            let (sp, d) = (s.spectral(), s.drift());
            let sum = sp.mu_plus + sp.mu_minus;
            let expect = d.eta_a + d.eta_b;
            prop_assert!((sum.re - expect).abs() <= 1e-12 * expect.abs().max(1.0));
            prop_assert!(sum.im.abs() <= 1e-12 * expect.abs().max(1.0));
        }

        #[test]
        fn spectrum_product_matches_drift_determinant(p in admissible()) {
            let s = solution(p);
            if s.degenerate() { return Ok(()); }
            let (sp, d) = (s.spectral(), s.drift());
            let prod = sp.mu_plus * sp.mu_minus;
            let expect = d.eta_a * d.eta_b - d.xi_a * d.xi_b;
            // Near-singular drifts cancel; scale by the operand magnitudes.
            let scale = expect.abs().max(d.eta_a.abs() * d.eta_b.abs() + d.xi_a.abs() * d.xi_b.abs());
            prop_assert!((prod.re - expect).abs() <= 1e-12 * scale.max(1e-300));
            prop_assert!(prod.im.abs() <= 1e-12 * scale.max(1e-300));
        }

        #[test]
        fn propagator_wronskian(p in admissible(), t in 0.0..3.0f64) {
            let s = solution(p);
            if s.degenerate() { return Ok(()); }
            let sp = s.spectral();
            // Products of two propagators overflow at twice the moment
            // horizon; keep the identity check within f64 range.
            prop_assume!(2.0 * (-sp.mu_minus.re).max(0.0) * t < 600.0);
            let pr = sp.propagators(t);
            let wron = pr.f_plus * pr.f_minus - pr.g_plus * pr.g_minus;
            let expect = (-(sp.mu_plus + sp.mu_minus) * t).exp();
            let scale = pr.f_plus.norm() * pr.f_minus.norm()
                + pr.g_plus.norm() * pr.g_minus.norm()
                + expect.norm();
            prop_assert!((wron - expect).norm() <= 1e-9 * scale);
        }

        #[test]
        fn moments_stay_real_and_finite(p in admissible(), t in 0.0..2.0f64) {
            let s = solution(p);
            let m = s.moments(t).unwrap();
            prop_assert!(m.u.is_finite() && m.v.is_finite() && m.w.is_finite());
            // Mode b only fills through the pair coupling: v >= 0 up to rounding.
            let scale = m.u.abs().max(m.v.abs()).max(m.w.abs()).max(1.0);
            prop_assert!(m.v >= -1e-9 * scale);
        }
    }
}
