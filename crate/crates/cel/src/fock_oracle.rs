//! Truncated Fock-space master-equation oracle.
//!
//! Integrates the full phase-averaged density matrix on a hard-truncated
//! two-mode number basis and reads the moments off it — no moment closure,
//! no spectral decomposition — so it checks the whole derivation chain of
//! the other engines, not just their algebra.
//!
//! Basis ordering is row-major in the occupation pair: index
//! `i = na * (n_max_b + 1) + nb`.  Ladder operators follow truncated
//! semantics, `a†|n_max_a> = 0`, which keeps the generator exactly
//! trace-preserving on the finite space; leakage towards the cutoff is
//! watched through the boundary occupation reported as `tail`.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::closed_form::{MomentState, OVERFLOW_HORIZON};
use crate::error::{Error, Result};
use crate::moment_ode::validate_grid;
use crate::params::SystemParams;

/// Steps with `dt * rate_bound` above this are rejected outright.
pub const FOCK_STEP_LIMIT: f64 = 1.0;
/// Hard cap on the truncated Hilbert-space dimension.
pub const MAX_DIMENSION: usize = 1024;

/// Master-equation integrator on a truncated two-mode number basis.
#[derive(Debug, Clone)]
pub struct FockOracle {
    n_max_a: usize,
    n_max_b: usize,
    /// Sandwich weights of the nine off-diagonal Liouvillian passes.
    w_a_down: f64,
    w_a_up: f64,
    w_b_down: f64,
    w_cross: f64,
    w_left_up: f64,
    w_right_up: f64,
    w_left_down: f64,
    w_right_down: f64,
    /// Diagonal generator per basis state; pass one adds `diag[i] + diag[j]`.
    diag: Vec<f64>,
    /// Square-root table, `sq[n] = sqrt(n)`.
    sq: Vec<f64>,
    /// Gershgorin-style bound on the generator norm, for the step guard.
    rate_bound: f64,
}

/// Moments and health indicators read off the density matrix at one time.
#[derive(Debug, Clone, Copy)]
pub struct FockSample {
    /// Time.
    pub t: f64,
    /// Mean photon number of the gain mode.
    pub n_a: f64,
    /// Mean photon number of the partner mode.
    pub n_b: f64,
    /// Pair correlation `<ab>`.
    pub pair: C64,
    /// Trace of the density matrix; stays 1 up to rounding.
    pub trace: f64,
    /// Occupation of the boundary shells `na = n_max_a` or `nb = n_max_b`.
    pub tail: f64,
    /// Largest entrywise deviation from Hermitian symmetry.
    pub hermiticity: f64,
    /// True when `tail` exceeded the tolerance passed to the evolution.
    pub cutoff_limited: bool,
}

impl FockSample {
    /// The moments in the shared engine-comparison form.
    pub fn moment_state(&self) -> MomentState {
        MomentState { t: self.t, u: self.n_a, v: self.n_b, w: self.pair.re }
    }
}

impl FockOracle {
    /// Builds the generator for `params` on cutoffs `(n_max_a, n_max_b)`.
    pub fn new(params: &SystemParams, n_max_a: usize, n_max_b: usize) -> Result<Self> {
        let r = params.reduced()?;
        for (name, n) in [("n-max-a", n_max_a), ("n-max-b", n_max_b)] {
            if n < 1 {
                return Err(Error::InvalidParameter {
                    name,
                    value: n as f64,
                    reason: "Fock cutoff must be at least 1",
                });
            }
        }
        let (da, db) = (n_max_a + 1, n_max_b + 1);
        let dim = da * db;
        if dim > MAX_DIMENSION {
            return Err(Error::InvalidParameter {
                name: "n-max-a",
                value: dim as f64,
                reason: "truncated dimension (n_max_a+1)(n_max_b+1) exceeds the cap of 1024",
            });
        }

        let kappa = params.kappa;
        let half_gain = params.gain / (2.0 * r.norm);
        let gain = half_gain * r.rate_split;
        let loss = (2.0 * gain + kappa) / 2.0;
        let shift = half_gain * r.rate_shift;
        let couple = half_gain * r.coupling;
        let coherence = half_gain * r.zeta_prime * (1.0 + r.zeta_prime * r.zeta);

        let mut diag = Vec::with_capacity(dim);
        for na in 0..da {
            // a a† vanishes on the boundary state under truncated semantics.
            let sat = if na < n_max_a { (na + 1) as f64 } else { 0.0 };
            for nb in 0..db {
                diag.push(
                    -0.5 * kappa * na as f64 + (shift - gain) * sat
                        - (loss + shift) * nb as f64,
                );
            }
        }
        let sq: Vec<f64> = (0..=da.max(db)).map(|n| (n as f64).sqrt()).collect();

        let w_a_down = kappa;
        let w_a_up = 2.0 * (gain - shift);
        let w_b_down = 2.0 * (loss + shift);
        let w_cross = -2.0 * couple;
        let w_left_up = couple + coherence;
        let w_right_up = couple - coherence;
        let w_left_down = couple - coherence;
        let w_right_down = couple + coherence;
        let max_diag = diag.iter().fold(0.0f64, |m, &g| m.max(g.abs()));
        let weight_sum = w_a_down.abs()
            + w_a_up.abs()
            + w_b_down.abs()
            + 2.0 * w_cross.abs()
            + w_left_up.abs()
            + w_right_up.abs()
            + w_left_down.abs()
            + w_right_down.abs();
        let rate_bound = 2.0 * max_diag + weight_sum * da.max(db) as f64;

        Ok(FockOracle {
            n_max_a,
            n_max_b,
            w_a_down,
            w_a_up,
            w_b_down,
            w_cross,
            w_left_up,
            w_right_up,
            w_left_down,
            w_right_down,
            diag,
            sq,
            rate_bound,
        })
    }

    /// Gain-mode cutoff.
    pub fn n_max_a(&self) -> usize {
        self.n_max_a
    }

    /// Partner-mode cutoff.
    pub fn n_max_b(&self) -> usize {
        self.n_max_b
    }

    /// Truncated Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        (self.n_max_a + 1) * (self.n_max_b + 1)
    }

    /// Bound on the generator norm used by the step guard.
    pub fn rate_bound(&self) -> f64 {
        self.rate_bound
    }

    /// Two-mode vacuum density matrix.
    pub fn vacuum(&self) -> Array2<C64> {
        let dim = self.dim();
        let mut rho = Array2::zeros((dim, dim));
        rho[(0, 0)] = C64::new(1.0, 0.0);
        rho
    }

    /// Applies the generator once: the time derivative of `rho`.
    ///
    /// Panics if `rho` does not match the truncated dimension.
    pub fn apply(&self, rho: &Array2<C64>) -> Array2<C64> {
        let (da, db) = (self.n_max_a + 1, self.n_max_b + 1);
        let dim = da * db;
        assert_eq!(rho.dim(), (dim, dim), "density matrix has wrong dimension");
        let sq = &self.sq;
        let mut out = Array2::zeros((dim, dim));
        for na in 0..da {
            for nb in 0..db {
                let i = na * db + nb;
                for ma in 0..da {
                    for mb in 0..db {
                        let j = ma * db + mb;
                        let mut acc = (self.diag[i] + self.diag[j]) * rho[(i, j)];
                        // a rho a†
                        if na + 1 < da && ma + 1 < da {
                            acc += self.w_a_down * sq[na + 1] * sq[ma + 1] * rho[(i + db, j + db)];
                        }
                        // a† rho a
                        if na > 0 && ma > 0 {
                            acc += self.w_a_up * sq[na] * sq[ma] * rho[(i - db, j - db)];
                        }
                        // b rho b†
                        if nb + 1 < db && mb + 1 < db {
                            acc += self.w_b_down * sq[nb + 1] * sq[mb + 1] * rho[(i + 1, j + 1)];
                        }
                        // a† rho b†
                        if na > 0 && mb + 1 < db {
                            acc += self.w_cross * sq[na] * sq[mb + 1] * rho[(i - db, j + 1)];
                        }
                        // b rho a
                        if nb + 1 < db && ma > 0 {
                            acc += self.w_cross * sq[nb + 1] * sq[ma] * rho[(i + 1, j - db)];
                        }
                        // b† a† rho
                        if na > 0 && nb > 0 {
                            acc += self.w_left_up * sq[na] * sq[nb] * rho[(i - db - 1, j)];
                        }
                        // rho b† a†
                        if ma + 1 < da && mb + 1 < db {
                            acc +=
                                self.w_right_up * sq[ma + 1] * sq[mb + 1] * rho[(i, j + db + 1)];
                        }
                        // a b rho
                        if na + 1 < da && nb + 1 < db {
                            acc +=
                                self.w_left_down * sq[na + 1] * sq[nb + 1] * rho[(i + db + 1, j)];
                        }
                        // rho a b
                        if ma > 0 && mb > 0 {
                            acc += self.w_right_down * sq[ma] * sq[mb] * rho[(i, j - db - 1)];
                        }
                        out[(i, j)] = acc;
                    }
                }
            }
        }
        out
    }

    /// Moments and health indicators at time `t`; `tail_tol` sets the
    /// `cutoff_limited` flag.
    pub fn sample(&self, rho: &Array2<C64>, t: f64, tail_tol: f64) -> FockSample {
        let (da, db) = (self.n_max_a + 1, self.n_max_b + 1);
        let mut trace = 0.0;
        let mut n_a = 0.0;
        let mut n_b = 0.0;
        let mut tail = 0.0;
        for na in 0..da {
            for nb in 0..db {
                let pop = rho[(na * db + nb, na * db + nb)].re;
                trace += pop;
                n_a += na as f64 * pop;
                n_b += nb as f64 * pop;
                if na == self.n_max_a {
                    tail += pop;
                }
                if nb == self.n_max_b {
                    tail += pop;
                }
            }
        }
        let mut pair = C64::new(0.0, 0.0);
        for na in 0..self.n_max_a {
            for nb in 0..self.n_max_b {
                let lo = na * db + nb;
                let hi = (na + 1) * db + nb + 1;
                pair += self.sq[na + 1] * self.sq[nb + 1] * rho[(hi, lo)];
            }
        }
        let dim = da * db;
        let mut hermiticity = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                hermiticity = hermiticity.max((rho[(i, j)] - rho[(j, i)].conj()).norm());
            }
        }
        FockSample {
            t,
            n_a,
            n_b,
            pair,
            trace,
            tail,
            hermiticity,
            cutoff_limited: !(tail <= tail_tol),
        }
    }

    /// Integrates from vacuum and samples at every grid point, failing with
    /// `CutoffExceeded` as soon as the boundary occupation passes `tail_tol`.
    pub fn evolve(&self, t_grid: &[f64], dt: f64, tail_tol: f64) -> Result<Vec<FockSample>> {
        self.run(t_grid, dt, tail_tol, true)
    }

    /// Same integration, but a passed tolerance only sets `cutoff_limited`
    /// on the affected samples instead of aborting.
    pub fn evolve_flagged(
        &self,
        t_grid: &[f64],
        dt: f64,
        tail_tol: f64,
    ) -> Result<Vec<FockSample>> {
        self.run(t_grid, dt, tail_tol, false)
    }

    fn run(&self, t_grid: &[f64], dt: f64, tail_tol: f64, strict: bool) -> Result<Vec<FockSample>> {
        validate_grid(t_grid)?;
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidGrid("step size must be positive and finite"));
        }
        if !tail_tol.is_finite() || tail_tol <= 0.0 {
            return Err(Error::InvalidGrid("tail tolerance must be positive and finite"));
        }
        if dt * self.rate_bound > FOCK_STEP_LIMIT {
            return Err(Error::StepTooLarge {
                dt,
                max_rate: self.rate_bound,
                limit: FOCK_STEP_LIMIT,
            });
        }
        if t_grid.last().copied().unwrap_or(0.0) / dt > 1e6 {
            return Err(Error::InvalidGrid(
                "time grid needs too many integrator steps; increase the step size",
            ));
        }

        let mut rho = self.vacuum();
        let mut t = 0.0f64;
        let mut out = Vec::with_capacity(t_grid.len());
        for &target in t_grid {
            let span = target - t;
            let n = (span / dt + 1e-12).floor() as u64;
            for _ in 0..n {
                rho = self.rk4(&rho, dt);
            }
            let rem = span - n as f64 * dt;
            if rem > 1e-14 {
                rho = self.rk4(&rho, rem);
            }
            t = target;
            let s = self.sample(&rho, t, tail_tol);
            if !s.trace.is_finite() {
                return Err(Error::NumericalInstability {
                    t,
                    exponent: f64::INFINITY,
                    horizon: OVERFLOW_HORIZON,
                });
            }
            if strict && s.cutoff_limited {
                return Err(Error::CutoffExceeded { t, tail: s.tail, tolerance: tail_tol });
            }
            out.push(s);
        }
        Ok(out)
    }

    fn rk4(&self, rho: &Array2<C64>, h: f64) -> Array2<C64> {
        let k1 = self.apply(rho);
        let k2 = self.apply(&combine(rho, h / 2.0, &k1));
        let k3 = self.apply(&combine(rho, h / 2.0, &k2));
        let k4 = self.apply(&combine(rho, h, &k3));
        let mut acc = k1;
        acc.zip_mut_with(&k2, |a, &k| *a += 2.0 * k);
        acc.zip_mut_with(&k3, |a, &k| *a += 2.0 * k);
        acc.zip_mut_with(&k4, |a, &k| *a += k);
        combine(rho, h / 6.0, &acc)
    }
}

/// `rho + s * k`, elementwise.
fn combine(rho: &Array2<C64>, s: f64, k: &Array2<C64>) -> Array2<C64> {
    let mut out = rho.clone();
    out.zip_mut_with(k, |o, &kv| *o += s * kv);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::Solution;
    use crate::params::testing::admissible;
    use proptest::prelude::*;

    fn weak_drive(gain: f64) -> SystemParams {
        SystemParams { gain, ..SystemParams::default() }
    }

    /// Deterministic pseudo-random density-matrix-shaped matrix (not
    /// normalized or positive; the generator identities hold for any input).
    fn scrambled(dim: usize, hermitian: bool) -> Array2<C64> {
        let mut m = Array2::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                let s = (1.0 + i as f64 * 31.7 + j as f64 * 17.3).sin();
                let c = (2.0 + i as f64 * 13.1 + j as f64 * 29.9).cos();
                m[(i, j)] = C64::new(s, c);
            }
        }
        if hermitian {
            let copy = m.clone();
            for i in 0..dim {
                for j in 0..dim {
                    m[(i, j)] = 0.5 * (copy[(i, j)] + copy[(j, i)].conj());
                }
            }
        }
        m
    }

    #[test]
    fn vacuum_derivative_matches_diffusion_inflow() {
        let p = weak_drive(2.0);
        let oracle = FockOracle::new(&p, 6, 6).unwrap();
        let d = p.reduced().unwrap().drift_diffusion(&p);
        let dot = oracle.apply(&oracle.vacuum());
        let s = oracle.sample(&dot, 0.0, 1.0);
        // The moments of the generator applied to vacuum are the exact
        // diffusion inflow: no truncation or stepping error is involved.
        assert!((s.n_a - d.d_aa).abs() <= 1e-15 * d.d_aa);
        assert!(s.n_b.abs() <= 1e-15);
        assert!((s.pair.re - d.d_ab).abs() <= 1e-15 * d.d_ab);
        assert!(s.pair.im.abs() <= 1e-15);
        assert!(s.trace.abs() <= 1e-15);
    }

    #[test]
    fn generator_is_traceless_on_any_input() {
        let oracle = FockOracle::new(&weak_drive(10.0), 4, 3).unwrap();
        let out = oracle.apply(&scrambled(oracle.dim(), false));
        let trace: C64 = (0..oracle.dim()).map(|i| out[(i, i)]).sum();
        let tol = 1e-12 * oracle.rate_bound() * oracle.dim() as f64;
        assert!(trace.norm() <= tol, "trace residual {}", trace.norm());
    }

    #[test]
    fn generator_preserves_hermiticity() {
        let oracle = FockOracle::new(&weak_drive(10.0), 4, 3).unwrap();
        let out = oracle.apply(&scrambled(oracle.dim(), true));
        let mut worst = 0.0f64;
        for i in 0..oracle.dim() {
            for j in 0..oracle.dim() {
                worst = worst.max((out[(i, j)] - out[(j, i)].conj()).norm());
            }
        }
        assert!(worst <= 1e-12 * oracle.rate_bound());
    }

    /// Builds the same generator densely from Kronecker products of ladder
    /// operators and compares element by element through a matrix action.
    #[test]
    fn matches_dense_superoperator_construction() {
        let p = SystemParams {
            gain: 3.0,
            kappa: 0.7,
            drive: 1.3,
            coherence_decay: 0.8,
            atomic_decay: 1.7,
            phase_variance: 0.4,
        };
        let (n_max_a, n_max_b) = (2, 3);
        let oracle = FockOracle::new(&p, n_max_a, n_max_b).unwrap();
        let dim = oracle.dim();

        let r = p.reduced().unwrap();
        let half_gain = p.gain / (2.0 * r.norm);
        let gain = half_gain * r.rate_split;
        let loss = (2.0 * gain + p.kappa) / 2.0;
        let shift = half_gain * r.rate_shift;
        let couple = half_gain * r.coupling;
        let coherence = half_gain * r.zeta_prime * (1.0 + r.zeta_prime * r.zeta);

        let eye = |n: usize| Array2::<f64>::eye(n);
        let lower = |n: usize| {
            let mut m = Array2::<f64>::zeros((n, n));
            for k in 1..n {
                m[(k - 1, k)] = (k as f64).sqrt();
            }
            m
        };
        fn kron(x: &Array2<f64>, y: &Array2<f64>) -> Array2<f64> {
            let (rx, cx) = x.dim();
            let (ry, cy) = y.dim();
            let mut out = Array2::zeros((rx * ry, cx * cy));
            for i in 0..rx {
                for j in 0..cx {
                    for k in 0..ry {
                        for l in 0..cy {
                            out[(i * ry + k, j * cy + l)] = x[(i, j)] * y[(k, l)];
                        }
                    }
                }
            }
            out
        }
        let a = kron(&lower(n_max_a + 1), &eye(n_max_b + 1));
        let b = kron(&eye(n_max_a + 1), &lower(n_max_b + 1));
        let (ad, bd) = (a.t().to_owned(), b.t().to_owned());
        let id = eye(dim);
        // X rho Y as a matrix on the row-major vectorization.
        let lr = |x: &Array2<f64>, y: &Array2<f64>| kron(x, &y.t().to_owned());

        let mut li = Array2::<f64>::zeros((dim * dim, dim * dim));
        let mut add = |w: f64, m: Array2<f64>| li.zip_mut_with(&m, |o, &v| *o += w * v);
        add(p.kappa, lr(&a, &ad));
        add(-p.kappa / 2.0, lr(&ad.dot(&a), &id));
        add(-p.kappa / 2.0, lr(&id, &ad.dot(&a)));
        add(2.0 * gain, lr(&ad, &a));
        add(-gain, lr(&id, &a.dot(&ad)));
        add(-gain, lr(&a.dot(&ad), &id));
        add(2.0 * loss, lr(&b, &bd));
        add(-loss, lr(&id, &bd.dot(&b)));
        add(-loss, lr(&bd.dot(&b), &id));
        add(2.0 * shift, lr(&b, &bd));
        add(-2.0 * shift, lr(&ad, &a));
        add(-shift, lr(&bd.dot(&b), &id));
        add(shift, lr(&a.dot(&ad), &id));
        add(-shift, lr(&id, &bd.dot(&b)));
        add(shift, lr(&id, &a.dot(&ad)));
        add(-2.0 * couple, lr(&ad, &bd));
        add(couple, lr(&bd.dot(&ad), &id));
        add(-2.0 * couple, lr(&b, &a));
        add(couple, lr(&a.dot(&b), &id));
        add(couple, lr(&id, &bd.dot(&ad)));
        add(couple, lr(&id, &a.dot(&b)));
        add(coherence, lr(&bd.dot(&ad), &id));
        add(-coherence, lr(&id, &bd.dot(&ad)));
        add(-coherence, lr(&a.dot(&b), &id));
        add(coherence, lr(&id, &a.dot(&b)));

        let rho = scrambled(dim, true);
        let got = oracle.apply(&rho);
        let flat: Vec<C64> = rho.iter().copied().collect();
        for i in 0..dim {
            for j in 0..dim {
                let row = i * dim + j;
                let mut want = C64::new(0.0, 0.0);
                for (col, &v) in flat.iter().enumerate() {
                    want += li[(row, col)] * v;
                }
                assert!(
                    (got[(i, j)] - want).norm() <= 1e-12 * oracle.rate_bound(),
                    "mismatch at ({i}, {j}): {} vs {}",
                    got[(i, j)],
                    want
                );
            }
        }
    }

    #[test]
    fn short_run_tracks_closed_form() {
        let p = weak_drive(2.0);
        let oracle = FockOracle::new(&p, 8, 8).unwrap();
        let sol = Solution::new(p).unwrap();
        let samples = oracle.evolve(&[0.0, 0.25, 0.5], 1e-3, 1e-6).unwrap();
        for s in &samples {
            let want = sol.moments(s.t).unwrap();
            assert!((s.n_a - want.u).abs() <= 1e-5);
            assert!((s.n_b - want.v).abs() <= 1e-5);
            assert!((s.pair.re - want.w).abs() <= 1e-5);
            assert!(s.pair.im.abs() <= 1e-12);
            assert!((s.trace - 1.0).abs() <= 1e-12);
            assert!(s.hermiticity <= 1e-12);
            assert!(!s.cutoff_limited);
        }
    }

    #[test]
    fn tight_cutoff_flags_or_aborts() {
        let p = weak_drive(10.0);
        let oracle = FockOracle::new(&p, 2, 2).unwrap();
        match oracle.evolve(&[0.0, 1.0], 1e-3, 1e-3) {
            Err(Error::CutoffExceeded { tail, .. }) => assert!(tail > 1e-3),
            other => panic!("expected CutoffExceeded, got {other:?}"),
        }
        let samples = oracle.evolve_flagged(&[0.0, 1.0], 1e-3, 1e-3).unwrap();
        assert!(!samples[0].cutoff_limited);
        assert!(samples[1].cutoff_limited);
        // Truncated semantics keep the trace exact even when the cutoff bites.
        assert!((samples[1].trace - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn rejects_oversized_steps_and_dimensions() {
        let p = weak_drive(10.0);
        let oracle = FockOracle::new(&p, 4, 4).unwrap();
        match oracle.evolve(&[0.0, 1.0], 0.5, 1e-3) {
            Err(Error::StepTooLarge { .. }) => {}
            other => panic!("expected StepTooLarge, got {other:?}"),
        }
        assert!(matches!(
            FockOracle::new(&p, 40, 40),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            FockOracle::new(&p, 0, 4),
            Err(Error::InvalidParameter { name: "n-max-a", .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn generator_identities_hold_everywhere(p in admissible()) {
            let oracle = FockOracle::new(&p, 3, 3).unwrap();
            let out = oracle.apply(&scrambled(oracle.dim(), true));
            let trace: C64 = (0..oracle.dim()).map(|i| out[(i, i)]).sum();
            let tol = 1e-12 * oracle.rate_bound().max(1.0) * oracle.dim() as f64;
            prop_assert!(trace.norm() <= tol);
            let mut worst = 0.0f64;
            for i in 0..oracle.dim() {
                for j in 0..oracle.dim() {
                    worst = worst.max((out[(i, j)] - out[(j, i)].conj()).norm());
                }
            }
            prop_assert!(worst <= tol);
        }
    }
}
