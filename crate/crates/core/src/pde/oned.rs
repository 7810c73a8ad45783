//! Exact mean interval on a segment `[0, L]`:
//! `(σ/2) T'' + μ T' = -1 + λ T`, `T(0) = T(L) = 0`.

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneD {
    pub mu: f64,
    pub sigma: f64,
    pub l: f64,
    pub lambda: f64,
    /// Maximiser of `T` on `[0, L]`.
    pub x_opt: f64,
}

/// Below this |2μL/σ| the λ = 0 solution switches to its Taylor form.
const SMALL_DRIFT: f64 = 1e-5;

pub fn solve_1d(mu: f64, sigma: f64, l: f64, lambda: f64) -> Result<OneD> {
    if !(sigma > 0.0) || !(l > 0.0) || !mu.is_finite() || !sigma.is_finite() || !l.is_finite() {
        return domain(format!("need sigma > 0, L > 0 and finite mu, got {mu}, {sigma}, {l}"));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return domain(format!("lambda must be finite and >= 0, got {lambda}"));
    }
    let mut s = OneD { mu, sigma, l, lambda, x_opt: 0.0 };
    s.x_opt = s.argmax();
    Ok(s)
}

impl OneD {
    pub fn t(&self, x: f64) -> f64 {
        if x <= 0.0 || x >= self.l {
            return 0.0;
        }
        if self.lambda > 0.0 {
            return self.t_lambda(x);
        }
        // Reflection x -> L - x flips the drift, so only μ >= 0 is evaluated.
        if self.mu < 0.0 {
            return t_zero(-self.mu, self.sigma, self.l, self.l - x);
        }
        t_zero(self.mu, self.sigma, self.l, x)
    }

    /// Value at the optimum.
    pub fn t_opt(&self) -> f64 {
        self.t(self.x_opt)
    }

    fn roots(&self) -> (f64, f64) {
        let disc = (self.mu * self.mu + 2.0 * self.sigma * self.lambda).sqrt();
        // r1 > 0 > r2, each in the cancellation-free form.
        if self.mu >= 0.0 {
            let r2 = -(self.mu + disc) / self.sigma;
            (-2.0 * self.lambda / (self.sigma * r2), r2)
        } else {
            let r1 = (disc - self.mu) / self.sigma;
            (r1, -2.0 * self.lambda / (self.sigma * r1))
        }
    }

    fn t_lambda(&self, x: f64) -> f64 {
        let (r1, r2) = self.roots();
        let l = self.l;
        let one_m_p = -(-r1 * l).exp_m1();
        let one_m_q = -(r2 * l).exp_m1();
        let one_m_pq = -((r2 - r1) * l).exp_m1();
        let v = 1.0
            - one_m_q / one_m_pq * (r1 * (x - l)).exp()
            - one_m_p / one_m_pq * (r2 * x).exp();
        (v / self.lambda).max(0.0)
    }

    fn argmax(&self) -> f64 {
        let l = self.l;
        if self.lambda > 0.0 {
            let (r1, r2) = self.roots();
            let one_m_p = -(-r1 * l).exp_m1();
            let one_m_q = -(r2 * l).exp_m1();
            // T' = 0 where e^{(r1 - r2) x - r1 L} = -B r2 / (A r1), B/A = (1-p)/(1-q).
            let x = ((one_m_p / one_m_q) * (-r2 / r1)).ln() + r1 * l;
            return (x / (r1 - r2)).clamp(0.0, l);
        }
        if self.mu < 0.0 {
            return l - x_opt_zero(-self.mu, self.sigma, l);
        }
        x_opt_zero(self.mu, self.sigma, l)
    }
}

fn t_zero(mu: f64, sigma: f64, l: f64, x: f64) -> f64 {
    let beta = 2.0 * mu / sigma;
    if beta * l < SMALL_DRIFT {
        return x * (l - x) / sigma * (1.0 + beta * (l - 2.0 * x) / 6.0);
    }
    let ex = -(-beta * x).exp_m1();
    let el = -(-beta * l).exp_m1();
    ((l * ex - x * el) / (mu * el)).max(0.0)
}

fn x_opt_zero(mu: f64, sigma: f64, l: f64) -> f64 {
    let beta = 2.0 * mu / sigma;
    let z = beta * l;
    if z < 1e-4 {
        return l / 2.0 - beta * l * l / 24.0;
    }
    -((-(-z).exp_m1() / z).ln()) / beta
}

/// Drift and diffusion of a walk on a line whose step is `+ξ` with
/// probability `p` and `-ξ` otherwise, for step length moments
/// `(e_xi, e_xi2)` and dwell moments `(e_eta, var_eta)`.
pub fn two_direction_walk(p: f64, e_xi: f64, e_xi2: f64, e_eta: f64, var_eta: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&p) || !(e_eta > 0.0) {
        return domain("need 0 <= p <= 1 and E(eta) > 0");
    }
    let mean = (2.0 * p - 1.0) * e_xi;
    let var = e_xi2 - mean * mean;
    let mu = mean / e_eta;
    let sigma = (var * e_eta * e_eta + var_eta * mean * mean) / e_eta.powi(3);
    Ok((mu, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_ode(s: &OneD) {
        let h = 1e-4 * s.l;
        for k in 1..20 {
            let x = s.l * k as f64 / 20.0;
            let d2 = (s.t(x + h) - 2.0 * s.t(x) + s.t(x - h)) / (h * h);
            let d1 = (s.t(x + h) - s.t(x - h)) / (2.0 * h);
            let res = s.sigma / 2.0 * d2 + s.mu * d1 + 1.0 - s.lambda * s.t(x);
            assert!(res.abs() < 1e-4, "residual {res} at x={x} for {s:?}");
        }
    }

    #[test]
    fn satisfies_equation() {
        for &(mu, sigma, l, lambda) in &[
            (0.0, 1.0, 2.0, 0.0),
            (0.7, 0.3, 1.5, 0.0),
            (-0.7, 0.3, 1.5, 0.0),
            (0.7, 0.3, 1.5, 0.4),
            (-2.0, 0.5, 1.0, 3.0),
            (0.0, 1.0, 1.0, 1.0),
        ] {
            check_ode(&solve_1d(mu, sigma, l, lambda).unwrap());
        }
    }

    #[test]
    fn driftless_values() {
        let s = solve_1d(0.0, 1.0, 3.0, 0.0).unwrap();
        assert_eq!(s.t(1.5), 2.25);
        assert_eq!(s.x_opt, 1.5);
        let s = solve_1d(1e-9, 2.0, 1.0, 0.0).unwrap();
        assert!((s.x_opt - 0.5).abs() < 1e-9);
        assert!((s.t_opt() - 0.125).abs() < 1e-9);
    }

    #[test]
    fn optimum_is_stationary() {
        for lambda in [0.0, 0.5] {
            let s = solve_1d(1.2, 0.4, 2.0, lambda).unwrap();
            let h = 1e-5;
            assert!(s.t(s.x_opt) >= s.t(s.x_opt + h));
            assert!(s.t(s.x_opt) >= s.t(s.x_opt - h));
        }
    }

    #[test]
    fn strong_drift_does_not_overflow() {
        let s = solve_1d(50.0, 1e-3, 1.0, 0.0).unwrap();
        assert!(s.t(0.5).is_finite());
        assert!((s.t_opt() - 1.0 / 50.0).abs() < 1e-3);
        let s = solve_1d(-50.0, 1e-3, 1.0, 0.0).unwrap();
        assert!((s.t_opt() - 1.0 / 50.0).abs() < 1e-3);
    }

    #[test]
    fn unit_walk_has_unit_diffusion() {
        let (mu, sigma) = two_direction_walk(0.5, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!((mu, sigma), (0.0, 1.0));
    }
}
