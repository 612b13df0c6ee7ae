//! Estimators, confidence intervals and goodness-of-fit statistics.

/// 97.5% standard normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// An empirical estimate with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalMetrics {
    pub estimate: f64,
    /// 95% half-width (Wilson for probabilities, delta method for products).
    pub ci_halfwidth: f64,
    /// Standard error of `estimate`.
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl EmpiricalMetrics {
    pub fn from_counts(successes: u64, trials: u64, seed: u64) -> Self {
        let n = trials.max(1) as f64;
        let p = successes as f64 / n;
        EmpiricalMetrics {
            estimate: p,
            ci_halfwidth: wilson_halfwidth(successes, trials),
            std_error: (p * (1.0 - p) / n).sqrt(),
            trials,
            seed,
        }
    }

    /// `scale · a · b` for two independent estimates.
    pub fn product(scale: f64, a: &EmpiricalMetrics, b: &EmpiricalMetrics) -> Self {
        let se = scale * ((b.estimate * a.std_error).powi(2) + (a.estimate * b.std_error).powi(2)).sqrt();
        EmpiricalMetrics {
            estimate: scale * a.estimate * b.estimate,
            ci_halfwidth: Z95 * se,
            std_error: se,
            trials: a.trials.min(b.trials),
            seed: a.seed,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        EmpiricalMetrics {
            estimate: self.estimate * factor,
            ci_halfwidth: self.ci_halfwidth * factor.abs(),
            std_error: self.std_error * factor.abs(),
            ..*self
        }
    }
}

/// Half-width of the 95% Wilson score interval.
pub fn wilson_halfwidth(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.5;
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    Z95 / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// Two-sided one-sample Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Asymptotic KS critical value at significance `alpha` (0.01 or 0.05).
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    let c = if alpha <= 0.01 { 1.628 } else { 1.358 };
    c / (n as f64).sqrt()
}
