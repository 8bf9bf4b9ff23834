use statrs::function::beta::beta_reg;

use super::MonteCarloError;

/// Two-sided Clopper-Pearson interval for `errors` successes in `trials`.
pub fn binomial_ci(errors: u64, trials: u64, confidence: f64) -> Result<(f64, f64), MonteCarloError> {
    if trials == 0 || errors > trials {
        return Err(MonteCarloError::Counts { errors, trials });
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(MonteCarloError::Confidence(confidence));
    }
    let tail = (1.0 - confidence) / 2.0;
    let (k, n) = (errors as f64, trials as f64);
    let low = if errors == 0 {
        0.0
    } else {
        beta_quantile(k, n - k + 1.0, tail)
    };
    let high = if errors == trials {
        1.0
    } else {
        beta_quantile(k + 1.0, n - k, 1.0 - tail)
    };
    Ok((low, high))
}

/// Inverse of the regularized incomplete beta function by bisection.
fn beta_quantile(a: f64, b: f64, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// True when the two intervals share no point.
pub fn disjoint(a: (f64, f64), b: (f64, f64)) -> bool {
    a.1 < b.0 || b.1 < a.0
}
