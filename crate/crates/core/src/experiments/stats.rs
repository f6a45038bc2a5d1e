//! Binomial proportions and medians.

use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Success proportion with its Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Proportion {
    pub successes: usize,
    pub trials: usize,
    pub rate: Option<f64>,
    pub lower: f64,
    pub upper: f64,
}

impl Proportion {
    pub fn wilson(successes: usize, trials: usize) -> Self {
        assert!(successes <= trials, "more successes than trials");
        if trials == 0 {
            return Proportion {
                successes,
                trials,
                rate: None,
                lower: 0.0,
                upper: 1.0,
            };
        }
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = Z_95 * Z_95;
        let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
        Proportion {
            successes,
            trials,
            rate: Some(p),
            lower: (centre - half).max(0.0),
            upper: (centre + half).min(1.0),
        }
    }
}

/// Median of the values, with `None` sorting above every number; `None` if that is the middle.
pub fn median_with_infinity(values: &[Option<f64>]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted: Vec<f64> = values.iter().map(|v| v.unwrap_or(f64::INFINITY)).collect();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let m = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    m.is_finite().then_some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 8 of 10: (0.4902, 0.9433)
        let w = Proportion::wilson(8, 10);
        assert!((w.lower - 0.4902).abs() < 1e-4 && (w.upper - 0.9433).abs() < 1e-4);
        let all = Proportion::wilson(5, 5);
        assert_eq!(all.upper, 1.0);
        assert!(all.lower > 0.5);
        assert_eq!(Proportion::wilson(0, 0).rate, None);
    }

    #[test]
    fn medians() {
        assert_eq!(median_with_infinity(&[Some(1.0), None, Some(3.0)]), Some(3.0));
        assert_eq!(median_with_infinity(&[Some(1.0), None, None]), None);
        assert_eq!(median_with_infinity(&[Some(1.0), Some(2.0)]), Some(1.5));
    }
}
