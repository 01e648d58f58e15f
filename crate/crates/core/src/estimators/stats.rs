use serde::{Deserialize, Serialize};

/// Monte Carlo estimate with its standard error (`sd / √M`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEstimate {
    pub value: f64,
    pub stderr: f64,
    pub replicates: u64,
}

impl PointEstimate {
    /// An exact value.
    pub fn exact(value: f64) -> Self {
        PointEstimate {
            value,
            stderr: 0.0,
            replicates: 1,
        }
    }

    /// Sample mean and `s / √M` with the unbiased sample variance `s²`,
    /// accumulated in slice order.
    pub fn from_samples(xs: &[f64]) -> Self {
        let m = xs.len();
        assert!(m > 0, "no samples");
        let mean = xs.iter().sum::<f64>() / m as f64;
        let stderr = if m > 1 {
            let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
            (ss / (m - 1) as f64 / m as f64).sqrt()
        } else {
            0.0
        };
        PointEstimate {
            value: mean,
            stderr,
            replicates: m as u64,
        }
    }

    /// Binomial proportion `p̂ = hits / M` with stderr `√(p̂(1 − p̂)/M)`.
    pub fn binomial(hits: u64, m: u64) -> Self {
        assert!(m > 0, "no samples");
        let p = hits as f64 / m as f64;
        PointEstimate {
            value: p,
            stderr: (p * (1.0 - p) / m as f64).sqrt(),
            replicates: m,
        }
    }

    /// The estimate of `k · θ`.
    pub fn scaled(self, k: f64) -> Self {
        PointEstimate {
            value: self.value * k,
            stderr: self.stderr * k.abs(),
            replicates: self.replicates,
        }
    }

    /// `√(se₁² + se₂²)`, the standard error of a difference of independent
    /// estimates.
    pub fn combined_stderr(&self, other: &PointEstimate) -> f64 {
        self.stderr.hypot(other.stderr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_statistics() {
        let e = PointEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.value, 2.5);
        // s² = 5/3
        assert!((e.stderr - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(PointEstimate::from_samples(&[7.0]).stderr, 0.0);
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(PointEstimate::binomial(0, 10), PointEstimate { value: 0.0, stderr: 0.0, replicates: 10 });
        let e = PointEstimate::binomial(25, 100).scaled(-2.0);
        assert_eq!(e.value, -0.5);
        assert!((e.stderr - 2.0 * (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
    }
}
