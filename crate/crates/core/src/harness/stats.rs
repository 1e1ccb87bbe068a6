use serde::Serialize;

/// Mean and standard error of a sample, summed in the given order so results
/// are bit-identical however the sample was produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub count: u64,
    pub mean: f64,
    pub std_err: f64,
}

impl MeanEstimate {
    pub fn ci95(&self) -> f64 {
        1.96 * self.std_err
    }

    /// Sample mean with the unbiased variance estimator.
    pub fn from_samples(samples: &[f64]) -> Self {
        let count = samples.len() as u64;
        if count == 0 {
            return Self {
                count,
                mean: f64::NAN,
                std_err: f64::NAN,
            };
        }
        let c = count as f64;
        let mean = samples.iter().sum::<f64>() / c;
        let var = if count > 1 {
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (c - 1.0)
        } else {
            0.0
        };
        Self {
            count,
            mean,
            std_err: (var / c).sqrt(),
        }
    }

    /// Success frequency with the binomial standard error `sqrt(p(1-p)/n)`.
    pub fn from_successes(successes: u64, trials: u64) -> Self {
        let n = trials as f64;
        let p = successes as f64 / n;
        Self {
            count: trials,
            mean: p,
            std_err: (p * (1.0 - p) / n).sqrt(),
        }
    }

    /// Number of standard errors separating the estimate from `value`.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = self.mean - value;
        if self.std_err == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / self.std_err
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_estimate() {
        let e = MeanEstimate::from_successes(25, 100);
        assert_eq!(e.mean, 0.25);
        assert!((e.std_err - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert!((e.ci95() - 1.96 * e.std_err).abs() < 1e-15);
    }

    #[test]
    fn sample_estimate() {
        let e = MeanEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        assert!((e.std_err - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(MeanEstimate::from_samples(&[2.0]).std_err, 0.0);
        assert_eq!(MeanEstimate::from_successes(10, 10).z_score(1.0), 0.0);
    }
}
