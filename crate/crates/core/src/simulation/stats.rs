/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub value: f64,
    pub mc_se: f64,
}

impl MetricValue {
    /// Mean and s/√N of `values`. Empty input gives NaN for both.
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                value: f64::NAN,
                mc_se: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return Self {
                value: mean,
                mc_se: f64::NAN,
            };
        }
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        let sd = (ss / (n - 1) as f64).sqrt();
        Self {
            value: mean,
            mc_se: sd / (n as f64).sqrt(),
        }
    }

    /// Is `target` within `z` standard errors of the mean?
    pub fn within(&self, target: f64, z: f64) -> bool {
        (self.value - target).abs() <= z * self.mc_se
    }
}
