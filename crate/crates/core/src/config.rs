//! Tunable constants and per-instance derived scales.

use core::fmt;

/// Algorithm constants. Defaults match the analysis the pipelines are built
/// around; `threshold_override` pins the near/far boundary directly, which is
/// useful for stress-testing classification on small graphs.
#[derive(Clone, Debug)]
pub struct AlgoConfig {
    /// RNG seed for landmark and center sampling.
    pub seed: u64,
    /// Sampling constant: vertex joins level-k sets with probability
    /// `min(1, c_sample * 2^-k * sqrt(sigma / n))`.
    pub c_sample: f64,
    /// Near/far boundary is `near_multiplier * x` where
    /// `x = sqrt(n / sigma) * ceil(log2 n)`.
    pub near_multiplier: f64,
    /// Span constant: auxiliary graphs key the first
    /// `aux_span_constant * 2^k * x` edges of a level-k path.
    pub aux_span_constant: f64,
    /// When set, replaces both the near threshold and the bucket base scale.
    pub threshold_override: Option<f64>,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig {
            seed: 1,
            c_sample: 4.0,
            near_multiplier: 2.0,
            aux_span_constant: 2.0,
            threshold_override: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    BadConstant { what: &'static str, min: f64, got: f64 },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::BadConstant { what, min, got } => {
                write!(f, "{what} must be >= {min}, got {got}")
            }
        }
    }
}

impl core::error::Error for ConfigError {}

/// `ceil(log2 x)` clamped to at least 1.
pub fn log2_ceil(x: f64) -> f64 {
    if x <= 2.0 {
        1.0
    } else {
        libm::ceil(libm::log2(x))
    }
}

/// Per-instance derived scales.
#[derive(Clone, Copy, Debug)]
pub struct Scales {
    /// Suffix-hitting scale `x`: a shortest-path suffix of length `2^k * x`
    /// contains a level-k sampled vertex with high probability.
    pub x: f64,
    /// Path edges closer than this to the target are "near".
    pub near_threshold: f64,
    /// Largest sampling level, `max(1, ceil(log2 sqrt(n * sigma)))`.
    pub k_max: u32,
}

impl Scales {
    /// Radius of the landmark guard for bucket `k`: `2^k * x`.
    pub fn guard_radius(&self, k: u32) -> f64 {
        (1u64 << k) as f64 * self.x
    }
}

impl AlgoConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.c_sample < 1.0 {
            return Err(ConfigError::BadConstant {
                what: "c_sample",
                min: 1.0,
                got: self.c_sample,
            });
        }
        if self.near_multiplier < 1.0 {
            return Err(ConfigError::BadConstant {
                what: "near_multiplier",
                min: 1.0,
                got: self.near_multiplier,
            });
        }
        if self.aux_span_constant < 2.0 {
            return Err(ConfigError::BadConstant {
                what: "aux_span_constant",
                min: 2.0,
                got: self.aux_span_constant,
            });
        }
        if let Some(o) = self.threshold_override {
            if o < 1.0 {
                return Err(ConfigError::BadConstant {
                    what: "threshold_override",
                    min: 1.0,
                    got: o,
                });
            }
        }
        Ok(())
    }

    pub fn scales(&self, n: usize, sigma: usize) -> Scales {
        debug_assert!(sigma >= 1 && sigma <= n);
        let (x, near_threshold) = match self.threshold_override {
            Some(o) => (o, o),
            None => {
                let x = libm::sqrt(n as f64 / sigma as f64) * log2_ceil(n as f64);
                (x, self.near_multiplier * x)
            }
        };
        let k_max = {
            let v = log2_ceil(libm::sqrt(n as f64 * sigma as f64));
            if v < 1.0 {
                1
            } else {
                v as u32
            }
        };
        Scales {
            x,
            near_threshold,
            k_max,
        }
    }

    /// Sampling probability for level `k`, clamped to 1.
    pub fn sample_prob(&self, n: usize, sigma: usize, k: u32) -> f64 {
        let p = self.c_sample / (1u64 << k) as f64 * libm::sqrt(sigma as f64 / n as f64);
        if p > 1.0 {
            1.0
        } else {
            p
        }
    }

    /// Keyed-edge budget for a level-k path span.
    pub fn span(&self, scales: &Scales, k: u32) -> usize {
        libm::ceil(self.aux_span_constant * (1u64 << k) as f64 * scales.x) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        AlgoConfig::default().validate().unwrap();
    }

    #[test]
    fn log_convention() {
        assert_eq!(log2_ceil(1.0), 1.0);
        assert_eq!(log2_ceil(2.0), 1.0);
        assert_eq!(log2_ceil(5.0), 3.0);
        assert_eq!(log2_ceil(1024.0), 10.0);
    }

    #[test]
    fn clamp_saturates_small_instances() {
        let cfg = AlgoConfig::default();
        // n=4, sigma=1, k=0: min(1, 4 * 0.5) = 1.
        assert_eq!(cfg.sample_prob(4, 1, 0), 1.0);
        // n=10^6, sigma=1, k=0: 4 / 1000.
        let p = cfg.sample_prob(1_000_000, 1, 0);
        assert!((p - 0.004).abs() < 1e-12);
    }

    #[test]
    fn override_pins_boundary() {
        let cfg = AlgoConfig {
            threshold_override: Some(1.0),
            ..AlgoConfig::default()
        };
        let s = cfg.scales(10, 1);
        assert_eq!(s.x, 1.0);
        assert_eq!(s.near_threshold, 1.0);
    }

    #[test]
    fn rejects_bad_constants() {
        let cfg = AlgoConfig {
            aux_span_constant: 1.0,
            ..AlgoConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
