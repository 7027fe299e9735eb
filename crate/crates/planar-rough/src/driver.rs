//! Smooth driving paths: piecewise-linear samples, trigonometric
//! polynomials, and finite Weierstrass sums (smooth, but with Hölder
//! constants that grow with the level count).

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

fn default_lacunarity() -> f64 {
    2.0
}

fn default_amplitude() -> f64 {
    1.0
}

fn default_base_freq() -> f64 {
    1.0
}

/// One trigonometric component:
/// `offset + Σ_k cos_k·cos((k+1)·w·t) + sin_k·sin((k+1)·w·t)`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrigComponent {
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
    #[serde(default = "default_base_freq")]
    pub base_freq: f64,
}

/// Declarative driver description, as it appears in config files.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DriverSpec {
    /// Uniform samples over the grid window, one row per component.
    PiecewiseLinear { samples: Vec<Vec<f64>> },
    Trig { components: Vec<TrigComponent> },
    Weierstrass {
        dimension: usize,
        levels: usize,
        exponent: f64,
        #[serde(default = "default_lacunarity")]
        lacunarity: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default)]
        seed: u64,
    },
}

impl DriverSpec {
    /// The driver of the closed-form fixtures: one component, X_t = t.
    pub fn unit_line() -> Self {
        DriverSpec::PiecewiseLinear { samples: vec![vec![0.0, 1.0]] }
    }

    pub fn dimension(&self) -> usize {
        match self {
            DriverSpec::PiecewiseLinear { samples } => samples.len(),
            DriverSpec::Trig { components } => components.len(),
            DriverSpec::Weierstrass { dimension, .. } => *dimension,
        }
    }

    pub fn is_smooth(&self) -> bool {
        !matches!(self, DriverSpec::PiecewiseLinear { .. })
    }

    /// Binds the spec to a time window, realizing seeded phases.
    pub fn realize(&self, t0: f64, t_end: f64) -> Result<Driver> {
        if !(t_end > t0) {
            return Err(Error::Schema("driver window must satisfy T > t0".into()));
        }
        let body = match self {
            DriverSpec::PiecewiseLinear { samples } => {
                if samples.is_empty() {
                    return Err(Error::Schema("piecewise-linear driver needs >= 1 component".into()));
                }
                let m = samples[0].len();
                if m < 2 {
                    return Err(Error::Schema("piecewise-linear driver needs >= 2 samples".into()));
                }
                if samples.iter().any(|s| s.len() != m) {
                    return Err(Error::Schema("piecewise-linear sample rows differ in length".into()));
                }
                DriverBody::PiecewiseLinear { samples: samples.clone() }
            }
            DriverSpec::Trig { components } => {
                if components.is_empty() {
                    return Err(Error::Schema("trig driver needs >= 1 component".into()));
                }
                DriverBody::Trig { components: components.clone() }
            }
            DriverSpec::Weierstrass { dimension, levels, exponent, lacunarity, amplitude, seed } => {
                if *dimension == 0 || *levels == 0 {
                    return Err(Error::Schema("weierstrass driver needs dimension, levels >= 1".into()));
                }
                if *lacunarity <= 1.0 {
                    return Err(Error::Schema("weierstrass lacunarity must exceed 1".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let phases = (0..*dimension)
                    .map(|_| (0..*levels).map(|_| rng.gen::<f64>() * TAU).collect())
                    .collect();
                DriverBody::Weierstrass {
                    levels: *levels,
                    exponent: *exponent,
                    lacunarity: *lacunarity,
                    amplitude: *amplitude,
                    base_freq: TAU / (t_end - t0),
                    phases,
                }
            }
        };
        Ok(Driver { spec: self.clone(), body, t0, t_end })
    }
}

#[derive(Debug, Clone)]
enum DriverBody {
    PiecewiseLinear { samples: Vec<Vec<f64>> },
    Trig { components: Vec<TrigComponent> },
    Weierstrass {
        levels: usize,
        exponent: f64,
        lacunarity: f64,
        amplitude: f64,
        base_freq: f64,
        phases: Vec<Vec<f64>>,
    },
}

/// A driver bound to a time window, evaluable (with derivative) anywhere in it.
#[derive(Debug, Clone)]
pub struct Driver {
    spec: DriverSpec,
    body: DriverBody,
    t0: f64,
    t_end: f64,
}

impl Driver {
    pub fn spec(&self) -> &DriverSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    pub fn is_smooth(&self) -> bool {
        self.spec.is_smooth()
    }

    pub fn value(&self, component: usize, t: f64) -> f64 {
        match &self.body {
            DriverBody::PiecewiseLinear { samples } => {
                let row = &samples[component];
                let m = row.len() - 1;
                let u = ((t - self.t0) / (self.t_end - self.t0) * m as f64).clamp(0.0, m as f64);
                let k = (u.floor() as usize).min(m - 1);
                let frac = u - k as f64;
                row[k] + frac * (row[k + 1] - row[k])
            }
            DriverBody::Trig { components } => {
                let c = &components[component];
                let mut v = c.offset;
                for (k, &a) in c.cos.iter().enumerate() {
                    v += a * ((k + 1) as f64 * c.base_freq * t).cos();
                }
                for (k, &a) in c.sin.iter().enumerate() {
                    v += a * ((k + 1) as f64 * c.base_freq * t).sin();
                }
                v
            }
            DriverBody::Weierstrass { levels, exponent, lacunarity, amplitude, base_freq, phases } => {
                let mut v = 0.0;
                let mut freq = *base_freq;
                let mut amp = *amplitude;
                for k in 0..*levels {
                    v += amp * (freq * (t - self.t0) + phases[component][k]).sin();
                    freq *= lacunarity;
                    amp *= lacunarity.powf(-exponent);
                }
                v
            }
        }
    }

    pub fn derivative(&self, component: usize, t: f64) -> f64 {
        match &self.body {
            DriverBody::PiecewiseLinear { samples } => {
                let row = &samples[component];
                let m = row.len() - 1;
                let seg = (self.t_end - self.t0) / m as f64;
                let u = ((t - self.t0) / seg).clamp(0.0, m as f64);
                let k = (u.floor() as usize).min(m - 1);
                (row[k + 1] - row[k]) / seg
            }
            DriverBody::Trig { components } => {
                let c = &components[component];
                let mut v = 0.0;
                for (k, &a) in c.cos.iter().enumerate() {
                    let w = (k + 1) as f64 * c.base_freq;
                    v -= a * w * (w * t).sin();
                }
                for (k, &a) in c.sin.iter().enumerate() {
                    let w = (k + 1) as f64 * c.base_freq;
                    v += a * w * (w * t).cos();
                }
                v
            }
            DriverBody::Weierstrass { levels, exponent, lacunarity, amplitude, base_freq, phases } => {
                let mut v = 0.0;
                let mut freq = *base_freq;
                let mut amp = *amplitude;
                for k in 0..*levels {
                    v += amp * freq * (freq * (t - self.t0) + phases[component][k]).cos();
                    freq *= lacunarity;
                    amp *= lacunarity.powf(-exponent);
                }
                v
            }
        }
    }

    /// Interior sample-kink times inside `(s, t)`, empty for smooth kinds.
    pub fn kinks_in(&self, s: f64, t: f64) -> Vec<f64> {
        match &self.body {
            DriverBody::PiecewiseLinear { samples } => {
                let m = samples[0].len() - 1;
                let seg = (self.t_end - self.t0) / m as f64;
                (1..m)
                    .map(|k| self.t0 + k as f64 * seg)
                    .filter(|&tk| tk > s + 1e-14 && tk < t - 1e-14)
                    .collect()
            }
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_line_values() {
        let d = DriverSpec::unit_line().realize(0.0, 1.0).unwrap();
        assert_eq!(d.value(0, 0.25), 0.25);
        assert_eq!(d.derivative(0, 0.7), 1.0);
        assert!(d.kinks_in(0.0, 1.0).is_empty());
    }

    #[test]
    fn trig_derivative_matches_differences() {
        let spec = DriverSpec::Trig {
            components: vec![TrigComponent {
                offset: 0.3,
                cos: vec![0.5, -0.2],
                sin: vec![0.8],
                base_freq: 1.7,
            }],
        };
        let d = spec.realize(0.0, 2.0).unwrap();
        let eps = 1e-6;
        for t in [0.1, 0.9, 1.7] {
            let fd = (d.value(0, t + eps) - d.value(0, t - eps)) / (2.0 * eps);
            assert!((fd - d.derivative(0, t)).abs() < 1e-8);
        }
    }

    #[test]
    fn weierstrass_is_deterministic_in_seed() {
        let spec = DriverSpec::Weierstrass {
            dimension: 2,
            levels: 8,
            exponent: 1.0 / 3.0,
            lacunarity: 2.0,
            amplitude: 1.0,
            seed: 7,
        };
        let d1 = spec.realize(0.0, 1.0).unwrap();
        let d2 = spec.realize(0.0, 1.0).unwrap();
        assert_eq!(d1.value(1, 0.37), d2.value(1, 0.37));
    }
}
