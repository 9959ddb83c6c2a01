use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::Dataset;
use crate::error::{Error, Result};

/// Synthetic dataset families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `k` isotropic Gaussian clusters with adjacent centers `sep * sigma` apart.
    Blobs,
    /// Three dense clusters enclosed by a sparse ring.
    RingIsland,
    /// Four Gaussian clusters beside a long curved path-shaped cluster.
    PathChain,
    /// Two Gaussian clusters `10 sigma` apart joined by a sparse line of bridge
    /// points across the middle half of the gap.
    WeakBridge,
    /// `Blobs` plus uniformly scattered noise labeled `-1`.
    NoisyBlobs,
}

impl Preset {
    pub const ALL: [Preset; 5] =
        [Preset::Blobs, Preset::RingIsland, Preset::PathChain, Preset::WeakBridge, Preset::NoisyBlobs];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Blobs => "blobs",
            Preset::RingIsland => "ring_island",
            Preset::PathChain => "path_chain",
            Preset::WeakBridge => "weak_bridge",
            Preset::NoisyBlobs => "noisy_blobs",
        }
    }

    fn min_points(self, p: &SynthParams) -> usize {
        match self {
            Preset::Blobs => 2 * p.k.max(1),
            Preset::NoisyBlobs => 2 * p.k.max(1) + 1,
            Preset::RingIsland => 8,
            Preset::PathChain => 10,
            Preset::WeakBridge => 6,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// Knobs shared by the presets; each preset reads the ones it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    /// Cluster count for `blobs` and `noisy_blobs`.
    pub k: usize,
    /// Spread of each Gaussian cluster.
    pub sigma: f64,
    /// Distance between adjacent blob centers in units of `sigma`.
    pub sep: f64,
    /// Fraction of points that are noise (`noisy_blobs`).
    pub noise_frac: f64,
    /// Fraction of points on the bridge (`weak_bridge`).
    pub bridge_frac: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self { k: 3, sigma: 1.0, sep: 10.0, noise_frac: 0.05, bridge_frac: 0.01 }
    }
}

/// What a generated point was drawn as.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Core,
    Bridge,
    Noise,
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub data: Dataset,
    pub roles: Vec<Role>,
}

impl Synthetic {
    pub fn indices_with(&self, role: Role) -> Vec<usize> {
        self.roles.iter().enumerate().filter(|(_, &r)| r == role).map(|(i, _)| i).collect()
    }
}

struct Builder {
    rows: Vec<f64>,
    truth: Vec<i64>,
    roles: Vec<Role>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Self { rows: Vec::with_capacity(2 * n), truth: Vec::with_capacity(n), roles: Vec::with_capacity(n) }
    }

    fn push(&mut self, x: f64, y: f64, label: i64, role: Role) {
        self.rows.extend_from_slice(&[x, y]);
        self.truth.push(label);
        self.roles.push(role);
    }

    fn finish(self) -> Result<Synthetic> {
        let data = Dataset::new(self.rows, 2, Some(self.truth))?;
        Ok(Synthetic { data, roles: self.roles })
    }
}

/// Splits `n` into `parts` near-equal counts, larger ones first.
fn split_even(n: usize, parts: usize) -> Vec<usize> {
    (0..parts).map(|i| n / parts + usize::from(i < n % parts)).collect()
}

fn gaussian(b: &mut Builder, rng: &mut ChaCha8Rng, count: usize, cx: f64, cy: f64, sigma: f64, label: i64) {
    let normal = Normal::new(0.0, sigma).expect("sigma is positive");
    for _ in 0..count {
        let x = cx + normal.sample(rng);
        let y = cy + normal.sample(rng);
        b.push(x, y, label, Role::Core);
    }
}

fn blob_centers(k: usize, spacing: f64) -> Vec<(f64, f64)> {
    if k == 1 {
        return vec![(0.0, 0.0)];
    }
    let radius = spacing / (2.0 * (PI / k as f64).sin());
    (0..k)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / k as f64;
            (radius * a.cos(), radius * a.sin())
        })
        .collect()
}

/// Generates a labeled 2-D dataset. Output depends only on the arguments.
pub fn gen_synthetic(preset: Preset, n: usize, seed: u64, params: &SynthParams) -> Result<Synthetic> {
    if !(params.sigma > 0.0 && params.sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {}", params.sigma)));
    }
    if matches!(preset, Preset::Blobs | Preset::NoisyBlobs) && params.k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let needed = preset.min_points(params);
    if n < needed {
        return Err(Error::TooFewPoints { needed, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new(n);
    let sigma = params.sigma;

    match preset {
        Preset::Blobs => {
            let centers = blob_centers(params.k, params.sep * sigma);
            for (label, (&(cx, cy), count)) in centers.iter().zip(split_even(n, params.k)).enumerate() {
                gaussian(&mut b, &mut rng, count, cx, cy, sigma, label as i64);
            }
        }
        Preset::NoisyBlobs => {
            let frac = params.noise_frac.clamp(0.0, 1.0);
            let noise = ((n as f64 * frac).round() as usize).clamp(1, n - 2 * params.k);
            let centers = blob_centers(params.k, params.sep * sigma);
            for (label, (&(cx, cy), count)) in centers.iter().zip(split_even(n - noise, params.k)).enumerate() {
                gaussian(&mut b, &mut rng, count, cx, cy, sigma, label as i64);
            }
            let reach = centers.iter().map(|(x, y)| x.hypot(*y)).fold(0.0, f64::max) + 4.0 * sigma;
            for _ in 0..noise {
                let x = rng.gen_range(-reach..reach);
                let y = rng.gen_range(-reach..reach);
                b.push(x, y, -1, Role::Noise);
            }
        }
        Preset::RingIsland => {
            // islands at radius 3 sigma, ring at radius 10 sigma
            let ring = n / 2;
            let islands = split_even(n - ring, 3);
            for (label, &count) in islands.iter().enumerate() {
                let a = 2.0 * PI * label as f64 / 3.0 + PI / 2.0;
                let (cx, cy) = (3.0 * sigma * a.cos(), 3.0 * sigma * a.sin());
                gaussian(&mut b, &mut rng, count, cx, cy, 0.4 * sigma, label as i64);
            }
            let width = Normal::new(0.0, 0.25 * sigma).expect("positive width");
            for _ in 0..ring {
                let a = rng.gen_range(0.0..2.0 * PI);
                let r = 10.0 * sigma + width.sample(&mut rng);
                b.push(r * a.cos(), r * a.sin(), 3, Role::Core);
            }
        }
        Preset::PathChain => {
            // a sine-shaped path along y = 8 sigma above four blobs on a row
            let path = n / 3;
            let blobs = split_even(n - path, 4);
            for (i, &count) in blobs.iter().enumerate() {
                let cx = (i as f64 - 1.5) * 6.0 * sigma;
                gaussian(&mut b, &mut rng, count, cx, 0.0, 0.7 * sigma, i as i64);
            }
            let jitter = Normal::new(0.0, 0.15 * sigma).expect("positive jitter");
            for _ in 0..path {
                let t = rng.gen_range(-1.0..1.0);
                let x = t * 12.0 * sigma;
                let y = 8.0 * sigma + 2.0 * sigma * (t * 2.0 * PI).sin();
                b.push(x + jitter.sample(&mut rng), y + jitter.sample(&mut rng), 4, Role::Core);
            }
        }
        Preset::WeakBridge => {
            let bridge = ((n as f64 * params.bridge_frac.clamp(0.0, 0.5)).round() as usize).clamp(2, n - 4);
            let half = 5.0 * sigma;
            let counts = split_even(n - bridge, 2);
            gaussian(&mut b, &mut rng, counts[0], -half, 0.0, sigma, 0);
            gaussian(&mut b, &mut rng, counts[1], half, 0.0, sigma, 1);
            let jitter = Normal::new(0.0, 0.1 * sigma).expect("positive jitter");
            // evenly spaced over the middle half of the gap
            for i in 0..bridge {
                let t = (i as f64 + 0.5) / bridge as f64;
                let x = -2.5 * sigma + 5.0 * sigma * t;
                let label = i64::from(x > 0.0);
                b.push(x, jitter.sample(&mut rng), label, Role::Bridge);
            }
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SynthParams {
        SynthParams::default()
    }

    #[test]
    fn blobs_contract() {
        let s = gen_synthetic(Preset::Blobs, 60, 1, &params()).unwrap();
        let t = s.data.truth().unwrap();
        assert_eq!(s.data.n(), 60);
        for c in 0..3 {
            assert_eq!(t.iter().filter(|&&l| l == c).count(), 20);
        }
    }

    #[test]
    fn deterministic() {
        for preset in Preset::ALL {
            let a = gen_synthetic(preset, 200, 7, &params()).unwrap();
            let b = gen_synthetic(preset, 200, 7, &params()).unwrap();
            assert_eq!(a.data, b.data);
            assert_eq!(a.roles, b.roles);
            let c = gen_synthetic(preset, 200, 8, &params()).unwrap();
            assert_ne!(a.data, c.data);
        }
    }

    #[test]
    fn weak_bridge_has_two_classes_and_bridge_tags() {
        let s = gen_synthetic(Preset::WeakBridge, 200, 7, &params()).unwrap();
        let mut classes = s.data.truth().unwrap().to_vec();
        classes.sort_unstable();
        classes.dedup();
        assert_eq!(classes, vec![0, 1]);
        assert_eq!(s.indices_with(Role::Bridge).len(), 2);
        let s = gen_synthetic(Preset::WeakBridge, 1000, 7, &params()).unwrap();
        assert_eq!(s.indices_with(Role::Bridge).len(), 10);
    }

    #[test]
    fn noisy_blobs_marks_noise() {
        let s = gen_synthetic(Preset::NoisyBlobs, 300, 3, &params()).unwrap();
        let t = s.data.truth().unwrap();
        let noise = s.indices_with(Role::Noise);
        assert_eq!(noise.len(), 15);
        assert!(noise.iter().all(|&i| t[i] == -1));
    }

    #[test]
    fn errors() {
        assert!(matches!("spiral".parse::<Preset>(), Err(Error::UnknownPreset(_))));
        assert!(matches!(
            gen_synthetic(Preset::Blobs, 5, 1, &params()),
            Err(Error::TooFewPoints { needed: 6, got: 5 })
        ));
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
    }
}
