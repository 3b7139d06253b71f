//! Seeded Monte Carlo studies of the multivariate xi coefficient.
//!
//! Replicate `r` of a study with root seed `s` runs entirely on the
//! generator `child_rng(s, r)`: the data are generated first and the same
//! generator then drives tie-breaking. Replicates run in parallel and are
//! aggregated in replicate order, so reports are identical across thread
//! counts.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::keys::{paired_keys, KeyPrecision};
use crate::null_test::xi_test;
use crate::points::PointSet;
use crate::rank::PairedSample;
use crate::seed::{child_rng, split_seed, XiRng};
use crate::xi::xi_n;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimExample {
    /// Polar angles against Cartesian coordinates of points on the sphere.
    Sphere,
    /// As `Sphere`, with Gaussian noise on the Cartesian coordinates.
    NoisySphere,
    /// Four coordinates each independent of `(a, b)` but jointly determining it.
    JointDependence,
    /// Independent uniform scalars.
    NullContinuous,
    /// Caller-supplied statistic, see [`run_custom`].
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub example: SimExample,
    pub n: usize,
    pub replications: usize,
    /// Noise standard deviation; only used by `NoisySphere`.
    pub sigma: f64,
    pub seed: u64,
    #[serde(default)]
    pub precision: KeyPrecision,
}

impl SimSpec {
    pub fn new(example: SimExample, n: usize, replications: usize, seed: u64) -> Self {
        Self {
            example,
            n,
            replications,
            sigma: 0.0,
            seed,
            precision: KeyPrecision::default(),
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Params("replications must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::TooFewObservations {
                required: 2,
                actual: self.n,
            });
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::Params(format!(
                "sigma must be finite and >= 0, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// Summary of one statistic across replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub label: String,
    pub mean: f64,
    /// Sample standard deviation (divisor `R - 1`); 0 for a single replicate.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub mean_p_value: Option<f64>,
    #[serde(skip)]
    pub values: Vec<f64>,
    #[serde(skip)]
    pub p_values: Option<Vec<f64>>,
}

impl SimSummary {
    pub fn from_values(
        label: impl Into<String>,
        values: Vec<f64>,
        p_values: Option<Vec<f64>>,
    ) -> Self {
        let (mean, sd) = mean_sd(&values);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean_p_value = p_values.as_ref().map(|p| mean_sd(p).0);
        Self {
            label: label.into(),
            mean,
            sd,
            min,
            max,
            mean_p_value,
            values,
            p_values,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub spec: SimSpec,
    pub summaries: Vec<SimSummary>,
}

/// Two-pass mean and sample standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

/// `n` points with `X = (phi, theta)`, `phi ~ U[-pi, pi]`, `theta ~ U[0, 2 pi]`,
/// and `Y = (sin phi cos theta, sin phi sin theta, cos phi)`.
pub fn gen_sphere<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (PointSet<f64>, PointSet<f64>) {
    let mut x = Vec::with_capacity(2 * n);
    let mut y = Vec::with_capacity(3 * n);
    for _ in 0..n {
        let phi = rng.random_range(-PI..=PI);
        let theta = rng.random_range(0.0..=2.0 * PI);
        x.extend([phi, theta]);
        y.extend([phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos()]);
    }
    (
        PointSet::from_flat(n, 2, x).expect("finite by construction"),
        PointSet::from_flat(n, 3, y).expect("finite by construction"),
    )
}

/// [`gen_sphere`] followed by `N(0, sigma^2)` noise on each Cartesian
/// coordinate, drawn row by row after all sphere points. With `sigma == 0`
/// no noise is drawn and the output equals `gen_sphere` for the same
/// generator state.
pub fn gen_noisy_sphere<R: Rng + ?Sized>(
    n: usize,
    sigma: f64,
    rng: &mut R,
) -> Result<(PointSet<f64>, PointSet<f64>)> {
    let (x, y) = gen_sphere(n, rng);
    if sigma == 0.0 {
        return Ok((x, y));
    }
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::Params(e.to_string()))?;
    let noisy: Vec<f64> = y.rows().flatten().map(|&v| v + noise.sample(rng)).collect();
    Ok((x, PointSet::from_flat(n, 3, noisy)?))
}

/// Data of the joint-dependence example.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSample {
    /// Columns `(u, v, w, z)`.
    pub x: PointSet<f64>,
    /// Columns `(a, b)`.
    pub y: PointSet<f64>,
    /// The `u` column alone.
    pub u: PointSet<f64>,
}

/// `x - floor(x)`.
#[inline]
pub fn mod1(x: f64) -> f64 {
    x - x.floor()
}

/// `a, b, c ~ U[0, 1]` and
/// `u = a + b + c`, `v = a/2 + b/2 + c`, `w = 4a/3 + 2b/3 + c`,
/// `z = 2a/3 + b/3 + c`, all mod 1.
pub fn gen_joint<R: Rng + ?Sized>(n: usize, rng: &mut R) -> JointSample {
    let mut x = Vec::with_capacity(4 * n);
    let mut y = Vec::with_capacity(2 * n);
    let mut u = Vec::with_capacity(n);
    for _ in 0..n {
        let a: f64 = rng.random();
        let b: f64 = rng.random();
        let c: f64 = rng.random();
        let uu = mod1(a + b + c);
        x.extend([
            uu,
            mod1(a / 2.0 + b / 2.0 + c),
            mod1(4.0 * a / 3.0 + 2.0 * b / 3.0 + c),
            mod1(2.0 * a / 3.0 + b / 3.0 + c),
        ]);
        y.extend([a, b]);
        u.push(uu);
    }
    JointSample {
        x: PointSet::from_flat(n, 4, x).expect("finite by construction"),
        y: PointSet::from_flat(n, 2, y).expect("finite by construction"),
        u: PointSet::from_flat(n, 1, u).expect("finite by construction"),
    }
}

/// One replicate: `(statistic, optional p-value)` per reported column.
type Replicate = Vec<(f64, Option<f64>)>;

fn replicate(spec: &SimSpec, rng: &mut XiRng) -> Result<Replicate> {
    match spec.example {
        SimExample::Sphere | SimExample::NoisySphere => {
            let (x, y) = if spec.example == SimExample::Sphere {
                gen_sphere(spec.n, rng)
            } else {
                gen_noisy_sphere(spec.n, spec.sigma, rng)?
            };
            let xi = xi_n(&paired_keys(&x, &y, spec.precision)?, rng)?;
            Ok(vec![(xi.value, None)])
        }
        SimExample::JointDependence => {
            let data = gen_joint(spec.n, rng);
            let marginal = xi_test(&paired_keys(&data.u, &data.y, spec.precision)?, false, rng)?;
            let joint = xi_test(&paired_keys(&data.x, &data.y, spec.precision)?, false, rng)?;
            Ok(vec![
                (marginal.xi.value, Some(marginal.p_value)),
                (joint.xi.value, Some(joint.p_value)),
            ])
        }
        SimExample::NullContinuous => {
            let x: Vec<f64> = (0..spec.n).map(|_| rng.random()).collect();
            let y: Vec<f64> = (0..spec.n).map(|_| rng.random()).collect();
            let t = xi_test(&PairedSample::from_scalars(&x, &y)?, true, rng)?;
            Ok(vec![(t.xi.value, Some(t.p_value))])
        }
        SimExample::Custom => Err(Error::Params(
            "custom studies need a statistic; use run_custom".into(),
        )),
    }
}

fn labels(example: SimExample) -> Vec<&'static str> {
    match example {
        SimExample::Sphere | SimExample::NoisySphere => vec!["xi(X,Y)"],
        SimExample::JointDependence => vec!["xi(u,Y)", "xi(X,Y)"],
        SimExample::NullContinuous => vec!["xi(X,Y)"],
        SimExample::Custom => vec!["custom"],
    }
}

fn collect(spec: SimSpec, labels: Vec<String>, reps: Vec<Replicate>) -> SimReport {
    let summaries = labels
        .into_iter()
        .enumerate()
        .map(|(k, label)| {
            let values: Vec<f64> = reps.iter().map(|r| r[k].0).collect();
            let p_values: Option<Vec<f64>> = reps.iter().map(|r| r[k].1).collect();
            SimSummary::from_values(label, values, p_values)
        })
        .collect();
    SimReport { spec, summaries }
}

/// Runs one of the built-in studies.
pub fn run_sim(spec: &SimSpec) -> Result<SimReport> {
    spec.validate()?;
    let reps = (0..spec.replications)
        .into_par_iter()
        .map(|r| replicate(spec, &mut child_rng(spec.seed, r as u64)))
        .collect::<Result<Vec<_>>>()?;
    let labels = labels(spec.example).into_iter().map(String::from).collect();
    Ok(collect(*spec, labels, reps))
}

/// Runs a caller-defined statistic under the same seeding rules.
pub fn run_custom<F>(spec: &SimSpec, label: &str, statistic: F) -> Result<SimReport>
where
    F: Fn(&mut XiRng) -> Result<(f64, Option<f64>)> + Sync,
{
    spec.validate()?;
    let reps = (0..spec.replications)
        .into_par_iter()
        .map(|r| statistic(&mut child_rng(spec.seed, r as u64)).map(|v| vec![v]))
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(*spec, vec![label.to_string()], reps))
}

impl SimReport {
    /// One row per replicate: replicate index, its seed, then each statistic
    /// and, where present, its p-value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("replicate,seed");
        for s in &self.summaries {
            write!(out, ",{}", s.label).unwrap();
            if s.p_values.is_some() {
                write!(out, ",{}_p_value", s.label).unwrap();
            }
        }
        out.push('\n');
        for r in 0..self.spec.replications {
            write!(out, "{r},{}", split_seed(self.spec.seed, r as u64)).unwrap();
            for s in &self.summaries {
                write!(out, ",{}", s.values[r]).unwrap();
                if let Some(p) = &s.p_values {
                    write!(out, ",{}", p[r]).unwrap();
                }
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

/// Equal-width histogram over `[min, max]` of `values`; the last bin is
/// closed on the right so every value is counted.
pub fn histogram(values: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::Params("histogram needs at least one bin".into()));
    }
    if values.is_empty() {
        return Ok(Vec::new());
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo {
        (hi - lo) / bins as f64
    } else {
        1.0
    };
    let mut counts = vec![0usize; bins];
    for &v in values {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            lower: lo + k as f64 * width,
            upper: if k + 1 == bins {
                hi.max(lo + width)
            } else {
                lo + (k + 1) as f64 * width
            },
            count,
        })
        .collect())
}

pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_lower,bin_upper,count\n");
    for b in bins {
        writeln!(out, "{},{},{}", b.lower, b.upper, b.count).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn sphere_points_have_unit_norm() {
        let (x, y) = gen_sphere(1000, &mut rng_from_seed(1));
        assert_eq!((x.dim(), y.dim()), (2, 3));
        for row in y.rows() {
            let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        for row in x.rows() {
            assert!(row[0].abs() <= PI && (0.0..=2.0 * PI).contains(&row[1]));
        }
    }

    #[test]
    fn sphere_z_mean_is_zero() {
        let (_, y) = gen_sphere(1_000_000, &mut rng_from_seed(2));
        let mean = y.column(2).iter().sum::<f64>() / 1e6;
        assert!(mean.abs() < 0.005, "{mean}");
    }

    #[test]
    fn generators_are_reproducible() {
        assert_eq!(
            gen_sphere(50, &mut rng_from_seed(3)),
            gen_sphere(50, &mut rng_from_seed(3))
        );
        assert_eq!(
            gen_joint(50, &mut rng_from_seed(3)),
            gen_joint(50, &mut rng_from_seed(3))
        );
        assert_eq!(
            gen_noisy_sphere(50, 0.0, &mut rng_from_seed(3)).unwrap(),
            gen_sphere(50, &mut rng_from_seed(3))
        );
    }

    #[test]
    fn noise_has_requested_scale() {
        let sigma = 0.1;
        let n = 1_000_000;
        let (_, clean) = gen_sphere(n, &mut rng_from_seed(4));
        let (_, noisy) = gen_noisy_sphere(n, sigma, &mut rng_from_seed(4)).unwrap();
        let diff: Vec<f64> = noisy
            .column(2)
            .iter()
            .zip(clean.column(2))
            .map(|(a, b)| a - b)
            .collect();
        let (_, sd) = mean_sd(&diff);
        assert!((sd - sigma).abs() < 0.02 * sigma, "{sd}");
        let sq: f64 = noisy
            .rows()
            .map(|r| r.iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>()
            / n as f64;
        assert!((sq - (1.0 + 3.0 * sigma * sigma)).abs() < 0.005, "{sq}");
    }

    #[test]
    fn joint_identities_hold() {
        let d = gen_joint(10_000, &mut rng_from_seed(5));
        for i in 0..10_000 {
            let (x, y) = (d.x.row(i), d.y.row(i));
            let (a, b) = (y[0], y[1]);
            assert!(
                (mod1(x[0] - x[1]) - (a + b) / 2.0).abs() < 1e-12
                    || ((a + b) / 2.0 - 1.0).abs() < 1e-12
            );
            assert!((mod1(x[2] - x[3]) - (2.0 * a + b) / 3.0).abs() < 1e-12);
            assert_eq!(d.u.row(i)[0], x[0]);
        }
    }

    #[test]
    fn u_is_marginally_uniform() {
        let n = 100_000;
        let d = gen_joint(n, &mut rng_from_seed(6));
        let mut u = d.u.column(0);
        u.sort_by(f64::total_cmp);
        let ks = u
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                ((i + 1) as f64 / n as f64 - v)
                    .abs()
                    .max((v - i as f64 / n as f64).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "{ks}");
    }

    #[test]
    fn spec_validation() {
        assert!(SimSpec::new(SimExample::Sphere, 100, 0, 1)
            .validate()
            .is_err());
        assert!(SimSpec::new(SimExample::Sphere, 1, 1, 1)
            .validate()
            .is_err());
        assert!(SimSpec::new(SimExample::NoisySphere, 10, 1, 1)
            .with_sigma(-1.0)
            .validate()
            .is_err());
        assert!(run_sim(&SimSpec::new(SimExample::Custom, 10, 1, 1)).is_err());
    }

    #[test]
    fn summary_and_exports() {
        let spec = SimSpec::new(SimExample::JointDependence, 50, 7, 9);
        let rep = run_sim(&spec).unwrap();
        assert_eq!(rep, run_sim(&spec).unwrap());
        assert_eq!(rep.summaries.len(), 2);
        for s in &rep.summaries {
            assert!(s.sd >= 0.0 && s.min <= s.mean && s.mean <= s.max);
            assert!(s.mean_p_value.is_some());
        }
        let csv = rep.to_csv();
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.starts_with("replicate,seed,xi(u,Y),xi(u,Y)_p_value,xi(X,Y),xi(X,Y)_p_value\n"));
        let h = histogram(&rep.summaries[1].values, 4).unwrap();
        assert_eq!(h.iter().map(|b| b.count).sum::<usize>(), 7);
        assert_eq!(histogram_csv(&h).lines().count(), 5);
    }

    #[test]
    fn custom_statistic_runs() {
        let spec = SimSpec::new(SimExample::Custom, 10, 20, 3);
        let rep = run_custom(&spec, "uniform", |rng| Ok((rng.random::<f64>(), None))).unwrap();
        assert_eq!(rep.summaries[0].values.len(), 20);
        assert!(rep.summaries[0].mean_p_value.is_none());
    }

    #[test]
    fn mean_sd_conventions() {
        assert_eq!(mean_sd(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_sd(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
