//! Synthetic instance families.
//!
//! Generated error probabilities are rounded to the 12 significant digits the
//! instance file format carries, so generated instances survive a file round
//! trip unchanged.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::round_sig;
use crate::instance::Instance;

/// Where the error matrix of a multiples instance comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaSource {
    Zero,
    Constant(f64),
    /// Explicit `n × m` matrix, e.g. read from a file.
    Matrix(Vec<Vec<f64>>),
    /// Independent `Uniform(0, max)` entries.
    Uniform { max: f64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorModel {
    Zero,
    /// `gamma0` within `width` of a circle's perimeter, zero elsewhere.
    BoundaryBand { width: f64, gamma0: f64 },
    /// `0.5 · max(0, 1 − d/scale)` for distance `d` to the perimeter.
    DistanceProportional { scale: f64 },
}

impl ErrorModel {
    fn validate(&self) -> Result<()> {
        match *self {
            ErrorModel::Zero => Ok(()),
            ErrorModel::BoundaryBand { width, gamma0 } => {
                if width.is_nan() || width <= 0.0 {
                    return Err(Error::invalid(format!("band width {width} must be positive")));
                }
                if !(0.0..=1.0).contains(&gamma0) {
                    return Err(Error::invalid(format!("band error {gamma0} outside [0, 1]")));
                }
                Ok(())
            }
            ErrorModel::DistanceProportional { scale } => {
                if scale.is_nan() || scale <= 0.0 {
                    return Err(Error::invalid(format!("decay scale {scale} must be positive")));
                }
                Ok(())
            }
        }
    }

    /// Error for a point at distance `d` from the perimeter.
    pub fn gamma_at(&self, d: f64) -> f64 {
        match *self {
            ErrorModel::Zero => 0.0,
            ErrorModel::BoundaryBand { width, gamma0 } => {
                if d <= width {
                    gamma0
                } else {
                    0.0
                }
            }
            ErrorModel::DistanceProportional { scale } => 0.5 * (1.0 - d / scale).max(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Multiples { ks: Vec<u64>, x_max: u64, gamma: GammaSource },
    Circles { concepts: usize, examples: usize, error: ErrorModel, seed: u64 },
    Random { concepts: usize, examples: usize, gamma_max: f64, density: f64, seed: u64 },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Instance> {
        match self {
            GeneratorSpec::Multiples { ks, x_max, gamma } => gen_multiples(ks, *x_max, gamma.clone()),
            GeneratorSpec::Circles { concepts, examples, error, seed } => {
                gen_circles(*concepts, *examples, *error, *seed)
            }
            GeneratorSpec::Random { concepts, examples, gamma_max, density, seed } => {
                gen_random(*concepts, *examples, *gamma_max, *density, *seed)
            }
        }
    }
}

/// Concepts `c_k(x) = [k divides x]` over examples `1..=x_max`; the target is
/// the first concept.
pub fn gen_multiples(ks: &[u64], x_max: u64, gamma: GammaSource) -> Result<Instance> {
    if ks.is_empty() {
        return Err(Error::invalid("at least one divisor is required"));
    }
    if ks.iter().any(|&k| k < 2) {
        return Err(Error::invalid("divisors must be at least 2"));
    }
    let mut sorted = ks.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ks.len() {
        return Err(Error::invalid("divisors must be distinct"));
    }
    let max_k = *sorted.last().expect("nonempty");
    if x_max < max_k {
        return Err(Error::invalid(format!("x_max = {x_max} is below the largest divisor {max_k}")));
    }
    let n = ks.len();
    let m = x_max as usize;
    let examples: Vec<String> = (1..=x_max).map(|x| x.to_string()).collect();
    let concepts: Vec<String> = ks.iter().map(|k| format!("c{k}")).collect();
    let consistency: Vec<Vec<bool>> = ks
        .iter()
        .map(|&k| (1..=x_max).map(|x| x % k == 0).collect())
        .collect();
    let gamma = match gamma {
        GammaSource::Zero => vec![vec![0.0; m]; n],
        GammaSource::Constant(g) => {
            if !(0.0..=1.0).contains(&g) {
                return Err(Error::invalid(format!("constant error {g} outside [0, 1]")));
            }
            vec![vec![round_sig(g); m]; n]
        }
        GammaSource::Matrix(rows) => {
            if rows.len() != n {
                return Err(Error::format(
                    "gamma",
                    format!("expected {n} rows, found {}", rows.len()),
                ));
            }
            if let Some((c, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
                return Err(Error::format(
                    format!("gamma row {c}"),
                    format!("expected {m} columns, found {}", row.len()),
                ));
            }
            rows
        }
        GammaSource::Uniform { max, seed } => {
            if !(0.0..=1.0).contains(&max) {
                return Err(Error::invalid(format!("error bound {max} outside [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| (0..m).map(|_| round_sig(rng.random::<f64>() * max)).collect())
                .collect()
        }
    };
    Instance::new(examples, concepts, consistency, gamma, 0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

impl Circle {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.center_distance(x, y) <= self.r
    }

    pub fn perimeter_distance(&self, x: f64, y: f64) -> f64 {
        (self.center_distance(x, y) - self.r).abs()
    }

    fn center_distance(&self, x: f64, y: f64) -> f64 {
        (x - self.cx).hypot(y - self.cy)
    }
}

/// Sampled geometry behind a circles instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclesGeometry {
    pub circles: Vec<Circle>,
    pub points: Vec<(f64, f64)>,
}

pub fn gen_circles(concepts: usize, examples: usize, error: ErrorModel, seed: u64) -> Result<Instance> {
    gen_circles_with_geometry(concepts, examples, error, seed).map(|(inst, _)| inst)
}

/// Circles with centers in the unit square and radii in `[0.1, 0.4]`, and
/// uniform points in the unit square. The target is the first circle.
pub fn gen_circles_with_geometry(
    concepts: usize,
    examples: usize,
    error: ErrorModel,
    seed: u64,
) -> Result<(Instance, CirclesGeometry)> {
    if concepts == 0 || examples == 0 {
        return Err(Error::invalid("circle and point counts must be at least 1"));
    }
    error.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let circles: Vec<Circle> = (0..concepts)
        .map(|_| Circle {
            cx: rng.random::<f64>(),
            cy: rng.random::<f64>(),
            r: 0.1 + 0.3 * rng.random::<f64>(),
        })
        .collect();
    let points: Vec<(f64, f64)> = (0..examples)
        .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
        .collect();
    let consistency = circles
        .iter()
        .map(|c| points.iter().map(|&(x, y)| c.contains(x, y)).collect())
        .collect();
    let gamma = circles
        .iter()
        .map(|c| {
            points
                .iter()
                .map(|&(x, y)| round_sig(error.gamma_at(c.perimeter_distance(x, y))))
                .collect()
        })
        .collect();
    let inst = Instance::new(
        (0..examples).map(|i| format!("p{i}")).collect(),
        (0..concepts).map(|i| format!("circle{i}")).collect(),
        consistency,
        gamma,
        0,
    )?;
    Ok((inst, CirclesGeometry { circles, points }))
}

/// Independent `Bernoulli(density)` labels and `Uniform(0, gamma_max)` errors;
/// the target is concept 0.
pub fn gen_random(n: usize, m: usize, gamma_max: f64, density: f64, seed: u64) -> Result<Instance> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("dimensions must be at least 1"));
    }
    if !(0.0..=0.5).contains(&gamma_max) {
        return Err(Error::invalid(format!("gamma_max = {gamma_max} outside [0, 0.5]")));
    }
    if !(density > 0.0 && density < 1.0) {
        return Err(Error::invalid(format!("density = {density} outside (0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let consistency: Vec<Vec<bool>> = (0..n)
        .map(|_| (0..m).map(|_| rng.random::<f64>() < density).collect())
        .collect();
    let gamma: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..m).map(|_| round_sig(rng.random::<f64>() * gamma_max)).collect())
        .collect();
    Instance::new(
        (0..m).map(|i| format!("x{i}")).collect(),
        (0..n).map(|i| format!("c{i}")).collect(),
        consistency,
        gamma,
        0,
    )
}
