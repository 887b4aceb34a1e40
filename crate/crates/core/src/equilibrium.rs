//! Charged particles on the unit sphere.
//!
//! `solve` distributes `n` unit charges on S² by minimizing the Coulomb
//! energy Σ 1/‖pᵢ − pⱼ‖ with projected gradient descent: step against the
//! tangential gradient, re-normalize every point, and backtrack (halve the
//! step) until the energy drops. Accepted steps grow the step by a constant
//! factor. The best of several seeded restarts is returned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::Execution;

pub type Vec3 = [f64; 3];

pub const MAX_POINTS: usize = 1000;

/// Points closer than this at initialization are re-sampled.
const MIN_INITIAL_SEPARATION: f64 = 1e-12;

/// Unit-norm tolerance for points handed to the public energy functions.
const UNIT_NORM_TOLERANCE: f64 = 1e-9;

/// Relative energy change that is indistinguishable from summation round-off.
/// Once a trial step lands inside this band, the energy comparison carries no
/// information and the step is judged by the tangential force instead.
pub const ENERGY_NOISE_REL: f64 = 1e-13;

/// The line search gives up below this step length.
const MIN_STEP: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Convergence threshold on the largest tangential gradient norm.
    pub gradient_tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
    pub initial_step: f64,
    pub step_growth: f64,
    pub execution: Execution,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50_000,
            gradient_tolerance: 1e-10,
            restarts: 8,
            seed: 0,
            initial_step: 0.01,
            step_growth: 1.2,
            execution: Execution::default(),
        }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if self.gradient_tolerance.is_nan() || self.gradient_tolerance <= 0.0 {
            return Err(Error::invalid("gradient_tolerance must be positive"));
        }
        if self.restarts < 1 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        if self.initial_step.is_nan()
            || self.initial_step <= 0.0
            || self.step_growth.is_nan()
            || self.step_growth < 1.0
        {
            return Err(Error::invalid(
                "initial_step must be positive and step_growth at least 1",
            ));
        }
        Ok(())
    }
}

/// A point set on the unit sphere with its energy and solver metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereConfiguration {
    points: Vec<Vec3>,
    energy: f64,
    min_distance: f64,
    max_tangential_force: f64,
    iterations: usize,
    seed: u64,
    converged: bool,
}

impl SphereConfiguration {
    /// Wraps an arbitrary set of distinct unit vectors.
    pub fn from_points(points: Vec<Vec3>) -> Result<Self> {
        let energy = coulomb_energy(&points)?;
        let gradient = energy_gradient(&points)?;
        Ok(Self {
            min_distance: min_distance(&points),
            max_tangential_force: max_norm(&gradient),
            energy,
            points,
            iterations: 0,
            seed: 0,
            converged: false,
        })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Smallest chord length between any two points.
    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    pub fn max_tangential_force(&self) -> f64 {
        self.max_tangential_force
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Seed of the restart that produced this configuration.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// All pairwise chord lengths, sorted ascending.
    pub fn pairwise_distances(&self) -> Vec<f64> {
        let mut d = Vec::with_capacity(self.len() * self.len().saturating_sub(1) / 2);
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                d.push(distance(p, q));
            }
        }
        d.sort_by(f64::total_cmp);
        d
    }
}

fn sub(p: &Vec3, q: &Vec3) -> Vec3 {
    [p[0] - q[0], p[1] - q[1], p[2] - q[2]]
}

fn dot(p: &Vec3, q: &Vec3) -> f64 {
    p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
}

fn norm(p: &Vec3) -> f64 {
    dot(p, p).sqrt()
}

fn distance(p: &Vec3, q: &Vec3) -> f64 {
    norm(&sub(p, q))
}

fn normalized(p: Vec3) -> Vec3 {
    let n = norm(&p);
    [p[0] / n, p[1] / n, p[2] / n]
}

fn max_norm(v: &[Vec3]) -> f64 {
    v.iter().map(norm).fold(0.0, f64::max)
}

fn check_points(points: &[Vec3]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| {
        let off = (norm(p) - 1.0).abs();
        off.is_nan() || off > UNIT_NORM_TOLERANCE
    }) {
        return Err(Error::invalid(format!(
            "point {i} has norm {} (expected 1)",
            norm(p)
        )));
    }
    Ok(())
}

fn find_coincident(points: &[Vec3]) -> Option<(usize, usize)> {
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate().skip(i + 1) {
            if distance(p, q) == 0.0 {
                return Some((i, j));
            }
        }
    }
    None
}

/// Smallest pairwise chord length.
pub fn min_distance(points: &[Vec3]) -> f64 {
    let mut min = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            min = min.min(distance(p, q));
        }
    }
    min
}

/// Total Coulomb potential Σ_{i<j} 1/‖pᵢ − pⱼ‖.
pub fn coulomb_energy(points: &[Vec3]) -> Result<f64> {
    check_points(points)?;
    let mut grad = vec![[0.0; 3]; points.len()];
    evaluate(points, &mut grad)
        .map(|e| e.energy)
        .ok_or_else(|| coincident_error(points))
}

/// Euclidean energy gradient at each point, with its radial component
/// removed.
pub fn energy_gradient(points: &[Vec3]) -> Result<Vec<Vec3>> {
    check_points(points)?;
    let mut grad = vec![[0.0; 3]; points.len()];
    evaluate(points, &mut grad).ok_or_else(|| coincident_error(points))?;
    Ok(grad)
}

fn coincident_error(points: &[Vec3]) -> Error {
    let (i, j) = find_coincident(points).unwrap_or((0, 0));
    Error::CoincidentPoints { i, j }
}

struct Evaluation {
    energy: f64,
    /// Largest tangential gradient norm over the points.
    max_force: f64,
    /// Σ‖gᵢ‖² over the tangential gradients.
    force_sq: f64,
}

/// Energy and tangential gradient in one pass over the pairs; `None` when
/// two points coincide.
fn evaluate(points: &[Vec3], grad: &mut [Vec3]) -> Option<Evaluation> {
    let n = points.len();
    grad.iter_mut().for_each(|g| *g = [0.0; 3]);
    let mut energy = 0.0;
    for i in 0..n {
        let p = points[i];
        let mut gi = [0.0; 3];
        let mut row = 0.0;
        for j in i + 1..n {
            let d = sub(&p, &points[j]);
            let r2 = dot(&d, &d);
            if r2 == 0.0 {
                return None;
            }
            let inv_r = 1.0 / r2.sqrt();
            let inv_r3 = inv_r * inv_r * inv_r;
            row += inv_r;
            // ∂(1/r)/∂pᵢ = −(pᵢ − pⱼ)/r³, and the opposite for pⱼ.
            let f = [d[0] * inv_r3, d[1] * inv_r3, d[2] * inv_r3];
            gi[0] -= f[0];
            gi[1] -= f[1];
            gi[2] -= f[2];
            let gj = &mut grad[j];
            gj[0] += f[0];
            gj[1] += f[1];
            gj[2] += f[2];
        }
        energy += row;
        let g = &mut grad[i];
        g[0] += gi[0];
        g[1] += gi[1];
        g[2] += gi[2];
    }
    let mut max_force: f64 = 0.0;
    let mut force_sq = 0.0;
    for (g, p) in grad.iter_mut().zip(points) {
        let radial = dot(g, p);
        g[0] -= radial * p[0];
        g[1] -= radial * p[1];
        g[2] -= radial * p[2];
        let sq = dot(g, g);
        force_sq += sq;
        max_force = max_force.max(sq.sqrt());
    }
    Some(Evaluation {
        energy,
        max_force,
        force_sq,
    })
}

/// A direction uniformly distributed on S² (normalized Gaussian sample).
pub fn sample_uniform_sphere<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v: Vec3 = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = norm(&v);
        if n > 0.0 && n.is_finite() {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// `n` random points on the sphere, re-sampling any point that lands on top
/// of an earlier one.
pub fn random_configuration<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec3> {
    let mut points: Vec<Vec3> = Vec::with_capacity(n);
    while points.len() < n {
        let p = sample_uniform_sphere(rng);
        if points
            .iter()
            .all(|q| distance(&p, q) >= MIN_INITIAL_SEPARATION)
        {
            points.push(p);
        }
    }
    points
}

/// Generator for restart `restart` of a solve seeded with `seed`.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64))
}

/// Runs projected gradient descent from `initial` until the tangential
/// force drops below the tolerance, the iteration budget runs out, or the
/// line search stalls. `on_step` sees the energy after every accepted step.
pub fn relax(
    initial: Vec<Vec3>,
    cfg: &SolverConfig,
    mut on_step: impl FnMut(f64),
) -> Result<SphereConfiguration> {
    cfg.validate()?;
    check_points(&initial)?;
    let n = initial.len();
    let mut points = initial;
    let mut grad = vec![[0.0; 3]; n];
    let mut current = evaluate(&points, &mut grad).ok_or_else(|| coincident_error(&points))?;

    let mut trial = vec![[0.0; 3]; n];
    let mut trial_grad = vec![[0.0; 3]; n];
    let mut step = cfg.initial_step;
    let mut iterations = 0;
    let mut converged = current.max_force < cfg.gradient_tolerance;

    while !converged && iterations < cfg.max_iterations {
        iterations += 1;
        let mut accepted = false;
        while step >= MIN_STEP {
            for ((t, p), g) in trial.iter_mut().zip(&points).zip(&grad) {
                *t = normalized([p[0] - step * g[0], p[1] - step * g[1], p[2] - step * g[2]]);
            }
            if let Some(next) = evaluate(&trial, &mut trial_grad) {
                let noise = ENERGY_NOISE_REL * current.energy;
                if next.energy < current.energy
                    || (next.energy <= current.energy + noise && next.force_sq < current.force_sq)
                {
                    debug_assert!(
                        next.energy <= current.energy + noise,
                        "energy rose from {} to {}",
                        current.energy,
                        next.energy
                    );
                    std::mem::swap(&mut points, &mut trial);
                    std::mem::swap(&mut grad, &mut trial_grad);
                    current = next;
                    step *= cfg.step_growth;
                    accepted = true;
                    on_step(current.energy);
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        converged = current.max_force < cfg.gradient_tolerance;
    }

    Ok(SphereConfiguration {
        min_distance: min_distance(&points),
        points,
        energy: current.energy,
        max_tangential_force: current.max_force,
        iterations,
        seed: cfg.seed,
        converged,
    })
}

fn antipodal_pair(cfg: &SolverConfig) -> SphereConfiguration {
    SphereConfiguration {
        points: vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
        energy: 0.5,
        min_distance: 2.0,
        max_tangential_force: 0.0,
        iterations: 0,
        seed: cfg.seed,
        converged: true,
    }
}

/// One seeded descent run from a random start.
pub fn solve_single(n: usize, cfg: &SolverConfig, restart: usize) -> Result<SphereConfiguration> {
    let mut rng = restart_rng(cfg.seed, restart);
    let initial = random_configuration(n, &mut rng);
    let mut run = relax(initial, cfg, |_| ())?;
    run.seed = cfg.seed.wrapping_add(restart as u64);
    Ok(run)
}

/// Minimum-energy configuration of `n` charges on the unit sphere, best of
/// `cfg.restarts` independent runs. Ties in energy go to the lowest restart
/// index, so the result does not depend on execution order.
pub fn solve(n: usize, cfg: &SolverConfig) -> Result<SphereConfiguration> {
    cfg.validate()?;
    if !(2..=MAX_POINTS).contains(&n) {
        return Err(Error::invalid(format!(
            "point count must be in 2..={MAX_POINTS}, got {n}"
        )));
    }
    if n == 2 {
        return Ok(antipodal_pair(cfg));
    }
    let runs = cfg
        .execution
        .map_indexed(cfg.restarts, |r| solve_single(n, cfg, r));
    let mut best: Option<SphereConfiguration> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.energy < b.energy) {
            best = Some(run);
        }
    }
    Ok(best.expect("restarts >= 1"))
}
