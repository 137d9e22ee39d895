//! Contact process on the torus, simulated exactly in continuous time through
//! a uniformised graphical representation.
//!
//! Every site carries a rate-1 recovery clock and, for each of its `2d`
//! nearest neighbours, a rate-λ infection arrow. Superposing all clocks gives
//! a Poisson stream of rate `n (1 + 2dλ)`; each event picks a site uniformly
//! and then a clock at that site proportionally to its rate. Recoveries set
//! the site to 0; an arrow from `x` to `y` sets `y` to 1 when `x` is 1. Both
//! maps are monotone, so copies driven by the same event stream stay ordered.
//!
//! Time is consumed in unit intervals; interval `[t, t + 1)` draws its events
//! from stream layer `t` (restarting the exponential clock at each integer is
//! exact by memorylessness).

use rand::RngCore;

use crate::error::{Error, Result};
use crate::lattice::{SpaceTimeField, TorusGeometry};
use crate::rng::{uniform_oc, RngStream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactParams {
    lambda: f64,
    projection: Option<usize>,
}

impl ContactParams {
    /// `projection = Some(d)` observes the process on the sublattice of the
    /// first `d` coordinates (trailing coordinates zero).
    pub fn new(lambda: f64, projection: Option<usize>) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("infection rate must be finite and non-negative, got {lambda}")));
        }
        Ok(Self { lambda, projection })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn projection(&self) -> Option<usize> {
        self.projection
    }
}

/// Neighbour tables and rates for one torus.
#[derive(Debug, Clone)]
pub struct ContactDynamics {
    geometry: TorusGeometry,
    lambda: f64,
    neighbours: Vec<usize>,
}

impl ContactDynamics {
    pub fn new(geometry: &TorusGeometry, lambda: f64) -> Self {
        let d = geometry.dim();
        let mut neighbours = Vec::with_capacity(geometry.num_sites() * 2 * d);
        for x in 0..geometry.num_sites() {
            for axis in 0..d {
                for sign in [-1i64, 1] {
                    let mut e = vec![0i64; d];
                    e[axis] = sign;
                    neighbours.push(geometry.offset(x, &e));
                }
            }
        }
        Self {
            geometry: geometry.clone(),
            lambda,
            neighbours,
        }
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geometry
    }

    /// Runs the process for `duration` time units using events from `rng`.
    pub fn run<R: RngCore + ?Sized>(&self, state: &mut [u8], duration: f64, rng: &mut R) {
        let n = self.geometry.num_sites();
        let arrows = 2 * self.geometry.dim();
        let per_site = 1.0 + arrows as f64 * self.lambda;
        let total_rate = n as f64 * per_site;
        let mut t = 0.0;
        loop {
            t += -uniform_oc(rng).ln() / total_rate;
            // The site and clock draws are consumed even past the end so the
            // event count per interval fixes the draw count.
            let us = uniform_oc(rng);
            let uc = uniform_oc(rng);
            if t >= duration {
                break;
            }
            let x = ((us * n as f64).ceil() as usize).clamp(1, n) - 1;
            let clock = uc * per_site;
            if clock <= 1.0 {
                state[x] = 0;
            } else if state[x] == 1 {
                let j = (((clock - 1.0) / self.lambda) as usize).min(arrows - 1);
                state[self.neighbours[x * arrows + j]] = 1;
            }
        }
    }

    /// Unit-time step over `[t, t + 1)` with events from layer `t` of `stream`.
    pub fn unit_step(&self, state: &mut [u8], stream: &RngStream, t: u64) {
        self.run(state, 1.0, &mut stream.layer(t));
    }
}

fn check_init(geometry: &TorusGeometry, init: &[u8]) -> Result<()> {
    if init.len() != geometry.num_sites() {
        return Err(Error::Shape(format!(
            "initial configuration has {} sites, torus has {}",
            init.len(),
            geometry.num_sites()
        )));
    }
    if init.iter().any(|&v| v > 1) {
        return Err(Error::InvalidParameter("contact process states are 0 or 1".into()));
    }
    Ok(())
}

/// Trajectory recorded at times `0, 1, …, ⌊horizon⌋`.
pub fn contact_simulate(
    geometry: &TorusGeometry,
    params: &ContactParams,
    horizon: f64,
    init: &[u8],
    stream: &RngStream,
) -> Result<SpaceTimeField> {
    check_init(geometry, init)?;
    if !(horizon >= 0.0) {
        return Err(Error::InvalidParameter(format!("horizon must be non-negative, got {horizon}")));
    }
    let dynamics = ContactDynamics::new(geometry, params.lambda());
    let steps = horizon.floor() as u64;
    let mut state = init.to_vec();
    let mut layers = vec![state.clone()];
    for t in 0..steps {
        dynamics.unit_step(&mut state, stream, t);
        layers.push(state.clone());
    }
    SpaceTimeField::from_layers(geometry.clone(), 2, 0, layers)
}

/// Runs from the all-1 configuration for `burn_in` time units.
pub fn contact_upper_invariant_sample(
    geometry: &TorusGeometry,
    params: &ContactParams,
    burn_in: f64,
    stream: &RngStream,
) -> Result<Vec<u8>> {
    if !(burn_in > 0.0) || !burn_in.is_finite() {
        return Err(Error::InvalidParameter(format!("burn-in must be positive, got {burn_in}")));
    }
    let dynamics = ContactDynamics::new(geometry, params.lambda());
    let mut state = vec![1u8; geometry.num_sites()];
    run_from(&dynamics, &mut state, burn_in, stream, 0);
    Ok(state)
}

/// Runs `duration` time units starting at stream layer `first_layer`; returns
/// the next unused layer.
pub(crate) fn run_from(dynamics: &ContactDynamics, state: &mut [u8], duration: f64, stream: &RngStream, first_layer: u64) -> u64 {
    let whole = duration.floor() as u64;
    for t in 0..whole {
        dynamics.unit_step(state, stream, first_layer + t);
    }
    let frac = duration - whole as f64;
    if frac > 0.0 {
        dynamics.run(state, frac, &mut stream.layer(first_layer + whole));
        first_layer + whole + 1
    } else {
        first_layer + whole
    }
}
