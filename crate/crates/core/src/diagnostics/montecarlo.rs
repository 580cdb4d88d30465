//! Empirical rejection rates of the unit-root tests on simulated series.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{Deterministic, Level, UnitRootTest};
use crate::error::{Error, Result};
use crate::timeseries::{AnnualSeries, Unit};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimulatedProcess {
    /// `y_t = y_{t-1} + e_t`: rejections measure size.
    RandomWalk,
    /// `y_t = phi y_{t-1} + e_t` after burn-in: rejections measure power.
    Ar1(f64),
}

impl SimulatedProcess {
    pub fn simulate(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        const BURN_IN: usize = 100;
        let (phi, burn) = match *self {
            SimulatedProcess::RandomWalk => (1.0, 0),
            SimulatedProcess::Ar1(phi) => (phi, BURN_IN),
        };
        let mut y = 0.0;
        let mut out = Vec::with_capacity(n);
        for i in 0..n + burn {
            let e: f64 = StandardNormal.sample(rng);
            y = phi * y + e;
            if i >= burn {
                out.push(y);
            }
        }
        out
    }
}

/// Monte Carlo study of a unit-root test's rejection frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionStudy {
    pub test: UnitRootTest,
    pub process: SimulatedProcess,
    pub n: usize,
    pub max_lag: usize,
    pub deterministic: Deterministic,
    pub level: Level,
    pub replications: usize,
    pub seed: u64,
}

impl RejectionStudy {
    /// Share of simulated series for which the test rejects a unit root.
    /// Replication `i` uses seed `seed + i`, so the result does not depend on
    /// scheduling.
    pub fn rejection_rate(&self) -> Result<f64> {
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be positive".into()));
        }
        let rejected = (0..self.replications as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(i));
                let s = AnnualSeries::new(
                    0,
                    self.process.simulate(&mut rng, self.n),
                    Unit::Index,
                    "simulated",
                )?;
                Ok(self
                    .test
                    .run(&s, self.max_lag, self.deterministic)?
                    .rejects_at(self.level) as usize)
            })
            .collect::<Result<Vec<usize>>>()?
            .into_iter()
            .sum::<usize>();
        Ok(rejected as f64 / self.replications as f64)
    }
}
