use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_distr::Normal;

use crate::error::{Error, Result};
use crate::rng::{seeded, Rng};

/// Relative tolerance on the realised mean degree.
pub const MEAN_TOLERANCE: f64 = 0.05;

const MAX_DRAWS: usize = 100;

/// Discrete power law `p(k) ~ k^-tau` on `[k_min, k_max]`.
///
/// `head` in `(0, 1]` scales the weight of `k_min` alone; values below 1 let
/// the mean move continuously between the laws starting at `k_min` and at
/// `k_min + 1`.
#[derive(Debug, Clone)]
pub struct TruncatedPowerLaw {
    pub k_min: usize,
    pub k_max: usize,
    pub tau: f64,
    pub head: f64,
}

impl TruncatedPowerLaw {
    pub fn new(k_min: usize, k_max: usize, tau: f64) -> Result<Self> {
        if k_min < 1 || k_min > k_max {
            return Err(Error::Parameter(format!(
                "power law support needs 1 <= k_min <= k_max (got [{k_min}, {k_max}])"
            )));
        }
        if tau.is_nan() || tau <= 1.0 {
            return Err(Error::Parameter(format!("power-law exponent must exceed 1 (got {tau})")));
        }
        Ok(Self {
            k_min,
            k_max,
            tau,
            head: 1.0,
        })
    }

    pub fn with_head(mut self, head: f64) -> Result<Self> {
        if !(head > 0.0 && head <= 1.0) {
            return Err(Error::Parameter(format!("head weight must lie in (0, 1] (got {head})")));
        }
        self.head = head;
        Ok(self)
    }

    fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        (self.k_min..=self.k_max).map(|k| {
            let w = (k as f64).powf(-self.tau);
            if k == self.k_min {
                w * self.head
            } else {
                w
            }
        })
    }

    pub fn mean(&self) -> f64 {
        let (mut z, mut s) = (0.0, 0.0);
        for (w, k) in self.weights().zip(self.k_min..) {
            z += w;
            s += w * k as f64;
        }
        s / z
    }

    /// `P(K >= k)` by direct summation.
    pub fn ccdf(&self, k: usize) -> f64 {
        let z: f64 = self.weights().sum();
        let tail: f64 = self
            .weights()
            .zip(self.k_min..)
            .filter(|&(_, kk)| kk >= k)
            .map(|(w, _)| w)
            .sum();
        tail / z
    }

    pub fn sample(&self, n: usize, rng: &mut Rng) -> Vec<usize> {
        if self.k_min == self.k_max {
            return vec![self.k_min; n];
        }
        let dist = WeightedIndex::new(self.weights()).expect("positive finite weights");
        (0..n).map(|_| self.k_min + dist.sample(rng)).collect()
    }
}

/// Power law on `[k, k_max]`, `k >= k_min_floor`, whose mean equals `target`.
///
/// The integer `k_min` is the largest one whose mean does not exceed the
/// target; the head weight then closes the remaining gap by bisection. If the
/// target lies outside the reachable range, the closest law is returned when
/// it is within 5% and an error otherwise.
pub fn tune_k_min(tau: f64, k_min_floor: usize, k_max: usize, target: f64) -> Result<TruncatedPowerLaw> {
    let unreachable = || {
        Error::Parameter(format!(
            "mean degree {target} unreachable with tau = {tau} on [{k_min_floor}, {k_max}]"
        ))
    };
    let within = |law: TruncatedPowerLaw| {
        if (law.mean() - target).abs() <= MEAN_TOLERANCE * target {
            Ok(law)
        } else {
            Err(unreachable())
        }
    };
    let floor = TruncatedPowerLaw::new(k_min_floor, k_max, tau)?;
    if floor.mean() >= target {
        return within(floor);
    }
    // the mean grows with k_min
    let mut lo = floor;
    for k in (k_min_floor + 1)..=k_max {
        let next = TruncatedPowerLaw::new(k, k_max, tau)?;
        if next.mean() > target {
            // mean falls from next.mean() towards lo.mean() as head goes to 1
            let (mut a, mut b) = (0.0f64, 1.0f64);
            for _ in 0..60 {
                let h = 0.5 * (a + b);
                if lo.clone().with_head(h)?.mean() > target {
                    a = h;
                } else {
                    b = h;
                }
            }
            return lo.with_head(b);
        }
        lo = next;
    }
    within(lo)
}

/// Makes the degree sum even by decrementing the largest entry.
pub(crate) fn force_even_sum(degrees: &mut [usize]) {
    if degrees.iter().sum::<usize>() % 2 == 1 {
        if let Some(idx) = (0..degrees.len()).max_by_key(|&i| (degrees[i], std::cmp::Reverse(i))) {
            degrees[idx] -= 1;
        }
    }
}

/// Power-law degree sequence with an even sum.
///
/// With `target_mean`, `k_min` acts as a lower bound and is tuned upward so
/// that the realised mean falls within 5% of the target; without it the
/// support is exactly `[k_min, k_max]`.
pub fn sample_powerlaw_degrees(
    n: usize,
    tau: f64,
    k_min: usize,
    k_max: usize,
    target_mean: Option<f64>,
    seed: u64,
) -> Result<Vec<usize>> {
    powerlaw_degrees(n, tau, k_min, k_max, target_mean, &mut seeded(seed))
}

pub(crate) fn powerlaw_degrees(
    n: usize,
    tau: f64,
    k_min: usize,
    k_max: usize,
    target_mean: Option<f64>,
    rng: &mut Rng,
) -> Result<Vec<usize>> {
    let Some(target) = target_mean else {
        let mut seq = TruncatedPowerLaw::new(k_min, k_max, tau)?.sample(n, rng);
        force_even_sum(&mut seq);
        return Ok(seq);
    };
    let law = tune_k_min(tau, k_min.max(1), k_max, target)?;
    for _ in 0..MAX_DRAWS {
        let mut seq = law.sample(n, rng);
        force_even_sum(&mut seq);
        let mean = seq.iter().sum::<usize>() as f64 / n.max(1) as f64;
        if (mean - target).abs() <= MEAN_TOLERANCE * target {
            return Ok(seq);
        }
    }
    Err(Error::Parameter(format!(
        "realised mean degree missed {target} by more than 5% in {MAX_DRAWS} draws"
    )))
}

/// Degrees `ceil(exp(x))` with `x ~ Normal(mu, sigma^2)`, sum forced even.
pub fn sample_lognormal_degrees(n: usize, mu: f64, sigma: f64, seed: u64) -> Result<Vec<usize>> {
    let normal = Normal::new(mu, sigma).map_err(|e| Error::Parameter(e.to_string()))?;
    let mut rng = seeded(seed);
    let mut seq: Vec<usize> = (0..n)
        .map(|_| normal.sample(&mut rng).exp().ceil().max(1.0) as usize)
        .collect();
    force_even_sum(&mut seq);
    Ok(seq)
}
