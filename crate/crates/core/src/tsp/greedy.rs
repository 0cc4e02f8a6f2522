use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap::{cycle_cost_unchecked, GapInstance, Tour};

pub const DEFAULT_RESTARTS: usize = 200;

/// How each step of a restart picks the next vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepPolicy {
    /// Cheapest unvisited vertex; ties broken uniformly at random.
    Greedy,
    /// Uniformly random unvisited vertex.
    Random,
    /// Greedy with probability `mixed_greedy_probability`, else random.
    Mixed,
}

impl fmt::Display for StepPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepPolicy::Greedy => "greedy",
            StepPolicy::Random => "random",
            StepPolicy::Mixed => "mixed",
        })
    }
}

impl FromStr for StepPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "greedy" => Ok(StepPolicy::Greedy),
            "random" => Ok(StepPolicy::Random),
            "mixed" => Ok(StepPolicy::Mixed),
            other => Err(Error::InvalidConfig(format!("unknown step policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyConfig {
    pub restarts: usize,
    pub step_policy: StepPolicy,
    pub mixed_greedy_probability: f64,
    pub seed: u64,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            restarts: DEFAULT_RESTARTS,
            step_policy: StepPolicy::Greedy,
            mixed_greedy_probability: 0.5,
            seed: 0,
        }
    }
}

impl GreedyConfig {
    pub fn with_seed(seed: u64) -> Self {
        GreedyConfig { seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.mixed_greedy_probability) {
            return Err(Error::InvalidConfig(format!(
                "mixed greedy probability {} not in [0, 1]",
                self.mixed_greedy_probability
            )));
        }
        Ok(())
    }

    /// Same settings with the seed replaced by a stream derived from
    /// `(seed, round)`, for callers that invoke the search repeatedly.
    pub fn for_round(&self, round: u64) -> Self {
        GreedyConfig { seed: mix_seed(self.seed, round), ..self.clone() }
    }
}

/// SplitMix64 finaliser over the pair; distinct rounds get unrelated seeds.
pub(crate) fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random-restart nearest-neighbour construction over one instance.
///
/// Each row of the cost matrix is pre-sorted so a greedy step only walks
/// past already-visited vertices. Restart `r` of a run seeded `s` draws from
/// ChaCha stream `r` of key `s`, so results do not depend on how restarts
/// are scheduled.
pub struct GreedySearch<'a> {
    instance: &'a GapInstance,
    sorted: Vec<u32>,
}

impl<'a> GreedySearch<'a> {
    pub fn new(instance: &'a GapInstance) -> Self {
        let n = instance.n();
        let mut sorted = Vec::with_capacity(n * (n - 1));
        let mut row: Vec<u32> = Vec::with_capacity(n);
        for v in 0..n {
            row.clear();
            row.extend((0..n as u32).filter(|&j| j as usize != v));
            let costs = instance.row(v);
            row.sort_by(|&a, &b| costs[a as usize].total_cmp(&costs[b as usize]).then(a.cmp(&b)));
            sorted.extend_from_slice(&row);
        }
        GreedySearch { instance, sorted }
    }

    pub fn instance(&self) -> &GapInstance {
        self.instance
    }

    /// Runs `config.restarts` restarts and returns the cheapest tour seen.
    /// A supplied incumbent is only replaced by a strictly cheaper tour.
    pub fn run(&self, config: &GreedyConfig, incumbent: Option<&Tour>) -> Result<Tour> {
        config.validate()?;
        let n = self.instance.n();
        let mut scratch = Scratch::new(n);
        let mut best: Option<Tour> = incumbent.cloned();
        for r in 0..config.restarts {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            let cost = self.restart(config, &mut rng, &mut scratch);
            if best.as_ref().is_none_or(|b| cost < b.cost()) {
                best = Some(Tour::from_parts(scratch.order.clone(), cost));
            }
        }
        Ok(best.expect("at least one restart"))
    }

    /// Runs restart `index` on its own, leaving the tour in `scratch.order`.
    pub(crate) fn restart_tour(&self, config: &GreedyConfig, index: u64, scratch: &mut Scratch) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index);
        self.restart(config, &mut rng, scratch)
    }

    fn restart(&self, config: &GreedyConfig, rng: &mut ChaCha8Rng, s: &mut Scratch) -> f64 {
        let n = self.instance.n();
        s.reset();
        let start = rng.gen_range(0..n);
        s.visit(start);
        let mut current = start;
        while s.order.len() < n {
            let greedy = match config.step_policy {
                StepPolicy::Greedy => true,
                StepPolicy::Random => false,
                StepPolicy::Mixed => rng.gen_bool(config.mixed_greedy_probability),
            };
            let next = if greedy { self.cheapest_unvisited(current, s, rng) } else { s.random_unvisited(rng) };
            s.visit(next);
            current = next;
        }
        cycle_cost_unchecked(&s.order, self.instance)
    }

    fn cheapest_unvisited(&self, v: usize, s: &Scratch, rng: &mut ChaCha8Rng) -> usize {
        let n = self.instance.n();
        let row = &self.sorted[v * (n - 1)..(v + 1) * (n - 1)];
        let costs = self.instance.row(v);
        let mut it = row.iter().map(|&j| j as usize).filter(|&j| !s.visited[j]);
        let first = it.next().expect("an unvisited vertex remains");
        let best_cost = costs[first];
        // Reservoir sample among the tied minimum.
        let mut chosen = first;
        let mut ties = 1u32;
        for j in it {
            if costs[j] != best_cost {
                break;
            }
            ties += 1;
            if rng.gen_range(0..ties) == 0 {
                chosen = j;
            }
        }
        chosen
    }
}

pub(crate) struct Scratch {
    pub(crate) order: Vec<usize>,
    visited: Vec<bool>,
    /// Unvisited vertices with O(1) swap-removal, for random steps.
    pool: Vec<usize>,
    slot: Vec<usize>,
}

impl Scratch {
    pub(crate) fn new(n: usize) -> Self {
        Scratch {
            order: Vec::with_capacity(n),
            visited: vec![false; n],
            pool: (0..n).collect(),
            slot: (0..n).collect(),
        }
    }

    fn reset(&mut self) {
        self.order.clear();
        self.visited.iter_mut().for_each(|v| *v = false);
        let n = self.visited.len();
        self.pool.clear();
        self.pool.extend(0..n);
        self.slot.clear();
        self.slot.extend(0..n);
    }

    fn visit(&mut self, v: usize) {
        self.visited[v] = true;
        self.order.push(v);
        let at = self.slot[v];
        let last = *self.pool.last().expect("pool non-empty");
        self.pool.swap_remove(at);
        if last != v {
            self.slot[last] = at;
        }
    }

    fn random_unvisited(&self, rng: &mut ChaCha8Rng) -> usize {
        self.pool[rng.gen_range(0..self.pool.len())]
    }
}

/// Random-restart greedy construction. Never returns a tour costlier than
/// `incumbent`.
pub fn greedy_tour(instance: &GapInstance, config: &GreedyConfig, incumbent: Option<&Tour>) -> Result<Tour> {
    GreedySearch::new(instance).run(config, incumbent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap::{brute_force_optimum, build_instance, check_permutation, Metric, Point};
    use crate::polygon::{regular_polygon, PolygonSpec};

    fn unit_square() -> GapInstance {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(Point::from);
        build_instance(&pts, Metric::Euclidean).unwrap()
    }

    #[test]
    fn square_greedy_is_perimeter() {
        let inst = unit_square();
        for seed in 0..20 {
            let t = greedy_tour(&inst, &GreedyConfig::with_seed(seed), None).unwrap();
            assert_eq!(t.cost(), 4.0);
        }
    }

    #[test]
    fn incumbent_is_never_worsened() {
        let inst = unit_square();
        let opt = brute_force_optimum(&inst, false).unwrap();
        let cfg = GreedyConfig { step_policy: StepPolicy::Random, restarts: 3, ..Default::default() };
        let t = greedy_tour(&inst, &cfg, Some(&opt)).unwrap();
        assert_eq!(t, opt);
    }

    #[test]
    fn polygon_17_greedy_finds_polygon_order() {
        let pts = regular_polygon(&PolygonSpec::new(17, 1.0).unwrap());
        let inst = build_instance(&pts, Metric::Euclidean).unwrap();
        let t = greedy_tour(&inst, &GreedyConfig::with_seed(7), None).unwrap();
        let c = crate::gap::canonicalize(&t);
        assert_eq!(c.order(), (0..17).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn policies_produce_permutations_and_are_deterministic() {
        let pts: Vec<Point> = (0..30).map(|i| Point::new((i * 37 % 101) as f64, (i * 53 % 97) as f64)).collect();
        let inst = build_instance(&pts, Metric::Euclidean).unwrap();
        for policy in [StepPolicy::Greedy, StepPolicy::Random, StepPolicy::Mixed] {
            let cfg = GreedyConfig { step_policy: policy, restarts: 20, seed: 11, ..Default::default() };
            let a = greedy_tour(&inst, &cfg, None).unwrap();
            let b = greedy_tour(&inst, &cfg, None).unwrap();
            assert_eq!(a, b);
            check_permutation(a.order(), 30).unwrap();
            assert!((crate::gap::tour_cost(a.order(), &inst).unwrap() - a.cost()).abs() < 1e-9);
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = GreedyConfig { restarts: 0, ..Default::default() };
        assert!(cfg.validate().is_err());
        cfg.restarts = 1;
        cfg.mixed_greedy_probability = 1.5;
        assert!(cfg.validate().is_err());
        cfg.mixed_greedy_probability = 1.0;
        assert!(cfg.validate().is_ok());
        assert_ne!(cfg.for_round(1).seed, cfg.for_round(2).seed);
    }
}
