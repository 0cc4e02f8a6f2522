use serde::{Deserialize, Serialize};

use super::crossing::{all_crossings, find_crossing, uncross, uncross_gain, Crossing};
use super::greedy::{GreedyConfig, GreedySearch};
use crate::error::{Error, Result};
use crate::gap::{canonicalize, GapInstance, Metric, Tour};

/// Default round cap: ten rounds per city.
pub fn default_max_rounds(n: usize) -> usize {
    10 * n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The tour is a simple closed curve.
    JordanCurve,
    MaxRounds,
    /// Only touching/collinear crossings remain and none of them shortens
    /// the tour.
    DegenerateCrossings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundLog {
    pub round: usize,
    /// Cost after the greedy phase (never above the previous round's end).
    pub greedy_cost: f64,
    pub crossing: Option<Crossing>,
    /// Cost at the end of the round.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspRun {
    pub tour: Tour,
    pub rounds: Vec<RoundLog>,
    pub stop: StopReason,
}

/// Picks the crossing to remove: the first one when it shortens the tour,
/// otherwise the first that does. `Err(())` when crossings exist but none
/// improves.
fn select_crossing(tour: &Tour, instance: &GapInstance) -> Result<std::result::Result<Option<Crossing>, ()>> {
    let Some(first) = find_crossing(tour, instance)? else {
        return Ok(Ok(None));
    };
    if uncross_gain(tour, first, instance)? > 0.0 {
        return Ok(Ok(Some(first)));
    }
    for c in all_crossings(tour, instance)? {
        if uncross_gain(tour, c, instance)? > 0.0 {
            return Ok(Ok(Some(c)));
        }
    }
    Ok(Err(()))
}

/// Greedy construction plus crossing removal, repeated until the tour is a
/// simple closed curve or `max_rounds` is reached.
///
/// Each round reruns the greedy search seeded with the incumbent (so it can
/// only improve), puts the tour in canonical form, and reverses the first
/// crossing segment. Cost never increases from one round to the next.
pub fn solve_tsp(instance: &GapInstance, config: &GreedyConfig, max_rounds: usize) -> Result<TspRun> {
    match instance.metric() {
        Some(Metric::Euclidean) => {}
        Some(m) => return Err(Error::NonEuclidean(m.to_string())),
        None => return Err(Error::NonEuclidean("explicit matrix".into())),
    }
    instance.planar_coords()?;
    config.validate()?;
    if max_rounds == 0 {
        return Err(Error::InvalidConfig("max_rounds must be positive".into()));
    }

    let search = GreedySearch::new(instance);
    let mut incumbent: Option<Tour> = None;
    let mut rounds = Vec::new();
    for round in 0..max_rounds {
        let built = search.run(&config.for_round(round as u64), incumbent.as_ref())?;
        let tour = canonicalize(&built);
        let greedy_cost = tour.cost();
        match select_crossing(&tour, instance)? {
            Ok(None) => {
                rounds.push(RoundLog { round, greedy_cost, crossing: None, cost: greedy_cost });
                return Ok(TspRun { tour, rounds, stop: StopReason::JordanCurve });
            }
            Ok(Some(c)) => {
                let next = uncross(&tour, c, instance)?;
                debug_assert!(next.cost() <= tour.cost());
                rounds.push(RoundLog { round, greedy_cost, crossing: Some(c), cost: next.cost() });
                incumbent = Some(next);
            }
            Err(()) => {
                rounds.push(RoundLog { round, greedy_cost, crossing: None, cost: greedy_cost });
                return Ok(TspRun { tour, rounds, stop: StopReason::DegenerateCrossings });
            }
        }
    }
    let tour = canonicalize(&incumbent.expect("at least one round ran"));
    Ok(TspRun { tour, rounds, stop: StopReason::MaxRounds })
}
