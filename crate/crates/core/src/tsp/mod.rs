//! Euclidean 2D TSP: random-restart greedy construction, crossing
//! detection, segment-reversal uncrossing and the driver that alternates
//! them until the tour is a simple closed curve.

mod crossing;
mod greedy;
mod raster;
mod solve;

pub use crossing::{
    all_crossings, find_crossing, is_proper, orientation, segments_cross_properly, segments_intersect, uncross,
    uncross_gain, Crossing,
};
pub use greedy::{greedy_tour, GreedyConfig, GreedySearch, StepPolicy, DEFAULT_RESTARTS};
pub(crate) use crossing::crossings_among;
pub(crate) use greedy::Scratch;
pub use raster::{adequate_resolution, two_color_raster, Pixel, Raster, RasterCheck, RasterVerdict, MAX_CANVAS_PIXELS};
pub use solve::{default_max_rounds, solve_tsp, RoundLog, StopReason, TspRun};
