//! Tour optimisation over general assignment problem instances and SAT as
//! binary-number matching.
//!
//! - [`gap`]: instances, tours, the brute-force oracle and edge ranks.
//! - [`tsp`]: greedy restarts, crossing removal and the raster check.
//! - [`ktp`]: closed knight's tours through a knight-biased cost matrix.
//! - [`polygon`]: minimum and star tours on regular polygons.
//! - [`sat`]: clause numbers, the table solvers and the linked knowledge lists.
//! - [`io`]: TSPLIB, DIMACS, SVG plots and run reports.

pub mod error;
pub mod gap;
pub mod io;
pub mod ktp;
pub mod polygon;
pub mod sat;
pub mod tsp;

pub use error::{Error, Result};
pub use gap::{
    brute_force_optimum, brute_force_optimum_limited, build_instance, canonicalize, edge_rank_profile, tour_cost,
    GapInstance, Metric, Point, Tour, DEFAULT_BRUTE_FORCE_LIMIT,
};
pub use ktp::{
    build_board_instance, closed_tour_feasible, euler_distance, is_knight_move, solve_ktp, verify_knight_cycle, Board,
    EulerScheme, KnightReport, KtpRun, QuadrantPolicy, Square,
};
pub use polygon::{max_tour_bruteforce, min_polygon_tour, one_based_labels, regular_polygon, star_order, star_tour, PolygonSpec};
pub use sat::{
    build_knowledge, clause_to_number, complement, is_unsatisfiable_by_coverage, solve_deterministic,
    solve_probabilistic, Clause, Knowledge, ListId, SatInstance, SatOutcome, SatRun,
};
pub use tsp::{
    find_crossing, greedy_tour, solve_tsp, two_color_raster, uncross, Crossing, GreedyConfig, GreedySearch,
    RasterVerdict, StepPolicy, StopReason, TspRun,
};
