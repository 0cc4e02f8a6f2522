//! File formats, plots and run reports.

mod dimacs;
mod plot;
mod report;
mod tsplib;

pub use dimacs::{parse_dimacs, write_dimacs, DimacsFile};
pub use plot::{board_svg, rank_profile_svg, tour_svg};
pub use report::RunReport;
pub use tsplib::{parse_tour, parse_tsplib, parse_tsplib_file, write_tsplib, TsplibFile};
