use gaptour::io::{board_svg, parse_dimacs, parse_tour, parse_tsplib, parse_tsplib_file, write_dimacs, write_tsplib};
use gaptour::ktp::{self, Board, EulerScheme};
use gaptour::sat::SatInstance;
use gaptour::tsp::{self, GreedyConfig};
use gaptour::{edge_rank_profile, Tour};

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn pcb442_parses_and_round_trips() {
    let file = parse_tsplib_file(&data("pcb442.tsp")).unwrap();
    assert_eq!(file.dimension, 442);
    assert_eq!(file.coords.len(), 442);
    let again = parse_tsplib_file(&write_tsplib("pcb442", &file.coords).unwrap()).unwrap();
    assert_eq!(again.coords, file.coords);
}

#[test]
fn pcb442_optimal_tour_under_rounding() {
    let inst = parse_tsplib(&data("pcb442.tsp"), true).unwrap();
    let order = parse_tour(&data("pcb442.opt.tour")).unwrap();
    let tour = Tour::new(order, &inst).unwrap();
    assert_eq!(tour.cost(), 50778.0);
    assert!(tsp::find_crossing(&tour, &inst).unwrap().is_none());
    let profile = edge_rank_profile(&tour, &inst).unwrap();
    assert_eq!(profile.len(), 442);
    assert!(profile.iter().all(|r| r[0] >= 1 && r[1] >= 1));
}

#[test]
fn pcb442_raster_needs_two_pixels_per_unit() {
    let inst = parse_tsplib(&data("pcb442.tsp"), false).unwrap();
    let config = GreedyConfig { restarts: 200, ..GreedyConfig::with_seed(0) };
    let run = tsp::solve_tsp(&inst, &config, tsp::default_max_rounds(442)).unwrap();
    let coarse = tsp::two_color_raster(&run.tour, &inst, 1).unwrap();
    assert_ne!(coarse.verdict, tsp::RasterVerdict::Simple);
    let fine = tsp::two_color_raster(&run.tour, &inst, 2).unwrap();
    assert_eq!(fine.verdict, tsp::RasterVerdict::Simple);
}

#[test]
fn dimacs_round_trip() {
    let inst = SatInstance::parse(4, &["0120", "1111", "2002"]).unwrap();
    let parsed = parse_dimacs(&write_dimacs(&inst)).unwrap();
    assert_eq!(parsed.instance.clauses(), inst.clauses());
    assert_eq!(parsed.tautologies_dropped, 0);
}

#[test]
fn knight_board_plot_draws_every_move() {
    let board = Board::new(6, 6).unwrap();
    let run = ktp::solve_ktp(&board, &EulerScheme::uniform(), &GreedyConfig::with_seed(0), 1_000_000).unwrap();
    assert!(run.proven);
    let svg = board_svg(&run.tour, &board).unwrap();
    assert_eq!(svg.matches("<line").count(), 36);
    assert_eq!(svg.matches("<rect").count() - 1, 36);
}
