//! Closed knight's tours as a general assignment problem.
//!
//! Squares are priced with a knight-biased distance: a small constant for
//! knight moves, the true distance plus 4 for anything else. A cycle of only
//! knight moves then costs less than 4, and any cycle that contains a
//! non-knight edge costs more, so "cost < 4" is an exact stop condition for
//! the random-restart greedy search.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap::{check_permutation, GapInstance, Point, Tour};
use crate::tsp::{self, GreedyConfig, GreedySearch, Scratch};

/// A tour is a closed knight's tour iff it costs less than this.
pub const KNIGHT_COST_THRESHOLD: f64 = 4.0;

/// A square, 1-based: `1 <= row <= rows`, `1 <= col <= cols`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Square {
    pub row: usize,
    pub col: usize,
}

impl Square {
    pub fn new(row: usize, col: usize) -> Self {
        Square { row, col }
    }

    fn dist2(self, other: Square) -> usize {
        let di = self.row.abs_diff(other.row);
        let dj = self.col.abs_diff(other.col);
        di * di + dj * dj
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Board {
    rows: usize,
    cols: usize,
}

impl Board {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidBoard(format!("{rows}x{cols} has no squares")));
        }
        Ok(Board { rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn area(&self) -> usize {
        self.rows * self.cols
    }

    /// Row-major vertex index of a square.
    pub fn index(&self, s: Square) -> usize {
        (s.row - 1) * self.cols + (s.col - 1)
    }

    pub fn square(&self, index: usize) -> Square {
        Square::new(index / self.cols + 1, index % self.cols + 1)
    }

    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        (0..self.area()).map(|k| self.square(k))
    }

    /// Square centres in the plane, row 1 at the top.
    pub fn centers(&self) -> Vec<Point> {
        self.squares().map(|s| Point::new(s.col as f64, (self.rows + 1 - s.row) as f64)).collect()
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

pub fn is_knight_move(a: Square, b: Square) -> bool {
    a.dist2(b) == 5
}

/// Which of the four knight 4-cycles of a 4×4 block a local cell lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockCycle {
    /// Rhombus elongated along the (1,1) diagonal.
    RhombusDown,
    /// Rhombus elongated along the (1,-1) diagonal.
    RhombusUp,
    Square,
}

/// Cycle id (0..4) of local cell `(r, c)` in a 4×4 block.
fn block_cycle_id(r: usize, c: usize) -> usize {
    const TABLE: [[u8; 4]; 4] = [
        // 0: rhombus (0,0)(1,2)(3,3)(2,1)   1: rhombus (0,3)(1,1)(3,0)(2,2)
        // 2: square  (0,1)(1,3)(3,2)(2,0)   3: square  (0,2)(2,3)(3,1)(1,0)
        [0, 2, 3, 1],
        [3, 1, 0, 2],
        [2, 0, 1, 3],
        [1, 3, 2, 0],
    ];
    TABLE[r][c] as usize
}

/// The block 4-cycle a knight move runs along, if both squares lie in the
/// same 4×4 quadrant and on the same cycle.
pub fn block_cycle(a: Square, b: Square) -> Option<BlockCycle> {
    let (ar, ac, br, bc) = (a.row - 1, a.col - 1, b.row - 1, b.col - 1);
    if !is_knight_move(a, b) || ar / 4 != br / 4 || ac / 4 != bc / 4 {
        return None;
    }
    let (ia, ib) = (block_cycle_id(ar % 4, ac % 4), block_cycle_id(br % 4, bc % 4));
    if ia != ib {
        return None;
    }
    Some(match ia {
        0 => BlockCycle::RhombusDown,
        1 => BlockCycle::RhombusUp,
        _ => BlockCycle::Square,
    })
}

/// How quadrant mode assigns the knight-move constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadrantPolicy {
    /// Moves along a block 4-cycle get the constant of that cycle's shape
    /// (`c_pos` for the (1,1) rhombus, `c_neg` for the (1,-1) rhombus,
    /// `c_sq` for the squares); every other knight move gets `default`.
    BlockCycles,
    /// Square-cycle moves get `c_sq`; otherwise the sign of `di*dj` picks
    /// `c_pos` or `c_neg`.
    Displacement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum EulerScheme {
    Uniform { c1: f64 },
    Quadrant { c_pos: f64, c_neg: f64, c_sq: f64, default: f64, policy: QuadrantPolicy },
}

impl EulerScheme {
    pub const DEFAULT_C1: f64 = 0.04;

    pub fn uniform() -> Self {
        EulerScheme::Uniform { c1: Self::DEFAULT_C1 }
    }

    pub fn quadrant() -> Self {
        Self::quadrant_with(QuadrantPolicy::BlockCycles)
    }

    pub fn quadrant_with(policy: QuadrantPolicy) -> Self {
        EulerScheme::Quadrant { c_pos: 0.01, c_neg: 0.03, c_sq: 0.02, default: Self::DEFAULT_C1, policy }
    }

    fn constants(&self) -> Vec<f64> {
        match *self {
            EulerScheme::Uniform { c1 } => vec![c1],
            EulerScheme::Quadrant { c_pos, c_neg, c_sq, default, .. } => vec![c_pos, c_neg, c_sq, default],
        }
    }

    /// Every constant must lie in `(0, 4/(rows*cols))` so that a full cycle of
    /// knight moves stays below 4.
    pub fn validate(&self, board: &Board) -> Result<()> {
        let bound = KNIGHT_COST_THRESHOLD / board.area() as f64;
        for c in self.constants() {
            if !(c > 0.0 && c < bound) {
                return Err(Error::InvalidConfig(format!(
                    "knight constant {c} must lie in (0, {bound}) for a {board} board"
                )));
            }
        }
        Ok(())
    }

    /// Constant for a knight move from `a` to `b`.
    pub fn knight_cost(&self, a: Square, b: Square) -> f64 {
        match *self {
            EulerScheme::Uniform { c1 } => c1,
            EulerScheme::Quadrant { c_pos, c_neg, c_sq, default, policy } => {
                let cycle = block_cycle(a, b);
                match policy {
                    QuadrantPolicy::BlockCycles => match cycle {
                        Some(BlockCycle::RhombusDown) => c_pos,
                        Some(BlockCycle::RhombusUp) => c_neg,
                        Some(BlockCycle::Square) => c_sq,
                        None => default,
                    },
                    QuadrantPolicy::Displacement => {
                        if cycle == Some(BlockCycle::Square) {
                            return c_sq;
                        }
                        let di = b.row as i64 - a.row as i64;
                        let dj = b.col as i64 - a.col as i64;
                        if di * dj > 0 {
                            c_pos
                        } else {
                            c_neg
                        }
                    }
                }
            }
        }
    }
}

impl FromStr for EulerScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(EulerScheme::uniform()),
            "quadrant" => Ok(EulerScheme::quadrant()),
            "quadrant-displacement" => Ok(EulerScheme::quadrant_with(QuadrantPolicy::Displacement)),
            other => Err(Error::InvalidConfig(format!("unknown scheme {other:?}"))),
        }
    }
}

/// `+∞` on the diagonal, the scheme's constant for knight moves, and the
/// straight-line distance plus 4 otherwise.
pub fn euler_distance(a: Square, b: Square, scheme: &EulerScheme) -> f64 {
    let d2 = a.dist2(b);
    if d2 == 0 {
        f64::INFINITY
    } else if d2 == 5 {
        scheme.knight_cost(a, b)
    } else {
        (d2 as f64).sqrt() + 4.0
    }
}

pub fn build_board_instance(board: &Board, scheme: &EulerScheme) -> Result<GapInstance> {
    if board.area() < 4 {
        return Err(Error::InvalidBoard(format!("{board} board is too small, need at least 4 squares")));
    }
    scheme.validate(board)?;
    let squares: Vec<Square> = board.squares().collect();
    let rows: Vec<Vec<f64>> =
        squares.iter().map(|&a| squares.iter().map(|&b| euler_distance(a, b, scheme)).collect()).collect();
    Ok(GapInstance::from_matrix(&rows)?.with_coords(board.centers()))
}

/// Colour parity: a closed knight's tour alternates colours, so the area
/// must be even. This is necessary only; 4×4 passes and has no tour.
pub fn closed_tour_feasible(board: &Board) -> bool {
    board.area() % 2 == 0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnightReport {
    pub knight_edge_count: usize,
    pub non_knight_edges: Vec<(Square, Square)>,
    /// Pairs of non-adjacent edges whose drawn segments intersect.
    pub crossing_count: usize,
}

impl KnightReport {
    pub fn is_knight_cycle(&self) -> bool {
        self.non_knight_edges.is_empty()
    }
}

pub fn verify_knight_cycle(tour: &Tour, board: &Board) -> Result<KnightReport> {
    check_permutation(tour.order(), board.area())?;
    let mut knight_edge_count = 0;
    let mut non_knight_edges = Vec::new();
    for (a, b) in tour.edges() {
        let (sa, sb) = (board.square(a), board.square(b));
        if is_knight_move(sa, sb) {
            knight_edge_count += 1;
        } else {
            non_knight_edges.push((sa, sb));
        }
    }
    let crossing_count = tsp::crossings_among(tour.order(), &board.centers()).len();
    Ok(KnightReport { knight_edge_count, non_knight_edges, crossing_count })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KtpRun {
    pub board: Board,
    pub tour: Tour,
    pub report: KnightReport,
    /// The tour costs less than 4, i.e. it is a closed knight's tour.
    pub proven: bool,
    /// Parity check outcome (necessary condition only).
    pub parity_feasible: bool,
    pub restarts_used: u64,
}

/// Greedy restarts until a tour costs less than 4 or `budget` restarts have
/// run. Restarts come in batches of `config.restarts`, batch `b` seeded by
/// `config.for_round(b)`, so a run is reproducible from its seed. The best
/// tour found is returned either way; `proven` says whether it qualifies.
pub fn solve_ktp(board: &Board, scheme: &EulerScheme, config: &GreedyConfig, budget: u64) -> Result<KtpRun> {
    config.validate()?;
    if budget == 0 {
        return Err(Error::InvalidConfig("restart budget must be positive".into()));
    }
    let instance = build_board_instance(board, scheme)?;
    let search = GreedySearch::new(&instance);
    let mut scratch = Scratch::new(instance.n());
    let batch = config.restarts as u64;
    let mut best: Option<Tour> = None;
    let mut used = 0u64;
    let mut batch_config = config.for_round(0);
    while used < budget {
        if used % batch == 0 {
            batch_config = config.for_round(used / batch);
        }
        let cost = search.restart_tour(&batch_config, used % batch, &mut scratch);
        used += 1;
        if best.as_ref().is_none_or(|b| cost < b.cost()) {
            best = Some(Tour::from_parts(scratch.order.clone(), cost));
            if cost < KNIGHT_COST_THRESHOLD {
                break;
            }
        }
    }
    let tour = crate::gap::canonicalize(&best.expect("budget is positive"));
    let report = verify_knight_cycle(&tour, board)?;
    let proven = tour.cost() < KNIGHT_COST_THRESHOLD;
    assert!(!proven || report.is_knight_cycle(), "a tour below 4 must use knight moves only");
    Ok(KtpRun { board: *board, tour, report, proven, parity_feasible: closed_tour_feasible(board), restarts_used: used })
}
