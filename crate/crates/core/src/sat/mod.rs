//! SAT as number matching.
//!
//! A clause over `n` variables is a ternary digit string: digit `p` is 0 for
//! `x̄_p`, 1 for `x_p`, 2 when `x_p` is absent, written with `x_{n-1}` first.
//! An assignment satisfies a clause iff some present digit equals the
//! assignment's digit at that position. In a simple instance every clause
//! mentions every variable, clauses read as `n`-bit numbers, and an
//! assignment `y` fails exactly when `complement(y)` is one of the clauses.

mod knowledge;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use knowledge::{build_knowledge, Knowledge, Link, ListId};

/// Largest `n` for the structures that hold all `2^n` values.
pub const MAX_TABLE_VARIABLES: usize = 24;

/// Largest `n` a clause can be read as a radix-3 `u64`.
const MAX_TERNARY_DIGITS: usize = 40;

pub const NEGATED: u8 = 0;
pub const POSITIVE: u8 = 1;
pub const ABSENT: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    /// `digits[p]` is the sign of `x_p`.
    digits: Vec<u8>,
}

impl Clause {
    /// From digits indexed by variable (`digits[p]` belongs to `x_p`).
    pub fn from_digits(digits: Vec<u8>) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d > ABSENT) {
            return Err(Error::InvalidClause(format!("digit {d} is not 0, 1 or 2")));
        }
        if digits.iter().all(|&d| d == ABSENT) {
            return Err(Error::InvalidClause("clause has no literal".into()));
        }
        Ok(Clause { digits })
    }

    /// From an `n`-bit clause number (a simple clause).
    pub fn from_value(value: u64, n: usize) -> Result<Self> {
        check_value(value, n)?;
        Self::from_digits((0..n).map(|p| ((value >> p) & 1) as u8).collect())
    }

    pub fn n(&self) -> usize {
        self.digits.len()
    }

    pub fn digit(&self, p: usize) -> u8 {
        self.digits[p]
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn is_simple(&self) -> bool {
        !self.digits.contains(&ABSENT)
    }

    /// Number of literals.
    pub fn width(&self) -> usize {
        self.digits.iter().filter(|&&d| d != ABSENT).count()
    }

    /// `(care, value)` bit masks; `None` past 64 variables.
    fn masks(&self) -> Option<(u64, u64)> {
        if self.n() > 64 {
            return None;
        }
        let mut care = 0u64;
        let mut value = 0u64;
        for (p, &d) in self.digits.iter().enumerate() {
            if d != ABSENT {
                care |= 1 << p;
                value |= (d as u64) << p;
            }
        }
        Some((care, value))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in self.digits.iter().rev() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Parses a digit string written most significant (`x_{n-1}`) first.
impl FromStr for Clause {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Clause::from_digits(parse_digits(s)?)
    }
}

fn parse_digits(s: &str) -> Result<Vec<u8>> {
    s.trim()
        .chars()
        .rev()
        .map(|c| match c {
            '0' => Ok(NEGATED),
            '1' => Ok(POSITIVE),
            '2' => Ok(ABSENT),
            _ => Err(Error::InvalidClause(format!("malformed digit {c:?} in {s:?}"))),
        })
        .collect()
}

/// A clause read as a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClauseNumber {
    Binary(u64),
    Ternary(u64),
}

/// Radix 2 when every variable is present, radix 3 otherwise.
pub fn clause_to_number(clause: &Clause) -> Result<ClauseNumber> {
    let n = clause.n();
    if clause.is_simple() {
        if n > 64 {
            return Err(Error::MemoryLimit { n, limit: 64 });
        }
        Ok(ClauseNumber::Binary(clause.masks().expect("n <= 64").1))
    } else {
        if n > MAX_TERNARY_DIGITS {
            return Err(Error::MemoryLimit { n, limit: MAX_TERNARY_DIGITS });
        }
        Ok(ClauseNumber::Ternary(clause.digits.iter().rev().fold(0u64, |acc, &d| acc * 3 + d as u64)))
    }
}

fn check_value(value: u64, n: usize) -> Result<()> {
    if n < 64 && value >> n != 0 {
        return Err(Error::OutOfRange { value, bits: n });
    }
    Ok(())
}

fn all_ones(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Bitwise complement within `n` bits.
pub fn complement(y: u64, n: usize) -> Result<u64> {
    if n > 64 {
        return Err(Error::MemoryLimit { n, limit: 64 });
    }
    check_value(y, n)?;
    Ok(!y & all_ones(n))
}

/// Writes `value` as `n` binary digits, `x_{n-1}` first.
pub fn format_bits(value: u64, n: usize) -> String {
    (0..n).rev().map(|p| if (value >> p) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Reads an `n`-bit number written `x_{n-1}` first.
pub fn parse_bits(s: &str) -> Result<u64> {
    let s = s.trim();
    if s.is_empty() || s.len() > 64 {
        return Err(Error::InvalidClause(format!("{s:?} is not a binary number of 1 to 64 digits")));
    }
    s.chars().try_fold(0u64, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(Error::InvalidClause(format!("malformed binary digit {c:?}"))),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatInstance {
    n: usize,
    clauses: Vec<Clause>,
    simple: bool,
    #[serde(skip)]
    masks: Option<Vec<(u64, u64)>>,
}

impl SatInstance {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidClause("instance needs at least one variable".into()));
        }
        for c in &clauses {
            if c.n() != n {
                return Err(Error::LengthMismatch { expected: n, got: c.n() });
            }
        }
        let simple = clauses.iter().all(Clause::is_simple);
        let masks = clauses.iter().map(Clause::masks).collect();
        Ok(SatInstance { n, clauses, simple, masks })
    }

    /// From digit strings written `x_{n-1}` first.
    pub fn parse(n: usize, clauses: &[&str]) -> Result<Self> {
        let parsed = clauses.iter().map(|s| s.parse()).collect::<Result<Vec<Clause>>>()?;
        Self::new(n, parsed)
    }

    /// Simple instance from clause numbers.
    pub fn from_values(n: usize, values: &[u64]) -> Result<Self> {
        let clauses = values.iter().map(|&v| Clause::from_value(v, n)).collect::<Result<Vec<_>>>()?;
        Self::new(n, clauses)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    /// Clause numbers of a simple instance, in clause order.
    pub fn values(&self) -> Result<Vec<u64>> {
        if !self.simple {
            return Err(Error::NotSimple);
        }
        let masks = self.masks.as_ref().ok_or(Error::MemoryLimit { n: self.n, limit: 64 })?;
        Ok(masks.iter().map(|&(_, v)| v).collect())
    }

    /// 1 iff every clause shares a present digit with the assignment `y`.
    pub fn evaluate(&self, y: u64) -> Result<bool> {
        let masks = self.masks.as_ref().ok_or(Error::MemoryLimit { n: self.n, limit: 64 })?;
        check_value(y, self.n)?;
        Ok(masks.iter().all(|&(care, value)| !(y ^ value) & care != 0))
    }

    /// Evaluates a ternary assignment (digit 2 = unassigned), written
    /// `x_{n-1}` first.
    pub fn evaluate_ternary(&self, assignment: &str) -> Result<bool> {
        let digits = parse_digits(assignment)?;
        if digits.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: digits.len() });
        }
        Ok(self.clauses.iter().all(|c| c.digits.iter().zip(&digits).any(|(&cd, &ad)| cd != ABSENT && cd == ad)))
    }

    /// `m × 2n` literal usage: column `p` for `x_p`, column `n + p` for `x̄_p`.
    pub fn usage_matrix(&self) -> Vec<Vec<u8>> {
        self.clauses
            .iter()
            .map(|c| {
                let mut row = vec![0u8; 2 * self.n];
                for (p, &d) in c.digits.iter().enumerate() {
                    match d {
                        POSITIVE => row[p] = 1,
                        NEGATED => row[self.n + p] = 1,
                        _ => {}
                    }
                }
                row
            })
            .collect()
    }

    fn check_table_size(&self) -> Result<()> {
        if !self.simple {
            return Err(Error::NotSimple);
        }
        if self.n > MAX_TABLE_VARIABLES {
            return Err(Error::MemoryLimit { n: self.n, limit: MAX_TABLE_VARIABLES });
        }
        Ok(())
    }
}

/// The clause numbers cover all of `[0, 2^n)`.
pub fn is_unsatisfiable_by_coverage(instance: &SatInstance) -> Result<bool> {
    let values = instance.values()?;
    let n = instance.n();
    if n >= 63 {
        return Ok(false);
    }
    let mut seen = std::collections::HashSet::with_capacity(values.len());
    for v in values {
        seen.insert(v);
    }
    Ok(seen.len() as u64 == 1u64 << n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum SatOutcome {
    /// A satisfying assignment.
    Solution(u64),
    /// A satisfying assignment found outside the clause values; it also
    /// satisfies the instance extended by its own complement clause.
    Augmented(u64),
    Unsatisfiable,
}

impl SatOutcome {
    pub fn witness(&self) -> Option<u64> {
        match *self {
            SatOutcome::Solution(y) | SatOutcome::Augmented(y) => Some(y),
            SatOutcome::Unsatisfiable => None,
        }
    }

    pub fn is_satisfiable(&self) -> bool {
        self.witness().is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatRun {
    pub outcome: SatOutcome,
    /// Calls to `evaluate`.
    pub evaluations: u64,
    /// Distinct values marked as failing.
    pub marked: u64,
}

/// Walks the clause values, returning the first one that satisfies. When
/// none does, every value is marked; all `2^n` marked means unsatisfiable.
/// Otherwise the neighbours just below the smallest and above the largest
/// marked value are probed, then the first unmarked satisfying value.
pub fn solve_deterministic(instance: &SatInstance) -> Result<SatRun> {
    instance.check_table_size()?;
    let n = instance.n();
    let size = 1u64 << n;
    let mut marked = vec![false; size as usize];
    let (mut mi, mut mx, mut ct) = (size, None::<u64>, 0u64);
    let mut evaluations = 0u64;
    let mut eval = |y: u64| -> bool {
        evaluations += 1;
        instance.evaluate(y).expect("value in range")
    };
    for k in instance.values()? {
        if marked[k as usize] {
            continue;
        }
        if eval(k) {
            return Ok(SatRun { outcome: SatOutcome::Solution(k), evaluations, marked: ct });
        }
        marked[k as usize] = true;
        ct += 1;
        mi = mi.min(k);
        mx = Some(mx.map_or(k, |x| x.max(k)));
    }
    let outcome = if ct == size {
        SatOutcome::Unsatisfiable
    } else if mi > 1 && mi != size && eval(mi - 1) {
        SatOutcome::Augmented(mi - 1)
    } else if mx.is_some_and(|x| x < size - 1) && eval(mx.unwrap() + 1) {
        SatOutcome::Augmented(mx.unwrap() + 1)
    } else {
        match (0..size).find(|&v| !marked[v as usize] && eval(v)) {
            Some(v) => SatOutcome::Augmented(v),
            None => SatOutcome::Unsatisfiable,
        }
    };
    Ok(SatRun { outcome, evaluations, marked: ct })
}

/// Evaluates distinct uniformly drawn values until one satisfies or all
/// `2^n` have failed. Draws come from a lazily materialised Fisher–Yates
/// shuffle, so each is a fresh unmarked value.
pub fn solve_probabilistic(instance: &SatInstance, seed: u64) -> Result<SatRun> {
    instance.check_table_size()?;
    let size = 1u64 << instance.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut swapped: HashMap<u64, u64> = HashMap::new();
    for t in 0..size {
        let j = rng.gen_range(t..size);
        let at_j = swapped.get(&j).copied().unwrap_or(j);
        let at_t = swapped.get(&t).copied().unwrap_or(t);
        swapped.insert(j, at_t);
        let k = at_j;
        if instance.evaluate(k)? {
            return Ok(SatRun { outcome: SatOutcome::Solution(k), evaluations: t + 1, marked: t });
        }
    }
    Ok(SatRun { outcome: SatOutcome::Unsatisfiable, evaluations: size, marked: size })
}

/// First satisfying assignment in increasing order (ternary instances
/// included), or `None`.
pub fn exhaustive_solve(instance: &SatInstance) -> Result<Option<u64>> {
    if instance.n() > MAX_TABLE_VARIABLES {
        return Err(Error::MemoryLimit { n: instance.n(), limit: MAX_TABLE_VARIABLES });
    }
    for y in 0..1u64 << instance.n() {
        if instance.evaluate(y)? {
            return Ok(Some(y));
        }
    }
    Ok(None)
}
