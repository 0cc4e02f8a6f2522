use log::warn;

use crate::error::{Error, Result};
use crate::sat::{Clause, SatInstance, ABSENT, NEGATED, POSITIVE};

#[derive(Debug, Clone, PartialEq)]
pub struct DimacsFile {
    pub instance: SatInstance,
    /// Clauses holding both `x` and `x̄`, which a single digit cannot encode.
    pub tautologies_dropped: usize,
    pub declared_clauses: usize,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Reads DIMACS CNF. DIMACS variable `v` is `x_{v-1}`. Clauses may span
/// lines; a `%` line ends the clause list.
pub fn parse_dimacs(text: &str) -> Result<DimacsFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<u8> = Vec::new();
    let mut open = false;
    let mut tautology = false;
    let mut tautologies_dropped = 0;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let f: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() {
                return Err(parse_err(ln, "repeated problem line"));
            }
            if f.len() != 4 || f[0] != "p" || f[1] != "cnf" {
                return Err(parse_err(ln, format!("expected `p cnf <vars> <clauses>`, got {line:?}")));
            }
            let n: usize = f[2].parse().map_err(|_| parse_err(ln, "bad variable count"))?;
            let m: usize = f[3].parse().map_err(|_| parse_err(ln, "bad clause count"))?;
            if n == 0 {
                return Err(parse_err(ln, "no variables"));
            }
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or_else(|| parse_err(ln, "clause before the `p cnf` header"))?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| parse_err(ln, format!("bad literal {tok:?}")))?;
            if !open {
                current = vec![ABSENT; n];
                open = true;
                tautology = false;
            }
            if lit == 0 {
                open = false;
                if tautology {
                    warn!("line {ln}: dropping tautological clause");
                    tautologies_dropped += 1;
                    continue;
                }
                let clause = Clause::from_digits(std::mem::take(&mut current))
                    .map_err(|_| parse_err(ln, "empty clause"))?;
                clauses.push(clause);
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > n {
                return Err(parse_err(ln, format!("literal {lit} outside 1..={n}")));
            }
            let digit = if lit > 0 { POSITIVE } else { NEGATED };
            let slot = &mut current[var - 1];
            if *slot != ABSENT && *slot != digit {
                tautology = true;
            }
            *slot = digit;
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing `p cnf` header"))?;
    if open {
        return Err(parse_err(0, "last clause is not terminated by 0"));
    }
    if clauses.len() + tautologies_dropped != m {
        warn!("header declares {m} clauses, read {}", clauses.len() + tautologies_dropped);
    }
    Ok(DimacsFile { instance: SatInstance::new(n, clauses)?, tautologies_dropped, declared_clauses: m })
}

/// Writes an instance as DIMACS CNF.
pub fn write_dimacs(instance: &SatInstance) -> String {
    let mut out = format!("p cnf {} {}\n", instance.n(), instance.m());
    for c in instance.clauses() {
        for (p, &d) in c.digits().iter().enumerate() {
            match d {
                POSITIVE => out.push_str(&format!("{} ", p + 1)),
                NEGATED => out.push_str(&format!("-{} ", p + 1)),
                _ => {}
            }
        }
        out.push_str("0\n");
    }
    out
}
