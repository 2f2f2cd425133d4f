//! DIMACS CNF reading and writing.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: malformed header")]
    BadHeader { line: usize },
    #[error("line {line}: bad literal '{token}'")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds {num_vars} variables")]
    LiteralOutOfRange {
        line: usize,
        lit: i64,
        num_vars: usize,
    },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error("header declares {expected} clauses, found {found}")]
    ClauseCountMismatch { expected: usize, found: usize },
}

/// A CNF formula: clauses of signed, 1-based variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    /// The first `k` clauses (all of them if there are fewer).
    pub fn truncated(&self, k: usize) -> CnfInstance {
        CnfInstance {
            num_vars: self.num_vars,
            clauses: self.clauses.iter().take(k).cloned().collect(),
        }
    }

    /// Whether the Boolean assignment (index `v - 1` for variable `v`)
    /// satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    pub fn to_dimacs(&self, comments: &[&str]) -> String {
        let mut out = String::new();
        for c in comments {
            let _ = writeln!(out, "c {c}");
        }
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for l in clause {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF. Clauses may span lines; a `%` line (as in the SATLIB
/// uniform random files) ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(DimacsError::BadHeader { line });
            }
            let v = parts[2]
                .parse()
                .map_err(|_| DimacsError::BadHeader { line })?;
            let c = parts[3]
                .parse()
                .map_err(|_| DimacsError::BadHeader { line })?;
            header = Some((v, c));
            continue;
        }
        let (num_vars, _) = header.ok_or(DimacsError::MissingHeader)?;
        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| DimacsError::BadLiteral {
                line,
                token: token.to_string(),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(DimacsError::EmptyClause { line });
                }
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > num_vars {
                return Err(DimacsError::LiteralOutOfRange {
                    line,
                    lit,
                    num_vars,
                });
            } else {
                current.push(lit as i32);
            }
        }
    }
    let (num_vars, expected) = header.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    if clauses.len() != expected {
        return Err(DimacsError::ClauseCountMismatch {
            expected,
            found: clauses.len(),
        });
    }
    Ok(CnfInstance { num_vars, clauses })
}
