//! CNF formulas with at most three literals per clause, DIMACS input and
//! brute-force model counting.

use std::fmt;

use thiserror::Error;

/// A variable (1-indexed) with its polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Literal {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Literal {
        Literal { var, positive: false }
    }

    /// Truth value under `assignment`, where `assignment[v - 1]` is variable `v`.
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] == self.positive
    }

    /// DIMACS integer form.
    pub fn to_int(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_int())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("clause {clause} has {len} literals, at most 3 are allowed")]
    Width { clause: usize, len: usize },
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("variable {var} is outside 1..={num_vars}")]
    VariableRange { var: usize, num_vars: usize },
}

/// Conjunction of clauses, each a disjunction of one to three literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

impl Cnf {
    /// Checks the clause widths and the variable range.
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Cnf, CnfError> {
        for (i, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(CnfError::EmptyClause { clause: i + 1 });
            }
            if c.len() > 3 {
                return Err(CnfError::Width { clause: i + 1, len: c.len() });
            }
            for l in c {
                if l.var == 0 || l.var > num_vars {
                    return Err(CnfError::VariableRange { var: l.var, num_vars });
                }
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// Builds a formula from DIMACS-style integers.
    pub fn from_ints(num_vars: usize, clauses: &[&[i64]]) -> Result<Cnf, CnfError> {
        let cl = clauses
            .iter()
            .map(|c| c.iter().map(|&v| Literal { var: v.unsigned_abs() as usize, positive: v > 0 }).collect())
            .collect();
        Cnf::new(num_vars, cl)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// Number of satisfying assignments by enumerating all `2^num_vars`
    /// settings. Intended for small formulas.
    pub fn count_models(&self) -> u128 {
        self.models().len() as u128
    }

    /// Every satisfying assignment, in binary counting order with variable 1
    /// as the least significant bit.
    pub fn models(&self) -> Vec<Vec<bool>> {
        assert!(self.num_vars < 32, "brute force is limited to 31 variables");
        let mut out = Vec::new();
        for code in 0u64..1 << self.num_vars {
            let a: Vec<bool> = (0..self.num_vars).map(|v| code >> v & 1 == 1).collect();
            if self.eval(&a) {
                out.push(a);
            }
        }
        out
    }

    /// DIMACS text.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&l.to_int().to_string());
                s.push(' ');
            }
            s.push_str("0\n");
        }
        s
    }
}

/// Parses DIMACS CNF. Comment lines start with `c`; clauses end with `0` and
/// may span lines. Clauses longer than three literals are rejected.
pub fn parse_dimacs(text: &str) -> Result<Cnf, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::Syntax { line, msg: "second problem line".into() });
            }
            let f: Vec<&str> = t.split_whitespace().collect();
            if f.len() != 4 || f[0] != "p" || f[1] != "cnf" {
                return Err(CnfError::Syntax { line, msg: "expected `p cnf <vars> <clauses>`".into() });
            }
            let parse =
                |s: &str| s.parse::<usize>().map_err(|_| CnfError::Syntax { line, msg: format!("bad number `{s}`") });
            header = Some((parse(f[2])?, parse(f[3])?));
            continue;
        }
        let (num_vars, _) = header.ok_or(CnfError::Syntax { line, msg: "clause before the problem line".into() })?;
        for tok in t.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| CnfError::Syntax { line, msg: format!("bad literal `{tok}`") })?;
            if v == 0 {
                if current.is_empty() {
                    return Err(CnfError::EmptyClause { clause: clauses.len() + 1 });
                }
                if current.len() > 3 {
                    return Err(CnfError::Width { clause: clauses.len() + 1, len: current.len() });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                let var = v.unsigned_abs() as usize;
                if var > num_vars {
                    return Err(CnfError::VariableRange { var, num_vars });
                }
                current.push(Literal { var, positive: v > 0 });
            }
        }
    }
    let (num_vars, num_clauses) = header.ok_or(CnfError::Syntax { line: 0, msg: "missing problem line".into() })?;
    if !current.is_empty() {
        return Err(CnfError::Syntax { line: text.lines().count(), msg: "last clause is not terminated by 0".into() });
    }
    if clauses.len() != num_clauses {
        return Err(CnfError::Syntax {
            line: 0,
            msg: format!("problem line announces {num_clauses} clauses, found {}", clauses.len()),
        });
    }
    if num_vars == 0 {
        return Err(CnfError::Syntax { line: 0, msg: "a formula needs at least one variable".into() });
    }
    Cnf::new(num_vars, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_clause() {
        let f = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![Literal::pos(1)]]);
        assert_eq!(f.count_models(), 1);
    }

    #[test]
    fn two_literal_clause() {
        let f = parse_dimacs("c comment\np cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![Literal::pos(1), Literal::neg(2)]]);
        assert_eq!(f.count_models(), 3);
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs("p cnf 3 2\n1 2\n3 0 -1\n0\n").unwrap();
        assert_eq!(f.clauses().len(), 2);
    }

    #[test]
    fn rejects_wide_and_malformed_input() {
        assert_eq!(parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"), Err(CnfError::Width { clause: 1, len: 4 }));
        assert!(matches!(parse_dimacs("1 0\n"), Err(CnfError::Syntax { .. })));
        assert!(matches!(parse_dimacs("p cnf 1 1\nx 0\n"), Err(CnfError::Syntax { .. })));
        assert!(matches!(parse_dimacs("p cnf 1 2\n1 0\n"), Err(CnfError::Syntax { .. })));
        assert_eq!(parse_dimacs("p cnf 1 1\n2 0\n"), Err(CnfError::VariableRange { var: 2, num_vars: 1 }));
        assert_eq!(parse_dimacs("p cnf 1 1\n0\n"), Err(CnfError::EmptyClause { clause: 1 }));
    }

    #[test]
    fn dimacs_round_trip() {
        let f = Cnf::from_ints(3, &[&[1, -2, 3], &[-1], &[2, 3]]).unwrap();
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }
}
