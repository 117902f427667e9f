//! Exhaustive ground truth: enumerate every filling of the empty cells,
//! keep the valid ones, and search hint sets by exhaustion.
//!
//! The enumeration visits empty cells in increasing flat index (`y * n + x`)
//! and tries arrows in the order ↑, ↓, ←, →. Branches are cut as soon as an
//! arrow leaves the board, repeats inside its box, or closes a cycle through
//! already filled cells; each complete filling is then re-checked with the
//! full rule check of [`crate::board::is_valid`].

use thiserror::Error;

use crate::board::{is_valid, Assignment, BoardSpec, CellContent, Coord, Direction};

/// Default bound on the number of empty cells.
pub const DEFAULT_CAP: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{k} empty cells exceed the enumeration cap of {cap}")]
    CapExceeded { k: usize, cap: usize },
    #[error("the board has no solution")]
    Unsatisfiable,
}

/// Enumerated solutions. `count` is always exact; `solutions` holds at most
/// the requested number of them and `truncated` says whether some were left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub solutions: Vec<Assignment>,
    pub truncated: bool,
    pub count: u128,
    /// Complete fillings checked for validity.
    pub leaves: u64,
}

struct Walker<'a> {
    spec: &'a BoardSpec,
    n: usize,
    empty: Vec<usize>,
    content: Vec<Option<CellContent>>,
    box_used: Vec<u8>,
    keep: usize,
    found: Vec<Assignment>,
    count: u128,
    leaves: u64,
}

impl<'a> Walker<'a> {
    fn new(spec: &'a BoardSpec, keep: usize) -> Walker<'a> {
        let n = spec.n();
        let content = spec.presets().to_vec();
        let mut box_used = vec![0u8; spec.partition().num_boxes()];
        for (i, p) in content.iter().enumerate() {
            if let Some(CellContent::Arrow(d)) = p {
                box_used[spec.partition().box_of_index(i)] |= d.bit();
            }
        }
        let empty = (0..n * n).filter(|&i| content[i].is_none()).collect();
        Walker { spec, n, empty, content, box_used, keep, found: Vec::new(), count: 0, leaves: 0 }
    }

    fn closes_cycle(&self, start: usize, d: Direction) -> bool {
        let n = self.n;
        let mut cur = Coord::from_index(start, n).step(d, n);
        let mut steps = 0;
        while let Some(c) = cur {
            let i = c.index(n);
            if i == start {
                return true;
            }
            steps += 1;
            if steps > n * n {
                return false;
            }
            cur = match self.content[i] {
                Some(CellContent::Arrow(e)) => c.step(e, n),
                _ => None,
            };
        }
        false
    }

    fn walk(&mut self, depth: usize) {
        if depth == self.empty.len() {
            self.leaves += 1;
            let a = Assignment::new(self.n, self.content.iter().map(|c| c.unwrap()).collect());
            if is_valid(self.spec, &a).is_empty() {
                self.count += 1;
                if self.found.len() < self.keep {
                    self.found.push(a);
                }
            }
            return;
        }
        let i = self.empty[depth];
        let c = Coord::from_index(i, self.n);
        let b = self.spec.partition().box_of_index(i);
        for d in Direction::ALL {
            if c.step(d, self.n).is_none() || self.box_used[b] & d.bit() != 0 || self.closes_cycle(i, d) {
                continue;
            }
            self.content[i] = Some(CellContent::Arrow(d));
            self.box_used[b] |= d.bit();
            self.walk(depth + 1);
            self.box_used[b] &= !d.bit();
        }
        self.content[i] = None;
    }
}

/// Enumerates solutions, keeping at most `limit` of them (all when `None`).
pub fn oracle_enumerate_capped(spec: &BoardSpec, limit: Option<usize>, cap: usize) -> Result<SolutionSet, OracleError> {
    let k = spec.k();
    if k > cap {
        return Err(OracleError::CapExceeded { k, cap });
    }
    let mut w = Walker::new(spec, limit.unwrap_or(usize::MAX));
    w.walk(0);
    let truncated = (w.found.len() as u128) < w.count;
    Ok(SolutionSet { solutions: w.found, truncated, count: w.count, leaves: w.leaves })
}

/// [`oracle_enumerate_capped`] with [`DEFAULT_CAP`].
pub fn oracle_enumerate(spec: &BoardSpec, limit: Option<usize>) -> Result<SolutionSet, OracleError> {
    oracle_enumerate_capped(spec, limit, DEFAULT_CAP)
}

/// Exact number of solutions.
pub fn oracle_count_capped(spec: &BoardSpec, cap: usize) -> Result<u128, OracleError> {
    oracle_enumerate_capped(spec, Some(0), cap).map(|s| s.count)
}

/// [`oracle_count_capped`] with [`DEFAULT_CAP`].
pub fn oracle_count(spec: &BoardSpec) -> Result<u128, OracleError> {
    oracle_count_capped(spec, DEFAULT_CAP)
}

/// Advances `idx` to the next `r`-subset of `0..m` in lexicographic order.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let r = idx.len();
    for p in (0..r).rev() {
        if idx[p] < m - r + p {
            idx[p] += 1;
            for q in p + 1..r {
                idx[q] = idx[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Smallest hint set (at most `k` cells) after which exactly one solution
/// remains. Cell subsets are tried by increasing size, then lexicographically
/// in flat-index order; values per cell in the order ↑, ↓, ←, →. Every
/// returned hint set agrees with some solution.
pub fn fcp_bruteforce_capped(
    spec: &BoardSpec,
    k: usize,
    cap: usize,
) -> Result<Option<Vec<(Coord, CellContent)>>, OracleError> {
    let all = oracle_enumerate_capped(spec, None, cap)?;
    if all.count == 0 {
        return Err(OracleError::Unsatisfiable);
    }
    let empty = spec.empty_cells();
    let sols = &all.solutions;
    for size in 0..=k.min(empty.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let cells: Vec<Coord> = idx.iter().map(|&p| empty[p]).collect();
            // value tuples in odometer order, last cell fastest
            for code in 0..4usize.pow(size as u32) {
                let vals: Vec<Direction> =
                    (0..size).map(|p| Direction::ALL[(code / 4usize.pow((size - 1 - p) as u32)) % 4]).collect();
                let matching = sols
                    .iter()
                    .filter(|a| cells.iter().zip(&vals).all(|(&c, &d)| a.get(c) == CellContent::Arrow(d)))
                    .take(2)
                    .count();
                if matching == 1 {
                    return Ok(Some(cells.iter().zip(&vals).map(|(&c, &d)| (c, CellContent::Arrow(d))).collect()));
                }
            }
            if size == 0 || !next_combination(&mut idx, empty.len()) {
                break;
            }
        }
    }
    Ok(None)
}

/// [`fcp_bruteforce_capped`] with [`DEFAULT_CAP`].
pub fn fcp_bruteforce(spec: &BoardSpec, k: usize) -> Result<Option<Vec<(Coord, CellContent)>>, OracleError> {
    fcp_bruteforce_capped(spec, k, DEFAULT_CAP)
}
