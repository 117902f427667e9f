//! Candidate elimination and backtracking search.
//!
//! Every empty cell keeps a set of still-possible arrows. An arrow is removed
//! when it leaves the board, when its box already holds a fixed copy of it, or
//! when following the fixed arrows from its target leads back to the cell.
//! Cells left with one candidate are fixed, and the process repeats until
//! nothing changes. Search branches on a cell with the fewest candidates.

use std::collections::VecDeque;

use crate::board::{is_valid, Assignment, BoardSpec, CellContent, Coord, Direction};

/// Per-cell possibilities. Fixed cells (presets and decisions) hold their value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateGrid {
    n: usize,
    cand: Vec<u8>,
    fixed: Vec<Option<CellContent>>,
    box_used: Vec<u8>,
}

impl CandidateGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Value of a fixed cell.
    pub fn fixed(&self, c: Coord) -> Option<CellContent> {
        self.fixed[c.index(self.n)]
    }

    /// Remaining arrows of an undecided cell, in canonical order; the single
    /// value's arrow for a fixed arrow cell; empty for the Roma cell.
    pub fn candidates(&self, c: Coord) -> Vec<Direction> {
        let m = self.cand[c.index(self.n)];
        Direction::ALL.into_iter().filter(|d| m & d.bit() != 0).collect()
    }

    /// Candidate bit mask, bit `Direction::index()`.
    pub fn mask(&self, c: Coord) -> u8 {
        self.cand[c.index(self.n)]
    }

    pub fn is_complete(&self) -> bool {
        self.fixed.iter().all(|f| f.is_some())
    }

    /// Number of undecided cells.
    pub fn undecided(&self) -> usize {
        self.fixed.iter().filter(|f| f.is_none()).count()
    }

    /// The filling once every cell is fixed.
    pub fn to_assignment(&self) -> Option<Assignment> {
        let content: Option<Vec<CellContent>> = self.fixed.iter().copied().collect();
        content.map(|c| Assignment::new(self.n, c))
    }
}

/// Propagation reached an empty candidate set or a rule break among fixed cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contradiction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Term {
    /// Flow reaches this undecided cell.
    Open(usize),
    /// Flow stops at the Roma cell or leaves the board.
    Stop,
    /// Fixed arrows form a cycle.
    Loop,
}

/// Follows fixed arrows starting at cell `i`.
fn terminal(g: &CandidateGrid, mut i: usize) -> Term {
    let n = g.n;
    for _ in 0..=n * n {
        match g.fixed[i] {
            None => return Term::Open(i),
            Some(CellContent::Roma) => return Term::Stop,
            Some(CellContent::Arrow(d)) => match Coord::from_index(i, n).step(d, n) {
                Some(c) => i = c.index(n),
                None => return Term::Stop,
            },
        }
    }
    Term::Loop
}

/// Arrows of undecided cell `i` surviving the three elimination rules.
fn surviving(spec: &BoardSpec, g: &CandidateGrid, i: usize) -> u8 {
    let n = g.n;
    let c = Coord::from_index(i, n);
    let used = g.box_used[spec.partition().box_of_index(i)];
    let mut m = g.cand[i];
    for d in Direction::ALL {
        if m & d.bit() == 0 {
            continue;
        }
        let keep = match c.step(d, n) {
            None => false,
            Some(t) => used & d.bit() == 0 && terminal(g, t.index(n)) != Term::Open(i),
        };
        if !keep {
            m &= !d.bit();
        }
    }
    m
}

fn blank_grid(spec: &BoardSpec) -> Result<CandidateGrid, Contradiction> {
    let n = spec.n();
    let mut g = CandidateGrid {
        n,
        cand: vec![0b1111; n * n],
        fixed: spec.presets().to_vec(),
        box_used: vec![0; spec.partition().num_boxes()],
    };
    let mut ok = true;
    for i in 0..n * n {
        match g.fixed[i] {
            Some(CellContent::Arrow(d)) => {
                g.cand[i] = d.bit();
                let b = spec.partition().box_of_index(i);
                if g.box_used[b] & d.bit() != 0 || Coord::from_index(i, n).step(d, n).is_none() {
                    ok = false;
                }
                g.box_used[b] |= d.bit();
            }
            Some(CellContent::Roma) => g.cand[i] = 0,
            None => {}
        }
    }
    if ok && (0..n * n).any(|i| g.fixed[i].is_some() && terminal(&g, i) == Term::Loop) {
        ok = false;
    }
    if ok {
        Ok(g)
    } else {
        Err(Contradiction)
    }
}

/// One elimination pass over every empty cell, without fixing anything. Broken
/// presets yield a grid whose empty cells are all empty sets (or, with no
/// empty cells, a grid that [`propagate`] rejects).
pub fn initial_candidates(spec: &BoardSpec) -> CandidateGrid {
    match blank_grid(spec) {
        Ok(mut g) => {
            for i in 0..g.cand.len() {
                if g.fixed[i].is_none() {
                    g.cand[i] = surviving(spec, &g, i);
                }
            }
            g
        }
        Err(Contradiction) => {
            let n = spec.n();
            let mut g = CandidateGrid {
                n,
                cand: vec![0; n * n],
                fixed: spec.presets().to_vec(),
                box_used: vec![0b1111; spec.partition().num_boxes()],
            };
            for i in 0..n * n {
                if let Some(CellContent::Arrow(d)) = g.fixed[i] {
                    g.cand[i] = d.bit();
                }
            }
            g
        }
    }
}

fn fix(
    spec: &BoardSpec,
    g: &mut CandidateGrid,
    i: usize,
    d: Direction,
    queue: &mut VecDeque<usize>,
    queued: &mut [bool],
) -> Result<(), Contradiction> {
    let n = g.n;
    let b = spec.partition().box_of_index(i);
    if g.box_used[b] & d.bit() != 0 {
        return Err(Contradiction);
    }
    let next = Coord::from_index(i, n).step(d, n).ok_or(Contradiction)?;
    g.fixed[i] = Some(CellContent::Arrow(d));
    g.cand[i] = d.bit();
    g.box_used[b] |= d.bit();
    let mut push = |j: usize, g: &CandidateGrid| {
        if g.fixed[j].is_none() && !queued[j] {
            queued[j] = true;
            queue.push_back(j);
        }
    };
    match terminal(g, next.index(n)) {
        Term::Loop => return Err(Contradiction),
        Term::Open(t) => push(t, g),
        Term::Stop => {}
    }
    for c in spec.partition().cells(b) {
        push(c.index(n), g);
    }
    Ok(())
}

fn run_queue(
    spec: &BoardSpec,
    g: &mut CandidateGrid,
    queue: &mut VecDeque<usize>,
    queued: &mut [bool],
) -> Result<(), Contradiction> {
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        if g.fixed[i].is_some() {
            continue;
        }
        let m = surviving(spec, g, i);
        g.cand[i] = m;
        if m == 0 {
            return Err(Contradiction);
        }
        if m.count_ones() == 1 {
            fix(spec, g, i, Direction::from_index(m.trailing_zeros() as usize), queue, queued)?;
        }
    }
    Ok(())
}

/// Eliminates and fixes singletons until nothing changes.
pub fn propagate(spec: &BoardSpec, g: &CandidateGrid) -> Result<CandidateGrid, Contradiction> {
    let mut fresh = blank_grid(spec)?;
    // keep restrictions already present in `g`, including earlier decisions
    for i in 0..g.cand.len() {
        if fresh.fixed[i].is_none() {
            fresh.cand[i] &= g.cand[i];
        }
    }
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut queued = vec![false; g.cand.len()];
    for i in 0..g.cand.len() {
        if fresh.fixed[i].is_none() {
            if let Some(CellContent::Arrow(d)) = g.fixed[i] {
                fix(spec, &mut fresh, i, d, &mut queue, &mut queued)?;
            }
        }
    }
    for i in 0..g.cand.len() {
        if fresh.fixed[i].is_none() && !queued[i] {
            queued[i] = true;
            queue.push_back(i);
        }
    }
    run_queue(spec, &mut fresh, &mut queue, &mut queued)?;
    Ok(fresh)
}

/// Copy of `g` with cell `c` set to `d`, propagated to a fixpoint.
pub fn decide(spec: &BoardSpec, g: &CandidateGrid, c: Coord, d: Direction) -> Result<CandidateGrid, Contradiction> {
    let i = c.index(g.n);
    if g.fixed[i].is_some() || g.cand[i] & d.bit() == 0 {
        return Err(Contradiction);
    }
    let mut h = g.clone();
    let mut queue = VecDeque::new();
    let mut queued = vec![false; g.cand.len()];
    fix(spec, &mut h, i, d, &mut queue, &mut queued)?;
    run_queue(spec, &mut h, &mut queue, &mut queued)?;
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first solution.
    First,
    /// Count every solution.
    Count,
    /// Stop after the second solution.
    AtMostTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    /// First solution found, if any.
    pub witness: Option<Assignment>,
    /// Exact count in `Count` mode, count up to two in `AtMostTwo` mode.
    pub count: Option<u128>,
    /// Search-tree nodes visited, the root included.
    pub nodes: u64,
}

struct Search<'a> {
    spec: &'a BoardSpec,
    stop_at: u128,
    count: u128,
    nodes: u64,
    witness: Option<Assignment>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.count >= self.stop_at
    }

    fn leaf(&mut self, g: &CandidateGrid) {
        let a = g.to_assignment().expect("complete grid");
        if is_valid(self.spec, &a).is_empty() {
            self.count += 1;
            if self.witness.is_none() {
                self.witness = Some(a);
            }
        }
    }

    /// Undecided cell with the fewest candidates, lowest flat index on ties.
    fn pick(g: &CandidateGrid) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for i in 0..g.cand.len() {
            if g.fixed[i].is_none() {
                let k = g.cand[i].count_ones();
                if best.map_or(true, |(bk, _)| k < bk) {
                    best = Some((k, i));
                    if k <= 2 {
                        break;
                    }
                }
            }
        }
        best.map(|(_, i)| i)
    }

    fn node(&mut self, g: CandidateGrid) {
        match Search::pick(&g) {
            None => self.leaf(&g),
            Some(i) => {
                let c = Coord::from_index(i, g.n);
                for d in Direction::ALL {
                    if g.cand[i] & d.bit() == 0 {
                        continue;
                    }
                    self.nodes += 1;
                    if let Ok(h) = decide(self.spec, &g, c, d) {
                        self.node(h);
                    }
                    if self.done() {
                        return;
                    }
                }
            }
        }
    }
}

/// Depth-first search after propagation.
pub fn search(spec: &BoardSpec, mode: SearchMode) -> SolveResult {
    let stop_at = match mode {
        SearchMode::First => 1,
        SearchMode::Count => u128::MAX,
        SearchMode::AtMostTwo => 2,
    };
    let mut s = Search { spec, stop_at, count: 0, nodes: 1, witness: None };
    if let Ok(g) = propagate(spec, &initial_candidates(spec)) {
        s.node(g);
    }
    SolveResult {
        status: if s.count > 0 { Status::Sat } else { Status::Unsat },
        witness: s.witness,
        count: match mode {
            SearchMode::First => None,
            _ => Some(s.count),
        },
        nodes: s.nodes,
    }
}

/// Exact number of solutions.
pub fn count(spec: &BoardSpec) -> u128 {
    search(spec, SearchMode::Count).count.unwrap_or(0)
}
