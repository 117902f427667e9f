//! Row-sweep dynamic program over row configurations.
//!
//! Rows are processed from the top row (`y = n - 1`) downwards. After a row
//! has been folded in, everything above it is summarised by a configuration:
//!
//! * the row's cell contents,
//! * for every cell whose box continues into the next row, the arrows that box
//!   has already used,
//! * for every ↑ in the row, its *mouth*: the ↓ of the same row through which
//!   the flow leaves the processed region again, or the Roma cell if the flow
//!   drains there.
//!
//! Flows of the processed region cannot cross, so the ↑/↓ pairs nest like
//! brackets. [`RowConfiguration::word`] prints a configuration in that bracket
//! notation. Each configuration carries the exact number of partial fillings
//! that reach it, which makes the final sum an exact solution count.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::board::{Assignment, BoardSpec, BoxPartition, CellContent, Coord, Direction};
use crate::prop::{SolveResult, Status};

/// Default bound on configurations kept for one row.
pub const DEFAULT_CONFIG_CAP: usize = 5_000_000;

const ROMA_CODE: u8 = 4;
const NO_MOUTH: u8 = 255;
const MOUTH_ROMA: u8 = 254;
const NO_CARRY: u8 = 255;

fn code(c: CellContent) -> u8 {
    match c {
        CellContent::Arrow(d) => d.index() as u8,
        CellContent::Roma => ROMA_CODE,
    }
}

fn decode(c: u8) -> CellContent {
    if c == ROMA_CODE {
        CellContent::Roma
    } else {
        CellContent::Arrow(Direction::from_index(c as usize))
    }
}

const UP: u8 = 0;
const DOWN: u8 = 1;
const LEFT: u8 = 2;
const RIGHT: u8 = 3;

/// Box information shown on a sweep-row cell whose box continues below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Carry {
    /// The box ends in this row, or has used only this cell's arrow so far.
    None,
    /// Exactly one arrow is still available to the box.
    Single(Direction),
    /// Exactly two arrows are still available to the box.
    Pair([Direction; 2]),
}

/// One cell of a row configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSymbol {
    pub base: CellContent,
    pub carry: Carry,
    /// 0: box ends here; 1 and 2: that many arrows left; 3: box continues with
    /// three arrows left.
    pub type_tag: u8,
}

/// Where the flow entering the processed region through a ↑ leaves it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mouth {
    /// Through the ↓ in this column of the same row.
    Down(usize),
    Roma,
}

/// A sweep-row configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowConfiguration {
    pub cells: Vec<RowSymbol>,
    /// Mouth of every ↑ cell, `None` elsewhere.
    pub mouths: Vec<Option<Mouth>>,
    /// Whether the Roma cell lies in the processed region.
    pub roma_above: bool,
}

/// Drops brackets and carries, keeping the plain cell contents.
pub fn row_content(cfg: &RowConfiguration) -> Vec<CellContent> {
    cfg.cells.iter().map(|s| s.base).collect()
}

fn remaining_dirs(used: u8) -> Vec<Direction> {
    Direction::ALL.into_iter().filter(|d| used & d.bit() == 0).collect()
}

impl RowConfiguration {
    fn from_key(spec: &BoardSpec, y: usize, key: &[u8]) -> RowConfiguration {
        let n = spec.n();
        let cells = (0..n)
            .map(|x| {
                let base = decode(key[x]);
                let used = key[2 * n + x];
                let (carry, type_tag) = if used == NO_CARRY {
                    (Carry::None, 0)
                } else {
                    let left = remaining_dirs(used);
                    match left.len() {
                        1 => (Carry::Single(left[0]), 1),
                        2 => (Carry::Pair([left[0], left[1]]), 2),
                        _ => (Carry::None, 3),
                    }
                };
                RowSymbol { base, carry, type_tag }
            })
            .collect();
        let mouths = (0..n)
            .map(|x| match key[n + x] {
                NO_MOUTH => None,
                MOUTH_ROMA => Some(Mouth::Roma),
                e => Some(Mouth::Down(e as usize)),
            })
            .collect();
        RowConfiguration { cells, mouths, roma_above: spec.roma().y >= y }
    }

    fn to_key(&self, spec: &BoardSpec, y: usize) -> Vec<u8> {
        let n = self.cells.len();
        let p = spec.partition();
        let mut key = vec![0u8; 3 * n];
        for (x, s) in self.cells.iter().enumerate() {
            key[x] = code(s.base);
            key[n + x] = match self.mouths[x] {
                None => NO_MOUTH,
                Some(Mouth::Roma) => MOUTH_ROMA,
                Some(Mouth::Down(e)) => e as u8,
            };
            let continues = y > 0 && p.box_of(Coord::new(x, y)) == p.box_of(Coord::new(x, y - 1));
            key[2 * n + x] = if !continues {
                NO_CARRY
            } else {
                // the carry of a box is read off any of its annotated cells
                match &s.carry {
                    Carry::Single(a) => 0b1111 & !a.bit(),
                    Carry::Pair([a, b]) => 0b1111 & !a.bit() & !b.bit(),
                    Carry::None => {
                        let b = p.box_of(Coord::new(x, y));
                        let mut used = 0;
                        for (x2, s2) in self.cells.iter().enumerate() {
                            if p.box_of(Coord::new(x2, y)) == b {
                                if let CellContent::Arrow(d) = s2.base {
                                    used |= d.bit();
                                }
                            }
                        }
                        used
                    }
                }
            };
        }
        key
    }

    /// Bracket word: cell symbols interleaved with the bracket structure.
    ///
    /// A ↑ whose mouth is the ↓ in column `d` is paired with it: when `d`
    /// lies to its left, `[` follows the ↓ and `]` follows the ↑; when `d`
    /// lies to its right, `[` precedes the ↑ and `]` precedes the ↓. Inside
    /// one gap, closing brackets come first (innermost first), then opening
    /// brackets (outermost first). Roma-draining ↑ cells get no bracket.
    pub fn word(&self) -> String {
        let n = self.cells.len();
        // gaps 0..=n; gap g sits before cell g
        let mut opens: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        let mut closes: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (u, m) in self.mouths.iter().enumerate() {
            if let Some(Mouth::Down(d)) = *m {
                let (go, gc) = if d < u { (d + 1, u + 1) } else { (u, d) };
                opens[go].push(gc);
                closes[gc].push(go);
            }
        }
        let mut s = String::new();
        for g in 0..=n {
            // innermost first: the latest opening closes first
            let mut c = closes[g].clone();
            c.sort_unstable_by(|a, b| b.cmp(a));
            for _ in c {
                s.push(']');
            }
            // outermost first: the latest closing opens first
            let mut o = opens[g].clone();
            o.sort_unstable_by(|a, b| b.cmp(a));
            for _ in o {
                s.push('[');
            }
            if g < n {
                let sym = &self.cells[g];
                match &sym.carry {
                    Carry::None => s.push(sym.base.unicode()),
                    Carry::Single(a) => {
                        s.push('(');
                        s.push(sym.base.unicode());
                        s.push(',');
                        s.push(a.unicode());
                        s.push(')');
                    }
                    Carry::Pair([a, b]) => {
                        s.push('(');
                        s.push(sym.base.unicode());
                        s.push_str(",{");
                        s.push(a.unicode());
                        s.push(',');
                        s.push(b.unicode());
                        s.push_str("})");
                    }
                }
            }
        }
        s
    }

    /// Bracket string alone.
    pub fn brackets(&self) -> String {
        self.word().chars().filter(|c| *c == '[' || *c == ']').collect()
    }
}

impl fmt::Display for RowConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("unexpected `{0}` at position {1}")]
    Unexpected(char, usize),
    #[error("unbalanced brackets")]
    Unbalanced,
    #[error("bracket pair at gaps {0} and {1} does not join a ↓ and a ↑")]
    BadPair(usize, usize),
    #[error("word has {0} cells, expected {1}")]
    Length(usize, usize),
}

/// Reads a bracket word back into a configuration of row `y` of `spec`.
/// Sets inside `{…}` may be listed in any order.
pub fn parse_word(spec: &BoardSpec, y: usize, word: &str) -> Result<RowConfiguration, WordError> {
    let n = spec.n();
    let chars: Vec<char> = word.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cells: Vec<RowSymbol> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    let content_at = |i: usize| -> Result<CellContent, WordError> {
        chars
            .get(i)
            .and_then(|&c| CellContent::from_char(c))
            .ok_or_else(|| WordError::Unexpected(chars.get(i).copied().unwrap_or(' '), i))
    };
    let dir_at = |i: usize| -> Result<Direction, WordError> {
        chars
            .get(i)
            .and_then(|&c| Direction::from_char(c))
            .ok_or_else(|| WordError::Unexpected(chars.get(i).copied().unwrap_or(' '), i))
    };
    let expect = |i: usize, want: char| -> Result<(), WordError> {
        match chars.get(i) {
            Some(&c) if c == want => Ok(()),
            other => Err(WordError::Unexpected(other.copied().unwrap_or(' '), i)),
        }
    };
    while i < chars.len() {
        match chars[i] {
            '[' => {
                stack.push(cells.len());
                i += 1;
            }
            ']' => {
                let o = stack.pop().ok_or(WordError::Unbalanced)?;
                pairs.push((o, cells.len()));
                i += 1;
            }
            '(' => {
                let base = content_at(i + 1)?;
                expect(i + 2, ',')?;
                if chars.get(i + 3) == Some(&'{') {
                    let a = dir_at(i + 4)?;
                    expect(i + 5, ',')?;
                    let b = dir_at(i + 6)?;
                    expect(i + 7, '}')?;
                    expect(i + 8, ')')?;
                    let mut pair = [a, b];
                    pair.sort_unstable();
                    cells.push(RowSymbol { base, carry: Carry::Pair(pair), type_tag: 2 });
                    i += 9;
                } else {
                    let a = dir_at(i + 3)?;
                    expect(i + 4, ')')?;
                    cells.push(RowSymbol { base, carry: Carry::Single(a), type_tag: 1 });
                    i += 5;
                }
            }
            c => {
                let base = CellContent::from_char(c).ok_or(WordError::Unexpected(c, i))?;
                cells.push(RowSymbol { base, carry: Carry::None, type_tag: 0 });
                i += 1;
            }
        }
    }
    if !stack.is_empty() {
        return Err(WordError::Unbalanced);
    }
    if cells.len() != n {
        return Err(WordError::Length(cells.len(), n));
    }
    let p = spec.partition();
    for (x, s) in cells.iter_mut().enumerate() {
        if s.type_tag == 0 && y > 0 && p.box_of(Coord::new(x, y)) == p.box_of(Coord::new(x, y - 1)) {
            s.type_tag = 3;
        }
    }
    let is = |x: usize, d: Direction| cells.get(x).map(|s| s.base) == Some(CellContent::Arrow(d));
    let mut mouths = vec![None; n];
    for (go, gc) in pairs {
        if go >= 1 && is(go - 1, Direction::Down) && is(gc - 1, Direction::Up) {
            mouths[gc - 1] = Some(Mouth::Down(go - 1));
        } else if is(go, Direction::Up) && is(gc, Direction::Down) {
            mouths[go] = Some(Mouth::Down(gc));
        } else {
            return Err(WordError::BadPair(go, gc));
        }
    }
    for x in 0..n {
        if is(x, Direction::Up) && mouths[x].is_none() {
            mouths[x] = Some(Mouth::Roma);
        }
    }
    Ok(RowConfiguration { cells, mouths, roma_above: spec.roma().y >= y })
}

/// Per-row preparation shared by every configuration of that row.
struct RowPlan {
    /// Box of each column in this row.
    boxes: Vec<usize>,
    /// Whether each column's box continues into row `y - 1`.
    continues: Vec<bool>,
    /// A column linking each column's box to row `y + 1`, if the box reaches there.
    from_above: Vec<Option<usize>>,
    fillings: Vec<Vec<u8>>,
}

fn row_plan(spec: &BoardSpec, y: usize) -> RowPlan {
    let n = spec.n();
    let p = spec.partition();
    let boxes: Vec<usize> = (0..n).map(|x| p.box_of(Coord::new(x, y))).collect();
    let continues = (0..n).map(|x| y > 0 && p.box_of(Coord::new(x, y - 1)) == boxes[x]).collect();
    // a column of row y + 1 whose box reaches into this row, per column
    let from_above = (0..n)
        .map(|x| {
            if y + 1 >= n {
                return None;
            }
            (0..n).find(|&x2| p.box_of(Coord::new(x2, y + 1)) == boxes[x] && p.box_of(Coord::new(x2, y)) == boxes[x])
        })
        .collect();
    RowPlan { boxes, continues, from_above, fillings: row_fillings(spec, y) }
}

/// All fillings of row `y` honouring presets, with no arrow leaving the board.
fn row_fillings(spec: &BoardSpec, y: usize) -> Vec<Vec<u8>> {
    let n = spec.n();
    let mut out = vec![Vec::with_capacity(n)];
    for x in 0..n {
        let c = Coord::new(x, y);
        let options: Vec<u8> = match spec.preset(c) {
            Some(v) => vec![code(v)],
            None => Direction::ALL.into_iter().filter(|&d| c.step(d, n).is_some()).map(|d| d.index() as u8).collect(),
        };
        let mut next = Vec::with_capacity(out.len() * options.len());
        for f in &out {
            for &o in &options {
                let mut g = f.clone();
                g.push(o);
                next.push(g);
            }
        }
        out = next;
    }
    out
}

/// Where the flow from each column of a configured row leaves the processed
/// region: `MOUTH_ROMA`, or the column of the ↓ it exits through.
fn exits(n: usize, key: &[u8]) -> Vec<u8> {
    (0..n)
        .map(|x| {
            let mut cur = x;
            for _ in 0..=n {
                match key[cur] {
                    LEFT => cur -= 1,
                    RIGHT => cur += 1,
                    UP => return key[n + cur],
                    DOWN => return cur as u8,
                    _ => return MOUTH_ROMA,
                }
            }
            unreachable!("stored configurations are acyclic")
        })
        .collect()
}

/// Folds `filling` of a row under the configuration `prev` of the row above
/// (absent for the top row). Returns the new configuration key.
fn step(n: usize, plan: &RowPlan, prev: Option<(&[u8], &[u8])>, filling: &[u8]) -> Option<Vec<u8>> {
    let mut key = vec![0u8; 3 * n];
    key[..n].copy_from_slice(filling);
    // box condition
    let mut used: Vec<(usize, u8)> = Vec::with_capacity(n);
    for x in 0..n {
        let b = plan.boxes[x];
        let pos = match used.iter().position(|&(bb, _)| bb == b) {
            Some(p) => p,
            None => {
                let inherited = match (plan.from_above[x], prev) {
                    (Some(xa), Some((pk, _))) => {
                        let m = pk[2 * n + xa];
                        if m == NO_CARRY {
                            0
                        } else {
                            m
                        }
                    }
                    _ => 0,
                };
                used.push((b, inherited));
                used.len() - 1
            }
        };
        let c = filling[x];
        if c != ROMA_CODE {
            let bit = 1u8 << c;
            if used[pos].1 & bit != 0 {
                return None;
            }
            used[pos].1 |= bit;
        }
    }
    for x in 0..n {
        key[2 * n + x] =
            if plan.continues[x] { used.iter().find(|&&(bb, _)| bb == plan.boxes[x]).unwrap().1 } else { NO_CARRY };
    }
    // flow: follow each cell to a ↓ exit of this row or to Roma
    for x in 0..n {
        let mut cur = x;
        let mut term = None;
        for _ in 0..=n {
            match filling[cur] {
                LEFT => cur -= 1,
                RIGHT => cur += 1,
                DOWN => {
                    term = Some(cur as u8);
                    break;
                }
                ROMA_CODE => {
                    term = Some(MOUTH_ROMA);
                    break;
                }
                _ => {
                    let (_, ex) = prev?;
                    match ex[cur] {
                        MOUTH_ROMA => {
                            term = Some(MOUTH_ROMA);
                            break;
                        }
                        e => cur = e as usize,
                    }
                }
            }
        }
        let t = term?;
        key[n + x] = if filling[x] == UP { t } else { NO_MOUTH };
    }
    Some(key)
}

/// Successors of `cfg` (a configuration of row `y`) when row `y - 1` is
/// filled with `next`: empty if the filling breaks a rule, otherwise the one
/// resulting configuration.
pub fn enumerate_successors(
    spec: &BoardSpec,
    y: usize,
    cfg: &RowConfiguration,
    next: &[CellContent],
) -> Vec<RowConfiguration> {
    let n = spec.n();
    if y == 0 || next.len() != n {
        return Vec::new();
    }
    let ny = y - 1;
    for (x, &c) in next.iter().enumerate() {
        let at = Coord::new(x, ny);
        if let Some(p) = spec.preset(at) {
            if p != c {
                return Vec::new();
            }
        } else if c == CellContent::Roma {
            return Vec::new();
        }
        if let CellContent::Arrow(d) = c {
            if at.step(d, n).is_none() {
                return Vec::new();
            }
        }
    }
    let plan = row_plan(spec, ny);
    let pk = cfg.to_key(spec, y);
    let ex = exits(n, &pk);
    let filling: Vec<u8> = next.iter().map(|&c| code(c)).collect();
    match step(n, &plan, Some((&pk, &ex)), &filling) {
        Some(k) => vec![RowConfiguration::from_key(spec, ny, &k)],
        None => Vec::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpMode {
    Decide,
    Count,
}

/// Order in which rows are folded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// From `y = n - 1` down to `y = 0`.
    TopDown,
    /// From `y = 0` up to `y = n - 1`, run as a top-down sweep of the
    /// vertically mirrored board.
    BottomUp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpOptions {
    pub sweep: Sweep,
    /// Largest number of configurations allowed for one row.
    pub config_cap: usize,
    /// Visit stored configurations in reverse order (for order-independence checks).
    pub reverse_order: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { sweep: Sweep::TopDown, config_cap: DEFAULT_CONFIG_CAP, reverse_order: false }
    }
}

/// Number of configurations stored after each folded row, in sweep order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DpStats {
    pub configs_per_row: Vec<usize>,
}

impl DpStats {
    pub fn max_configs(&self) -> usize {
        self.configs_per_row.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DpError {
    #[error("row {row} needs more than {cap} configurations")]
    CapExceeded { row: usize, cap: usize },
}

struct Layer {
    keys: Vec<Vec<u8>>,
    mult: Vec<u128>,
    /// (index in previous layer, filling index) of the first way in.
    parent: Vec<(usize, usize)>,
}

fn mirror(spec: &BoardSpec) -> BoardSpec {
    let n = spec.n();
    let flip = |i: usize| {
        let c = Coord::from_index(i, n);
        Coord::new(c.x, n - 1 - c.y).index(n)
    };
    let labels: Vec<usize> = (0..n * n).map(|i| spec.partition().box_of_index(flip(i))).collect();
    let presets = (0..n * n)
        .map(|i| {
            spec.presets()[flip(i)].map(|v| match v {
                CellContent::Arrow(Direction::Up) => CellContent::Arrow(Direction::Down),
                CellContent::Arrow(Direction::Down) => CellContent::Arrow(Direction::Up),
                other => other,
            })
        })
        .collect();
    let r = spec.roma();
    BoardSpec::new_unchecked(BoxPartition::from_labels(n, &labels), presets, Coord::new(r.x, n - 1 - r.y))
}

fn mirror_assignment(a: &Assignment) -> Assignment {
    let n = a.n();
    let content = (0..n * n)
        .map(|i| {
            let c = Coord::from_index(i, n);
            match a.get(Coord::new(c.x, n - 1 - c.y)) {
                CellContent::Arrow(Direction::Up) => CellContent::Arrow(Direction::Down),
                CellContent::Arrow(Direction::Down) => CellContent::Arrow(Direction::Up),
                other => other,
            }
        })
        .collect();
    Assignment::new(n, content)
}

/// Runs the sweep and reports the per-row configuration counts.
pub fn dp_run_with(spec: &BoardSpec, mode: DpMode, opts: DpOptions) -> Result<(SolveResult, DpStats), DpError> {
    if opts.sweep == Sweep::BottomUp {
        let m = mirror(spec);
        let (mut r, st) = dp_run_with(&m, mode, DpOptions { sweep: Sweep::TopDown, ..opts })?;
        r.witness = r.witness.map(|a| mirror_assignment(&a));
        return Ok((r, st));
    }
    let n = spec.n();
    let mut stats = DpStats::default();
    let mut plans: Vec<RowPlan> = Vec::with_capacity(n);
    let mut layers: Vec<Layer> = Vec::with_capacity(n);
    for t in 0..n {
        let y = n - 1 - t;
        let plan = row_plan(spec, y);
        let mut layer = Layer { keys: Vec::new(), mult: Vec::new(), parent: Vec::new() };
        let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut add = |key: Vec<u8>, m: u128, parent: (usize, usize), layer: &mut Layer| -> Result<(), DpError> {
            if let Some(&i) = index.get(&key) {
                layer.mult[i] += m;
            } else {
                if layer.keys.len() >= opts.config_cap {
                    return Err(DpError::CapExceeded { row: y, cap: opts.config_cap });
                }
                index.insert(key.clone(), layer.keys.len());
                layer.keys.push(key);
                layer.mult.push(m);
                layer.parent.push(parent);
            }
            Ok(())
        };
        match layers.last() {
            None => {
                for (fi, f) in plan.fillings.iter().enumerate() {
                    if let Some(k) = step(n, &plan, None, f) {
                        add(k, 1, (usize::MAX, fi), &mut layer)?;
                    }
                }
            }
            Some(prev) => {
                let order: Vec<usize> = if opts.reverse_order {
                    (0..prev.keys.len()).rev().collect()
                } else {
                    (0..prev.keys.len()).collect()
                };
                for pi in order {
                    let pk = &prev.keys[pi];
                    let ex = exits(n, pk);
                    for (fi, f) in plan.fillings.iter().enumerate() {
                        if let Some(k) = step(n, &plan, Some((pk, &ex)), f) {
                            add(k, prev.mult[pi], (pi, fi), &mut layer)?;
                        }
                    }
                }
            }
        }
        stats.configs_per_row.push(layer.keys.len());
        plans.push(plan);
        layers.push(layer);
    }
    let last = layers.last().unwrap();
    let total: u128 = last.mult.iter().sum();
    let witness = if last.keys.is_empty() {
        None
    } else {
        // walk parents back from the first surviving configuration
        let mut content = vec![CellContent::Roma; n * n];
        let mut idx = if opts.reverse_order { last.keys.len() - 1 } else { 0 };
        for t in (0..n).rev() {
            let (pi, fi) = layers[t].parent[idx];
            let y = n - 1 - t;
            for (x, &c) in plans[t].fillings[fi].iter().enumerate() {
                content[Coord::new(x, y).index(n)] = decode(c);
            }
            idx = pi;
        }
        Some(Assignment::new(n, content))
    };
    let nodes = stats.configs_per_row.iter().map(|&c| c as u64).sum();
    let result = SolveResult {
        status: if total > 0 { Status::Sat } else { Status::Unsat },
        witness,
        count: match mode {
            DpMode::Decide => None,
            DpMode::Count => Some(total),
        },
        nodes,
    };
    Ok((result, stats))
}

/// [`dp_run_with`] with default options, without statistics.
pub fn dp_run(spec: &BoardSpec, mode: DpMode) -> Result<SolveResult, DpError> {
    dp_run_with(spec, mode, DpOptions::default()).map(|(r, _)| r)
}

/// Configurations of the processed region after folding row `y`, as
/// (configuration, multiplicity), in discovery order.
pub fn configurations_at(spec: &BoardSpec, y: usize) -> Vec<(RowConfiguration, u128)> {
    let n = spec.n();
    let mut prev: Option<Layer> = None;
    for t in 0..n - y {
        let yy = n - 1 - t;
        let plan = row_plan(spec, yy);
        let mut layer = Layer { keys: Vec::new(), mult: Vec::new(), parent: Vec::new() };
        let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut add = |k: Vec<u8>, m: u128| {
            if let Some(&i) = index.get(&k) {
                layer.mult[i] += m;
            } else {
                index.insert(k.clone(), layer.keys.len());
                layer.keys.push(k);
                layer.mult.push(m);
                layer.parent.push((0, 0));
            }
        };
        match &prev {
            None => {
                for f in &plan.fillings {
                    if let Some(k) = step(n, &plan, None, f) {
                        add(k, 1);
                    }
                }
            }
            Some(p) => {
                for (pi, pk) in p.keys.iter().enumerate() {
                    let ex = exits(n, pk);
                    for f in &plan.fillings {
                        if let Some(k) = step(n, &plan, Some((pk, &ex)), f) {
                            add(k, p.mult[pi]);
                        }
                    }
                }
            }
        }
        prev = Some(layer);
    }
    let l = prev.unwrap();
    l.keys.iter().zip(l.mult).map(|(k, m)| (RowConfiguration::from_key(spec, y, k), m)).collect()
}

/// The `p`-th Catalan number, `binom(2p, p) / (p + 1)`.
pub fn catalan_count(p: u32) -> u128 {
    assert!(p <= 30, "catalan_count supports p <= 30");
    // C(i+1) = C(i) * 2(2i+1) / (i+2), exact at every step
    let mut c: u128 = 1;
    for i in 0..p as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// Every balanced string of `p` bracket pairs, in lexicographic order with
/// `[` before `]`.
pub fn balanced_skeletons(p: usize) -> Vec<String> {
    fn go(open: usize, close: usize, cur: &mut String, out: &mut Vec<String>) {
        if open == 0 && close == 0 {
            out.push(cur.clone());
            return;
        }
        if open > 0 {
            cur.push('[');
            go(open - 1, close + 1, cur, out);
            cur.pop();
        }
        if close > 0 {
            cur.push(']');
            go(open, close - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(p, 0, &mut String::new(), &mut out);
    out
}

/// Whether a string of `[` and `]` is balanced.
pub fn is_balanced(s: &str) -> bool {
    let mut depth: i64 = 0;
    for c in s.chars() {
        match c {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}
