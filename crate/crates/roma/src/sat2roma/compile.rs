//! Compilation of a formula into a board, the variable map that goes with
//! it, and decoding of board solutions back into truth assignments.
//!
//! Board geometry, bottom to top:
//!
//! * Row 7 is the core line. The Roma cell is its leftmost cell; every other
//!   core cell points left. Variable-gadget `i` sits on it with its left edge
//!   at column `2 + 30 i`.
//! * Each variable sends its signal upwards in a column of conductors (its
//!   bus) that reaches the highest clause using the variable.
//! * Every clause is a horizontal band. A bus with a literal in the clause
//!   ends its run, or passes on, through a fanout; the literal-gadget sits on
//!   the fanout's right output. The clause ring threads all literal-gadgets
//!   of the clause.
//! * A bus that passes between the ring's ends crosses the ring's lower and
//!   upper rows through two variable-gadgets, mirrored and plain, whose core
//!   lines are part of the ring.
//! * All remaining cells are preset 1-boxes leading to the core line or to a
//!   ring.

use std::fmt::Write as _;

use thiserror::Error;

use super::canvas::{Canvas, CanvasError};
use super::cnf::{Cnf, Literal};
use super::tiles::{self, GadgetTile};
use crate::board::{Assignment, BoardSpec, CellContent, Coord, Direction};

/// Horizontal distance between neighbouring variable-gadgets.
pub const PITCH: usize = 30;
const X0: usize = 2;
const GADGET_Y: usize = 1;
const CORE_Y: usize = GADGET_Y + tiles::CORE_ROW;
const FIRST_BAND: usize = GADGET_Y + 11;
const CHAIN_GAPS: usize = 3;
const LITERAL_DX: usize = 6 * CHAIN_GAPS;
/// Height of a clause band whose ring is crossed by a bus.
const TALL_BAND: usize = 26;
/// Height of a clause band without crossings.
const SHORT_BAND: usize = 12;

/// Side length bound factor: a compiled board has side at most
/// `SIDE_FACTOR * (variables + clauses + crossings)`. The width is
/// `PITCH * variables + 1` and the height at most
/// `FIRST_BAND + 1 + TALL_BAND * clauses`.
pub const SIDE_FACTOR: usize = PITCH + FIRST_BAND + 1;

fn bus_x(var: usize) -> usize {
    X0 + PITCH * (var - 1)
}

/// Where each variable's value is read from a solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarEntry {
    pub cell: Coord,
    pub when_true: Direction,
    pub when_false: Direction,
}

/// Decision cell and arrow meaning of every variable, indexed `var - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    pub entries: Vec<VarEntry>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VarMapError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

impl VarMap {
    /// `VARMAP 1` text: one `var <i> cell <x> <y> true <arrow> false <arrow>`
    /// line per variable.
    pub fn to_text(&self) -> String {
        let mut s = String::from("VARMAP 1\n");
        for (i, e) in self.entries.iter().enumerate() {
            let _ = writeln!(
                s,
                "var {} cell {} {} true {} false {}",
                i + 1,
                e.cell.x,
                e.cell.y,
                e.when_true.ascii(),
                e.when_false.ascii()
            );
        }
        s
    }

    pub fn parse(text: &str) -> Result<VarMap, VarMapError> {
        let mut lines =
            text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        match lines.next() {
            Some((_, l)) if l.trim() == "VARMAP 1" => {}
            Some((i, _)) => return Err(VarMapError::Syntax { line: i + 1, msg: "expected `VARMAP 1`".into() }),
            None => return Err(VarMapError::Syntax { line: 0, msg: "empty file".into() }),
        }
        let mut entries = Vec::new();
        for (i, l) in lines {
            let line = i + 1;
            let err = |msg: &str| VarMapError::Syntax { line, msg: msg.to_string() };
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 9 || f[0] != "var" || f[2] != "cell" || f[5] != "true" || f[7] != "false" {
                return Err(err("expected `var <i> cell <x> <y> true <arrow> false <arrow>`"));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| err(&format!("bad number `{s}`")));
            let arrow = |s: &str| {
                let mut cs = s.chars();
                match (cs.next().and_then(Direction::from_char), cs.next()) {
                    (Some(d), None) => Ok(d),
                    _ => Err(err(&format!("bad arrow `{s}`"))),
                }
            };
            if num(f[1])? != entries.len() + 1 {
                return Err(err("variables must be listed in order from 1"));
            }
            entries.push(VarEntry {
                cell: Coord::new(num(f[3])?, num(f[4])?),
                when_true: arrow(f[6])?,
                when_false: arrow(f[8])?,
            });
        }
        Ok(VarMap { entries })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("variable {var}: decision cell {cell} holds {found}, which is neither value")]
    Unmapped { var: usize, cell: Coord, found: char },
    #[error("variable {var}: decision cell {cell} is off the board")]
    OffBoard { var: usize, cell: Coord },
}

/// Reads every variable's decision cell.
pub fn decode(spec: &BoardSpec, vm: &VarMap, a: &Assignment) -> Result<Vec<bool>, DecodeError> {
    vm.entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if e.cell.x >= spec.n() || e.cell.y >= spec.n() {
                return Err(DecodeError::OffBoard { var: i + 1, cell: e.cell });
            }
            match a.get(e.cell) {
                CellContent::Arrow(d) if d == e.when_true => Ok(true),
                CellContent::Arrow(d) if d == e.when_false => Ok(false),
                other => Err(DecodeError::Unmapped { var: i + 1, cell: e.cell, found: other.ascii() }),
            }
        })
        .collect()
}

/// Clauses as they are drawn: literals deduplicated and sorted by variable,
/// clauses containing both polarities of a variable dropped.
pub fn drawn_clauses(cnf: &Cnf) -> Vec<Vec<Literal>> {
    cnf.clauses()
        .iter()
        .filter_map(|c| {
            let mut c = c.clone();
            c.sort();
            c.dedup();
            if c.windows(2).any(|w| w[0].var == w[1].var) {
                None
            } else {
                Some(c)
            }
        })
        .collect()
}

/// Vertical extent of one clause band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Band {
    base: usize,
    /// Row of the ring that runs right through the literal tops.
    low: usize,
    /// Row of the ring that runs back left.
    high: usize,
    height: usize,
}

/// Positions of every band, plus whether each bus crosses each ring.
struct Plan {
    clauses: Vec<Vec<Literal>>,
    /// `last[v - 1]`: index of the last band using variable `v`.
    last: Vec<Option<usize>>,
    bands: Vec<Band>,
    width: usize,
    height: usize,
}

impl Plan {
    fn new(cnf: &Cnf) -> Plan {
        let clauses = drawn_clauses(cnf);
        let nv = cnf.num_vars();
        let mut last = vec![None; nv];
        for (j, c) in clauses.iter().enumerate() {
            for l in c {
                last[l.var - 1] = Some(j);
            }
        }
        let mut bands = Vec::new();
        let mut base = FIRST_BAND;
        for j in 0..clauses.len() {
            let tall = (1..=nv).any(|v| Plan::crosses(&clauses, &last, j, v));
            let low = base + 10;
            let (high, height) = if tall { (low + 11, TALL_BAND) } else { (low + 1, SHORT_BAND) };
            bands.push(Band { base, low, high, height });
            base += height;
        }
        let width = bus_x(nv) + PITCH - X0 + 1;
        let height = base + 1;
        Plan { clauses, last, bands, width, height }
    }

    /// Leftmost and rightmost ring column of clause `j`.
    fn ring_span(clauses: &[Vec<Literal>], j: usize) -> (usize, usize) {
        let c = &clauses[j];
        (bus_x(c[0].var) + LITERAL_DX, bus_x(c[c.len() - 1].var) + LITERAL_DX + 9)
    }

    /// Whether bus `v` still runs above band `j`.
    fn continues(last: &[Option<usize>], j: usize, v: usize) -> bool {
        last[v - 1].is_some_and(|l| l > j)
    }

    /// Whether bus `v` passes through the ring of clause `j`.
    fn crosses(clauses: &[Vec<Literal>], last: &[Option<usize>], j: usize, v: usize) -> bool {
        let (xl, xr) = Plan::ring_span(clauses, j);
        Plan::continues(last, j, v) && xl < bus_x(v) && bus_x(v) < xr
    }
}

fn stack(canvas: &mut Canvas, x: usize, rows: std::ops::Range<usize>) {
    let c = tiles::conductor();
    for y in rows {
        canvas.stamp(&c, x, y);
    }
}

/// Builds the board of `cnf` and its variable map. The board has one
/// solution per satisfying assignment.
pub fn compile(cnf: &Cnf) -> (BoardSpec, VarMap) {
    try_compile(cnf).expect("compiled boards are always fillable")
}

/// [`compile`] with filler failures reported instead of panicking.
pub fn try_compile(cnf: &Cnf) -> Result<(BoardSpec, VarMap), CanvasError> {
    let plan = Plan::new(cnf);
    let n = plan.width.max(plan.height);
    let mut cv = Canvas::new(n);
    let var_tile = tiles::variable();
    let mirrored = var_tile.mirrored();
    let chain = tiles::fanout_chain(CHAIN_GAPS);
    let nv = cnf.num_vars();

    cv.set_roma(0, CORE_Y);
    let mut entries = Vec::new();
    for v in 1..=nv {
        let b = bus_x(v);
        cv.stamp(&var_tile, b, GADGET_Y);
        entries.push(VarEntry {
            cell: Coord::new(b + tiles::DECISION.0, GADGET_Y + tiles::DECISION.1),
            when_true: Direction::Down,
            when_false: Direction::Up,
        });
    }
    for x in 1..n {
        if cv.is_free(x, CORE_Y) {
            cv.core(x, CORE_Y, Direction::Left);
        } else {
            cv.mark_source(x, CORE_Y);
        }
    }

    for (j, band) in plan.bands.iter().enumerate() {
        let clause = &plan.clauses[j];
        let top = band.base + band.height;
        for v in 1..=nv {
            let b = bus_x(v);
            let lit = clause.iter().find(|l| l.var == v);
            let cont = Plan::continues(&plan.last, j, v);
            if lit.is_none() && !cont {
                continue;
            }
            let crossing = Plan::crosses(&plan.clauses, &plan.last, j, v);
            let mut y = band.base;
            if let Some(l) = lit {
                cv.stamp(&chain, b, y);
                cv.stamp(&tiles::literal(l.positive), b + LITERAL_DX, y + 3);
                y += 3;
            }
            if !cont {
                continue;
            }
            if crossing {
                stack(&mut cv, b, y..band.low - 6);
                cv.stamp(&mirrored, b, band.low - 6);
                cv.stamp(&var_tile, b, band.low + 5);
            } else {
                stack(&mut cv, b, y..top);
            }
        }
        draw_ring(&mut cv, &plan, j, band);
    }
    let spec = cv.finish()?;
    Ok((spec, VarMap { entries }))
}

fn draw_ring(cv: &mut Canvas, plan: &Plan, j: usize, band: &Band) {
    let (xl, xr) = Plan::ring_span(&plan.clauses, j);
    let ring = cv.open_ring(band.low - 7);
    for x in xl..xr {
        if cv.is_free(x, band.low) {
            cv.ring_cell(ring, x, band.low, Direction::Right);
        } else if cv.preset(x, band.low) == Some(CellContent::Arrow(Direction::Right)) {
            cv.mark_ring(ring, x, band.low);
        }
    }
    for y in band.low..band.high {
        cv.ring_cell(ring, xr, y, Direction::Up);
    }
    cv.ring_cell(ring, xr, band.high, Direction::Left);
    for x in xl + 1..xr {
        if cv.is_free(x, band.high) {
            cv.ring_cell(ring, x, band.high, Direction::Left);
        } else if cv.preset(x, band.high) == Some(CellContent::Arrow(Direction::Left)) {
            cv.mark_ring(ring, x, band.high);
        }
    }
    for y in band.low + 1..=band.high {
        cv.ring_cell(ring, xl, y, Direction::Down);
    }
    for l in &plan.clauses[j] {
        let lx = bus_x(l.var) + LITERAL_DX;
        for x in lx + 4..lx + 10 {
            cv.ring_drain(ring, x, band.base + 2);
        }
        cv.ring_drain(ring, lx + 4, band.base + 3);
        cv.ring_drain(ring, lx + 5, band.base + 3);
    }
}

/// A single tile on a board of its own, surrounded by a margin of filler.
/// The Roma cell sits at the left end of the bottom row, or on the tile's
/// core line when it has one, at the end that line flows to. Extra presets
/// are given in tile coordinates.
pub fn tile_test_board(tile: &GadgetTile, presets: &[(usize, usize, Direction)]) -> BoardSpec {
    const MARGIN: usize = 2;
    let n = tile.width.max(tile.height) + 2 * MARGIN;
    let mut cv = Canvas::new(n);
    let mut t = tile.clone();
    for &(x, y, d) in presets {
        t = t.with_preset(x, y, CellContent::Arrow(d));
    }
    cv.stamp(&t, MARGIN, MARGIN);
    let (cy, to_left) = match tile.port("core-out") {
        Some((x, y)) => (MARGIN + y, x == 0),
        None => (0, true),
    };
    let (roma_x, d) = if to_left { (0, Direction::Left) } else { (n - 1, Direction::Right) };
    cv.set_roma(roma_x, cy);
    for x in 0..n {
        if x == roma_x {
            continue;
        }
        if cv.is_free(x, cy) {
            cv.core(x, cy, d);
        } else {
            cv.mark_source(x, cy);
        }
    }
    cv.finish().expect("test boards are fillable")
}
