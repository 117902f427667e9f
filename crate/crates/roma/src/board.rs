//! Board model: grid geometry, box partitions, presets, assignments,
//! validity checking, the `ROMA 1` text format and rendering.
//!
//! Coordinates have their origin in the bottom-left corner: `x` grows to the
//! right and `y` grows upwards. Internally a cell is addressed by the flat
//! index `y * n + x`. Text files list rows top to bottom.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

/// One of the four arrow directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    /// Canonical order used by every enumerating engine.
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];

    /// `(dx, dy)` of one step.
    pub fn delta(self) -> (isize, isize) {
        match self {
            Direction::Up => (0, 1),
            Direction::Down => (0, -1),
            Direction::Left => (-1, 0),
            Direction::Right => (1, 0),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    /// Position in [`Direction::ALL`].
    pub fn index(self) -> usize {
        match self {
            Direction::Up => 0,
            Direction::Down => 1,
            Direction::Left => 2,
            Direction::Right => 3,
        }
    }

    pub fn from_index(i: usize) -> Direction {
        Direction::ALL[i]
    }

    /// Single-bit mask, bit `index()`.
    pub fn bit(self) -> u8 {
        1 << self.index()
    }

    pub fn ascii(self) -> char {
        match self {
            Direction::Up => '^',
            Direction::Down => 'v',
            Direction::Left => '<',
            Direction::Right => '>',
        }
    }

    pub fn unicode(self) -> char {
        match self {
            Direction::Up => '↑',
            Direction::Down => '↓',
            Direction::Left => '←',
            Direction::Right => '→',
        }
    }

    /// Accepts both the ASCII and the Unicode arrow glyphs.
    pub fn from_char(c: char) -> Option<Direction> {
        match c {
            '^' | '↑' => Some(Direction::Up),
            'v' | '↓' => Some(Direction::Down),
            '<' | '←' => Some(Direction::Left),
            '>' | '→' => Some(Direction::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unicode())
    }
}

/// Content of a filled cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellContent {
    Arrow(Direction),
    Roma,
}

impl CellContent {
    pub fn ascii(self) -> char {
        match self {
            CellContent::Arrow(d) => d.ascii(),
            CellContent::Roma => 'o',
        }
    }

    pub fn unicode(self) -> char {
        match self {
            CellContent::Arrow(d) => d.unicode(),
            CellContent::Roma => '◦',
        }
    }

    pub fn from_char(c: char) -> Option<CellContent> {
        match c {
            'o' | '◦' => Some(CellContent::Roma),
            _ => Direction::from_char(c).map(CellContent::Arrow),
        }
    }

    pub fn arrow(self) -> Option<Direction> {
        match self {
            CellContent::Arrow(d) => Some(d),
            CellContent::Roma => None,
        }
    }
}

impl fmt::Display for CellContent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unicode())
    }
}

/// A cell address; `x` is the column, `y` the row counted from the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub x: usize,
    pub y: usize,
}

impl Coord {
    pub const fn new(x: usize, y: usize) -> Coord {
        Coord { x, y }
    }

    /// Neighbour in direction `d`, or `None` when it falls off an `n × n` board.
    pub fn step(self, d: Direction, n: usize) -> Option<Coord> {
        let (dx, dy) = d.delta();
        let x = self.x as isize + dx;
        let y = self.y as isize + dy;
        if x < 0 || y < 0 || x >= n as isize || y >= n as isize {
            None
        } else {
            Some(Coord::new(x as usize, y as usize))
        }
    }

    pub fn index(self, n: usize) -> usize {
        self.y * n + self.x
    }

    pub fn from_index(i: usize, n: usize) -> Coord {
        Coord::new(i % n, i / n)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Partition of the board into boxes. Box ids are dense and numbered by the
/// first cell met in reading order (top row first, left to right).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxPartition {
    n: usize,
    box_of: Vec<usize>,
    boxes: Vec<Vec<Coord>>,
}

impl BoxPartition {
    /// Builds a partition from arbitrary per-cell labels indexed `y * n + x`.
    pub fn from_labels<L: Ord + Clone>(n: usize, labels: &[L]) -> BoxPartition {
        assert_eq!(labels.len(), n * n, "label grid must have n*n entries");
        let mut ids: BTreeMap<L, usize> = BTreeMap::new();
        let mut box_of = vec![0; n * n];
        let mut boxes: Vec<Vec<Coord>> = Vec::new();
        for y in (0..n).rev() {
            for x in 0..n {
                let i = y * n + x;
                let next = ids.len();
                let id = *ids.entry(labels[i].clone()).or_insert(next);
                if id == boxes.len() {
                    boxes.push(Vec::new());
                }
                box_of[i] = id;
            }
        }
        for i in 0..n * n {
            boxes[box_of[i]].push(Coord::from_index(i, n));
        }
        BoxPartition { n, box_of, boxes }
    }

    /// Every cell in its own box.
    pub fn singletons(n: usize) -> BoxPartition {
        let labels: Vec<usize> = (0..n * n).collect();
        BoxPartition::from_labels(n, &labels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_of(&self, c: Coord) -> usize {
        self.box_of[c.index(self.n)]
    }

    pub fn box_of_index(&self, i: usize) -> usize {
        self.box_of[i]
    }

    /// Cells of box `b` in increasing flat-index order.
    pub fn cells(&self, b: usize) -> &[Coord] {
        &self.boxes[b]
    }

    pub fn num_boxes(&self) -> usize {
        self.boxes.len()
    }

    pub fn boxes(&self) -> &[Vec<Coord>] {
        &self.boxes
    }
}

/// A puzzle instance: side length, boxes, presets and the Roma cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoardSpec {
    n: usize,
    partition: BoxPartition,
    presets: Vec<Option<CellContent>>,
    roma: Coord,
}

impl BoardSpec {
    /// Assembles a spec without checking any invariant; see [`validate_spec`].
    pub fn new_unchecked(partition: BoxPartition, presets: Vec<Option<CellContent>>, roma: Coord) -> BoardSpec {
        let n = partition.n();
        assert_eq!(presets.len(), n * n, "preset grid must have n*n entries");
        BoardSpec { n, partition, presets, roma }
    }

    /// Assembles a spec and rejects it if [`validate_spec`] reports anything.
    pub fn new(
        partition: BoxPartition,
        presets: Vec<Option<CellContent>>,
        roma: Coord,
    ) -> Result<BoardSpec, Vec<Violation>> {
        let spec = BoardSpec::new_unchecked(partition, presets, roma);
        let v = validate_spec(&spec);
        if v.is_empty() {
            Ok(spec)
        } else {
            Err(v)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partition(&self) -> &BoxPartition {
        &self.partition
    }

    pub fn roma(&self) -> Coord {
        self.roma
    }

    pub fn preset(&self, c: Coord) -> Option<CellContent> {
        self.presets[c.index(self.n)]
    }

    pub fn presets(&self) -> &[Option<CellContent>] {
        &self.presets
    }

    /// Cells without a preset, in increasing flat-index order.
    pub fn empty_cells(&self) -> Vec<Coord> {
        (0..self.n * self.n).filter(|&i| self.presets[i].is_none()).map(|i| Coord::from_index(i, self.n)).collect()
    }

    /// Number of empty cells.
    pub fn k(&self) -> usize {
        self.presets.iter().filter(|p| p.is_none()).count()
    }

    /// Returns a copy with additional presets. Panics if a listed cell is
    /// already preset to a different value.
    pub fn with_presets(&self, extra: &[(Coord, CellContent)]) -> BoardSpec {
        let mut s = self.clone();
        for &(c, v) in extra {
            let i = c.index(self.n);
            if let Some(old) = s.presets[i] {
                assert_eq!(old, v, "cell {c} already preset");
            }
            s.presets[i] = Some(v);
        }
        s
    }
}

/// A total filling of the board.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    n: usize,
    content: Vec<CellContent>,
}

impl Assignment {
    /// Wraps a flat content vector indexed `y * n + x`.
    pub fn new(n: usize, content: Vec<CellContent>) -> Assignment {
        assert_eq!(content.len(), n * n, "assignment must have n*n entries");
        Assignment { n, content }
    }

    /// Presets of `spec` completed by `fill`, which lists the empty cells'
    /// contents in increasing flat-index order.
    pub fn from_fill(spec: &BoardSpec, fill: &[CellContent]) -> Assignment {
        let mut it = fill.iter();
        let content = spec
            .presets
            .iter()
            .map(|p| match p {
                Some(v) => *v,
                None => *it.next().expect("fill shorter than number of empty cells"),
            })
            .collect();
        assert!(it.next().is_none(), "fill longer than number of empty cells");
        Assignment { n: spec.n, content }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, c: Coord) -> CellContent {
        self.content[c.index(self.n)]
    }

    pub fn set(&mut self, c: Coord, v: CellContent) {
        let i = c.index(self.n);
        self.content[i] = v;
    }

    pub fn content(&self) -> &[CellContent] {
        &self.content
    }
}

/// Successor map of the flow graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowGraph {
    pub n: usize,
    pub out_edge: Vec<Option<Coord>>,
}

impl FlowGraph {
    pub fn next(&self, c: Coord) -> Option<Coord> {
        self.out_edge[c.index(self.n)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    BoxDuplicate,
    OffBoardArrow,
    Cycle,
    ExtraSink,
    Disconnected,
    PresetConflict,
    MalformedPartition,
}

/// One broken rule, with the cells involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub at: Vec<Coord>,
    pub note: String,
}

impl Violation {
    fn new(kind: ViolationKind, at: Vec<Coord>, note: impl Into<String>) -> Violation {
        Violation { kind, at, note: note.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if !self.at.is_empty() {
            write!(f, " at")?;
            for c in &self.at {
                write!(f, " {c}")?;
            }
        }
        if !self.note.is_empty() {
            write!(f, ": {}", self.note)?;
        }
        Ok(())
    }
}

/// Errors produced while reading board files.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoardError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid board: {0}")]
    Semantic(String),
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> BoardError {
    BoardError::Syntax { line, col, msg: msg.into() }
}

fn is_connected(cells: &[Coord]) -> bool {
    if cells.is_empty() {
        return true;
    }
    let mut seen = vec![false; cells.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..cells.len() {
            if !seen[j] && cells[i].x.abs_diff(cells[j].x) + cells[i].y.abs_diff(cells[j].y) == 1 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Lists every broken structural invariant of `spec`.
pub fn validate_spec(spec: &BoardSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = spec.n;
    if n == 0 {
        out.push(Violation::new(ViolationKind::MalformedPartition, vec![], "board side is zero"));
        return out;
    }
    for cells in spec.partition.boxes() {
        if cells.len() > 4 {
            out.push(Violation::new(
                ViolationKind::MalformedPartition,
                cells.clone(),
                format!("box has {} cells, at most 4 allowed", cells.len()),
            ));
        }
        if !is_connected(cells) {
            out.push(Violation::new(ViolationKind::MalformedPartition, cells.clone(), "box is not 4-connected"));
        }
    }
    let roma = spec.roma;
    if roma.x >= n || roma.y >= n {
        out.push(Violation::new(ViolationKind::PresetConflict, vec![roma], "Roma cell off the board"));
        return out;
    }
    if spec.preset(roma) != Some(CellContent::Roma) {
        out.push(Violation::new(ViolationKind::PresetConflict, vec![roma], "Roma cell is not preset to Roma"));
    }
    let others: Vec<Coord> = (0..n * n)
        .map(|i| Coord::from_index(i, n))
        .filter(|&c| c != roma && spec.preset(c) == Some(CellContent::Roma))
        .collect();
    if !others.is_empty() {
        out.push(Violation::new(ViolationKind::PresetConflict, others, "more than one Roma cell"));
    }
    let rb = spec.partition.cells(spec.partition.box_of(roma));
    if rb.len() != 1 {
        out.push(Violation::new(ViolationKind::MalformedPartition, rb.to_vec(), "Roma cell must form its own 1-box"));
    }
    out
}

/// Out-edges of the assignment's flow graph.
pub fn flow_graph(spec: &BoardSpec, a: &Assignment) -> FlowGraph {
    let n = spec.n;
    let out_edge = (0..n * n)
        .map(|i| match a.content[i] {
            CellContent::Roma => None,
            CellContent::Arrow(d) => Coord::from_index(i, n).step(d, n),
        })
        .collect();
    FlowGraph { n, out_edge }
}

fn preset_and_roma_violations(spec: &BoardSpec, a: &Assignment, out: &mut Vec<Violation>) {
    let n = spec.n;
    let mut conflicts = Vec::new();
    for i in 0..n * n {
        if let Some(p) = spec.presets[i] {
            if p != a.content[i] {
                conflicts.push(Coord::from_index(i, n));
            }
        }
    }
    if !conflicts.is_empty() {
        out.push(Violation::new(ViolationKind::PresetConflict, conflicts, "assignment overrides presets"));
    }
    let stray: Vec<Coord> = (0..n * n)
        .filter(|&i| a.content[i] == CellContent::Roma && Coord::from_index(i, n) != spec.roma)
        .map(|i| Coord::from_index(i, n))
        .collect();
    if !stray.is_empty() {
        out.push(Violation::new(ViolationKind::PresetConflict, stray, "Roma placed outside the Roma cell"));
    }
}

fn box_violations(spec: &BoardSpec, a: &Assignment, out: &mut Vec<Violation>) {
    for cells in spec.partition.boxes() {
        for d in Direction::ALL {
            let hits: Vec<Coord> = cells.iter().copied().filter(|&c| a.get(c) == CellContent::Arrow(d)).collect();
            if hits.len() > 1 {
                out.push(Violation::new(ViolationKind::BoxDuplicate, hits, format!("arrow {d} repeated in one box")));
            }
        }
    }
}

fn off_board_violations(g: &FlowGraph, a: &Assignment, out: &mut Vec<Violation>) {
    for (i, e) in g.out_edge.iter().enumerate() {
        if e.is_none() && a.content[i] != CellContent::Roma {
            out.push(Violation::new(
                ViolationKind::OffBoardArrow,
                vec![Coord::from_index(i, g.n)],
                "arrow leaves the board",
            ));
        }
    }
}

/// Every directed cycle of a functional graph, each listed once from its
/// smallest-index cell in flow order.
fn cycles(g: &FlowGraph) -> Vec<Vec<Coord>> {
    let n = g.n;
    let total = n * n;
    // 0 = unvisited, 1 = on current walk, 2 = finished
    let mut state = vec![0u8; total];
    let mut found = Vec::new();
    for s in 0..total {
        if state[s] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = Some(s);
        while let Some(i) = cur {
            match state[i] {
                0 => {
                    state[i] = 1;
                    walk.push(i);
                    cur = g.out_edge[i].map(|c| c.index(n));
                }
                1 => {
                    let pos = walk.iter().position(|&w| w == i).unwrap();
                    let mut cyc: Vec<usize> = walk[pos..].to_vec();
                    let m = cyc.iter().enumerate().min_by_key(|(_, &v)| v).unwrap().0;
                    cyc.rotate_left(m);
                    found.push(cyc.into_iter().map(|v| Coord::from_index(v, n)).collect());
                    break;
                }
                _ => break,
            }
        }
        for w in walk {
            state[w] = 2;
        }
    }
    found
}

fn cycle_violations(g: &FlowGraph, out: &mut Vec<Violation>) {
    for cyc in cycles(g) {
        out.push(Violation::new(ViolationKind::Cycle, cyc, "directed cycle"));
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Full rule check: presets, box condition, and the graph being acyclic,
/// weakly connected and with a single sink.
pub fn is_valid(spec: &BoardSpec, a: &Assignment) -> Vec<Violation> {
    let mut out = Vec::new();
    preset_and_roma_violations(spec, a, &mut out);
    box_violations(spec, a, &mut out);
    let g = flow_graph(spec, a);
    off_board_violations(&g, a, &mut out);
    cycle_violations(&g, &mut out);
    let n = spec.n;
    let sinks: Vec<Coord> = (0..n * n).filter(|&i| g.out_edge[i].is_none()).map(|i| Coord::from_index(i, n)).collect();
    if sinks.len() != 1 {
        out.push(Violation::new(
            ViolationKind::ExtraSink,
            sinks.clone(),
            format!("{} cells have out-degree zero", sinks.len()),
        ));
    }
    let mut parent: Vec<usize> = (0..n * n).collect();
    for i in 0..n * n {
        if let Some(c) = g.out_edge[i] {
            let (a, b) = (find(&mut parent, i), find(&mut parent, c.index(n)));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, spec.roma.index(n));
    let detached: Vec<Coord> =
        (0..n * n).filter(|&i| find(&mut parent, i) != root).map(|i| Coord::from_index(i, n)).collect();
    if !detached.is_empty() {
        out.push(Violation::new(ViolationKind::Disconnected, detached, "cells weakly disconnected from the Roma cell"));
    }
    out
}

/// Shortcut check: presets, box condition, no off-board arrow and no cycle.
/// Agrees with [`is_valid`] on emptiness.
pub fn is_valid_reduced(spec: &BoardSpec, a: &Assignment) -> Vec<Violation> {
    let mut out = Vec::new();
    preset_and_roma_violations(spec, a, &mut out);
    box_violations(spec, a, &mut out);
    let g = flow_graph(spec, a);
    off_board_violations(&g, a, &mut out);
    cycle_violations(&g, &mut out);
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("flow from {0} leaves the board or stops before the Roma cell")]
    DeadEnd(Coord),
    #[error("flow from {0} does not reach the Roma cell within n^2 steps")]
    TooLong(Coord),
}

/// The directed path from `start` to the Roma cell, both ends included.
pub fn trace_to_roma(spec: &BoardSpec, a: &Assignment, start: Coord) -> Result<Vec<Coord>, TraceError> {
    let g = flow_graph(spec, a);
    let n = spec.n;
    let mut path = vec![start];
    let mut cur = start;
    while cur != spec.roma {
        if path.len() > n * n {
            return Err(TraceError::TooLong(start));
        }
        match g.next(cur) {
            Some(c) => {
                cur = c;
                path.push(c);
            }
            None => return Err(TraceError::DeadEnd(start)),
        }
    }
    if path.len() > n * n {
        return Err(TraceError::TooLong(start));
    }
    Ok(path)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    }
}

/// Splits a grid row into `n` tokens: either whitespace separated or a
/// single run of `n` characters. Returns tokens with 1-based columns.
fn row_tokens(raw: &str, n: usize) -> Vec<(usize, String)> {
    let mut toks = Vec::new();
    let mut col = 0;
    let mut cur = String::new();
    let mut start = 0;
    for ch in raw.chars() {
        col += 1;
        if ch.is_whitespace() {
            if !cur.is_empty() {
                toks.push((start, std::mem::take(&mut cur)));
            }
        } else {
            if cur.is_empty() {
                start = col;
            }
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        toks.push((start, cur));
    }
    if toks.len() == 1 && n > 1 && toks[0].1.chars().count() == n {
        let (s, t) = toks.pop().unwrap();
        return t.chars().enumerate().map(|(k, c)| (s + k, c.to_string())).collect();
    }
    toks
}

fn parse_cell_char(tok: &str, line: usize, col: usize) -> Result<Option<CellContent>, BoardError> {
    let mut it = tok.chars();
    let c = it.next().unwrap();
    if it.next().is_some() {
        return Err(syntax(line, col, format!("cell token `{tok}` must be one character")));
    }
    if c == '.' {
        return Ok(None);
    }
    CellContent::from_char(c).map(Some).ok_or_else(|| syntax(line, col, format!("unknown cell glyph `{c}`")))
}

/// Reads a `ROMA 1` board file.
pub fn parse_board(text: &str) -> Result<BoardSpec, BoardError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let mut it = lines.into_iter();
    let eof = |what: &str| syntax(text.lines().count() + 1, 1, format!("unexpected end of file, expected {what}"));

    let (ln, l) = it.next().ok_or_else(|| eof("`ROMA 1` header"))?;
    if l.split_whitespace().collect::<Vec<_>>() != ["ROMA", "1"] {
        return Err(syntax(ln, 1, "expected header `ROMA 1`"));
    }
    let (ln, l) = it.next().ok_or_else(|| eof("`N <side>`"))?;
    let parts: Vec<&str> = l.split_whitespace().collect();
    if parts.len() != 2 || parts[0] != "N" {
        return Err(syntax(ln, 1, "expected `N <side>`"));
    }
    let n: usize =
        parts[1].parse().map_err(|_| syntax(ln, l.find(parts[1]).unwrap() + 1, "side must be a positive integer"))?;
    if n == 0 {
        return Err(syntax(ln, l.find(parts[1]).unwrap() + 1, "side must be a positive integer"));
    }

    let (ln, l) = it.next().ok_or_else(|| eof("`BOXES`"))?;
    if l.trim() != "BOXES" {
        return Err(syntax(ln, 1, "expected `BOXES`"));
    }
    let mut labels = vec![String::new(); n * n];
    for r in 0..n {
        let (ln, l) = it.next().ok_or_else(|| eof("box row"))?;
        let toks: Vec<(usize, String)> =
            l.split_whitespace().map(|t| (l.find(t).unwrap() + 1, t.to_string())).collect();
        if toks.len() != n {
            return Err(syntax(ln, 1, format!("expected {n} box labels, found {}", toks.len())));
        }
        let y = n - 1 - r;
        for (x, (col, t)) in toks.into_iter().enumerate() {
            if !t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(syntax(ln, col, format!("box label `{t}` must be alphanumeric")));
            }
            labels[y * n + x] = t;
        }
    }

    let (ln, l) = it.next().ok_or_else(|| eof("`CELLS`"))?;
    if l.trim() != "CELLS" {
        return Err(syntax(ln, 1, "expected `CELLS`"));
    }
    let mut presets = vec![None; n * n];
    for r in 0..n {
        let (ln, l) = it.next().ok_or_else(|| eof("cell row"))?;
        let toks = row_tokens(l, n);
        if toks.len() != n {
            return Err(syntax(ln, 1, format!("expected {n} cells, found {}", toks.len())));
        }
        let y = n - 1 - r;
        for (x, (col, t)) in toks.into_iter().enumerate() {
            presets[y * n + x] = parse_cell_char(&t, ln, col)?;
        }
    }
    if let Some((ln, _)) = it.next() {
        return Err(syntax(ln, 1, "trailing content after CELLS section"));
    }

    let romas: Vec<usize> = (0..n * n).filter(|&i| presets[i] == Some(CellContent::Roma)).collect();
    if romas.len() != 1 {
        return Err(BoardError::Semantic(format!("expected exactly one Roma cell, found {}", romas.len())));
    }
    let partition = BoxPartition::from_labels(n, &labels);
    let spec = BoardSpec::new_unchecked(partition, presets, Coord::from_index(romas[0], n));
    let v = validate_spec(&spec);
    if let Some(first) = v.first() {
        return Err(BoardError::Semantic(first.to_string()));
    }
    Ok(spec)
}

/// Short alphanumeric label for box id `b`: `a..z`, then `A..Z`, then `b<id>`.
fn box_label(b: usize) -> String {
    const ALPHA: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if b < ALPHA.len() {
        (ALPHA[b] as char).to_string()
    } else {
        format!("b{b}")
    }
}

/// Canonical `ROMA 1` text; boxes are relabelled in reading order.
pub fn serialize_board(spec: &BoardSpec) -> String {
    let n = spec.n;
    let mut s = String::new();
    let _ = writeln!(s, "ROMA 1");
    let _ = writeln!(s, "N {n}");
    let _ = writeln!(s, "BOXES");
    let labels: Vec<String> = (0..spec.partition.num_boxes()).map(box_label).collect();
    let width = labels.iter().map(|l| l.len()).max().unwrap_or(1);
    for y in (0..n).rev() {
        let row: Vec<String> =
            (0..n).map(|x| format!("{:<width$}", labels[spec.partition.box_of(Coord::new(x, y))])).collect();
        let _ = writeln!(s, "{}", row.join(" ").trim_end());
    }
    let _ = writeln!(s, "CELLS");
    for y in (0..n).rev() {
        let row: Vec<String> =
            (0..n).map(|x| spec.preset(Coord::new(x, y)).map_or('.', |c| c.ascii()).to_string()).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

/// `CELLS`-style grid of a complete assignment, top row first.
pub fn format_assignment(a: &Assignment) -> String {
    let n = a.n;
    let mut s = String::new();
    for y in (0..n).rev() {
        let row: Vec<String> = (0..n).map(|x| a.get(Coord::new(x, y)).ascii().to_string()).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

/// Reads a solution: either a full board file (its `CELLS` grid is used) or a
/// bare grid of `n` rows. Every cell must be filled.
pub fn parse_assignment(text: &str, n: usize) -> Result<Assignment, BoardError> {
    if text.lines().any(|l| strip_comment(l).trim() == "ROMA 1") {
        let spec = parse_board(text)?;
        if spec.n != n {
            return Err(BoardError::Semantic(format!("solution has side {}, board has {n}", spec.n)));
        }
        let content: Option<Vec<CellContent>> = spec.presets.iter().copied().collect();
        return content
            .map(|c| Assignment::new(n, c))
            .ok_or_else(|| BoardError::Semantic("solution grid contains empty cells".into()));
    }
    let rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    if rows.len() != n {
        return Err(syntax(rows.first().map_or(1, |r| r.0), 1, format!("expected {n} rows, found {}", rows.len())));
    }
    let mut content = vec![CellContent::Roma; n * n];
    for (r, (ln, l)) in rows.into_iter().enumerate() {
        let toks = row_tokens(l, n);
        if toks.len() != n {
            return Err(syntax(ln, 1, format!("expected {n} cells, found {}", toks.len())));
        }
        for (x, (col, t)) in toks.into_iter().enumerate() {
            match parse_cell_char(&t, ln, col)? {
                Some(v) => content[(n - 1 - r) * n + x] = v,
                None => return Err(syntax(ln, col, "solution cell is empty")),
            }
        }
    }
    Ok(Assignment::new(n, content))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

/// Draws the board, optionally filled with an assignment.
pub fn render(spec: &BoardSpec, a: Option<&Assignment>, format: RenderFormat) -> String {
    match format {
        RenderFormat::Ascii => render_ascii(spec, a),
        RenderFormat::Svg => render_svg(spec, a),
    }
}

fn glyph(spec: &BoardSpec, a: Option<&Assignment>, c: Coord) -> char {
    match a {
        Some(a) => a.get(c).ascii(),
        None => spec.preset(c).map_or('.', |v| v.ascii()),
    }
}

/// ASCII picture on a `(2n+1) × (2n+1)` character lattice: cell glyphs sit at
/// odd positions, `|` and `-` mark box borders, `+` marks lattice corners.
/// A 1×1 board renders as the single glyph.
fn render_ascii(spec: &BoardSpec, a: Option<&Assignment>) -> String {
    let n = spec.n;
    if n == 1 {
        return format!("{}\n", glyph(spec, a, Coord::new(0, 0)));
    }
    let p = &spec.partition;
    let mut s = String::new();
    for r in 0..=2 * n {
        for q in 0..=2 * n {
            let ch = match (r % 2, q % 2) {
                (0, 0) => '+',
                (0, 1) => {
                    // horizontal edge above lattice row r/2 (counted from the top)
                    let x = q / 2;
                    let top = r / 2;
                    if top == 0 || top == n {
                        '-'
                    } else {
                        let above = Coord::new(x, n - top);
                        let below = Coord::new(x, n - top - 1);
                        if p.box_of(above) != p.box_of(below) {
                            '-'
                        } else {
                            ' '
                        }
                    }
                }
                (1, 0) => {
                    let y = n - 1 - r / 2;
                    let left = q / 2;
                    if left == 0 || left == n {
                        '|'
                    } else if p.box_of(Coord::new(left - 1, y)) != p.box_of(Coord::new(left, y)) {
                        '|'
                    } else {
                        ' '
                    }
                }
                _ => glyph(spec, a, Coord::new(q / 2, n - 1 - r / 2)),
            };
            s.push(ch);
        }
        s.push('\n');
    }
    s
}

/// Recovers the cell glyph grid (top row first) from [`render`] ASCII output.
pub fn cells_from_ascii(text: &str) -> Vec<Vec<char>> {
    let lines: Vec<Vec<char>> = text.lines().map(|l| l.chars().collect()).collect();
    if lines.len() == 1 {
        return vec![lines[0].clone()];
    }
    lines.iter().skip(1).step_by(2).map(|l| l.iter().skip(1).step_by(2).copied().collect()).collect()
}

fn render_svg(spec: &BoardSpec, a: Option<&Assignment>) -> String {
    let n = spec.n;
    let cell = 40;
    let size = n * cell;
    let p = &spec.partition;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w}" viewBox="-4 -4 {v} {v}">"#,
        w = size + 8,
        v = size + 8
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>"#);
    let _ = writeln!(s, r##"<g stroke="#999" stroke-width="1">"##);
    for i in 0..=n {
        let t = i * cell;
        let _ = writeln!(s, r#"<line x1="{t}" y1="0" x2="{t}" y2="{size}"/>"#);
        let _ = writeln!(s, r#"<line x1="0" y1="{t}" x2="{size}" y2="{t}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="4" stroke-linecap="square">"#);
    for y in 0..n {
        for x in 0..n {
            let c = Coord::new(x, y);
            let (px, py) = (x * cell, (n - 1 - y) * cell);
            let right_wall = x + 1 == n || p.box_of(c) != p.box_of(Coord::new(x + 1, y));
            let top_wall = y + 1 == n || p.box_of(c) != p.box_of(Coord::new(x, y + 1));
            if right_wall {
                let _ = writeln!(s, r#"<line x1="{a}" y1="{py}" x2="{a}" y2="{b}"/>"#, a = px + cell, b = py + cell);
            }
            if top_wall {
                let _ = writeln!(s, r#"<line x1="{px}" y1="{py}" x2="{b}" y2="{py}"/>"#, b = px + cell);
            }
            if x == 0 {
                let _ = writeln!(s, r#"<line x1="0" y1="{py}" x2="0" y2="{b}"/>"#, b = py + cell);
            }
            if y == 0 {
                let _ = writeln!(s, r#"<line x1="{px}" y1="{size}" x2="{b}" y2="{size}"/>"#, b = px + cell);
            }
        }
    }
    let _ = writeln!(s, "</g>");
    for y in 0..n {
        for x in 0..n {
            let c = Coord::new(x, y);
            let (cx, cy) = (x * cell + cell / 2, (n - 1 - y) * cell + cell / 2);
            let preset = spec.preset(c).is_some();
            let v = match a {
                Some(a) => Some(a.get(c)),
                None => spec.preset(c),
            };
            let colour = if preset { "black" } else { "#1f5fbf" };
            match v {
                Some(CellContent::Roma) => {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{cx}" cy="{cy}" r="11" fill="none" stroke="black" stroke-width="2"/>"#
                    );
                }
                Some(CellContent::Arrow(d)) => {
                    let rot = match d {
                        Direction::Right => 0,
                        Direction::Down => 90,
                        Direction::Left => 180,
                        Direction::Up => 270,
                    };
                    let _ = writeln!(
                        s,
                        r#"<path d="M -12 0 L 8 0 M 2 -6 L 10 0 L 2 6" fill="none" stroke="{colour}" stroke-width="3" transform="translate({cx} {cy}) rotate({rot})"/>"#
                    );
                }
                None => {}
            }
        }
    }
    let _ = writeln!(s, "</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_by_one() -> BoardSpec {
        parse_board("ROMA 1\nN 1\nBOXES\na\nCELLS\no\n").unwrap()
    }

    #[test]
    fn one_by_one_parses_with_no_empty_cells() {
        let s = one_by_one();
        assert_eq!(s.k(), 0);
        assert_eq!(s.roma(), Coord::new(0, 0));
    }

    #[test]
    fn serialize_one_by_one_has_four_sections() {
        let t = serialize_board(&one_by_one());
        assert_eq!(t, "ROMA 1\nN 1\nBOXES\na\nCELLS\no\n");
    }

    #[test]
    fn five_cell_box_is_rejected() {
        let t = "ROMA 1\nN 3\nBOXES\na a a\na a b\nc d e\nCELLS\n. . .\n. . .\no . .\n";
        assert!(matches!(parse_board(t), Err(BoardError::Semantic(_))));
    }

    #[test]
    fn syntax_errors_report_position() {
        let t = "ROMA 1\nN 2\nBOXES\na b\nc d\nCELLS\n. x\no .\n";
        assert_eq!(
            parse_board(t).unwrap_err(),
            BoardError::Syntax { line: 7, col: 3, msg: "unknown cell glyph `x`".into() }
        );
        let t = "ROMA 2\n";
        assert!(matches!(parse_board(t), Err(BoardError::Syntax { line: 1, .. })));
    }

    #[test]
    fn zero_or_two_romas_rejected() {
        let t = "ROMA 1\nN 2\nBOXES\na b\nc d\nCELLS\n. .\n. .\n";
        assert!(matches!(parse_board(t), Err(BoardError::Semantic(_))));
        let t = "ROMA 1\nN 2\nBOXES\na b\nc d\nCELLS\no .\n. o\n";
        assert!(matches!(parse_board(t), Err(BoardError::Semantic(_))));
    }

    #[test]
    fn roma_in_two_box_is_malformed() {
        let p = BoxPartition::from_labels(2, &[0, 0, 1, 2]);
        let mut pre = vec![None; 4];
        pre[0] = Some(CellContent::Roma);
        let s = BoardSpec::new_unchecked(p, pre, Coord::new(0, 0));
        let v = validate_spec(&s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::MalformedPartition);
    }

    #[test]
    fn diagonal_box_is_malformed() {
        // cells (0,0) and (1,1) share label 0
        let p = BoxPartition::from_labels(2, &[0, 1, 2, 0]);
        let mut pre = vec![None; 4];
        pre[1] = Some(CellContent::Roma);
        let s = BoardSpec::new_unchecked(p, pre, Coord::new(1, 0));
        let v = validate_spec(&s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::MalformedPartition);
    }

    #[test]
    fn flow_graph_rules() {
        let g = flow_graph(&one_by_one(), &Assignment::new(1, vec![CellContent::Roma]));
        assert_eq!(g.out_edge, vec![None]);

        let t = "ROMA 1\nN 2\nBOXES\na b\nc d\nCELLS\n. .\n> o\n";
        let s = parse_board(t).unwrap();
        let a = Assignment::from_fill(&s, &[CellContent::Arrow(Direction::Left), CellContent::Arrow(Direction::Down)]);
        let g = flow_graph(&s, &a);
        assert_eq!(g.next(Coord::new(0, 0)), Some(Coord::new(1, 0)));
        assert_eq!(g.next(Coord::new(0, 1)), None);
        assert_eq!(g.next(Coord::new(1, 1)), Some(Coord::new(1, 0)));
        assert_eq!(g.next(Coord::new(1, 0)), None);
    }

    #[test]
    fn mutual_arrows_form_a_cycle() {
        let t = "ROMA 1\nN 2\nBOXES\na b\nc d\nCELLS\nv >\n^ o\n";
        let s = parse_board(t).unwrap();
        let a = parse_assignment("v >\n^ o\n", 2).unwrap();
        let v = is_valid(&s, &a);
        let cyc: Vec<_> = v.iter().filter(|v| v.kind == ViolationKind::Cycle).collect();
        assert_eq!(cyc.len(), 1);
        assert_eq!(cyc[0].at, vec![Coord::new(0, 0), Coord::new(0, 1)]);
        assert!(v.iter().any(|v| v.kind == ViolationKind::Disconnected));
    }

    #[test]
    fn repeated_arrow_in_two_box() {
        let t = "ROMA 1\nN 2\nBOXES\na a\nb c\nCELLS\nv v\n> o\n";
        let s = parse_board(t).unwrap();
        let a = parse_assignment(t, 2).unwrap();
        let v = is_valid(&s, &a);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::BoxDuplicate);
    }

    #[test]
    fn trace_examples() {
        let s = one_by_one();
        let a = Assignment::new(1, vec![CellContent::Roma]);
        assert_eq!(trace_to_roma(&s, &a, Coord::new(0, 0)).unwrap(), vec![Coord::new(0, 0)]);

        let t = "ROMA 1\nN 2\nBOXES\na b\nc d\nCELLS\n> v\n> o\n";
        let s = parse_board(t).unwrap();
        let a = parse_assignment(t, 2).unwrap();
        assert!(is_valid(&s, &a).is_empty());
        assert_eq!(trace_to_roma(&s, &a, Coord::new(0, 0)).unwrap(), vec![Coord::new(0, 0), Coord::new(1, 0)]);
        assert_eq!(trace_to_roma(&s, &a, Coord::new(0, 1)).unwrap().len(), 3);
    }

    #[test]
    fn trace_reports_broken_flow() {
        let t = "ROMA 1\nN 2\nBOXES\na b\nc d\nCELLS\n< v\n> o\n";
        let s = parse_board(t).unwrap();
        let a = parse_assignment(t, 2).unwrap();
        assert_eq!(trace_to_roma(&s, &a, Coord::new(0, 1)), Err(TraceError::DeadEnd(Coord::new(0, 1))));
    }

    #[test]
    fn one_by_one_renders_as_circle() {
        assert_eq!(render(&one_by_one(), None, RenderFormat::Ascii), "o\n");
    }

    #[test]
    fn compact_cell_rows_are_accepted() {
        let t = "ROMA 1\nN 2\nBOXES\na b\nc d\nCELLS\n>v\n>o\n";
        let s = parse_board(t).unwrap();
        assert_eq!(s.preset(Coord::new(1, 1)), Some(CellContent::Arrow(Direction::Down)));
    }
}
