//! Square drawing surface for assembling boards from tiles, with the filler
//! that turns every unused cell into a preset 1-box.

use std::collections::VecDeque;

use thiserror::Error;

use super::tiles::GadgetTile;
use crate::board::{BoardSpec, BoxPartition, CellContent, Coord, Direction};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CanvasError {
    #[error("cells {0} and more are unreachable by the filler, first at ({1}, {2})")]
    Unfilled(usize, usize, usize),
    #[error("board is invalid: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Free,
    Used { box_id: usize, preset: Option<CellContent> },
}

/// Cells of one clause ring and the filler limits that apply to it.
#[derive(Debug, Clone)]
struct Ring {
    cells: Vec<usize>,
    /// Lowest row the ring's own filler may claim in the first pass.
    floor: usize,
    /// Cells its flow may leave through; they must join an earlier tier.
    drains: Vec<usize>,
}

/// Board under construction. Tiles are stamped at their bottom-left corner;
/// stamping over a used cell panics.
#[derive(Debug, Clone)]
pub struct Canvas {
    n: usize,
    slots: Vec<Slot>,
    next_box: usize,
    roma: Option<Coord>,
    /// Preset 1-boxes whose flow reaches the Roma cell directly.
    sources: Vec<usize>,
    rings: Vec<Ring>,
}

impl Canvas {
    pub fn new(n: usize) -> Canvas {
        Canvas { n, slots: vec![Slot::Free; n * n], next_box: 0, roma: None, sources: Vec::new(), rings: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_free(&self, x: usize, y: usize) -> bool {
        self.slots[y * self.n + x] == Slot::Free
    }

    pub fn preset(&self, x: usize, y: usize) -> Option<CellContent> {
        match self.slots[y * self.n + x] {
            Slot::Used { preset, .. } => preset,
            Slot::Free => None,
        }
    }

    fn put(&mut self, x: usize, y: usize, box_id: usize, preset: Option<CellContent>) {
        assert!(x < self.n && y < self.n, "({x}, {y}) is off the canvas");
        let i = y * self.n + x;
        assert_eq!(self.slots[i], Slot::Free, "({x}, {y}) is already used");
        self.slots[i] = Slot::Used { box_id, preset };
    }

    pub fn stamp(&mut self, tile: &GadgetTile, ox: usize, oy: usize) {
        let mut ids: Vec<(u32, usize)> = Vec::new();
        for y in 0..tile.height {
            for x in 0..tile.width {
                if let Some(c) = tile.cell(x, y) {
                    let id = match ids.iter().find(|(l, _)| *l == c.label) {
                        Some(&(_, id)) => id,
                        None => {
                            self.next_box += 1;
                            ids.push((c.label, self.next_box - 1));
                            self.next_box - 1
                        }
                    };
                    self.put(ox + x, oy + y, id, c.preset);
                }
            }
        }
    }

    /// Preset 1-box.
    pub fn single(&mut self, x: usize, y: usize, v: CellContent) {
        self.next_box += 1;
        self.put(x, y, self.next_box - 1, Some(v));
    }

    pub fn set_roma(&mut self, x: usize, y: usize) {
        self.single(x, y, CellContent::Roma);
        self.roma = Some(Coord::new(x, y));
        self.sources.push(y * self.n + x);
    }

    /// Preset 1-box on the core line; its flow must reach the Roma cell
    /// through other core-line cells.
    pub fn core(&mut self, x: usize, y: usize, d: Direction) {
        self.single(x, y, CellContent::Arrow(d));
        self.sources.push(y * self.n + x);
    }

    /// Marks a used cell whose flow runs along the core line to the Roma
    /// cell, so the filler may point at it.
    pub fn mark_source(&mut self, x: usize, y: usize) {
        assert!(!self.is_free(x, y));
        self.sources.push(y * self.n + x);
    }

    /// Starts a new clause ring and returns its handle. Rings must be opened
    /// from the bottom of the board upwards.
    pub fn open_ring(&mut self, floor: usize) -> usize {
        self.rings.push(Ring { cells: Vec::new(), floor, drains: Vec::new() });
        self.rings.len() - 1
    }

    pub fn ring_cell(&mut self, ring: usize, x: usize, y: usize, d: Direction) {
        self.single(x, y, CellContent::Arrow(d));
        self.rings[ring].cells.push(y * self.n + x);
    }

    /// Marks a used cell that lies on the ring's path.
    pub fn mark_ring(&mut self, ring: usize, x: usize, y: usize) {
        assert!(!self.is_free(x, y));
        self.rings[ring].cells.push(y * self.n + x);
    }

    pub fn ring_drain(&mut self, ring: usize, x: usize, y: usize) {
        self.rings[ring].drains.push(y * self.n + x);
    }

    /// Points every free cell at a neighbour so that all flow ends in the
    /// Roma cell or in a clause ring. Tier 0 grows from the core line. Each
    /// ring then claims what is left above its floor, rings in the order
    /// opened. Remaining cells join the lowest adjacent tier, and a ring's
    /// drain cells only ever join a tier below that ring.
    fn fill(&self) -> Result<Vec<Option<Direction>>, CanvasError> {
        let n = self.n;
        let total = n * n;
        // rank 0 is the core line, rank k + 1 is ring k
        let mut rank: Vec<Option<usize>> = vec![None; total];
        let mut dir: Vec<Option<Direction>> = vec![None; total];
        let mut drain_limit: Vec<usize> = vec![usize::MAX; total];
        for (k, r) in self.rings.iter().enumerate() {
            for &c in &r.drains {
                drain_limit[c] = drain_limit[c].min(k + 1);
            }
        }
        let free = |i: usize| self.slots[i] == Slot::Free;
        let grow = |rank: &mut Vec<Option<usize>>,
                    dir: &mut Vec<Option<Direction>>,
                    seeds: &[usize],
                    r: usize,
                    allowed: &dyn Fn(usize) -> bool| {
            let mut q: VecDeque<usize> = seeds.iter().copied().collect();
            while let Some(i) = q.pop_front() {
                let c = Coord::from_index(i, n);
                for d in Direction::ALL {
                    if let Some(t) = c.step(d, n) {
                        let ti = t.index(n);
                        if free(ti) && rank[ti].is_none() && r < drain_limit[ti] && allowed(ti) {
                            rank[ti] = Some(r);
                            dir[ti] = Some(d.opposite());
                            q.push_back(ti);
                        }
                    }
                }
            }
        };
        for &s in &self.sources {
            rank[s] = Some(0);
        }
        grow(&mut rank, &mut dir, &self.sources, 0, &|_| true);
        for (k, ring) in self.rings.iter().enumerate() {
            for &c in &ring.cells {
                rank[c] = Some(k + 1);
            }
            let floor = ring.floor;
            grow(&mut rank, &mut dir, &ring.cells, k + 1, &|i| i / n >= floor);
        }
        loop {
            let mut changed = false;
            for r in 0..=self.rings.len() {
                let seeds: Vec<usize> = (0..total).filter(|&i| rank[i] == Some(r)).collect();
                let before = rank.iter().filter(|x| x.is_some()).count();
                grow(&mut rank, &mut dir, &seeds, r, &|_| true);
                if rank.iter().filter(|x| x.is_some()).count() != before {
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
        }
        self.fill_sealed(&mut dir);
        let missing: Vec<usize> = (0..total).filter(|&i| free(i) && dir[i].is_none()).collect();
        if let Some(&first) = missing.first() {
            let c = Coord::from_index(first, n);
            return Err(CanvasError::Unfilled(missing.len(), c.x, c.y));
        }
        Ok(dir)
    }

    /// Arrows a cell of box `b` may still take.
    fn open_arrows(&self, b: usize, boxes: &[u8]) -> u8 {
        !boxes[b] & 0b1111
    }

    /// Unfilled regions that no used cell can point into get arrows towards
    /// an adjacent preset cell. No flow enters such a region, so it cannot
    /// close a cycle.
    fn fill_sealed(&self, dir: &mut [Option<Direction>]) {
        let n = self.n;
        let mut boxes = vec![0u8; self.next_box];
        for s in &self.slots {
            if let Slot::Used { box_id, preset: Some(CellContent::Arrow(d)) } = *s {
                boxes[box_id] |= d.bit();
            }
        }
        let open = |dir: &[Option<Direction>], i: usize| self.slots[i] == Slot::Free && dir[i].is_none();
        let mut seen = vec![false; n * n];
        for start in 0..n * n {
            if seen[start] || !open(dir, start) {
                continue;
            }
            let mut region = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < region.len() {
                let c = Coord::from_index(region[k], n);
                k += 1;
                for d in Direction::ALL {
                    if let Some(t) = c.step(d, n) {
                        let ti = t.index(n);
                        if !seen[ti] && open(dir, ti) {
                            seen[ti] = true;
                            region.push(ti);
                        }
                    }
                }
            }
            let mut sealed = true;
            let mut exit: Option<(usize, Direction)> = None;
            for &i in &region {
                let c = Coord::from_index(i, n);
                for d in Direction::ALL {
                    let Some(t) = c.step(d, n) else { continue };
                    let ti = t.index(n);
                    let into = d.opposite();
                    match self.slots[ti] {
                        Slot::Free => {
                            if dir[ti] == Some(into) {
                                sealed = false;
                            }
                        }
                        Slot::Used { preset: Some(CellContent::Arrow(a)), .. } => {
                            if a == into {
                                sealed = false;
                            } else if exit.is_none() {
                                exit = Some((i, d));
                            }
                        }
                        Slot::Used { preset: Some(CellContent::Roma), .. } => {}
                        Slot::Used { box_id, preset: None } => {
                            if self.open_arrows(box_id, &boxes) & into.bit() != 0 {
                                sealed = false;
                            }
                        }
                    }
                }
            }
            let Some((first, d)) = exit.filter(|_| sealed) else { continue };
            dir[first] = Some(d);
            let mut q: VecDeque<usize> = VecDeque::from([first]);
            while let Some(i) = q.pop_front() {
                let c = Coord::from_index(i, n);
                for d in Direction::ALL {
                    if let Some(t) = c.step(d, n) {
                        let ti = t.index(n);
                        if open(dir, ti) {
                            dir[ti] = Some(d.opposite());
                            q.push_back(ti);
                        }
                    }
                }
            }
        }
    }

    /// Fills the free cells and returns the finished board.
    pub fn finish(&self) -> Result<BoardSpec, CanvasError> {
        let n = self.n;
        let dir = self.fill()?;
        let mut labels = vec![0usize; n * n];
        let mut presets = vec![None; n * n];
        let mut next = self.next_box;
        for i in 0..n * n {
            match self.slots[i] {
                Slot::Used { box_id, preset } => {
                    labels[i] = box_id;
                    presets[i] = preset;
                }
                Slot::Free => {
                    labels[i] = next;
                    next += 1;
                    presets[i] = dir[i].map(CellContent::Arrow);
                }
            }
        }
        let roma = self.roma.expect("canvas has a Roma cell");
        BoardSpec::new(BoxPartition::from_labels(n, &labels), presets, roma)
            .map_err(|v| CanvasError::Invalid(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))
    }
}
