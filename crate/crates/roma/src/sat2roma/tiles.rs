//! Gadget tiles: rectangular pieces of board with their own boxes and presets.
//!
//! Tiles are written as two text grids with rows listed top first. The box
//! grid names each cell's box with a letter (`#` marks a cell outside the
//! tile); the preset grid holds `.` for an empty cell, an arrow character for
//! a preset, and `?` outside the tile. Local coordinates have their origin in
//! the bottom-left corner, like the board.

use crate::board::{CellContent, Direction};

/// One cell of a tile: its local box label and optional preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileCell {
    pub label: u32,
    pub preset: Option<CellContent>,
}

/// Named cell on a tile boundary where a signal enters or leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: &'static str,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetTile {
    pub name: String,
    pub width: usize,
    pub height: usize,
    cells: Vec<Option<TileCell>>,
    pub ports: Vec<Port>,
}

fn split_rows(text: &str) -> Vec<Vec<char>> {
    text.split(['/', '\n'])
        .map(|r| r.chars().filter(|c| !c.is_whitespace()).collect::<Vec<char>>())
        .filter(|r| !r.is_empty())
        .collect()
}

impl GadgetTile {
    /// Builds a tile from a box grid and a preset grid of the same shape.
    /// Panics on malformed text, which only comes from this module.
    pub fn from_text(name: &str, boxes: &str, presets: &str) -> GadgetTile {
        let b = split_rows(boxes);
        let p = split_rows(presets);
        let height = b.len();
        let width = b[0].len();
        assert_eq!(p.len(), height, "{name}: preset grid height");
        let mut cells = vec![None; width * height];
        for (r, (brow, prow)) in b.iter().zip(&p).enumerate() {
            assert_eq!(brow.len(), width, "{name}: box row {r} width");
            assert_eq!(prow.len(), width, "{name}: preset row {r} width");
            let y = height - 1 - r;
            for x in 0..width {
                let (bc, pc) = (brow[x], prow[x]);
                if bc == '#' {
                    assert_eq!(pc, '?', "{name}: cell ({x},{y}) outside the tile has a preset");
                    continue;
                }
                let preset = match pc {
                    '.' => None,
                    c => Some(CellContent::from_char(c).unwrap_or_else(|| panic!("{name}: bad preset {c}"))),
                };
                cells[y * width + x] = Some(TileCell { label: bc as u32, preset });
            }
        }
        GadgetTile { name: name.to_string(), width, height, cells, ports: Vec::new() }
    }

    fn with_ports(mut self, ports: &[(&'static str, usize, usize)]) -> GadgetTile {
        self.ports = ports.iter().map(|&(name, x, y)| Port { name, x, y }).collect();
        self
    }

    pub fn cell(&self, x: usize, y: usize) -> Option<TileCell> {
        self.cells[y * self.width + x]
    }

    /// Local position of a named port.
    pub fn port(&self, name: &str) -> Option<(usize, usize)> {
        self.ports.iter().find(|p| p.name == name).map(|p| (p.x, p.y))
    }

    /// Copy with one more preset. Panics if the cell is outside the tile or
    /// already preset.
    pub fn with_preset(&self, x: usize, y: usize, v: CellContent) -> GadgetTile {
        let mut t = self.clone();
        let c = t.cells[y * t.width + x].as_mut().unwrap_or_else(|| panic!("({x}, {y}) is outside {}", self.name));
        assert!(c.preset.is_none(), "({x}, {y}) of {} is already preset", self.name);
        c.preset = Some(v);
        t
    }

    /// Number of cells without a preset.
    pub fn empty_cells(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.preset.is_none()).count()
    }

    /// Left-right mirror image; `←` and `→` presets swap.
    pub fn mirrored(&self) -> GadgetTile {
        let w = self.width;
        let mut cells = vec![None; self.cells.len()];
        for y in 0..self.height {
            for x in 0..w {
                cells[y * w + (w - 1 - x)] = self.cells[y * w + x].map(|c| TileCell {
                    label: c.label,
                    preset: c.preset.map(|p| match p {
                        CellContent::Arrow(Direction::Left) => CellContent::Arrow(Direction::Right),
                        CellContent::Arrow(Direction::Right) => CellContent::Arrow(Direction::Left),
                        other => other,
                    }),
                });
            }
        }
        let ports = self.ports.iter().map(|p| Port { name: p.name, x: w - 1 - p.x, y: p.y }).collect();
        GadgetTile { name: format!("{}-mirrored", self.name), width: w, height: self.height, cells, ports }
    }
}

/// Conductor-box: a horizontal 4-box whose two inner cells are fixed `←`
/// `→`. The outer cells take `↑` and `↓` in one of two ways.
pub fn conductor() -> GadgetTile {
    GadgetTile::from_text("conductor", "aaaa", ".<>.").with_ports(&[("left", 0, 0), ("right", 3, 0)])
}

/// Three stacked conductor-boxes carrying a signal vertically.
pub fn straight_line() -> GadgetTile {
    GadgetTile::from_text("straight-line", "aaaa/bbbb/cccc", ".<>./.<>./.<>.")
        .with_ports(&[("bottom", 0, 0), ("top", 0, 2)])
}

/// Corner piece turning a signal column.
pub fn corner() -> GadgetTile {
    GadgetTile::from_text("corner", "aa#/bc#/b##/bbd", ".<?/.^?/<??/^..").with_ports(&[("in", 0, 0), ("out", 0, 3)])
}

/// Fanout: one conductor below feeding two conductors above.
pub fn fanout() -> GadgetTile {
    GadgetTile::from_text("fanout", "aaaa##bbbb/cccddddeee/ffff##gggg", ".<>.??.<>./.<>.<>.<>./.<>.??.<>.")
        .with_ports(&[("in", 0, 0), ("out0", 0, 2), ("out1", 6, 2)])
}

/// Fanout with `gaps` repetitions: `gaps + 1` conductors on the top and
/// bottom rows, every sixth column, joined by one middle row. Width is
/// `6 * gaps + 4`; `fanout_chain(1)` equals [`fanout`].
pub fn fanout_chain(gaps: usize) -> GadgetTile {
    assert!(gaps >= 1);
    let w = 6 * gaps + 4;
    let label = |base: u32, k: usize| char::from_u32(base + k as u32).unwrap();
    let mut top_b = vec!['#'; w];
    let mut bot_b = vec!['#'; w];
    let mut outer_p = vec!['?'; w];
    for k in 0..=gaps {
        for (i, c) in ".<>.".chars().enumerate() {
            top_b[6 * k + i] = label(0x100, k);
            bot_b[6 * k + i] = label(0x200, k);
            outer_p[6 * k + i] = c;
        }
    }
    let mut mid_b: Vec<char> = Vec::with_capacity(w);
    let mut mid_p = String::with_capacity(w);
    let mut segments: Vec<&str> = vec![".<>"];
    for k in 0..gaps {
        segments.push(".<>.");
        segments.push(if k + 1 < gaps { "<>" } else { "<>." });
    }
    for (k, seg) in segments.iter().enumerate() {
        mid_b.extend(std::iter::repeat(label(0x300, k)).take(seg.len()));
        mid_p.push_str(seg);
    }
    let s = |v: &[char]| v.iter().collect::<String>();
    let boxes = format!("{}/{}/{}", s(&top_b), s(&mid_b), s(&bot_b));
    let presets = format!("{0}/{mid_p}/{0}", s(&outer_p));
    let mut ports = vec![("in", 0, 0)];
    const OUT: [&str; 8] = ["out0", "out1", "out2", "out3", "out4", "out5", "out6", "out7"];
    for k in 0..=gaps.min(7) {
        ports.push((OUT[k], 6 * k, 2));
    }
    GadgetTile::from_text(&format!("fanout-chain-{gaps}"), &boxes, &presets).with_ports(&ports)
}

/// Local column of the variable-gadget cell whose arrow encodes the truth
/// value, and its row.
pub const DECISION: (usize, usize) = (0, 8);
/// Local row of the core line inside the variable-gadget.
pub const CORE_ROW: usize = 6;

/// Variable-gadget, 13 wide and 11 high. The core line runs through row
/// [`CORE_ROW`]; a fanout on top and one underneath carry the signal. The
/// decision cell [`DECISION`] holds `↓` for true and `↑` for false.
pub fn variable() -> GadgetTile {
    GadgetTile::from_text(
        "variable",
        "a a a a # # b b b b # # # /
         c c c d d d d e e e # # # /
         f f f f # # g g g g h # # /
         i j # # # # # # # k h # # /
         i l m n o p q r s k t u v /
         i i w w # # # # # k k x x /
         # # # w # # # # # # # # x /
         # # y w # # # # # # # z x /
         # # y A A A A # # B B B B /
         # # # C C C D D D D E E E /
         # # # F F F F # # G G G G",
        ". < > . ? ? . < > . ? ? ? /
         . < > . < > . < > . ? ? ? /
         . < > . ? ? . < > . < ? ? /
         . ^ ? ? ? ? ? ? ? . ^ ? ? /
         < < < < < < < < < < < < < /
         ^ . . v ? ? ? ? ? ^ . . v /
         ? ? ? > ? ? ? ? ? ? ? ? > /
         ? ? v . ? ? ? ? ? ? ? v . /
         ? ? > . < > . ? ? . < > . /
         ? ? ? . < > . < > . < > . /
         ? ? ? . < > . ? ? . < > .",
    )
    .with_ports(&[
        ("decision", DECISION.0, DECISION.1),
        ("top0", 0, 10),
        ("top1", 6, 10),
        ("bottom0", 3, 0),
        ("bottom1", 9, 0),
        ("core-in", 12, CORE_ROW),
        ("core-out", 0, CORE_ROW),
    ])
}

/// Positive literal-gadget, 10 wide and 8 high. The signal enters through
/// the bottom-left conductor; the clause ring passes through the two cells
/// on the top row. A true signal lets the ring drain out of the bottom-right
/// conductor.
pub fn positive_literal() -> GadgetTile {
    GadgetTile::from_text(
        "positive-literal",
        "#######ab#/#######cd#/###eeffgh#/###eiifjk#/###elmfno#/pppplmqqqq/rrrssssttt/uuuu##vvvv",
        "???????v>?/???????v^?/???^..^v^?/???v<>v<^?/???.vv.>^?/.<>.<>.<>./.<>.<>.<>./.<>.??.<>.",
    )
    .with_ports(&[("in", 0, 0), ("drain", 6, 0), ("ring-in", 7, 7), ("ring-out", 8, 7)])
}

/// Negative literal-gadget: same frame as [`positive_literal`], draining when
/// the signal is false.
pub fn negative_literal() -> GadgetTile {
    GadgetTile::from_text(
        "negative-literal",
        "##abcde###/##fghdi###/##jkkll###/##mknnl###/##okpql###/rrrrpqssss/tttuuuuvvv/wwww##xxxx",
        "??>>v>>???/??v<v^^???/??v^..^???/??>v<>v???/??<.vv.???/.<>.<>.<>./.<>.<>.<>./.<>.??.<>.",
    )
    .with_ports(&[("in", 0, 0), ("drain", 6, 0), ("ring-in", 4, 7), ("ring-out", 6, 7)])
}

/// Literal-gadget for a polarity.
pub fn literal(positive: bool) -> GadgetTile {
    if positive {
        positive_literal()
    } else {
        negative_literal()
    }
}

/// Horizontal distance between literal-gadgets inside [`clause`].
pub const CLAUSE_STRIDE: usize = 12;

/// Clause-gadget: literal-gadgets side by side, every [`CLAUSE_STRIDE`]
/// columns, threaded by a ring of preset 1-boxes. The ring runs right along
/// the literals' top row, returns left one row higher and closes down the
/// first column. Its flow can only leave through a draining literal.
pub fn clause(polarities: &[bool]) -> GadgetTile {
    assert!(!polarities.is_empty() && polarities.len() <= 3);
    let w = CLAUSE_STRIDE * (polarities.len() - 1) + 10;
    let h = 9;
    let mut boxes = vec![vec!['#'; w]; h];
    let mut presets = vec![vec!['?'; w]; h];
    let mut label = 0u32;
    for (i, &pos) in polarities.iter().enumerate() {
        let t = literal(pos);
        let ox = CLAUSE_STRIDE * i;
        for y in 0..t.height {
            for x in 0..t.width {
                if let Some(c) = t.cell(x, y) {
                    let r = h - 1 - y;
                    boxes[r][ox + x] = char::from_u32(0x100 + i as u32 * 64 + c.label).unwrap();
                    presets[r][ox + x] = c.preset.map_or('.', |p| p.ascii());
                }
            }
        }
    }
    let xr = w - 1;
    for y in 7..h {
        for x in 0..w {
            let r = h - 1 - y;
            if boxes[r][x] != '#' {
                continue;
            }
            let d = if y == 8 {
                if x == 0 {
                    'v'
                } else {
                    '<'
                }
            } else if x == xr {
                '^'
            } else {
                '>'
            };
            boxes[r][x] = char::from_u32(0x1000 + label).unwrap();
            label += 1;
            presets[r][x] = d;
        }
    }
    let join = |g: &Vec<Vec<char>>| g.iter().map(|r| r.iter().collect::<String>()).collect::<Vec<_>>().join("/");
    let mut ports: Vec<(&'static str, usize, usize)> = Vec::new();
    const IN: [&str; 3] = ["in0", "in1", "in2"];
    for i in 0..polarities.len() {
        ports.push((IN[i], CLAUSE_STRIDE * i, 0));
    }
    GadgetTile::from_text("clause", &join(&boxes), &join(&presets)).with_ports(&ports)
}
