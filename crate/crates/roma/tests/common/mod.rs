//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roma::bench::{random_board, random_cnf};
use roma::board::{flow_graph, parse_board, Assignment, BoardSpec, CellContent, Coord, Direction};
use roma::prop::{search, SearchMode};
use roma::sat2roma::tiles::{self, GadgetTile};
use roma::sat2roma::{crossover_clauses, tile_test_board, Cnf};

pub fn corpus(name: &str) -> BoardSpec {
    let path = format!("{}/../../boards/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_board(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub fn corpus_text(name: &str) -> String {
    let path = format!("{}/../../boards/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

/// Longest walk, over all start cells, from a cell to the Roma cell along the
/// flow graph. `None` if some walk dead-ends, leaves the board or runs longer
/// than `n^2` steps.
pub fn longest_walk_to_roma(spec: &BoardSpec, a: &Assignment) -> Option<usize> {
    let n = spec.n();
    let g = flow_graph(spec, a);
    let roma = spec.roma().index(n);
    let limit = n * n;
    let mut depth: Vec<Option<usize>> = vec![None; n * n];
    depth[roma] = Some(0);
    for start in 0..n * n {
        let mut path = Vec::new();
        let mut cur = start;
        while depth[cur].is_none() {
            path.push(cur);
            if path.len() > limit {
                return None;
            }
            cur = g.next(Coord::from_index(cur, n))?.index(n);
        }
        let mut d = depth[cur].unwrap();
        for &c in path.iter().rev() {
            d += 1;
            depth[c] = Some(d);
        }
    }
    let worst = depth.iter().map(|d| d.unwrap()).max().unwrap();
    (worst <= limit).then_some(worst)
}

/// Generated boards of side 2 to 4 with 0 to 50% presets; half of them
/// planted from a hidden solution.
pub fn agreement_suite(count: usize, seed: u64) -> Vec<BoardSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 2 + i % 3;
            let frac = rng.gen_range(0.0..=0.5);
            random_board(n, frac, i % 2 == 0, &mut rng)
        })
        .collect()
}

/// Formulas with 1 to 4 variables and 0 to 4 clauses of up to three literals.
pub fn formula_suite(count: usize, seed: u64) -> Vec<Cnf> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let v = 1 + i % 4;
            let m = rng.gen_range(0..=4);
            random_cnf(v, m, &mut rng)
        })
        .collect()
}

/// The corpus crossover formula, with separate copies `a1, a2, b1, b2`.
pub fn corpus_crossover_formula() -> Cnf {
    roma::sat2roma::parse_dimacs(&corpus_text("fig7.cnf")).unwrap()
}

/// The crossover clauses with the copies joined: signal `a` is variable 1,
/// `b` is variable 2, the auxiliaries are 3 to 7.
pub fn crossover_formula() -> Cnf {
    Cnf::new(7, crossover_clauses(1, 2, [3, 4, 5, 6, 7])).unwrap()
}

/// Outcome of pinning single cells of a gadget test board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pinning {
    pub solutions: u128,
    /// Largest count seen after presetting one empty cell to a value that a
    /// solution uses there.
    pub max_after_pin: u128,
    /// Smallest such count.
    pub min_after_pin: u128,
}

pub fn pin_every_cell(spec: &BoardSpec) -> Pinning {
    let solutions = search(spec, SearchMode::Count).count.unwrap();
    let (mut lo, mut hi) = (u128::MAX, 0);
    for c in spec.empty_cells() {
        for d in Direction::ALL {
            if c.step(d, spec.n()).is_none() {
                continue;
            }
            let pinned = spec.with_presets(&[(c, CellContent::Arrow(d))]);
            let k = search(&pinned, SearchMode::Count).count.unwrap();
            if k > 0 {
                lo = lo.min(k);
                hi = hi.max(k);
            }
        }
    }
    Pinning { solutions, max_after_pin: hi, min_after_pin: lo }
}

/// Gadget tiles whose completions are pinned by any one cell.
pub fn unique_tiles() -> Vec<GadgetTile> {
    vec![
        tiles::straight_line(),
        tiles::fanout(),
        tiles::variable(),
        tiles::positive_literal(),
        tiles::negative_literal(),
    ]
}

/// Clause test board with input `i` preset ↓ (true) when bit `i` of `mask`
/// is set and ↑ otherwise.
pub fn clause_board(polarities: &[bool], mask: u32) -> BoardSpec {
    let t = tiles::clause(polarities);
    let pre: Vec<(usize, usize, Direction)> = (0..polarities.len())
        .map(|i| {
            let (x, y) = t.port(&format!("in{i}")).unwrap();
            (x, y, if mask >> i & 1 == 1 { Direction::Down } else { Direction::Up })
        })
        .collect();
    tile_test_board(&t, &pre)
}

pub fn clause_satisfied(polarities: &[bool], mask: u32) -> bool {
    polarities.iter().enumerate().any(|(i, &p)| (mask >> i & 1 == 1) == p)
}

/// Test board of a tile with nothing preset on its ports.
pub fn open_board(t: &GadgetTile) -> BoardSpec {
    tile_test_board(t, &[])
}
