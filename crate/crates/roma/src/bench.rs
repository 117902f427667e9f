//! Instance families for tests and benchmarks, and CSV rows for the results.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::board::{BoardSpec, BoxPartition, CellContent, Coord, Direction};
use crate::sat2roma::{Cnf, Literal};

/// Uniform spanning in-tree towards `root` (Wilson's algorithm); returns the
/// arrow of every other cell.
fn random_tree<R: Rng>(n: usize, root: Coord, rng: &mut R) -> Vec<Option<Direction>> {
    let total = n * n;
    let mut in_tree = vec![false; total];
    let mut next: Vec<Option<Direction>> = vec![None; total];
    in_tree[root.index(n)] = true;
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);
    for s in order {
        let mut cur = s;
        while !in_tree[cur] {
            let c = Coord::from_index(cur, n);
            let dirs: Vec<Direction> = Direction::ALL.into_iter().filter(|&d| c.step(d, n).is_some()).collect();
            let d = *dirs.choose(rng).unwrap();
            next[cur] = Some(d);
            cur = c.step(d, n).unwrap().index(n);
        }
        let mut cur = s;
        while !in_tree[cur] {
            in_tree[cur] = true;
            cur = Coord::from_index(cur, n).step(next[cur].unwrap(), n).unwrap().index(n);
        }
    }
    next
}

/// Random connected boxes of at most four cells. When `arrows` is given, a
/// box never receives two cells with the same arrow. The Roma cell stays alone.
fn random_partition<R: Rng>(n: usize, roma: Coord, arrows: Option<&[Option<Direction>]>, rng: &mut R) -> BoxPartition {
    let total = n * n;
    let mut label = vec![usize::MAX; total];
    label[roma.index(n)] = 0;
    let mut next_label = 1;
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);
    for s in order {
        if label[s] != usize::MAX {
            continue;
        }
        let target = rng.gen_range(1..=4);
        let mut members = vec![s];
        let mut used: u8 = arrows.and_then(|a| a[s]).map_or(0, |d| d.bit());
        label[s] = next_label;
        while members.len() < target {
            let mut frontier = Vec::new();
            for &m in &members {
                let c = Coord::from_index(m, n);
                for d in Direction::ALL {
                    if let Some(t) = c.step(d, n) {
                        let ti = t.index(n);
                        let bit = arrows.and_then(|a| a[ti]).map_or(0, |d| d.bit());
                        if label[ti] == usize::MAX && used & bit == 0 && !frontier.contains(&ti) {
                            frontier.push(ti);
                        }
                    }
                }
            }
            match frontier.choose(rng) {
                Some(&t) => {
                    label[t] = next_label;
                    used |= arrows.and_then(|a| a[t]).map_or(0, |d| d.bit());
                    members.push(t);
                }
                None => break,
            }
        }
        next_label += 1;
    }
    BoxPartition::from_labels(n, &label)
}

/// A random legal board of side `n` with about `preset_fraction` of its
/// non-Roma cells preset. With `planted` the presets come from a hidden
/// solution, so the board is solvable; otherwise presets are random arrows
/// that point onto the board.
pub fn random_board<R: Rng>(n: usize, preset_fraction: f64, planted: bool, rng: &mut R) -> BoardSpec {
    let total = n * n;
    let roma = Coord::from_index(rng.gen_range(0..total), n);
    let tree = if planted { Some(random_tree(n, roma, rng)) } else { None };
    let partition = random_partition(n, roma, tree.as_deref(), rng);
    let mut presets: Vec<Option<CellContent>> = vec![None; total];
    presets[roma.index(n)] = Some(CellContent::Roma);
    let mut others: Vec<usize> = (0..total).filter(|&i| i != roma.index(n)).collect();
    others.shuffle(rng);
    let count = ((others.len() as f64) * preset_fraction).round() as usize;
    for &i in others.iter().take(count) {
        let d = match &tree {
            Some(t) => t[i].unwrap(),
            None => {
                let c = Coord::from_index(i, n);
                let dirs: Vec<Direction> = Direction::ALL.into_iter().filter(|&d| c.step(d, n).is_some()).collect();
                *dirs.choose(rng).unwrap()
            }
        };
        presets[i] = Some(CellContent::Arrow(d));
    }
    BoardSpec::new(partition, presets, roma).expect("generator builds legal boards")
}

/// Board whose empty cells are exactly `pairs` fully empty horizontal
/// 2-boxes. All other cells are preset 1-boxes: ↓ above the bottom row and →
/// along it, ending in the Roma cell at the bottom-right corner.
pub fn twobox_board(pairs: usize) -> BoardSpec {
    let mut n = 4;
    while (n - 1) * (n / 2) < pairs {
        n += 1;
    }
    let per_row = n / 2;
    let total = n * n;
    let mut labels: Vec<usize> = (0..total).collect();
    let mut presets: Vec<Option<CellContent>> = (0..total)
        .map(|i| {
            let c = Coord::from_index(i, n);
            Some(if c.y > 0 {
                CellContent::Arrow(Direction::Down)
            } else if c.x + 1 < n {
                CellContent::Arrow(Direction::Right)
            } else {
                CellContent::Roma
            })
        })
        .collect();
    for p in 0..pairs {
        let y = n - 1 - p / per_row;
        let x = 2 * (p % per_row);
        let a = Coord::new(x, y).index(n);
        let b = Coord::new(x + 1, y).index(n);
        labels[b] = labels[a];
        presets[a] = None;
        presets[b] = None;
    }
    BoardSpec::new(BoxPartition::from_labels(n, &labels), presets, Coord::new(n - 1, 0))
        .expect("two-box family is legal")
}

/// Node bound for `k` empty cells arranged in fully empty 2-boxes.
pub fn twobox_node_bound(k: usize) -> f64 {
    11f64.powf(k as f64 / 2.0) * (k as f64 + 1.0)
}

/// Random formula whose clauses each hold `min(3, num_vars)` distinct
/// variables with random polarities.
pub fn random_cnf<R: Rng>(num_vars: usize, num_clauses: usize, rng: &mut R) -> Cnf {
    assert!(num_vars >= 1);
    let vars: Vec<usize> = (1..=num_vars).collect();
    let clauses = (0..num_clauses)
        .map(|_| vars.choose_multiple(rng, num_vars.min(3)).map(|&v| Literal { var: v, positive: rng.gen() }).collect())
        .collect();
    Cnf::new(num_vars, clauses).expect("generated clauses are well formed")
}

/// One benchmark measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub k: usize,
    pub method: String,
    /// Search nodes for `prop`, stored configurations for `dp`, leaves for `oracle`.
    pub work: u64,
    pub wall_ms: f64,
    pub count: Option<u128>,
    /// `work` divided by the family's theoretical bound, where one exists.
    pub ratio: Option<f64>,
}

pub const CSV_HEADER: &str = "instance,n,k,method,work,wall_ms,count,ratio";

impl BenchRow {
    pub fn csv(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{:.3},{},{}",
            self.instance,
            self.n,
            self.k,
            self.method,
            self.work,
            self.wall_ms,
            self.count.map_or(String::new(), |c| c.to_string()),
            self.ratio.map_or(String::new(), |r| format!("{r:.6}"))
        );
        s
    }
}
