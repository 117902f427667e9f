//! Property tests over generated boards, assignments and formulas.

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::longest_walk_to_roma;
use roma::bench::{random_board, random_cnf};
use roma::board::{
    cells_from_ascii, flow_graph, is_valid, is_valid_reduced, parse_board, render, serialize_board, trace_to_roma,
    Assignment, BoardSpec, CellContent, Coord, Direction, RenderFormat,
};
use roma::oracle::{oracle_count, oracle_enumerate};
use roma::prop::{initial_candidates, propagate, search, SearchMode};
use roma::sat2roma::{layout, Cnf};

fn board(seed: u64, n: usize, frac: f64, planted: bool) -> BoardSpec {
    random_board(n, frac, planted, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Presets kept, every empty cell filled with an arbitrary arrow.
fn random_fill(spec: &BoardSpec, seed: u64) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fill: Vec<CellContent> =
        spec.empty_cells().iter().map(|_| CellContent::Arrow(Direction::ALL[rng.gen_range(0..4)])).collect();
    Assignment::from_fill(spec, &fill)
}

/// Every filling of the empty cells, checked one by one with the full rule.
fn brute_force_count(spec: &BoardSpec) -> u128 {
    let k = spec.k();
    let mut total = 0;
    for code in 0..4usize.pow(k as u32) {
        let fill: Vec<CellContent> = (0..k).map(|i| CellContent::Arrow(Direction::ALL[code >> (2 * i) & 3])).collect();
        if is_valid(spec, &Assignment::from_fill(spec, &fill)).is_empty() {
            total += 1;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialize_then_parse_is_identity(seed in any::<u64>(), n in 1usize..=6, frac in 0.0f64..=1.0, planted: bool) {
        let spec = board(seed, n, frac, planted);
        let text = serialize_board(&spec);
        let back = parse_board(&text).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(serialize_board(&back), text);
    }

    #[test]
    fn render_is_deterministic_and_keeps_the_cells(seed in any::<u64>(), n in 1usize..=5) {
        let spec = board(seed, n, 0.3, true);
        let a = random_fill(&spec, seed ^ 1);
        let text = render(&spec, Some(&a), RenderFormat::Ascii);
        prop_assert_eq!(&text, &render(&spec, Some(&a), RenderFormat::Ascii));
        prop_assert_eq!(render(&spec, None, RenderFormat::Svg), render(&spec, None, RenderFormat::Svg));
        let grid = cells_from_ascii(&text);
        prop_assert_eq!(grid.len(), n);
        for (r, row) in grid.iter().enumerate() {
            for (x, &ch) in row.iter().enumerate() {
                prop_assert_eq!(ch, a.get(Coord::new(x, n - 1 - r)).ascii());
            }
        }
    }

    #[test]
    fn flow_graph_edges_follow_the_arrows(seed in any::<u64>(), n in 1usize..=6) {
        let spec = board(seed, n, 0.2, false);
        let a = random_fill(&spec, seed ^ 2);
        let g = flow_graph(&spec, &a);
        prop_assert_eq!(g.next(spec.roma()), None);
        for i in 0..n * n {
            let c = Coord::from_index(i, n);
            if let CellContent::Arrow(d) = a.get(c) {
                prop_assert_eq!(g.next(c), c.step(d, n));
            }
        }
    }

    #[test]
    fn reduced_check_agrees_with_the_full_check(seed in any::<u64>(), n in 2usize..=5, planted: bool) {
        let spec = board(seed, n, 0.4, planted);
        let a = random_fill(&spec, seed ^ 3);
        prop_assert_eq!(is_valid(&spec, &a).is_empty(), is_valid_reduced(&spec, &a).is_empty());
    }

    #[test]
    fn oracle_count_matches_independent_refiltering(seed in any::<u64>(), n in 2usize..=3, planted: bool) {
        let spec = board(seed, n, 0.3, planted);
        prop_assume!(spec.k() <= 7);
        prop_assert_eq!(oracle_count(&spec).unwrap(), brute_force_count(&spec));
    }

    #[test]
    fn consistent_preset_never_raises_the_count(seed in any::<u64>(), n in 2usize..=4) {
        let spec = board(seed, n, 0.3, true);
        let all = oracle_enumerate(&spec, Some(1)).unwrap();
        let w = &all.solutions[0];
        for c in spec.empty_cells() {
            let pinned = spec.with_presets(&[(c, w.get(c))]);
            let k = oracle_count(&pinned).unwrap();
            prop_assert!(k >= 1 && k <= all.count);
        }
    }

    #[test]
    fn propagation_keeps_every_solution(seed in any::<u64>(), n in 2usize..=4, planted: bool) {
        let spec = board(seed, n, 0.3, planted);
        let sols = oracle_enumerate(&spec, None).unwrap().solutions;
        match propagate(&spec, &initial_candidates(&spec)) {
            Err(_) => prop_assert!(sols.is_empty()),
            Ok(g) => {
                for a in &sols {
                    for c in spec.empty_cells() {
                        let CellContent::Arrow(d) = a.get(c) else { unreachable!() };
                        prop_assert!(g.mask(c) & d.bit() != 0);
                    }
                }
            }
        }
    }

    #[test]
    fn every_cell_of_a_solution_reaches_roma(seed in any::<u64>(), n in 1usize..=6) {
        let spec = board(seed, n, 0.3, true);
        let w = search(&spec, SearchMode::First).witness.unwrap();
        let worst = longest_walk_to_roma(&spec, &w);
        prop_assert!(worst.is_some());
        for i in 0..n * n {
            let c = Coord::from_index(i, n);
            let path = trace_to_roma(&spec, &w, c).unwrap();
            prop_assert_eq!(path[0], c);
            prop_assert_eq!(*path.last().unwrap(), spec.roma());
            prop_assert!(path.len() - 1 <= n * n);
        }
    }

    #[test]
    fn crossings_follow_the_closed_form(seed in any::<u64>(), v in 1usize..=6, m in 0usize..=6) {
        let f: Cnf = random_cnf(v, m, &mut ChaCha8Rng::seed_from_u64(seed));
        let l = layout(&f);
        let inc: Vec<(usize, usize)> = l.polylines.iter().map(|p| (p.var, p.clause)).collect();
        let want = inc.iter().flat_map(|a| inc.iter().map(move |b| (a, b))).filter(|(a, b)| b.0 < a.0 && a.1 < b.1).count();
        prop_assert_eq!(l.crossings.len(), want);
    }
}
