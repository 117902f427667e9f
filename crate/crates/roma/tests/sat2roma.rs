//! Gadget behaviour, parsimony and size of compiled boards.

mod common;

use common::{
    clause_board, clause_satisfied, corpus_crossover_formula, crossover_formula, formula_suite, longest_walk_to_roma,
    open_board, pin_every_cell, unique_tiles,
};
use roma::board::{is_valid, CellContent, Direction};
use roma::prop::{search, SearchMode};
use roma::sat2roma::tiles;
use roma::sat2roma::{compile, decode, drawn_clauses, layout, tile_test_board, Cnf, SIDE_FACTOR};

#[test]
fn one_pinned_cell_decides_every_gadget() {
    for t in unique_tiles() {
        let p = pin_every_cell(&open_board(&t));
        assert_eq!(p.solutions, 2, "{}", t.name);
        assert_eq!((p.min_after_pin, p.max_after_pin), (1, 1), "{}", t.name);
    }
}

#[test]
fn variable_board_has_exactly_two_solutions_split_by_the_decision_cell() {
    let spec = open_board(&tiles::variable());
    assert_eq!(search(&spec, SearchMode::Count).count, Some(2));
    let (dx, dy) = tiles::variable().port("decision").unwrap();
    let cell = spec.empty_cells().into_iter().find(|c| (c.x, c.y) == (dx + 2, dy + 2)).unwrap();
    for d in [Direction::Up, Direction::Down] {
        let pinned = spec.with_presets(&[(cell, CellContent::Arrow(d))]);
        assert_eq!(search(&pinned, SearchMode::Count).count, Some(1));
    }
}

#[test]
fn literal_output_follows_its_input() {
    for t in [tiles::positive_literal(), tiles::negative_literal()] {
        for d in [Direction::Up, Direction::Down] {
            let spec = tile_test_board(&t, &[(0, 0, d)]);
            assert_eq!(search(&spec, SearchMode::Count).count, Some(1), "{} {d:?}", t.name);
        }
    }
}

#[test]
fn clause_board_is_solvable_iff_a_literal_drains() {
    for pols in [[true, false, true], [true, true, true], [false, false, false]] {
        for mask in 0..8 {
            let spec = clause_board(&pols, mask);
            let r = search(&spec, SearchMode::Count);
            let want = clause_satisfied(&pols, mask);
            assert_eq!(r.count.unwrap() > 0, want, "{pols:?} {mask:03b}");
            if let Some(w) = r.witness {
                assert!(longest_walk_to_roma(&spec, &w).is_some());
            }
        }
    }
}

#[test]
fn compile_preserves_the_model_count() {
    for (i, f) in formula_suite(40, 3).iter().enumerate() {
        let (spec, vm) = compile(f);
        let r = search(&spec, SearchMode::Count);
        assert_eq!(r.count, Some(f.count_models()), "formula {i}: {}", f.to_dimacs());
        if let Some(w) = r.witness {
            assert!(is_valid(&spec, &w).is_empty());
            assert!(f.eval(&decode(&spec, &vm, &w).unwrap()));
        }
    }
}

#[test]
fn crossover_formula_solutions_decode_to_its_models() {
    let f = crossover_formula();
    let models = f.models();
    assert_eq!(models.len(), 4);
    let (spec, vm) = compile(&f);
    assert_eq!(search(&spec, SearchMode::Count).count, Some(4));
    for m in &models {
        let pins: Vec<_> = vm
            .entries
            .iter()
            .zip(m)
            .map(|(e, &t)| (e.cell, CellContent::Arrow(if t { e.when_true } else { e.when_false })))
            .collect();
        let pinned = spec.with_presets(&pins);
        let r = search(&pinned, SearchMode::Count);
        assert_eq!(r.count, Some(1));
        assert_eq!(&decode(&spec, &vm, &r.witness.unwrap()).unwrap(), m);
    }
}

#[test]
fn corpus_crossover_formula_has_four_models_once_the_copies_are_joined() {
    let f = corpus_crossover_formula();
    let joined: Vec<Vec<bool>> = f.models().into_iter().filter(|m| m[0] == m[1] && m[2] == m[3]).collect();
    assert_eq!(joined.len(), 4);
}

#[test]
fn side_length_is_linear_in_the_formula_size() {
    let mut last = 0;
    for k in 1..=8usize {
        let clauses: Vec<Vec<i64>> = (0..k).map(|j| vec![(j % k + 1) as i64, -(((j + 1) % k) as i64 + 1)]).collect();
        let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
        let f = Cnf::from_ints(k, &refs).unwrap();
        let (spec, _) = compile(&f);
        let crossings = layout(&f).crossings.len();
        let size = f.num_vars() + drawn_clauses(&f).len() + crossings;
        assert!(spec.n() <= SIDE_FACTOR * size, "k={k}: side {} > {SIDE_FACTOR} * {size}", spec.n());
        assert!(spec.n() > last);
        last = spec.n();
    }
}
