//! Acceptance run: one PASS/FAIL line per criterion, then a single assertion
//! over all of them. Time limits are pinned below.

mod common;

use std::time::{Duration, Instant};

use common::{
    agreement_suite, clause_board, clause_satisfied, corpus, corpus_crossover_formula, crossover_formula,
    formula_suite, longest_walk_to_roma, open_board, pin_every_cell, unique_tiles,
};
use roma::bench::{twobox_board, twobox_node_bound};
use roma::board::{is_valid, Assignment, BoardSpec, CellContent, Coord, Direction};
use roma::dp::{balanced_skeletons, catalan_count, dp_run_with, DpMode, DpOptions};
use roma::oracle::{fcp_bruteforce, oracle_count, oracle_enumerate};
use roma::prop::{initial_candidates, propagate, search, SearchMode};
use roma::sat2roma::{compile, decode, layout, tiles, Cnf, SIDE_FACTOR};

const DEDUCTION_LIMIT: Duration = Duration::from_secs(1);
const AGREEMENT_LIMIT: Duration = Duration::from_secs(5 * 60);
const GADGET_LIMIT: Duration = Duration::from_secs(60);
const PARSIMONY_LIMIT: Duration = Duration::from_secs(30 * 60);
const AGREEMENT_BOARDS: usize = 510;
const PARSIMONY_FORMULAS: usize = 200;
const CATALAN: [u128; 9] = [1, 1, 2, 5, 14, 42, 132, 429, 1430];

struct Report {
    failed: Vec<u32>,
    /// Solutions collected for the path check, with their boards.
    found: Vec<(BoardSpec, Assignment)>,
}

impl Report {
    fn line(&mut self, id: u32, ok: bool, detail: String) {
        println!("{} criterion {id}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id);
        }
    }
}

fn corner_deductions(r: &mut Report) {
    let t = Instant::now();
    let spec = corpus("fig1.roma");
    let g = propagate(&spec, &initial_candidates(&spec)).ok();
    let fixed = |x, y| g.as_ref().and_then(|g| g.fixed(Coord::new(x, y)));
    let left = Some(CellContent::Arrow(Direction::Left));
    let ok = fixed(3, 1) == left && fixed(3, 3) == left && fixed(2, 3) == Some(CellContent::Arrow(Direction::Down));
    let el = t.elapsed();
    r.line(1, ok && el < DEDUCTION_LIMIT, format!("(3,1)=← (3,3)=← (2,3)=↓ fixed by propagation in {el:?}"));
}

fn engine_agreement(r: &mut Report) {
    let t = Instant::now();
    let boards = agreement_suite(AGREEMENT_BOARDS, 2024);
    let (mut mismatches, mut over_ceiling, mut sat) = (0, 0, 0);
    let mut worst_ratio: f64 = 0.0;
    for spec in &boards {
        let all = oracle_enumerate(spec, None).unwrap();
        let prop = search(spec, SearchMode::Count);
        let (dp, stats) = dp_run_with(spec, DpMode::Count, DpOptions::default()).unwrap();
        let (pd, _) = dp_run_with(spec, DpMode::Decide, DpOptions::default()).unwrap();
        let verdicts = [all.count > 0, prop.count.unwrap() > 0, dp.count.unwrap() > 0, pd.status == prop.status];
        if prop.count != Some(all.count)
            || dp.count != Some(all.count)
            || verdicts[..3].iter().any(|&v| v != verdicts[0])
            || !verdicts[3]
        {
            mismatches += 1;
        }
        let ceiling = 39f64.powi(spec.n() as i32);
        worst_ratio = worst_ratio.max(stats.max_configs() as f64 / ceiling);
        if stats.max_configs() as f64 > ceiling {
            over_ceiling += 1;
        }
        if all.count > 0 {
            sat += 1;
        }
        for a in all.solutions.into_iter().chain(prop.witness).chain(dp.witness).chain(pd.witness) {
            r.found.push((spec.clone(), a));
        }
    }
    let el = t.elapsed();
    r.line(
        2,
        mismatches == 0 && boards.len() >= 500 && el < AGREEMENT_LIMIT,
        format!("{} boards ({sat} solvable), {mismatches} disagreements, {el:?}", boards.len()),
    );
    let skeletons: Vec<u128> = (0..=8).map(|p| balanced_skeletons(p).len() as u128).collect();
    let catalan: Vec<u128> = (0..=8).map(|p| catalan_count(p as u32)).collect();
    let ok = over_ceiling == 0 && skeletons == CATALAN && catalan == CATALAN;
    r.line(
        3,
        ok,
        format!("{over_ceiling} runs above 39^n (largest share {worst_ratio:.2e}); skeleton counts {skeletons:?}"),
    );
}

fn gadget_uniqueness(r: &mut Report) {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for tile in unique_tiles() {
        let spec = open_board(&tile);
        let p = pin_every_cell(&spec);
        ok &= p.min_after_pin == 1 && p.max_after_pin == 1;
        parts.push(format!("{} pinned→{}", tile.name, p.max_after_pin));
        if tile.name == tiles::variable().name {
            ok &= p.solutions == 2;
            parts.push(format!("variable board {} solutions", p.solutions));
        }
        if let Some(w) = search(&spec, SearchMode::First).witness {
            r.found.push((spec, w));
        }
    }
    let el = t.elapsed();
    r.line(4, ok && el < GADGET_LIMIT, format!("{} in {el:?}", parts.join(", ")));
}

fn clause_semantics(r: &mut Report) {
    let mut wrong = Vec::new();
    let mut checked = 0;
    for pattern in 0..8u32 {
        let pols: Vec<bool> = (0..3).map(|i| pattern >> i & 1 == 1).collect();
        for mask in 0..8 {
            let spec = clause_board(&pols, mask);
            let res = search(&spec, SearchMode::First);
            checked += 1;
            if res.witness.is_some() != clause_satisfied(&pols, mask) {
                wrong.push(format!("{pols:?}/{mask:03b}"));
            }
            if let Some(w) = res.witness {
                r.found.push((spec, w));
            }
        }
    }
    r.line(5, wrong.is_empty(), format!("{checked} polarity/signal combinations, wrong: {wrong:?}"));
}

fn parsimony(r: &mut Report) {
    let t = Instant::now();
    let mut suite = formula_suite(PARSIMONY_FORMULAS, 7);
    suite.push(crossover_formula());
    suite.push(corpus_crossover_formula());
    let mut bad = Vec::new();
    for (i, f) in suite.iter().enumerate() {
        let (spec, vm) = compile(f);
        let res = search(&spec, SearchMode::Count);
        let decoded_ok = res.witness.as_ref().map_or(true, |w| decode(&spec, &vm, w).map_or(false, |m| f.eval(&m)));
        if res.count != Some(f.count_models()) || !decoded_ok {
            bad.push(i);
        }
        if let Some(w) = res.witness {
            r.found.push((spec, w));
        }
    }
    let fc = corpus_crossover_formula();
    let joined = fc.models().iter().filter(|m| m[0] == m[1] && m[2] == m[3]).count();
    let el = t.elapsed();
    r.line(
        6,
        bad.is_empty() && joined == 4 && el < PARSIMONY_LIMIT,
        format!(
            "{} formulas plus the crossover formula with a/b joined (#SAT {joined}) and with separate copies (#SAT {}), mismatches at {bad:?}, {el:?}",
            suite.len() - 2,
            fc.count_models()
        ),
    );
}

fn paths_reach_roma(r: &mut Report) {
    let mut bad = 0;
    for (spec, a) in &r.found {
        if !is_valid(spec, a).is_empty() || longest_walk_to_roma(spec, a).is_none() {
            bad += 1;
        }
    }
    let total = r.found.len();
    r.line(7, bad == 0 && total > 0, format!("{total} solutions traced from every cell, {bad} failures"));
}

fn twobox(r: &mut Report) {
    let mut parts = Vec::new();
    let mut ok = true;
    for k in (4..=12).step_by(2) {
        let spec = twobox_board(k / 2);
        let res = search(&spec, SearchMode::Count);
        let bound = twobox_node_bound(k);
        ok &= spec.k() == k && (res.nodes as f64) <= bound;
        parts.push(format!("k={k} ratio {:.3e}", res.nodes as f64 / bound));
    }
    r.line(8, ok, format!("prop nodes within 11^(k/2)(k+1): {}", parts.join(", ")));
}

fn size_linearity(r: &mut Report) {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [1usize, 2, 4, 6, 8, 10] {
        // chain of implications plus one wide clause, so crossings grow too
        let mut clauses: Vec<Vec<i64>> = (1..k).map(|v| vec![-(v as i64), v as i64 + 1]).collect();
        clauses.push((1..=k.min(3)).map(|v| v as i64).collect());
        let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
        let f = Cnf::from_ints(k, &refs).unwrap();
        let (spec, _) = compile(&f);
        let size = f.num_vars() + f.clauses().len() + layout(&f).crossings.len();
        ok &= spec.n() <= SIDE_FACTOR * size;
        parts.push(format!("{}/{}", spec.n(), size));
    }
    r.line(9, ok, format!("side/(vars+clauses+crossings) with C={SIDE_FACTOR}: {}", parts.join(" ")));
}

fn fcp(r: &mut Report) {
    let spec = corpus("two.roma");
    let before = oracle_count(&spec).unwrap();
    let none = fcp_bruteforce(&spec, 0).unwrap();
    let hint = fcp_bruteforce(&spec, 1).unwrap();
    let after = hint.as_ref().map(|h| oracle_count(&spec.with_presets(h)).unwrap());
    let ok = before == 2 && none.is_none() && hint.as_ref().map_or(false, |h| h.len() == 1) && after == Some(1);
    r.line(10, ok, format!("count {before}, k=0 → {none:?}, k=1 → {hint:?}, count after hint {after:?}"));
}

#[test]
fn acceptance() {
    let mut r = Report { failed: Vec::new(), found: Vec::new() };
    corner_deductions(&mut r);
    engine_agreement(&mut r);
    gadget_uniqueness(&mut r);
    clause_semantics(&mut r);
    parsimony(&mut r);
    paths_reach_roma(&mut r);
    twobox(&mut r);
    size_linearity(&mut r);
    fcp(&mut r);
    assert!(r.failed.is_empty(), "failed criteria: {:?}", r.failed);
}
