use roma::board::{parse_board, CellContent};
use roma::dp::{enumerate_successors, parse_word, row_content, Mouth};

fn arrows(s: &str) -> Vec<CellContent> {
    s.chars().map(|c| CellContent::from_char(c).unwrap()).collect()
}

#[test]
fn worked_example_transitions() {
    let spec = parse_board(include_str!("../../../boards/fig5.roma")).unwrap();
    let pred = parse_word(&spec, 4, "(→,{↓,←})↓[→↓↑](←,↑)").unwrap();
    assert_eq!(row_content(&pred), arrows("→↓→↓↑←"));
    assert_eq!(pred.mouths[4], Some(Mouth::Down(1)));

    let sweep = enumerate_successors(&spec, 4, &pred, &arrows("↓←↑↓↑↑"));
    assert_eq!(sweep.len(), 1);
    let sweep = &sweep[0];
    assert_eq!(sweep.word(), "↓[[←[(↑,{↓,←})](↓,{←,→})↑]↑]");
    assert_eq!(sweep, &parse_word(&spec, 3, "↓[[←[(↑,{←,↓})](↓,{→,←})↑]↑]").unwrap());
    assert_eq!(sweep.mouths[2], Some(Mouth::Down(3)));
    assert_eq!(sweep.mouths[4], Some(Mouth::Down(0)));
    assert_eq!(sweep.mouths[5], Some(Mouth::Down(0)));
    assert_eq!(row_content(sweep), arrows("↓←↑↓↑↑"));

    let succ = enumerate_successors(&spec, 3, sweep, &arrows("↓←↓→↑←"));
    assert_eq!(succ.len(), 1);
    assert_eq!(succ[0], parse_word(&spec, 2, "↓[←↓(→,←)(↑,{↓,→})](←,{↓,→})").unwrap());
    assert_eq!(row_content(&succ[0]), arrows("↓←↓→↑←"));
}

#[test]
fn up_under_a_down_is_inconsistent() {
    let spec = parse_board(include_str!("../../../boards/fig5.roma")).unwrap();
    let pred = parse_word(&spec, 4, "(→,{↓,←})↓[→↓↑](←,↑)").unwrap();
    // column 3 of the predecessor holds ↓
    assert!(enumerate_successors(&spec, 4, &pred, &arrows("↓←↑↑↑↑")).is_empty());
}

#[test]
fn carried_arrow_is_enforced() {
    let spec = parse_board(include_str!("../../../boards/fig5.roma")).unwrap();
    let pred = parse_word(&spec, 4, "(→,{↓,←})↓[→↓↑](←,↑)").unwrap();
    // box of column 5 has only ↑ left; → is not available there
    assert!(enumerate_successors(&spec, 4, &pred, &arrows("↓←↑↓↑→")).is_empty());
}
