//! Exact algorithms for the Roma arrow puzzle.
//!
//! * [`board`]: instances, assignments, rule checking, file format, rendering.
//! * [`oracle`]: exhaustive enumeration, counting and fewest-clues search.
//! * [`prop`]: candidate elimination with backtracking search.
//! * [`dp`]: the row-sweep dynamic program over bracket configurations.
//! * [`sat2roma`]: CNF formulas compiled into boards with the same number of solutions.
//! * [`bench`]: instance families and CSV rows for benchmarking.

pub mod bench;
pub mod board;
pub mod dp;
pub mod oracle;
pub mod prop;
pub mod sat2roma;

pub use board::{
    parse_board, serialize_board, validate_spec, Assignment, BoardSpec, BoxPartition, CellContent, Coord, Direction,
    Violation, ViolationKind,
};
