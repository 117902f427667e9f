//! Compilation of 3-CNF formulas into boards with the same number of
//! solutions, and decoding of board solutions into truth assignments.

mod canvas;
mod cnf;
mod compile;
mod layout;
pub mod tiles;

pub use canvas::{Canvas, CanvasError};
pub use cnf::{parse_dimacs, Cnf, CnfError, Literal};
pub use compile::{
    compile, decode, drawn_clauses, tile_test_board, try_compile, DecodeError, VarEntry, VarMap, VarMapError, PITCH,
    SIDE_FACTOR,
};
pub use layout::{
    crossover_clauses, find_crossings, insert_crossovers, layout, Crossing, PlanarLayout, Point, Polyline,
};
pub use tiles::GadgetTile;
