//! Gadgets and certifiers for the reduction from 1-in-3-SAT to perfect
//! triangle tiling, and from there to P4-free edge deletion.

mod cnf;
mod gadgets;
mod tiling;

pub use cnf::{parse_dimacs, reduce_formula, solve_1in3, Cnf13Instance, Rotation};
pub use gadgets::{
    build_clause_gadget, build_l, build_splitter, build_variable_gadget, build_w, clause_port_set, LabeledGadget,
};
pub use tiling::{
    enumerate_tilings, is_maximal_tiling, p4_deletion_instance, triangle_factor, triangles, P4Instance, Triangle,
};
