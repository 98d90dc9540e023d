//! Single-machine scheduling under time-of-use energy prices with machine
//! power states.
//!
//! The pipeline is: build the [interval-state graph](isg), precompute the
//! optimal switching cost between every pair of processing intervals
//! ([`spaces`]), then either search job placements exactly ([`solver`]) or
//! emit a binary program for an external solver ([`modelgen`]).
//!
//! ```
//! use energysched_core::{datagen, solve_exact, SpacesTable};
//!
//! let inst = datagen::example_instance();
//! let table = SpacesTable::for_instance(&inst, 1).unwrap();
//! assert_eq!(solve_exact(&inst, &table).unwrap().tec, 177);
//! ```

pub mod datagen;
pub mod error;
pub mod io;
pub mod isg;
pub mod model;
pub mod modelgen;
pub mod report;
pub mod solver;
pub mod spaces;

pub use error::{Error, Result};
pub use isg::{build_graph, proc_window, IntervalStateGraph, Vertex};
pub use model::{
    compute_tec, validate_instance, validate_schedule, Cost, Instance, InstanceViolation,
    MachineStateSet, Schedule, ScheduleViolation, StateId, StatePair, Transition, TransitionSpec,
};
pub use modelgen::{emit_ilp_spaces, import_solution, parse_solution, IlpModel, VarMap};
pub use report::{optimality_gap, BenchRecord};
pub use solver::{
    assemble_schedule, brute_force_schedule, brute_force_switching, solve_exact, solve_exact_with,
    SolveOptions, SolveResult, SolveStatus,
};
pub use spaces::{compute_spaces, SpacesTable};
