//! QUBO encoding of the balanced, demand-weighted k-way partition.

mod instance;
mod io;
mod penalty;

pub use instance::{build_qubo, build_qubo_with, build_unweighted_qubo, ClusterTerm, QuboInstance, VarIndex};
pub use io::{
    export_qubo, import_qubo, parse_qubo, parse_var_map, qubo_to_string, var_map_path,
    var_map_to_string,
};
pub use penalty::{default_penalties, Penalty, PenaltyConfig};
