//! Qubit allocation and SWAP routing of quantum circuits onto devices with
//! restricted connectivity.
//!
//! ```
//! use qmapper::{compile, parse_qasm, Architecture, CompileOptions};
//!
//! let circuit = parse_qasm(
//!     "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncx q[0],q[2];\n",
//! )
//! .unwrap();
//! let arch = Architecture::builtin("line_3").unwrap();
//! let out = compile(&circuit, &arch, &CompileOptions::default()).unwrap();
//! assert!(out.result.is_compliant(&arch));
//! ```

pub mod arch;
pub mod compile;
pub mod exact;
pub mod ir;
pub mod qasm;
pub mod route;
pub mod verify;

pub use arch::{all_pairs_distance, token_swap_distance, ArchError, Architecture, TokenSwapTable};
pub use compile::{compile, CompileError, CompileOptions, Compiled, Method, Statistics};
pub use exact::{enumerate_layer_placements, map_exact, map_exact_with, ExactConfig};
pub use ir::{layerize, Circuit, Gate, GateKind, IrError};
pub use qasm::{emit_qasm, parse_qasm, QasmError};
pub use route::{
    decompose_swaps, layout_dynamic, layout_identity, layout_static, route_astar, route_naive,
    route_naive_with, AstarConfig, HeuristicKind, Layout, LayoutStrategy, MapError, MappingResult,
};
pub use verify::{check_equivalence, simulate, Equivalence, StateVector};
