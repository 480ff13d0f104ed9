//! One-call compilation: route a circuit with a chosen method and collect
//! the statistics record.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::arch::Architecture;
use crate::exact::map_exact;
use crate::ir::Circuit;
use crate::route::{
    decompose_swaps, route_astar, route_naive_with, AstarConfig, Layout, LayoutStrategy, MapError,
    MappingResult,
};
use crate::verify::{check_equivalence, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Heuristic,
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Naive => "naive",
            Method::Heuristic => "heuristic",
            Method::Exact => "exact",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Method::Naive),
            "heuristic" => Ok(Method::Heuristic),
            "exact" => Ok(Method::Exact),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompileOptions {
    pub method: Method,
    /// Ignored by the exact method, which chooses its own layout.
    pub layout: LayoutStrategy,
    pub lookahead: usize,
    pub decompose_swaps: bool,
    pub verify: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            method: Method::Heuristic,
            layout: LayoutStrategy::Dynamic,
            lookahead: 1,
            decompose_swaps: false,
            verify: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("cannot verify: {0}")]
    Verify(#[from] VerifyError),
    #[error("mapped circuit is not equivalent to the input (max deviation {0:e})")]
    NotEquivalent(f64),
}

/// The statistics record written next to the mapped circuit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Statistics {
    pub schema: u32,
    pub method: Method,
    /// `null` for the exact method.
    pub layout: Option<LayoutStrategy>,
    pub swaps_added: usize,
    pub direction_fixes: usize,
    pub two_qubit_gates_added: usize,
    pub depth_before: usize,
    pub depth_after: usize,
    pub runtime_seconds: f64,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    /// `null` unless verification was requested.
    pub verified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    pub result: MappingResult,
    pub stats: Statistics,
}

/// Maps `circuit` onto `arch`. With `verify` set, a mapping that fails the
/// equivalence check is an error.
pub fn compile(
    circuit: &Circuit,
    arch: &Architecture,
    options: &CompileOptions,
) -> Result<Compiled, CompileError> {
    let started = Instant::now();
    let mut result = match options.method {
        Method::Naive => route_naive_with(circuit, arch, options.layout)?,
        Method::Heuristic => {
            let config = AstarConfig {
                lookahead: options.lookahead,
                ..AstarConfig::default()
            };
            route_astar(circuit, arch, options.layout, &config)?
        }
        Method::Exact => map_exact(circuit, arch)?,
    };
    if options.decompose_swaps {
        result = decompose_swaps(&result, arch);
    }
    result.runtime_seconds = started.elapsed().as_secs_f64();

    let verified = if options.verify {
        let check = check_equivalence(circuit, &result)?;
        if !check.equivalent {
            return Err(CompileError::NotEquivalent(check.max_deviation));
        }
        Some(true)
    } else {
        None
    };

    let stats = Statistics {
        schema: 1,
        method: options.method,
        layout: (options.method != Method::Exact).then_some(options.layout),
        swaps_added: result.swaps_added,
        direction_fixes: result.direction_fixes,
        two_qubit_gates_added: result.two_qubit_gates_added,
        depth_before: result.depth_before,
        depth_after: result.depth_after,
        runtime_seconds: result.runtime_seconds,
        initial_layout: result.initial_layout.clone(),
        final_layout: result.final_layout.clone(),
        verified,
    };
    Ok(Compiled { result, stats })
}
