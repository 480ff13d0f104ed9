use std::fmt;

use serde::Serialize;

use super::{check_capacity, route_astar, AstarConfig, Layout, MapError, Placement};
use crate::arch::{Architecture, DistanceTable};
use crate::ir::{interaction_layers, layerize, Circuit};

/// How logical qubits are placed before (or during) routing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutStrategy {
    /// `q_i -> Q_i`.
    Identity,
    /// First-layer gate pairs take free coupled pairs, the rest go in index order.
    Static,
    /// Qubits are placed greedily when a gate first touches them.
    Dynamic,
}

impl fmt::Display for LayoutStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayoutStrategy::Identity => "identity",
            LayoutStrategy::Static => "static",
            LayoutStrategy::Dynamic => "dynamic",
        })
    }
}

pub fn layout_identity(circuit: &Circuit, arch: &Architecture) -> Result<Layout, MapError> {
    check_capacity(circuit, arch)?;
    Layout::identity(circuit.num_qubits(), arch.num_physical())
}

pub fn layout_static(circuit: &Circuit, arch: &Architecture) -> Result<Layout, MapError> {
    check_capacity(circuit, arch)?;
    let layers = layerize(circuit);
    let first = interaction_layers(circuit, &layers)
        .into_iter()
        .next()
        .map(|(_, pairs)| pairs)
        .unwrap_or_default();
    let mut place = Placement::empty(circuit.num_qubits(), arch.num_physical());
    for (a, b) in first {
        let free_pair = arch
            .undirected_edges()
            .iter()
            .find(|&&(p, q)| place.is_free(p) && place.is_free(q));
        if let Some(&(p, q)) = free_pair {
            place.place(a, p);
            place.place(b, q);
        }
    }
    for l in 0..circuit.num_qubits() {
        if place.phys(l).is_none() {
            let p = place.first_free().expect("capacity checked");
            place.place(l, p);
        }
    }
    Ok(place.finish().0)
}

/// The initial layout the dynamic strategy settles on when routing
/// `circuit` with the A* router.
pub fn layout_dynamic(circuit: &Circuit, arch: &Architecture) -> Result<Layout, MapError> {
    route_astar(
        circuit,
        arch,
        LayoutStrategy::Dynamic,
        &AstarConfig::default(),
    )
    .map(|r| r.initial_layout)
}

/// Free position closest to `anchor` (lowest index on ties).
fn nearest_free(place: &Placement, dist: &DistanceTable, anchor: usize) -> usize {
    (0..dist.len())
        .filter(|&p| place.is_free(p))
        .min_by_key(|&p| (dist.get(anchor, p), p))
        .expect("capacity checked")
}

/// Places whichever of `a`, `b` are still unplaced so the gate between them
/// is as cheap as possible right now.
pub(crate) fn place_for_gate(place: &mut Placement, arch: &Architecture, a: usize, b: usize) {
    match (place.phys(a), place.phys(b)) {
        (Some(_), Some(_)) => {}
        (None, None) => {
            let free_pair = arch
                .undirected_edges()
                .iter()
                .find(|&&(p, q)| place.is_free(p) && place.is_free(q));
            match free_pair {
                Some(&(p, q)) => {
                    place.place(a, p);
                    place.place(b, q);
                }
                None => {
                    let p = place.first_free().expect("capacity checked");
                    place.place(a, p);
                    let q = nearest_free(place, arch.distances(), p);
                    place.place(b, q);
                }
            }
        }
        (Some(pa), None) => {
            let q = nearest_free(place, arch.distances(), pa);
            place.place(b, q);
        }
        (None, Some(pb)) => {
            let p = nearest_free(place, arch.distances(), pb);
            place.place(a, p);
        }
    }
}

/// Places a single-qubit-only logical on the first free position.
pub(crate) fn place_single(place: &mut Placement, q: usize) {
    if place.phys(q).is_none() {
        let p = place.first_free().expect("capacity checked");
        place.place(q, p);
    }
}

/// Initial tracker for the non-lazy strategies, or an empty one for dynamic.
pub(crate) fn initial_placement(
    circuit: &Circuit,
    arch: &Architecture,
    strategy: LayoutStrategy,
) -> Result<Placement, MapError> {
    check_capacity(circuit, arch)?;
    Ok(match strategy {
        LayoutStrategy::Identity => Placement::from_layout(&layout_identity(circuit, arch)?),
        LayoutStrategy::Static => Placement::from_layout(&layout_static(circuit, arch)?),
        LayoutStrategy::Dynamic => Placement::empty(circuit.num_qubits(), arch.num_physical()),
    })
}
