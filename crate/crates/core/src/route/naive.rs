use std::collections::VecDeque;
use std::time::Instant;

use super::layout::{initial_placement, place_for_gate, place_single};
use super::{check_capacity, Emitter, Layout, LayoutStrategy, MapError, MappingResult, Placement};
use crate::arch::Architecture;
use crate::ir::Circuit;

/// Shortest path from `from` to `to` on the undirected view; BFS expands
/// neighbours in index order so the path is deterministic.
fn bfs_path(arch: &Architecture, from: usize, to: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; arch.num_physical()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &v in arch.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Baseline router: walks two-qubit gates in program order and, when a gate's
/// qubits are apart, swaps its first operand along a shortest path until the
/// two are adjacent.
pub fn route_naive(
    circuit: &Circuit,
    arch: &Architecture,
    layout: &Layout,
) -> Result<MappingResult, MapError> {
    check_capacity(circuit, arch)?;
    if layout.num_logical() != circuit.num_qubits() || layout.num_physical() != arch.num_physical()
    {
        return Err(MapError::InvalidLayout(format!(
            "layout maps {} of {} qubits, circuit/device have {}/{}",
            layout.num_logical(),
            layout.num_physical(),
            circuit.num_qubits(),
            arch.num_physical()
        )));
    }
    naive(circuit, arch, Placement::from_layout(layout))
}

/// [`route_naive`] starting from a layout strategy; `Dynamic` places qubits
/// as gates reach them.
pub fn route_naive_with(
    circuit: &Circuit,
    arch: &Architecture,
    strategy: LayoutStrategy,
) -> Result<MappingResult, MapError> {
    naive(circuit, arch, initial_placement(circuit, arch, strategy)?)
}

fn naive(
    circuit: &Circuit,
    arch: &Architecture,
    mut place: Placement,
) -> Result<MappingResult, MapError> {
    let started = Instant::now();
    let mut em = Emitter::new(arch);
    for (i, gate) in circuit.gates().iter().enumerate() {
        match gate.pair() {
            Some((a, b)) => {
                place_for_gate(&mut place, arch, a, b);
                let (pa, pb) = (place.phys(a).unwrap(), place.phys(b).unwrap());
                if !arch.is_adjacent(pa, pb) {
                    let path = bfs_path(arch, pa, pb).ok_or(MapError::Unroutable {
                        gate: i,
                        a: pa,
                        b: pb,
                    })?;
                    for step in path[..path.len() - 1].windows(2) {
                        em.swap(step[0], step[1], &mut place);
                    }
                }
            }
            None => place_single(&mut place, gate.qubits()[0]),
        }
        em.gate(gate, &place);
    }
    let mut result = em.finish(circuit, place);
    result.runtime_seconds = started.elapsed().as_secs_f64();
    Ok(result)
}
