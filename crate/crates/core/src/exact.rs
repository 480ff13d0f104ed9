//! Exact mapping with a minimal number of inserted SWAP gates.
//!
//! The two-qubit gates are grouped into the same layers the heuristic router
//! uses. A search state is `(layer, placement)`: the next layer still to be
//! executed and where every logical qubit sits. Executing a layer is free
//! once all its pairs are coupled, a SWAP on any coupling edge costs one, and
//! the initial placement is free. Breadth-first search over SWAP count from
//! every initial placement therefore yields the fewest SWAPs over all
//! initial layouts and all SWAP schedules.

use std::collections::HashMap;
use std::time::Instant;

use crate::arch::{Architecture, MAX_TABLE_QUBITS};
use crate::ir::{interaction_layers, layerize, Circuit};
use crate::route::{check_capacity, Emitter, Layout, MapError, MappingResult, Placement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactConfig {
    /// Give up once the optimum is known to exceed this many SWAPs.
    pub swap_cap: Option<usize>,
    /// Maximum number of distinct search states.
    pub node_budget: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            swap_cap: None,
            node_budget: 100_000_000,
        }
    }
}

/// The connectivity-relevant view of a circuit: its interaction layers.
#[derive(Debug, Clone)]
pub struct ExactInstance<'a> {
    pub layers: Vec<Vec<(usize, usize)>>,
    pub num_logical: usize,
    pub arch: &'a Architecture,
}

impl<'a> ExactInstance<'a> {
    pub fn new(circuit: &Circuit, arch: &'a Architecture) -> Result<ExactInstance<'a>, MapError> {
        if arch.num_physical() > MAX_TABLE_QUBITS {
            return Err(MapError::ExactTooLarge(arch.num_physical()));
        }
        check_capacity(circuit, arch)?;
        let layers = interaction_layers(circuit, &layerize(circuit))
            .into_iter()
            .map(|(_, pairs)| pairs)
            .collect();
        Ok(ExactInstance {
            layers,
            num_logical: circuit.num_qubits(),
            arch,
        })
    }
}

/// Injective logical -> physical maps (for `num_logical` qubits) under which
/// every pair in `layer` is coupled, in lexicographic order of the
/// `log_to_phys` vectors.
pub fn enumerate_layer_placements(
    layer: &[(usize, usize)],
    num_logical: usize,
    arch: &Architecture,
) -> impl Iterator<Item = Vec<usize>> {
    fn extend(
        layer: &[(usize, usize)],
        arch: &Architecture,
        partial: &mut Vec<usize>,
        used: &mut [bool],
        num_logical: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        let l = partial.len();
        if l == num_logical {
            out.push(partial.clone());
            return;
        }
        for p in 0..arch.num_physical() {
            if used[p] {
                continue;
            }
            let ok = layer.iter().all(|&(a, b)| {
                let other = if a == l {
                    b
                } else if b == l {
                    a
                } else {
                    return true;
                };
                other > l || arch.is_adjacent(partial[other], p)
            });
            if !ok {
                continue;
            }
            used[p] = true;
            partial.push(p);
            extend(layer, arch, partial, used, num_logical, out);
            partial.pop();
            used[p] = false;
        }
    }
    let mut out = Vec::new();
    if num_logical <= arch.num_physical() {
        let mut used = vec![false; arch.num_physical()];
        extend(
            layer,
            arch,
            &mut Vec::new(),
            &mut used,
            num_logical,
            &mut out,
        );
    }
    out.into_iter()
}

pub fn map_exact(circuit: &Circuit, arch: &Architecture) -> Result<MappingResult, MapError> {
    map_exact_with(circuit, arch, &ExactConfig::default())
}

// Placements are packed 4 bits per logical qubit; the layer index sits above.
type Key = u64;

#[inline]
fn key(layer: usize, packed: u32) -> Key {
    ((layer as u64) << 32) | packed as u64
}

#[inline]
fn pack(placement: &[usize]) -> u32 {
    placement
        .iter()
        .enumerate()
        .fold(0, |acc, (l, &p)| acc | ((p as u32) << (4 * l)))
}

#[inline]
fn position(packed: u32, l: usize) -> usize {
    ((packed >> (4 * l)) & 0xf) as usize
}

fn unpack(packed: u32, n: usize) -> Vec<usize> {
    (0..n).map(|l| position(packed, l)).collect()
}

/// Exchanges whatever sits at `a` and `b`. Returns `None` when both are empty.
#[inline]
fn apply_swap(packed: u32, n: usize, a: usize, b: usize) -> Option<u32> {
    let mut out = packed;
    let mut moved = false;
    for l in 0..n {
        let p = position(packed, l);
        let q = if p == a {
            b
        } else if p == b {
            a
        } else {
            continue;
        };
        out = (out & !(0xf << (4 * l))) | ((q as u32) << (4 * l));
        moved = true;
    }
    moved.then_some(out)
}

#[derive(Clone, Copy)]
struct Parent {
    from: Key,
    edge: u8,
}

pub fn map_exact_with(
    circuit: &Circuit,
    arch: &Architecture,
    config: &ExactConfig,
) -> Result<MappingResult, MapError> {
    let started = Instant::now();
    let instance = ExactInstance::new(circuit, arch)?;
    let n = instance.num_logical;
    let layers = &instance.layers;
    let edges = arch.undirected_edges();

    let advance = |mut layer: usize, packed: u32| {
        while layer < layers.len()
            && layers[layer]
                .iter()
                .all(|&(a, b)| arch.is_adjacent(position(packed, a), position(packed, b)))
        {
            layer += 1;
        }
        layer
    };

    let mut parents: HashMap<Key, Option<Parent>> = HashMap::new();
    let mut frontier: Vec<(usize, u32)> = Vec::new();
    let mut goal = None;
    for placement in enumerate_layer_placements(&[], n, arch) {
        let packed = pack(&placement);
        let layer = advance(0, packed);
        parents.insert(key(layer, packed), None);
        if layer == layers.len() {
            goal = Some(key(layer, packed));
            break;
        }
        frontier.push((layer, packed));
    }

    let mut swaps = 0;
    let mut deepest = frontier.iter().map(|s| s.0).max().unwrap_or(0);
    while goal.is_none() {
        if frontier.is_empty() {
            return Err(MapError::ExactInfeasible { layer: deepest });
        }
        if config.swap_cap.is_some_and(|cap| swaps >= cap) {
            return Err(MapError::SwapBudget(swaps));
        }
        swaps += 1;
        let mut next = Vec::new();
        'level: for &(layer, packed) in &frontier {
            let from = key(layer, packed);
            for (e, &(a, b)) in edges.iter().enumerate() {
                let Some(moved) = apply_swap(packed, n, a, b) else {
                    continue;
                };
                let reached = advance(layer, moved);
                let k = key(reached, moved);
                if parents.contains_key(&k) {
                    continue;
                }
                if parents.len() >= config.node_budget {
                    return Err(MapError::ExactNodeBudget(config.node_budget));
                }
                parents.insert(
                    k,
                    Some(Parent {
                        from,
                        edge: e as u8,
                    }),
                );
                deepest = deepest.max(reached);
                if reached == layers.len() {
                    goal = Some(k);
                    break 'level;
                }
                next.push((reached, moved));
            }
        }
        frontier = next;
    }

    // Walk back to the initial placement, tagging each SWAP with the layer
    // it precedes.
    let mut schedule: Vec<(usize, (usize, usize))> = Vec::new();
    let mut cur = goal.unwrap();
    while let Some(Parent { from, edge }) = parents[&cur] {
        schedule.push(((from >> 32) as usize, edges[edge as usize]));
        cur = from;
    }
    schedule.reverse();
    let initial = unpack(cur as u32, n);

    let layout = Layout::new(initial, arch.num_physical())?;
    let mut place = Placement::from_layout(&layout);
    let mut em = Emitter::new(arch);
    let mut pending = schedule.iter().peekable();
    let mut interaction = 0;
    for layer in layerize(circuit) {
        let has_pairs = layer.two_qubit_gates(circuit).next().is_some();
        if has_pairs {
            while let Some(&(_, (a, b))) = pending.next_if(|(at, _)| *at <= interaction) {
                em.swap(a, b, &mut place);
            }
            interaction += 1;
        }
        for gi in layer.gate_indices {
            em.gate(&circuit.gates()[gi], &place);
        }
    }
    debug_assert!(pending.next().is_none());
    let mut result = em.finish(circuit, place);
    result.runtime_seconds = started.elapsed().as_secs_f64();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Gate;

    fn arch(name: &str) -> Architecture {
        Architecture::builtin(name).unwrap()
    }

    #[test]
    fn placements_examples() {
        let all: Vec<_> = enumerate_layer_placements(&[(0, 1)], 2, &arch("line_2")).collect();
        assert_eq!(all, vec![vec![0, 1], vec![1, 0]]);
        let all: Vec<_> =
            enumerate_layer_placements(&[(0, 1), (0, 2)], 3, &arch("line_3")).collect();
        assert_eq!(all, vec![vec![1, 0, 2], vec![1, 2, 0]]);
        let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for name in ["oslo7", "line_4", "ring_4", "grid_2x2", "grid_2x4"] {
            assert_eq!(
                enumerate_layer_placements(&k4, 4, &arch(name)).count(),
                0,
                "{name}"
            );
        }
        // no constraints: every injection, 7!/2!
        assert_eq!(
            enumerate_layer_placements(&[], 5, &arch("oslo7")).count(),
            2520
        );
    }

    #[test]
    fn packing_round_trips() {
        let p = vec![7, 0, 3, 5, 1, 6, 2, 4];
        assert_eq!(unpack(pack(&p), 8), p);
        let swapped = apply_swap(pack(&p), 8, 0, 7).unwrap();
        assert_eq!(unpack(swapped, 8), vec![0, 7, 3, 5, 1, 6, 2, 4]);
        assert_eq!(apply_swap(pack(&[0, 1]), 2, 2, 3), None);
    }

    #[test]
    fn free_layout_avoids_swaps() {
        let c = Circuit::from_gates(3, [Gate::cx(0, 2)]).unwrap();
        let r = map_exact(&c, &arch("line_3")).unwrap();
        assert_eq!(r.swaps_added, 0);
        assert!(r.is_compliant(&arch("line_3")));
    }

    #[test]
    fn triangle_on_a_line_needs_one_swap() {
        let c = Circuit::from_gates(3, [Gate::cx(0, 1), Gate::cx(1, 2), Gate::cx(0, 2)]).unwrap();
        let r = map_exact(&c, &arch("line_3")).unwrap();
        assert_eq!(r.swaps_added, 1);
        assert!(r.is_compliant(&arch("line_3")));
    }

    #[test]
    fn chain_fits_oslo() {
        let mut gates = Vec::new();
        for _ in 0..3 {
            for q in 0..4 {
                gates.push(Gate::ry(q, 0.1));
                gates.push(Gate::cx(q, q + 1));
            }
        }
        let c = Circuit::from_gates(5, gates).unwrap();
        let r = map_exact(&c, &arch("oslo7")).unwrap();
        assert_eq!(r.swaps_added, 0);
    }

    #[test]
    fn limits() {
        let c = Circuit::from_gates(2, [Gate::cx(0, 1)]).unwrap();
        assert_eq!(
            map_exact(&c, &arch("line_16")).unwrap_err(),
            MapError::ExactTooLarge(16)
        );
        let c = Circuit::from_gates(3, [Gate::cx(0, 1), Gate::cx(1, 2), Gate::cx(0, 2)]).unwrap();
        let capped = ExactConfig {
            swap_cap: Some(0),
            ..ExactConfig::default()
        };
        assert_eq!(
            map_exact_with(&c, &arch("line_3"), &capped).unwrap_err(),
            MapError::SwapBudget(0)
        );
        let tiny = ExactConfig {
            node_budget: 6,
            ..ExactConfig::default()
        };
        assert_eq!(
            map_exact_with(&c, &arch("line_3"), &tiny).unwrap_err(),
            MapError::ExactNodeBudget(6)
        );
        let disconnected = Architecture::from_coupling_map(4, [(0, 1), (2, 3)]).unwrap();
        let c = Circuit::from_gates(3, [Gate::cx(0, 1), Gate::cx(1, 2)]).unwrap();
        assert!(matches!(
            map_exact(&c, &disconnected),
            Err(MapError::ExactInfeasible { .. })
        ));
    }
}
