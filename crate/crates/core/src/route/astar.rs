use std::cmp::{Ordering, Reverse};
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use super::layout::{initial_placement, place_for_gate, place_single};
use super::{route_naive, Emitter, LayoutStrategy, MapError, MappingResult, Placement};
use crate::arch::{Architecture, DistanceTable};
use crate::ir::{layerize, Circuit};

/// Two-qubit gates of a layer as `(gate index, logical pair)`.
type Pairs<'a> = &'a [(usize, (usize, usize))];

/// How front-layer distances combine into the heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeuristicKind {
    /// Sum of `dist - 1` over front gates. Not admissible, usually much faster.
    #[default]
    Sum,
    /// Largest `dist - 1`; admissible, so each layer is routed optimally.
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AstarConfig {
    /// Number of upcoming layers that contribute to the heuristic.
    pub lookahead: usize,
    /// Weight multiplier per lookahead layer.
    pub decay: f64,
    /// Search nodes allowed per layer before giving up.
    pub node_budget: usize,
    pub heuristic: HeuristicKind,
    /// Multiplier on the heuristic term of `f = g + weight * h` for the
    /// first attempt at a layer.
    pub weight: f64,
    /// Nodes an attempt may use before the layer is searched again with the
    /// weight doubled. The total per layer stays within `node_budget`.
    pub restart_budget: usize,
    /// Also route naively from the same initial layout and keep whichever
    /// result inserts fewer SWAPs. Layers must be coupled all at once, so on
    /// some circuits the gate-by-gate baseline is cheaper.
    pub naive_fallback: bool,
}

/// Attempts per layer; the last one may use whatever budget remains.
const MAX_ATTEMPTS: u32 = 5;

impl Default for AstarConfig {
    fn default() -> Self {
        AstarConfig {
            lookahead: 1,
            decay: 0.5,
            node_budget: 1_000_000,
            heuristic: HeuristicKind::Sum,
            weight: 1.0,
            restart_budget: 10_000,
            naive_fallback: true,
        }
    }
}

/// Routes layer by layer. Whenever the current layer's two-qubit gates are
/// not all coupled, an A* search over SWAP sequences finds a layout in which
/// they are; the layer's gates are then emitted on physical qubits.
pub fn route_astar(
    circuit: &Circuit,
    arch: &Architecture,
    strategy: LayoutStrategy,
    config: &AstarConfig,
) -> Result<MappingResult, MapError> {
    let started = Instant::now();
    let mut place = initial_placement(circuit, arch, strategy)?;
    let layers = layerize(circuit);
    let gates = circuit.gates();
    // (layer index, [(gate index, pair)]) for layers with two-qubit gates
    let interacting: Vec<(usize, Vec<_>)> = layers
        .iter()
        .enumerate()
        .filter_map(|(li, layer)| {
            let pairs: Vec<_> = layer
                .two_qubit_gates(circuit)
                .map(|gi| (gi, gates[gi].pair().unwrap()))
                .collect();
            (!pairs.is_empty()).then_some((li, pairs))
        })
        .collect();

    let mut em = Emitter::new(arch);
    let mut next = 0;
    for (li, layer) in layers.iter().enumerate() {
        if next < interacting.len() && interacting[next].0 == li {
            let front = &interacting[next].1;
            for &(_, (a, b)) in front {
                place_for_gate(&mut place, arch, a, b);
            }
            let mut apart = false;
            for &(gi, (a, b)) in front {
                let (pa, pb) = (place.phys(a).unwrap(), place.phys(b).unwrap());
                match arch.distance(pa, pb) {
                    DistanceTable::UNREACHABLE => {
                        return Err(MapError::Unroutable {
                            gate: gi,
                            a: pa,
                            b: pb,
                        })
                    }
                    1 => {}
                    _ => apart = true,
                }
            }
            if apart {
                let ahead: Vec<(Pairs, f64)> = interacting[next + 1..]
                    .iter()
                    .take(config.lookahead)
                    .zip(1..)
                    .map(|((_, pairs), j)| (pairs.as_slice(), config.decay.powi(j)))
                    .collect();
                let swaps = route_layer(arch, &place, front, &ahead, config).ok_or(
                    MapError::NodeBudget {
                        layer: li,
                        budget: config.node_budget,
                    },
                )?;
                for (a, b) in swaps {
                    em.swap(a, b, &mut place);
                }
            }
            next += 1;
        }
        for &gi in &layer.gate_indices {
            let g = &gates[gi];
            if !g.is_two_qubit() {
                place_single(&mut place, g.qubits()[0]);
            }
            em.gate(g, &place);
        }
    }
    let mut result = em.finish(circuit, place);
    if config.naive_fallback {
        if let Ok(baseline) = route_naive(circuit, arch, &result.initial_layout) {
            if baseline.swaps_added < result.swaps_added {
                result = baseline;
            }
        }
    }
    result.runtime_seconds = started.elapsed().as_secs_f64();
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Priority(f64);

impl Eq for Priority {}

impl PartialOrd for Priority {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Priority {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

struct Node {
    parent: u32,
    swap: (u16, u16),
    g: u32,
}

/// Search state: positions of the qubits the heuristic looks at.
struct Problem<'a> {
    arch: &'a Architecture,
    /// Pairs of indices into the position vector; front gates first.
    front: Vec<(usize, usize)>,
    ahead: Vec<(usize, usize, f64)>,
    /// Entries `..front_qubits` of the position vector belong to front gates.
    front_qubits: usize,
    heuristic: HeuristicKind,
}

impl Problem<'_> {
    #[inline]
    fn gap(&self, pos: &[u16], a: usize, b: usize) -> u32 {
        self.arch.distance(pos[a] as usize, pos[b] as usize) - 1
    }

    fn front_cost(&self, pos: &[u16]) -> u32 {
        let gaps = self.front.iter().map(|&(a, b)| self.gap(pos, a, b));
        match self.heuristic {
            HeuristicKind::Sum => gaps.sum(),
            HeuristicKind::Max => gaps.max().unwrap_or(0),
        }
    }

    fn estimate(&self, pos: &[u16]) -> (u32, f64) {
        let front = self.front_cost(pos);
        let ahead: f64 = self
            .ahead
            .iter()
            .map(|&(a, b, w)| w * self.gap(pos, a, b) as f64)
            .sum();
        (front, front as f64 + ahead)
    }

    /// Coupling edges touching a front-gate qubit, sorted and unique.
    fn actions(&self, pos: &[u16], out: &mut Vec<(u16, u16)>) {
        out.clear();
        for &p in &pos[..self.front_qubits] {
            for &q in self.arch.neighbors(p as usize) {
                let q = q as u16;
                out.push((p.min(q), p.max(q)));
            }
        }
        out.sort_unstable();
        out.dedup();
    }
}

/// Plain A* first. Layers whose search plateaus are retried with the
/// heuristic weighted more heavily, which trades optimality for speed.
fn route_layer(
    arch: &Architecture,
    place: &Placement,
    front: Pairs,
    ahead: &[(Pairs, f64)],
    config: &AstarConfig,
) -> Option<Vec<(usize, usize)>> {
    let mut remaining = config.node_budget;
    let mut weight = config.weight;
    for attempt in 1..=MAX_ATTEMPTS {
        let budget = if attempt == MAX_ATTEMPTS {
            remaining
        } else {
            config.restart_budget.min(remaining)
        };
        match search_layer(arch, place, front, ahead, config.heuristic, weight, budget) {
            Ok(swaps) => return Some(swaps),
            Err(used) => remaining -= used,
        }
        if remaining == 0 {
            break;
        }
        weight *= 2.0;
    }
    None
}

/// A* over SWAP sequences until every front pair is coupled. On failure
/// returns the number of nodes spent.
fn search_layer(
    arch: &Architecture,
    place: &Placement,
    front: Pairs,
    ahead: &[(Pairs, f64)],
    heuristic: HeuristicKind,
    weight: f64,
    node_budget: usize,
) -> Result<Vec<(usize, usize)>, usize> {
    let mut tracked: Vec<usize> = Vec::new();
    let slot = |l: usize, tracked: &mut Vec<usize>| match tracked.iter().position(|&t| t == l) {
        Some(i) => i,
        None => {
            tracked.push(l);
            tracked.len() - 1
        }
    };
    let front_pairs: Vec<(usize, usize)> = front
        .iter()
        .map(|&(_, (a, b))| (slot(a, &mut tracked), slot(b, &mut tracked)))
        .collect();
    let front_qubits = tracked.len();
    let mut ahead_pairs = Vec::new();
    for &(pairs, weight) in ahead {
        for &(_, (a, b)) in pairs {
            if place.phys(a).is_some() && place.phys(b).is_some() {
                ahead_pairs.push((slot(a, &mut tracked), slot(b, &mut tracked), weight));
            }
        }
    }
    let problem = Problem {
        arch,
        front: front_pairs,
        ahead: ahead_pairs,
        front_qubits,
        heuristic,
    };

    let width = tracked.len();
    let start: Vec<u16> = tracked
        .iter()
        .map(|&l| place.phys(l).unwrap() as u16)
        .collect();

    let mut states: Vec<u16> = start.clone();
    let mut nodes = vec![Node {
        parent: u32::MAX,
        swap: (0, 0),
        g: 0,
    }];
    let mut best: HashMap<Vec<u16>, u32> = HashMap::new();
    best.insert(start.clone(), 0);
    let mut open = BinaryHeap::new();
    let (_, h0) = problem.estimate(&start);
    open.push(Reverse((Priority(weight * h0), Reverse(0u32), 0u32)));

    let mut actions = Vec::new();
    let mut child = vec![0u16; width];
    while let Some(Reverse((_, _, id))) = open.pop() {
        let id = id as usize;
        let g = nodes[id].g;
        let pos = &states[id * width..(id + 1) * width];
        if best.get(pos).is_some_and(|&b| b < g) {
            continue;
        }
        if problem.front_cost(pos) == 0 {
            let mut swaps = Vec::new();
            let mut cur = id;
            while nodes[cur].parent != u32::MAX {
                let (a, b) = nodes[cur].swap;
                swaps.push((a as usize, b as usize));
                cur = nodes[cur].parent as usize;
            }
            swaps.reverse();
            return Ok(swaps);
        }
        problem.actions(pos, &mut actions);
        for &(a, b) in &actions {
            child.copy_from_slice(&states[id * width..(id + 1) * width]);
            for p in child.iter_mut() {
                if *p == a {
                    *p = b;
                } else if *p == b {
                    *p = a;
                }
            }
            match best.entry(child.clone()) {
                Entry::Occupied(mut e) => {
                    if *e.get() <= g + 1 {
                        continue;
                    }
                    e.insert(g + 1);
                }
                Entry::Vacant(e) => {
                    e.insert(g + 1);
                }
            }
            if nodes.len() >= node_budget {
                return Err(nodes.len());
            }
            let (_, h) = problem.estimate(&child);
            let cid = nodes.len() as u32;
            nodes.push(Node {
                parent: id as u32,
                swap: (a, b),
                g: g + 1,
            });
            states.extend_from_slice(&child);
            open.push(Reverse((
                Priority(f64::from(g + 1) + weight * h),
                Reverse(g + 1),
                cid,
            )));
        }
    }
    Err(nodes.len())
}
