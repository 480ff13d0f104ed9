//! Layout selection and SWAP-based routing.
//!
//! Routers share a [`Placement`] tracker and an [`Emitter`] that rewrites
//! gates onto physical qubits, so every [`MappingResult`] is assembled the
//! same way regardless of method.

mod astar;
mod layout;
mod naive;

use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::arch::{ArchError, Architecture};
use crate::ir::{Circuit, Gate, GateKind};

pub use astar::{route_astar, AstarConfig, HeuristicKind};
pub use layout::{layout_dynamic, layout_identity, layout_static, LayoutStrategy};
pub use naive::{route_naive, route_naive_with};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("circuit has {logical} qubits but the device only {physical}")]
    Capacity { logical: usize, physical: usize },
    #[error("gate {gate} acts on physical qubits {a} and {b} which are not connected")]
    Unroutable { gate: usize, a: usize, b: usize },
    #[error("search for layer {layer} exceeded the node budget of {budget}")]
    NodeBudget { layer: usize, budget: usize },
    #[error("device too large for exact mapping ({0} > 8 qubits)")]
    ExactTooLarge(usize),
    #[error("no mapping within the SWAP budget of {0}")]
    SwapBudget(usize),
    #[error("exact search exceeded the node budget of {0} states; try the heuristic mapper")]
    ExactNodeBudget(usize),
    #[error("no SWAP schedule reaches layer {layer}; its interactions cannot be embedded")]
    ExactInfeasible { layer: usize },
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error(transparent)]
    Arch(#[from] ArchError),
}

/// Injective assignment of logical to physical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Layout {
    log_to_phys: Vec<usize>,
    #[serde(skip)]
    phys_to_log: Vec<Option<usize>>,
}

impl Layout {
    pub fn new(log_to_phys: Vec<usize>, num_physical: usize) -> Result<Layout, MapError> {
        if log_to_phys.len() > num_physical {
            return Err(MapError::Capacity {
                logical: log_to_phys.len(),
                physical: num_physical,
            });
        }
        let mut phys_to_log = vec![None; num_physical];
        for (l, &p) in log_to_phys.iter().enumerate() {
            if p >= num_physical {
                return Err(MapError::InvalidLayout(format!(
                    "q{l} -> {p} is off the device"
                )));
            }
            if let Some(prev) = phys_to_log[p].replace(l) {
                return Err(MapError::InvalidLayout(format!(
                    "q{prev} and q{l} both assigned to {p}"
                )));
            }
        }
        Ok(Layout {
            log_to_phys,
            phys_to_log,
        })
    }

    pub fn identity(num_logical: usize, num_physical: usize) -> Result<Layout, MapError> {
        Layout::new((0..num_logical).collect(), num_physical)
    }

    pub fn num_logical(&self) -> usize {
        self.log_to_phys.len()
    }

    pub fn num_physical(&self) -> usize {
        self.phys_to_log.len()
    }

    pub fn phys(&self, logical: usize) -> usize {
        self.log_to_phys[logical]
    }

    pub fn logical_at(&self, physical: usize) -> Option<usize> {
        self.phys_to_log[physical]
    }

    pub fn log_to_phys(&self) -> &[usize] {
        &self.log_to_phys
    }

    pub fn phys_to_log(&self) -> &[Option<usize>] {
        &self.phys_to_log
    }
}

/// Output of every router.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingResult {
    /// Circuit over physical qubit indices.
    pub mapped_circuit: Circuit,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub swaps_added: usize,
    /// CX gates emitted against the device edge direction (each costs four H).
    pub direction_fixes: usize,
    pub two_qubit_gates_added: usize,
    pub depth_before: usize,
    pub depth_after: usize,
    pub runtime_seconds: f64,
    inserted_swaps: Vec<usize>,
    swaps_decomposed: bool,
}

impl MappingResult {
    /// Wraps an externally produced mapping. Every SWAP beyond those in
    /// `original` is counted as inserted.
    pub fn from_parts(
        original: &Circuit,
        mapped_circuit: Circuit,
        initial_layout: Layout,
        final_layout: Layout,
    ) -> MappingResult {
        let original_swaps = original
            .gates()
            .iter()
            .filter(|g| g.kind() == GateKind::Swap)
            .count();
        let inserted_swaps: Vec<usize> = mapped_circuit
            .gates()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.kind() == GateKind::Swap)
            .map(|(i, _)| i)
            .skip(original_swaps)
            .collect();
        MappingResult {
            swaps_added: inserted_swaps.len(),
            direction_fixes: 0,
            two_qubit_gates_added: mapped_circuit
                .two_qubit_count()
                .saturating_sub(original.two_qubit_count()),
            depth_before: original.depth(),
            depth_after: mapped_circuit.depth(),
            runtime_seconds: 0.0,
            mapped_circuit,
            initial_layout,
            final_layout,
            inserted_swaps,
            swaps_decomposed: false,
        }
    }

    /// Positions in `mapped_circuit` of SWAP gates added by routing.
    pub fn inserted_swaps(&self) -> &[usize] {
        &self.inserted_swaps
    }

    pub fn swaps_decomposed(&self) -> bool {
        self.swaps_decomposed
    }

    /// True when every two-qubit gate acts on coupled qubits.
    pub fn is_compliant(&self, arch: &Architecture) -> bool {
        self.mapped_circuit
            .gates()
            .iter()
            .filter_map(Gate::pair)
            .all(|(a, b)| arch.is_adjacent(a, b))
    }
}

/// Parses layout and method names used by the CLI and the statistics record.
impl FromStr for LayoutStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(LayoutStrategy::Identity),
            "static" => Ok(LayoutStrategy::Static),
            "dynamic" => Ok(LayoutStrategy::Dynamic),
            other => Err(format!("unknown layout `{other}`")),
        }
    }
}

/// Tracks where logical qubits sit while routing, including qubits that are
/// not yet placed (dynamic layout). `origin[p]` names the physical position
/// at circuit start whose content is now at `p`, so a late placement can be
/// traced back to an initial layout entry.
#[derive(Debug, Clone)]
pub(crate) struct Placement {
    log_to_phys: Vec<Option<usize>>,
    phys_to_log: Vec<Option<usize>>,
    origin: Vec<usize>,
    initial: Vec<Option<usize>>,
}

impl Placement {
    pub(crate) fn empty(num_logical: usize, num_physical: usize) -> Placement {
        Placement {
            log_to_phys: vec![None; num_logical],
            phys_to_log: vec![None; num_physical],
            origin: (0..num_physical).collect(),
            initial: vec![None; num_logical],
        }
    }

    pub(crate) fn from_layout(layout: &Layout) -> Placement {
        let mut p = Placement::empty(layout.num_logical(), layout.num_physical());
        for (l, &q) in layout.log_to_phys.iter().enumerate() {
            p.place(l, q);
        }
        p
    }

    #[inline]
    pub(crate) fn phys(&self, logical: usize) -> Option<usize> {
        self.log_to_phys[logical]
    }

    #[inline]
    pub(crate) fn is_free(&self, physical: usize) -> bool {
        self.phys_to_log[physical].is_none()
    }

    pub(crate) fn place(&mut self, logical: usize, physical: usize) {
        debug_assert!(self.log_to_phys[logical].is_none());
        debug_assert!(self.phys_to_log[physical].is_none());
        self.log_to_phys[logical] = Some(physical);
        self.phys_to_log[physical] = Some(logical);
        self.initial[logical] = Some(self.origin[physical]);
    }

    pub(crate) fn first_free(&self) -> Option<usize> {
        self.phys_to_log.iter().position(Option::is_none)
    }

    pub(crate) fn swap(&mut self, a: usize, b: usize) {
        self.phys_to_log.swap(a, b);
        self.origin.swap(a, b);
        for p in [a, b] {
            if let Some(l) = self.phys_to_log[p] {
                self.log_to_phys[l] = Some(p);
            }
        }
    }

    /// Places leftover logicals on the lowest free positions and returns the
    /// (initial, final) layouts.
    pub(crate) fn finish(mut self) -> (Layout, Layout) {
        for l in 0..self.log_to_phys.len() {
            if self.log_to_phys[l].is_none() {
                let p = self.first_free().expect("capacity checked before routing");
                self.place(l, p);
            }
        }
        let n = self.phys_to_log.len();
        let initial = self.initial.iter().map(|p| p.unwrap()).collect();
        let last = self.log_to_phys.iter().map(|p| p.unwrap()).collect();
        (
            Layout::new(initial, n).expect("placements stay injective"),
            Layout::new(last, n).expect("placements stay injective"),
        )
    }
}

/// Writes gates onto physical qubits and keeps the cost counters.
pub(crate) struct Emitter<'a> {
    arch: &'a Architecture,
    out: Circuit,
    swaps: usize,
    direction_fixes: usize,
    inserted: Vec<usize>,
}

impl<'a> Emitter<'a> {
    pub(crate) fn new(arch: &'a Architecture) -> Emitter<'a> {
        Emitter {
            arch,
            out: Circuit::new(arch.num_physical()),
            swaps: 0,
            direction_fixes: 0,
            inserted: Vec::new(),
        }
    }

    fn push(&mut self, g: Gate) {
        self.out
            .push(g)
            .expect("physical operands are on the device");
    }

    /// Emits `gate` (logical operands) on the current physical positions.
    /// Operands must already be placed and, for two-qubit gates, adjacent.
    pub(crate) fn gate(&mut self, gate: &Gate, place: &Placement) {
        let g = gate.remap(|l| place.phys(l).expect("operand placed before emission"));
        if let Some((a, b)) = g.pair() {
            debug_assert!(
                self.arch.is_adjacent(a, b),
                "emitting {g:?} on uncoupled pair"
            );
            if g.kind() == GateKind::CX {
                self.cx(a, b);
                return;
            }
        }
        self.push(g);
    }

    /// CX honouring edge direction; a reversed edge costs H on both sides.
    fn cx(&mut self, control: usize, target: usize) {
        if self.arch.has_directed_edge(control, target)
            || !self.arch.has_directed_edge(target, control)
        {
            self.push(Gate::cx(control, target));
        } else {
            self.direction_fixes += 1;
            for g in [
                Gate::h(control),
                Gate::h(target),
                Gate::cx(target, control),
                Gate::h(control),
                Gate::h(target),
            ] {
                self.push(g);
            }
        }
    }

    pub(crate) fn swap(&mut self, a: usize, b: usize, place: &mut Placement) {
        debug_assert!(self.arch.is_adjacent(a, b));
        self.inserted.push(self.out.len());
        self.push(Gate::swap(a, b));
        self.swaps += 1;
        place.swap(a, b);
    }

    pub(crate) fn finish(self, original: &Circuit, place: Placement) -> MappingResult {
        let (initial_layout, final_layout) = place.finish();
        MappingResult {
            swaps_added: self.swaps,
            direction_fixes: self.direction_fixes,
            two_qubit_gates_added: self.swaps,
            depth_before: original.depth(),
            depth_after: self.out.depth(),
            runtime_seconds: 0.0,
            mapped_circuit: self.out,
            initial_layout,
            final_layout,
            inserted_swaps: self.inserted,
            swaps_decomposed: false,
        }
    }
}

/// Rewrites each routing-inserted SWAP as three CX gates, oriented so at most
/// one needs a direction fix. Original SWAP gates of the input are kept.
pub fn decompose_swaps(result: &MappingResult, arch: &Architecture) -> MappingResult {
    if result.swaps_decomposed {
        return result.clone();
    }
    let mut em = Emitter::new(arch);
    em.direction_fixes = result.direction_fixes;
    let mut inserted = result.inserted_swaps.iter().peekable();
    for (i, g) in result.mapped_circuit.gates().iter().enumerate() {
        if inserted.peek() == Some(&&i) {
            inserted.next();
            let (a, b) = g.pair().expect("inserted swaps are two-qubit");
            let (a, b) = if arch.has_directed_edge(a, b) || !arch.has_directed_edge(b, a) {
                (a, b)
            } else {
                (b, a)
            };
            em.cx(a, b);
            em.cx(b, a);
            em.cx(a, b);
        } else {
            // routed CX gates are already oriented
            em.push(*g);
        }
    }
    MappingResult {
        mapped_circuit: em.out.clone(),
        initial_layout: result.initial_layout.clone(),
        final_layout: result.final_layout.clone(),
        swaps_added: result.swaps_added,
        direction_fixes: em.direction_fixes,
        two_qubit_gates_added: 3 * result.swaps_added,
        depth_before: result.depth_before,
        depth_after: em.out.depth(),
        runtime_seconds: result.runtime_seconds,
        inserted_swaps: Vec::new(),
        swaps_decomposed: true,
    }
}

pub(crate) fn check_capacity(circuit: &Circuit, arch: &Architecture) -> Result<(), MapError> {
    if circuit.num_qubits() > arch.num_physical() {
        return Err(MapError::Capacity {
            logical: circuit.num_qubits(),
            physical: arch.num_physical(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_validation() {
        assert!(Layout::new(vec![1, 0], 3).is_ok());
        assert!(matches!(
            Layout::new(vec![1, 1], 3),
            Err(MapError::InvalidLayout(_))
        ));
        assert!(matches!(
            Layout::new(vec![3], 3),
            Err(MapError::InvalidLayout(_))
        ));
        assert!(matches!(
            Layout::identity(4, 3),
            Err(MapError::Capacity {
                logical: 4,
                physical: 3
            })
        ));
        let l = Layout::new(vec![2, 0], 3).unwrap();
        assert_eq!(l.logical_at(2), Some(0));
        assert_eq!(l.logical_at(1), None);
        assert_eq!(serde_json::to_string(&l).unwrap(), "[2,0]");
    }

    #[test]
    fn placement_traces_late_qubits_to_origin() {
        let mut p = Placement::empty(2, 3);
        p.place(0, 0);
        p.swap(0, 1);
        p.swap(1, 2);
        // position 0 now holds what started at 1
        p.place(1, 0);
        let (initial, last) = p.finish();
        assert_eq!(initial.log_to_phys(), &[0, 1]);
        assert_eq!(last.log_to_phys(), &[2, 0]);
    }

    #[test]
    fn reversed_cx_gets_hadamard_sandwich() {
        let arch = Architecture::from_coupling_map(2, [(1, 0)]).unwrap();
        let mut em = Emitter::new(&arch);
        let place = Placement::from_layout(&Layout::identity(2, 2).unwrap());
        em.gate(&Gate::cx(0, 1), &place);
        em.gate(&Gate::cz(0, 1), &place);
        em.gate(&Gate::cx(1, 0), &place);
        let c = Circuit::from_gates(2, [Gate::cx(0, 1)]).unwrap();
        let r = em.finish(&c, place);
        assert_eq!(r.direction_fixes, 1);
        assert_eq!(
            r.mapped_circuit.gates(),
            &[
                Gate::h(0),
                Gate::h(1),
                Gate::cx(1, 0),
                Gate::h(0),
                Gate::h(1),
                Gate::cz(0, 1),
                Gate::cx(1, 0)
            ]
        );
    }

    #[test]
    fn decomposition_counts() {
        let arch = Architecture::from_coupling_map(2, [(0, 1)]).unwrap();
        let original = Circuit::from_gates(2, [Gate::swap(0, 1)]).unwrap();
        let mut em = Emitter::new(&arch);
        let mut place = Placement::from_layout(&Layout::identity(2, 2).unwrap());
        em.gate(&Gate::swap(0, 1), &place);
        em.swap(1, 0, &mut place);
        let r = em.finish(&original, place);
        assert_eq!(r.inserted_swaps(), &[1]);
        let d = decompose_swaps(&r, &arch);
        assert_eq!(d.swaps_added, 1);
        assert_eq!(d.two_qubit_gates_added, 3);
        assert_eq!(d.direction_fixes, 1);
        assert_eq!(d.mapped_circuit.gates()[0], Gate::swap(0, 1));
        assert_eq!(d.mapped_circuit.two_qubit_count(), 4);
        assert_eq!(decompose_swaps(&d, &arch), d);
    }
}
