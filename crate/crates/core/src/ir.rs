//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of [`Gate`]s over `num_qubits` logical
//! qubits. Routing works layer by layer; [`layerize`] produces those layers.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IrError {
    #[error("gate {kind} expects {expected} qubit operand(s), got {got}")]
    Arity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("gate {kind} has repeated operand q[{qubit}]")]
    RepeatedOperand { kind: GateKind, qubit: usize },
    #[error("gate {kind} requires an angle")]
    MissingAngle { kind: GateKind },
    #[error("gate {kind} does not take an angle")]
    UnexpectedAngle { kind: GateKind },
    #[error("angle {0} is not finite")]
    NonFiniteAngle(f64),
    #[error("operand q[{qubit}] out of range for a {num_qubits}-qubit circuit")]
    OperandOutOfRange { qubit: usize, num_qubits: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    SX,
    RZ,
    RY,
    H,
    CX,
    CZ,
    Swap,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::X,
        GateKind::SX,
        GateKind::RZ,
        GateKind::RY,
        GateKind::H,
        GateKind::CX,
        GateKind::CZ,
        GateKind::Swap,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::CX | GateKind::CZ | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::RZ | GateKind::RY)
    }

    /// Lower-case OpenQASM mnemonic.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::SX => "sx",
            GateKind::RZ => "rz",
            GateKind::RY => "ry",
            GateKind::H => "h",
            GateKind::CX => "cx",
            GateKind::CZ => "cz",
            GateKind::Swap => "swap",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single gate application. Operands are qubit indices of whatever
/// register the owning circuit describes (logical before mapping, physical
/// after).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    kind: GateKind,
    operands: [usize; 2],
    angle: Option<f64>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Result<Gate, IrError> {
        if qubits.len() != kind.arity() {
            return Err(IrError::Arity {
                kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        if kind.arity() == 2 && qubits[0] == qubits[1] {
            return Err(IrError::RepeatedOperand {
                kind,
                qubit: qubits[0],
            });
        }
        match (kind.has_angle(), angle) {
            (true, None) => return Err(IrError::MissingAngle { kind }),
            (false, Some(_)) => return Err(IrError::UnexpectedAngle { kind }),
            (true, Some(theta)) if !theta.is_finite() => {
                return Err(IrError::NonFiniteAngle(theta))
            }
            _ => {}
        }
        let second = if kind.arity() == 2 { qubits[1] } else { 0 };
        Ok(Gate {
            kind,
            operands: [qubits[0], second],
            angle,
        })
    }

    fn one(kind: GateKind, q: usize) -> Gate {
        Gate {
            kind,
            operands: [q, 0],
            angle: None,
        }
    }

    fn two(kind: GateKind, a: usize, b: usize) -> Gate {
        assert_ne!(a, b, "two-qubit gate operands must differ");
        Gate {
            kind,
            operands: [a, b],
            angle: None,
        }
    }

    fn rotation(kind: GateKind, q: usize, theta: f64) -> Gate {
        assert!(theta.is_finite(), "rotation angle must be finite");
        Gate {
            kind,
            operands: [q, 0],
            angle: Some(theta),
        }
    }

    pub fn x(q: usize) -> Gate {
        Gate::one(GateKind::X, q)
    }
    pub fn sx(q: usize) -> Gate {
        Gate::one(GateKind::SX, q)
    }
    pub fn h(q: usize) -> Gate {
        Gate::one(GateKind::H, q)
    }
    pub fn rz(q: usize, theta: f64) -> Gate {
        Gate::rotation(GateKind::RZ, q, theta)
    }
    pub fn ry(q: usize, theta: f64) -> Gate {
        Gate::rotation(GateKind::RY, q, theta)
    }
    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::two(GateKind::CX, control, target)
    }
    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::CZ, a, b)
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Swap, a, b)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.operands[..self.kind.arity()]
    }

    pub fn angle(&self) -> Option<f64> {
        self.angle
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }

    /// The operand pair of a two-qubit gate.
    pub fn pair(&self) -> Option<(usize, usize)> {
        self.is_two_qubit()
            .then_some((self.operands[0], self.operands[1]))
    }

    /// Same gate with every operand sent through `f`.
    pub fn remap(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        let mut g = *self;
        for q in &mut g.operands[..self.kind.arity()] {
            *q = f(*q);
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Circuit {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(
        num_qubits: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Circuit, IrError> {
        let mut circuit = Circuit::new(num_qubits);
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), IrError> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.num_qubits) {
            return Err(IrError::OperandOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn depth(&self) -> usize {
        depth(self)
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }
}

/// A set of gate indices into the parent circuit, kept in program order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Layer {
    pub gate_indices: Vec<usize>,
}

impl Layer {
    /// Indices of the layer's two-qubit gates, in program order.
    pub fn two_qubit_gates<'a>(&'a self, circuit: &'a Circuit) -> impl Iterator<Item = usize> + 'a {
        self.gate_indices
            .iter()
            .copied()
            .filter(|&i| circuit.gates[i].is_two_qubit())
    }
}

/// Longest chain of gates linked by shared qubits (ASAP schedule length).
pub fn depth(circuit: &Circuit) -> usize {
    let mut level = vec![0usize; circuit.num_qubits];
    let mut max = 0;
    for g in &circuit.gates {
        let next = g.qubits().iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for &q in g.qubits() {
            level[q] = next;
        }
        max = max.max(next);
    }
    max
}

/// Greedy front-packing into layers.
///
/// A two-qubit gate lands one layer after the latest gate on either of its
/// qubits, so two-qubit gates within a layer are disjoint. A single-qubit gate
/// rides along in the layer of the latest gate on its qubit (layer 0 if there
/// is none) and never opens a layer of its own. Within a layer gates keep
/// program order, so concatenating layers preserves per-qubit order.
pub fn layerize(circuit: &Circuit) -> Vec<Layer> {
    let mut front: Vec<Option<usize>> = vec![None; circuit.num_qubits];
    let mut layers: Vec<Layer> = Vec::new();
    for (i, g) in circuit.gates.iter().enumerate() {
        let latest = g.qubits().iter().filter_map(|&q| front[q]).max();
        let at = if g.is_two_qubit() {
            latest.map_or(0, |l| l + 1)
        } else {
            latest.unwrap_or(0)
        };
        if layers.len() <= at {
            layers.resize_with(at + 1, Layer::default);
        }
        layers[at].gate_indices.push(i);
        for &q in g.qubits() {
            front[q] = Some(at);
        }
    }
    layers
}

/// All arity-2 gates in program order, with their operand pair.
pub fn two_qubit_gates(circuit: &Circuit) -> Vec<(usize, (usize, usize))> {
    circuit
        .gates
        .iter()
        .enumerate()
        .filter_map(|(i, g)| g.pair().map(|p| (i, p)))
        .collect()
}

/// The layers from [`layerize`] reduced to their two-qubit operand pairs,
/// dropping layers without any. Entry `k` also records which layerize layer
/// it came from.
pub fn interaction_layers(
    circuit: &Circuit,
    layers: &[Layer],
) -> Vec<(usize, Vec<(usize, usize)>)> {
    layers
        .iter()
        .enumerate()
        .filter_map(|(li, layer)| {
            let pairs: Vec<_> = layer
                .two_qubit_gates(circuit)
                .filter_map(|i| circuit.gates[i].pair())
                .collect();
            (!pairs.is_empty()).then_some((li, pairs))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn circ(n: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::from_gates(n, gates).unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth(&Circuit::new(3)), 0);
        assert_eq!(depth(&circ(4, vec![Gate::cx(0, 1), Gate::cx(2, 3)])), 1);
        let chain = circ(3, vec![Gate::cx(0, 1), Gate::cx(1, 2), Gate::cx(0, 1)]);
        assert_eq!(depth(&chain), 3);
    }

    #[test]
    fn layerize_examples() {
        let c = circ(4, vec![Gate::cx(0, 1), Gate::cx(2, 3), Gate::cx(1, 2)]);
        let layers = layerize(&c);
        assert_eq!(
            layers,
            vec![
                Layer {
                    gate_indices: vec![0, 1]
                },
                Layer {
                    gate_indices: vec![2]
                }
            ]
        );
        assert!(layerize(&Circuit::new(2)).is_empty());

        let c = circ(
            2,
            vec![Gate::h(0), Gate::cx(0, 1), Gate::rz(1, 0.3), Gate::cx(0, 1)],
        );
        let layers = layerize(&c);
        assert_eq!(layers.len(), 3);
        let where_is = |g: usize| layers.iter().position(|l| l.gate_indices.contains(&g));
        assert_ne!(where_is(1), where_is(3));
    }

    #[test]
    fn two_qubit_gate_listing() {
        let c = circ(2, vec![Gate::h(0), Gate::x(1)]);
        assert!(two_qubit_gates(&c).is_empty());
        let c = circ(2, vec![Gate::h(0), Gate::cx(0, 1)]);
        assert_eq!(two_qubit_gates(&c), vec![(1, (0, 1))]);
        let mut gates = Vec::new();
        for _ in 0..3 {
            for q in 0..4 {
                gates.push(Gate::cx(q, q + 1));
            }
        }
        assert_eq!(two_qubit_gates(&circ(5, gates)).len(), 12);
    }

    #[test]
    fn gate_validation() {
        assert!(matches!(
            Gate::new(GateKind::CX, &[0], None),
            Err(IrError::Arity { .. })
        ));
        assert!(matches!(
            Gate::new(GateKind::CZ, &[1, 1], None),
            Err(IrError::RepeatedOperand { .. })
        ));
        assert!(matches!(
            Gate::new(GateKind::RZ, &[0], None),
            Err(IrError::MissingAngle { .. })
        ));
        assert!(matches!(
            Gate::new(GateKind::H, &[0], Some(1.0)),
            Err(IrError::UnexpectedAngle { .. })
        ));
        assert!(matches!(
            Gate::new(GateKind::RY, &[0], Some(f64::NAN)),
            Err(IrError::NonFiniteAngle(_))
        ));
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.push(Gate::cx(0, 2)),
            Err(IrError::OperandOutOfRange { qubit: 2, .. })
        ));
    }

    fn arb_circuit() -> impl Strategy<Value = Circuit> {
        (2usize..6).prop_flat_map(|n| {
            let gate = (0usize..8, 0..n, 0..n, -3.0f64..3.0).prop_map(move |(k, a, b, t)| {
                let kind = GateKind::ALL[k];
                if kind.arity() == 2 {
                    let b = if a == b { (a + 1) % n } else { b };
                    Gate::new(kind, &[a, b], None).unwrap()
                } else {
                    Gate::new(kind, &[a], kind.has_angle().then_some(t)).unwrap()
                }
            });
            proptest::collection::vec(gate, 0..30)
                .prop_map(move |gates| Circuit::from_gates(n, gates).unwrap())
        })
    }

    proptest! {
        #[test]
        fn layers_preserve_per_qubit_order(c in arb_circuit()) {
            let layers = layerize(&c);
            let flat: Vec<usize> = layers.iter().flat_map(|l| l.gate_indices.iter().copied()).collect();
            let mut sorted = flat.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..c.len()).collect::<Vec<_>>());
            for q in 0..c.num_qubits() {
                let on_q: Vec<usize> = flat.iter().copied()
                    .filter(|&i| c.gates()[i].qubits().contains(&q)).collect();
                prop_assert!(on_q.windows(2).all(|w| w[0] < w[1]));
            }
            for layer in &layers {
                let mut seen = vec![false; c.num_qubits()];
                for i in layer.two_qubit_gates(&c) {
                    for &q in c.gates()[i].qubits() {
                        prop_assert!(!seen[q]);
                        seen[q] = true;
                    }
                }
            }
            let two_only = Circuit::from_gates(
                c.num_qubits(),
                c.gates().iter().copied().filter(|g| g.is_two_qubit()),
            ).unwrap();
            prop_assert!(layers.len() >= depth(&two_only));
        }

        #[test]
        fn depth_bounded_by_gate_count(c in arb_circuit()) {
            prop_assert!(depth(&c) <= c.len());
            let star = Circuit::from_gates(
                c.num_qubits(),
                c.gates().iter().filter(|g| !g.is_two_qubit()).map(|g| g.remap(|_| 0)),
            ).unwrap();
            prop_assert_eq!(depth(&star), star.len());
        }
    }
}
