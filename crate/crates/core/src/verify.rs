//! State-vector simulation and equivalence checking of mapped circuits.

use num_complex::Complex64;
use thiserror::Error;

use crate::ir::{Circuit, Gate, GateKind};
use crate::route::MappingResult;

/// Largest register the simulator accepts.
pub const MAX_SIM_QUBITS: usize = 12;

/// Amplitudes above this magnitude count as nonzero when fixing global phase.
const PHASE_THRESHOLD: f64 = 1e-10;

/// Maximum amplitude deviation accepted by [`check_equivalence`].
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{0} qubits exceed the simulator cap of {MAX_SIM_QUBITS}")]
    TooManyQubits(usize),
    #[error("basis state {index} out of range for {num_qubits} qubits")]
    BasisOutOfRange { index: usize, num_qubits: usize },
    #[error("original has {original} qubits but the mapped circuit only {mapped}")]
    SizeMismatch { original: usize, mapped: usize },
}

/// Little-endian state vector: qubit 0 is the least significant index bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(num_qubits: usize, index: usize) -> Result<StateVector, VerifyError> {
        if num_qubits > MAX_SIM_QUBITS {
            return Err(VerifyError::TooManyQubits(num_qubits));
        }
        let len = 1usize << num_qubits;
        if index >= len {
            return Err(VerifyError::BasisOutOfRange { index, num_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); len];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Takes arbitrary amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<StateVector, VerifyError> {
        let num_qubits = amplitudes.len().trailing_zeros() as usize;
        if num_qubits > MAX_SIM_QUBITS {
            return Err(VerifyError::TooManyQubits(num_qubits));
        }
        assert!(
            amplitudes.len().is_power_of_two(),
            "length must be a power of two"
        );
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1 << q;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let (x, y) = (self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = m[0][0] * x + m[0][1] * y;
                self.amplitudes[i | bit] = m[1][0] * x + m[1][1] * y;
            }
        }
    }

    /// Applies `gate`; its operands must be below `num_qubits`.
    pub fn apply(&mut self, gate: &Gate) {
        let qs = gate.qubits();
        match gate.kind() {
            GateKind::CX => {
                let (c, t) = (1 << qs[0], 1 << qs[1]);
                for i in 0..self.amplitudes.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amplitudes.swap(i, i | t);
                    }
                }
            }
            GateKind::CZ => {
                let both = (1 << qs[0]) | (1 << qs[1]);
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & both == both {
                        *a = -*a;
                    }
                }
            }
            GateKind::Swap => {
                let (a, b) = (1 << qs[0], 1 << qs[1]);
                for i in 0..self.amplitudes.len() {
                    if i & a != 0 && i & b == 0 {
                        self.amplitudes.swap(i, i ^ a ^ b);
                    }
                }
            }
            kind => self.apply_1q(qs[0], single_qubit_matrix(kind, gate.angle())),
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_qubit_matrix(kind: GateKind, angle: Option<f64>) -> [[Complex64; 2]; 2] {
    let theta = angle.unwrap_or(0.0);
    match kind {
        GateKind::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        GateKind::H => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
        }
        GateKind::SX => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        GateKind::RZ => [
            [Complex64::from_polar(1.0, -theta / 2.0), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
        ],
        GateKind::RY => {
            let (s, co) = (theta / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::CX | GateKind::CZ | GateKind::Swap => unreachable!("two-qubit gate"),
    }
}

/// Runs `circuit` on the basis state `|initial>`.
pub fn simulate(circuit: &Circuit, initial: usize) -> Result<StateVector, VerifyError> {
    let mut state = StateVector::basis(circuit.num_qubits(), initial)?;
    for gate in circuit.gates() {
        state.apply(gate);
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    pub max_deviation: f64,
}

/// Checks that `result.mapped_circuit` computes `original` up to the qubit
/// relabelling given by the layouts and one global phase.
///
/// Every basis input over the original qubits is routed through the initial
/// layout, with unused physical qubits in `|0>`. The mapped output is read
/// back through the final layout. The global phase is fixed once, from the
/// first nonzero expected amplitude of the first input, and applies to every
/// input.
pub fn check_equivalence(
    original: &Circuit,
    result: &MappingResult,
) -> Result<Equivalence, VerifyError> {
    let mapped = &result.mapped_circuit;
    let (n, big_n) = (original.num_qubits(), mapped.num_qubits());
    if big_n > MAX_SIM_QUBITS {
        return Err(VerifyError::TooManyQubits(big_n));
    }
    if n > big_n {
        return Err(VerifyError::SizeMismatch {
            original: n,
            mapped: big_n,
        });
    }
    let scatter = |x: usize, to: &[usize]| {
        (0..n)
            .filter(|&q| x >> q & 1 == 1)
            .fold(0usize, |acc, q| acc | 1 << to[q])
    };
    let initial = result.initial_layout.log_to_phys();
    let fin = result.final_layout.log_to_phys();

    let mut phase: Option<Complex64> = None;
    let mut max_deviation = 0.0f64;
    let mut expected = vec![Complex64::new(0.0, 0.0); 1 << big_n];
    for x in 0..1usize << n {
        let want = simulate(original, x)?;
        let got = simulate(mapped, scatter(x, initial))?;
        expected
            .iter_mut()
            .for_each(|a| *a = Complex64::new(0.0, 0.0));
        for (y, &a) in want.amplitudes().iter().enumerate() {
            expected[scatter(y, fin)] = a;
        }
        let phase = *phase.get_or_insert_with(|| {
            expected
                .iter()
                .zip(got.amplitudes())
                .find(|(e, _)| e.norm() > PHASE_THRESHOLD)
                .map(|(e, g)| g / e)
                .unwrap_or(Complex64::new(1.0, 0.0))
        });
        for (e, g) in expected.iter().zip(got.amplitudes()) {
            max_deviation = max_deviation.max((g - phase * e).norm());
        }
    }
    Ok(Equivalence {
        equivalent: max_deviation <= EQUIVALENCE_TOLERANCE,
        max_deviation,
    })
}
