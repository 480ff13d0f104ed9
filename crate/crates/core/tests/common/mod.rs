#![allow(dead_code)]

use std::f64::consts::PI;

use qmapper::{
    decompose_swaps, map_exact, route_astar, route_naive_with, Architecture, AstarConfig, Circuit,
    Gate, GateKind, LayoutStrategy, MapError, MappingResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ansatz in the usual hardware-efficient shape: a rotation layer,
/// then `reps` rounds of a CX chain followed by another rotation layer.
pub fn chain_ansatz(n: usize, reps: usize) -> Circuit {
    let mut c = Circuit::new(n);
    let mut k = 0.0;
    let mut rotations = |c: &mut Circuit| {
        for q in 0..n {
            k += 1.0;
            c.push(Gate::ry(q, 0.1 * k)).unwrap();
            c.push(Gate::rz(q, -0.07 * k)).unwrap();
        }
    };
    rotations(&mut c);
    for _ in 0..reps {
        for q in 0..n - 1 {
            c.push(Gate::cx(q, q + 1)).unwrap();
        }
        rotations(&mut c);
    }
    c
}

/// Like [`chain_ansatz`] but entangling every pair.
pub fn all_pairs_ansatz(n: usize, reps: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for r in 0..reps {
        for q in 0..n {
            c.push(Gate::ry(q, 0.3 + r as f64 + q as f64 * 0.11))
                .unwrap();
        }
        for a in 0..n {
            for b in a + 1..n {
                c.push(Gate::cx(a, b)).unwrap();
            }
        }
    }
    c
}

fn random_1q<R: Rng>(rng: &mut R, q: usize) -> Gate {
    let theta = rng.gen_range(-PI..PI);
    match rng.gen_range(0..5) {
        0 => Gate::x(q),
        1 => Gate::sx(q),
        2 => Gate::h(q),
        3 => Gate::rz(q, theta),
        _ => Gate::ry(q, theta),
    }
}

/// Random circuit over the full gate set with `two_qubit` entangling gates
/// and roughly as many single-qubit gates.
pub fn random_circuit(n: usize, two_qubit: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    let mut placed = 0;
    while placed < two_qubit {
        if n >= 2 && rng.gen_bool(0.5) {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            let g = match rng.gen_range(0..6) {
                0 => Gate::cz(a, b),
                1 => Gate::swap(a, b),
                _ => Gate::cx(a, b),
            };
            c.push(g).unwrap();
            placed += 1;
        } else {
            let q = rng.gen_range(0..n);
            c.push(random_1q(&mut rng, q)).unwrap();
            if n < 2 {
                placed += 1;
            }
        }
    }
    c
}

/// Random circuit made only of CX gates.
pub fn random_cx_circuit(n: usize, gates: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    for _ in 0..gates {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        c.push(Gate::cx(a, b)).unwrap();
    }
    c
}

/// A directed five-qubit line whose edges alternate in orientation.
pub fn directed_line_5() -> Architecture {
    Architecture::from_coupling_map(5, [(0, 1), (2, 1), (2, 3), (4, 3)]).unwrap()
}

/// Devices of at most seven qubits.
pub fn small_devices() -> Vec<(String, Architecture)> {
    let mut out: Vec<(String, Architecture)> = [
        "line_2", "line_3", "line_4", "line_5", "ring_4", "ring_5", "grid_2x3", "oslo7",
    ]
    .iter()
    .map(|n| (n.to_string(), Architecture::builtin(n).unwrap()))
    .collect();
    out.push(("directed_line_5".into(), directed_line_5()));
    out
}

/// Named circuits used across the integration tests. All have at most seven
/// qubits.
pub fn corpus() -> Vec<(String, Circuit)> {
    let mut out = vec![
        ("empty_2".to_string(), Circuit::new(2)),
        (
            "bell".into(),
            Circuit::from_gates(2, [Gate::h(0), Gate::cx(0, 1)]).unwrap(),
        ),
        (
            "ghz_5".into(),
            Circuit::from_gates(
                5,
                [
                    Gate::h(0),
                    Gate::cx(0, 1),
                    Gate::cx(0, 2),
                    Gate::cx(0, 3),
                    Gate::cx(0, 4),
                ],
            )
            .unwrap(),
        ),
        (
            "single_qubit_only".into(),
            Circuit::from_gates(3, [Gate::h(0), Gate::sx(1), Gate::rz(2, 0.25), Gate::x(0)])
                .unwrap(),
        ),
        (
            "swap_and_cz".into(),
            Circuit::from_gates(
                4,
                [
                    Gate::h(3),
                    Gate::swap(0, 3),
                    Gate::cz(1, 3),
                    Gate::cx(2, 0),
                    Gate::ry(1, 1.2),
                ],
            )
            .unwrap(),
        ),
        ("chain_5".into(), chain_ansatz(5, 3)),
        ("chain_4".into(), chain_ansatz(4, 2)),
        ("all_pairs_4".into(), all_pairs_ansatz(4, 2)),
        ("all_pairs_5".into(), all_pairs_ansatz(5, 1)),
    ];
    for (i, (n, g)) in [
        (2, 5),
        (3, 8),
        (3, 12),
        (4, 10),
        (4, 16),
        (5, 14),
        (6, 12),
        (7, 12),
    ]
    .into_iter()
    .enumerate()
    {
        out.push((
            format!("random_{n}q_{g}g_s{i}"),
            random_circuit(n, g, 1000 + i as u64),
        ));
    }
    out
}

/// Every gate kind applied once, including angles that need all digits.
pub fn every_gate_kind() -> Circuit {
    let mut c = Circuit::new(3);
    for kind in GateKind::ALL {
        let qs: &[usize] = if kind.arity() == 2 { &[2, 0] } else { &[1] };
        let angle = kind.has_angle().then_some(-0.123_456_789_012_345_68);
        c.push(Gate::new(kind, qs, angle).unwrap()).unwrap();
    }
    c
}

pub const LAYOUTS: [LayoutStrategy; 3] = [
    LayoutStrategy::Identity,
    LayoutStrategy::Static,
    LayoutStrategy::Dynamic,
];

/// Runs every router and layout on one instance, plus the SWAP-decomposed
/// variants of the heuristic runs. Labels name the configuration.
pub fn all_mappings(
    circuit: &Circuit,
    arch: &Architecture,
) -> Result<Vec<(String, MappingResult)>, MapError> {
    let mut out = Vec::new();
    for layout in LAYOUTS {
        out.push((
            format!("naive/{layout}"),
            route_naive_with(circuit, arch, layout)?,
        ));
        let heuristic = route_astar(circuit, arch, layout, &AstarConfig::default())?;
        out.push((
            format!("heuristic/{layout}/decomposed"),
            decompose_swaps(&heuristic, arch),
        ));
        out.push((format!("heuristic/{layout}"), heuristic));
    }
    let exact = map_exact(circuit, arch)?;
    out.push(("exact/decomposed".into(), decompose_swaps(&exact, arch)));
    out.push(("exact".into(), exact));
    Ok(out)
}

/// Fewest SWAPs for a circuit of two-qubit gates `pairs` on `n` logical
/// qubits, by dynamic programming over layers.
///
/// Deliberately shares no code with the mapper: layers are recomputed here
/// (a gate lands one past the latest layer of either operand), every
/// injective placement is enumerated and filtered by adjacency, and the
/// transition costs come from a breadth-first search over placements.
pub fn brute_force_min_swaps(
    pairs: &[(usize, usize)],
    n: usize,
    arch: &Architecture,
) -> Option<usize> {
    let big_n = arch.num_physical();
    let mut front = vec![0usize; n];
    let mut layers: Vec<Vec<(usize, usize)>> = Vec::new();
    for &(a, b) in pairs {
        let l = front[a].max(front[b]);
        if l == layers.len() {
            layers.push(Vec::new());
        }
        layers[l].push((a, b));
        front[a] = l + 1;
        front[b] = l + 1;
    }

    let mut placements: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        let mut longer = Vec::new();
        for p in &placements {
            for q in (0..big_n).filter(|q| !p.contains(q)) {
                let mut next = p.clone();
                next.push(q);
                longer.push(next);
            }
        }
        placements = longer;
    }
    let index: std::collections::HashMap<&Vec<usize>, usize> =
        placements.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let unreachable = usize::MAX;
    let edges: Vec<(usize, usize)> = (0..big_n)
        .flat_map(|a| (a + 1..big_n).map(move |b| (a, b)))
        .filter(|&(a, b)| arch.is_adjacent(a, b))
        .collect();
    let neighbours: Vec<Vec<usize>> = placements
        .iter()
        .map(|p| {
            edges
                .iter()
                .map(|&(a, b)| {
                    let moved: Vec<usize> = p
                        .iter()
                        .map(|&x| {
                            if x == a {
                                b
                            } else if x == b {
                                a
                            } else {
                                x
                            }
                        })
                        .collect();
                    index[&moved]
                })
                .collect()
        })
        .collect();
    // cheapest way to reach each placement when starting from `start` costs,
    // one unit per SWAP
    let relax = |start: &[usize]| -> Vec<usize> {
        let mut cost = start.to_vec();
        let mut buckets: Vec<Vec<usize>> = Vec::new();
        for (i, &c) in start.iter().enumerate() {
            if c != unreachable {
                if buckets.len() <= c {
                    buckets.resize(c + 1, Vec::new());
                }
                buckets[c].push(i);
            }
        }
        let mut level = 0;
        while level < buckets.len() {
            let current = std::mem::take(&mut buckets[level]);
            for u in current {
                if cost[u] != level {
                    continue;
                }
                for &v in &neighbours[u] {
                    if cost[v] > level + 1 {
                        cost[v] = level + 1;
                        if buckets.len() <= level + 1 {
                            buckets.resize(level + 2, Vec::new());
                        }
                        buckets[level + 1].push(v);
                    }
                }
            }
            level += 1;
        }
        cost
    };

    let fits = |layer: &[(usize, usize)], p: &[usize]| {
        layer.iter().all(|&(a, b)| arch.is_adjacent(p[a], p[b]))
    };
    let mut best: Vec<usize> = placements
        .iter()
        .map(|p| {
            if layers.first().is_none_or(|l| fits(l, p)) {
                0
            } else {
                unreachable
            }
        })
        .collect();
    for layer in layers.iter().skip(1) {
        let reach = relax(&best);
        best = placements
            .iter()
            .zip(reach)
            .map(|(p, c)| if fits(layer, p) { c } else { unreachable })
            .collect();
    }
    best.into_iter().filter(|&c| c != unreachable).min()
}

/// Every sequence of at most `max_gates` unordered qubit pairs on `n` qubits,
/// each turned into a CX circuit.
pub fn pair_sequences(n: usize, max_gates: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut all = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_gates {
        if pairs.is_empty() {
            break;
        }
        frontier = frontier
            .iter()
            .flat_map(|seq: &Vec<(usize, usize)>| {
                pairs.iter().map(move |&p| {
                    let mut next = seq.clone();
                    next.push(p);
                    next
                })
            })
            .collect();
        all.extend(frontier.iter().cloned());
    }
    all
}

pub fn cx_circuit(n: usize, pairs: &[(usize, usize)]) -> Circuit {
    Circuit::from_gates(n, pairs.iter().map(|&(a, b)| Gate::cx(a, b))).unwrap()
}

/// Runs `map_exact` against [`brute_force_min_swaps`] over the exhaustive
/// family on `arch`; returns (instances, mismatches).
pub fn exact_oracle_sweep(
    arch: &Architecture,
    max_logical: usize,
    max_gates: usize,
) -> (usize, Vec<String>) {
    let mut count = 0;
    let mut bad = Vec::new();
    for n in 1..=max_logical.min(arch.num_physical()) {
        for seq in pair_sequences(n, max_gates) {
            let circuit = cx_circuit(n, &seq);
            let got = map_exact(&circuit, arch).map(|r| r.swaps_added).ok();
            let want = brute_force_min_swaps(&seq, n, arch);
            if got != want {
                bad.push(format!("{seq:?}: exact {got:?}, oracle {want:?}"));
            }
            count += 1;
        }
    }
    (count, bad)
}

/// `qasm` with one defect per variant: each gate name corrupted, and each
/// operand index pushed out of range. Entries carry the expected 1-based
/// (line, column) of the error.
pub fn mutations(qasm: &str, num_qubits: usize) -> Vec<(String, usize, usize)> {
    let lines: Vec<&str> = qasm.lines().collect();
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let Some((name, rest)) = line.split_once(' ') else {
            continue;
        };
        if matches!(name, "OPENQASM" | "include" | "qreg") {
            continue;
        }
        let gate = name.split('(').next().unwrap();
        for bad in [
            format!("{gate}x"),
            gate.to_uppercase(),
            "cy".to_string(),
            format!("u{gate}"),
        ] {
            if GateKind::from_name(&bad).is_some() {
                continue;
            }
            let mut copy = lines.clone();
            let replaced = format!("{bad}{} {rest}", &name[gate.len()..]);
            copy[i] = &replaced;
            out.push((copy.join("\n"), i + 1, 1));
        }
        // operand indices sit after each "q["
        let mut search = 0;
        while let Some(off) = line[search..].find("q[") {
            let start = search + off + 2;
            let end = start + line[start..].find(']').unwrap();
            let replaced = format!("{}{}{}", &line[..start], num_qubits, &line[end..]);
            let mut copy = lines.clone();
            copy[i] = &replaced;
            out.push((copy.join("\n"), i + 1, start + 1));
            search = end;
        }
    }
    out
}
