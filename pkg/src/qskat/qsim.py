"""Sparse statevector simulator.

States are maps from integer basis keys to complex amplitudes.  Bit i of a
key is the state of qubit i, so keys stay small integers for narrow
registers and plain Python integers carry registers wider than 64 qubits.
Only amplitudes above the pruning threshold are stored; reachable supports
in the game constructions are tiny even at ~46 qubits, which is why a dense
backend is out of the question.

All gate applications are coherent and unitary.  Branch bookkeeping with
traced-out work registers lives in :mod:`qskat.gates`, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

PRUNE_EPS = 1e-12
NORM_ATOL = 1e-9

ControlSpec = Sequence[tuple[int, int]]


class SparseState:
    """Normalized sparse amplitude map over an n-qubit register."""

    __slots__ = ("width", "entries")

    def __init__(self, width: int, entries: dict[int, complex]):
        self.width = width
        self.entries = entries

    @classmethod
    def zero(cls, width: int) -> "SparseState":
        return cls(width, {0: 1.0 + 0.0j})

    @classmethod
    def from_amplitudes(cls, width: int, entries: Mapping[int, complex]) -> "SparseState":
        state = cls(width, {k: complex(v) for k, v in entries.items() if abs(v) > PRUNE_EPS})
        state.validate()
        return state

    def validate(self) -> None:
        for key, amp in self.entries.items():
            if key < 0 or key >> self.width:
                raise ValueError(f"basis key {key:#x} outside a {self.width}-qubit register")
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise ValueError("non-finite amplitude")
        if abs(self.norm() - 1.0) > NORM_ATOL:
            raise ValueError(f"state norm {self.norm()} is not 1")

    def norm(self) -> float:
        return math.sqrt(sum((a.real * a.real + a.imag * a.imag) for a in self.entries.values()))

    def amplitude(self, key: int) -> complex:
        return self.entries.get(key, 0.0 + 0.0j)

    def probability(self, key: int) -> float:
        a = self.entries.get(key)
        return 0.0 if a is None else a.real * a.real + a.imag * a.imag

    def probabilities(self) -> dict[int, float]:
        return {k: a.real * a.real + a.imag * a.imag for k, a in self.entries.items()}

    def support(self) -> frozenset[int]:
        return frozenset(self.entries)

    def max_imag(self) -> float:
        return max((abs(a.imag) for a in self.entries.values()), default=0.0)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


# --- gate operations --------------------------------------------------------


@dataclass(frozen=True)
class PauliX:
    target: int


@dataclass(frozen=True)
class Hadamard:
    target: int


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int


@dataclass(frozen=True)
class MultiControlledX:
    controls: tuple[int, ...]
    target: int


@dataclass(frozen=True)
class SP:
    """One-hot splitter: |0..0> on targets becomes sum of one-hots / sqrt(k)."""

    targets: tuple[int, ...]
    scratch: int


class SmallUnitary:
    """Dense unitary on up to six target qubits."""

    __slots__ = ("targets", "matrix")

    def __init__(self, targets: Sequence[int], matrix: np.ndarray):
        targets = tuple(targets)
        matrix = np.asarray(matrix, dtype=complex)
        if len(targets) > 6:
            raise ValueError("SmallUnitary supports at most 6 targets")
        dim = 1 << len(targets)
        if matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {matrix.shape} does not match {len(targets)} targets")
        if not np.allclose(matrix @ matrix.conj().T, np.eye(dim), atol=NORM_ATOL):
            raise ValueError("matrix is not unitary")
        self.targets = targets
        self.matrix = matrix


GateOp = Union[PauliX, Hadamard, Cnot, MultiControlledX, SP, SmallUnitary]


def _gate_targets(gate: GateOp) -> tuple[int, ...]:
    if isinstance(gate, (PauliX, Hadamard)):
        return (gate.target,)
    if isinstance(gate, Cnot):
        return (gate.control, gate.target)
    if isinstance(gate, MultiControlledX):
        return gate.controls + (gate.target,)
    if isinstance(gate, SP):
        return gate.targets + (gate.scratch,)
    if isinstance(gate, SmallUnitary):
        return gate.targets
    raise TypeError(f"unknown gate {gate!r}")


def _check_indices(state: SparseState, gate: GateOp, controls: ControlSpec) -> None:
    touched = _gate_targets(gate)
    if len(set(touched)) != len(touched):
        raise ValueError("gate target indices must be distinct")
    ctrl_qubits = [q for q, _ in controls]
    if len(set(ctrl_qubits)) != len(ctrl_qubits):
        raise ValueError("control qubits must be distinct")
    overlap = set(ctrl_qubits) & set(touched)
    if overlap:
        raise ValueError(f"controls overlap gate targets: {sorted(overlap)}")
    for q in (*touched, *ctrl_qubits):
        if not 0 <= q < state.width:
            raise ValueError(f"qubit {q} outside register of width {state.width}")
    for _, v in controls:
        if v not in (0, 1):
            raise ValueError("control values must be 0 or 1")


def _controls_match(key: int, controls: ControlSpec) -> bool:
    return all(((key >> q) & 1) == v for q, v in controls)


def _accumulate(out: dict[int, complex], key: int, amp: complex) -> None:
    prev = out.get(key)
    out[key] = amp if prev is None else prev + amp


def _prune(out: dict[int, complex]) -> dict[int, complex]:
    return {k: a for k, a in out.items() if abs(a) > PRUNE_EPS}


def apply_gate(state: SparseState, gate: GateOp, controls: ControlSpec = ()) -> SparseState:
    """Apply a (multi-)controlled gate; keys failing the controls pass through."""
    _check_indices(state, gate, controls)
    out: dict[int, complex] = {}
    inv_sqrt2 = 1.0 / math.sqrt(2.0)

    if isinstance(gate, (PauliX, Cnot, MultiControlledX)):
        if isinstance(gate, PauliX):
            extra: tuple[tuple[int, int], ...] = ()
            target = gate.target
        elif isinstance(gate, Cnot):
            extra = ((gate.control, 1),)
            target = gate.target
        else:
            extra = tuple((q, 1) for q in gate.controls)
            target = gate.target
        for key, amp in state.entries.items():
            if _controls_match(key, controls) and _controls_match(key, extra):
                _accumulate(out, key ^ (1 << target), amp)
            else:
                _accumulate(out, key, amp)

    elif isinstance(gate, Hadamard):
        bit = 1 << gate.target
        for key, amp in state.entries.items():
            if not _controls_match(key, controls):
                _accumulate(out, key, amp)
                continue
            lo, hi = key & ~bit, key | bit
            if key & bit:
                _accumulate(out, lo, amp * inv_sqrt2)
                _accumulate(out, hi, -amp * inv_sqrt2)
            else:
                _accumulate(out, lo, amp * inv_sqrt2)
                _accumulate(out, hi, amp * inv_sqrt2)

    elif isinstance(gate, SP):
        k = len(gate.targets)
        if k == 0:
            raise ValueError("SP needs at least one target")
        factor = 1.0 / math.sqrt(k)
        for key, amp in state.entries.items():
            if not _controls_match(key, controls):
                _accumulate(out, key, amp)
                continue
            if any((key >> q) & 1 for q in gate.targets):
                raise ValueError("SP requires all targets in |0> on active branches")
            if (key >> gate.scratch) & 1:
                raise ValueError("SP scratch qubit must be |0>")
            for q in gate.targets:
                _accumulate(out, key | (1 << q), amp * factor)

    elif isinstance(gate, SmallUnitary):
        qs = gate.targets
        groups: dict[int, dict[int, complex]] = {}
        for key, amp in state.entries.items():
            if not _controls_match(key, controls):
                _accumulate(out, key, amp)
                continue
            base = key
            local = 0
            for pos, q in enumerate(qs):
                if (key >> q) & 1:
                    local |= 1 << pos
                    base &= ~(1 << q)
            groups.setdefault(base, {})[local] = amp
        dim = 1 << len(qs)
        for base, locals_ in groups.items():
            vec = np.zeros(dim, dtype=complex)
            for local, amp in locals_.items():
                vec[local] = amp
            vec = gate.matrix @ vec
            for local in range(dim):
                amp = vec[local]
                if amp == 0:
                    continue
                key = base
                for pos, q in enumerate(qs):
                    if (local >> pos) & 1:
                        key |= 1 << q
                _accumulate(out, key, amp)
    else:
        raise TypeError(f"unknown gate {gate!r}")

    return SparseState(state.width, _prune(out))


def apply_sp(state: SparseState, targets: Sequence[int], scratch: int,
             controls: ControlSpec = ()) -> SparseState:
    return apply_gate(state, SP(tuple(targets), scratch), controls)


# --- state preparation ------------------------------------------------------


def prepare_superposition(width: int, basis_set: Sequence[int],
                          backend: str = "inject") -> SparseState:
    """Equal real-positive superposition over a set of basis keys.

    ``inject`` writes the amplitudes directly; ``circuit`` synthesizes the
    state from |0..0> with multi-controlled one-qubit blocks (the standard
    Boolean-characteristic-function construction).  Both agree to 1e-9 and
    tests compare them; production paths use injection for speed.
    """
    keys = list(basis_set)
    if not keys:
        raise ValueError("basis set must be non-empty")
    if len(set(keys)) != len(keys):
        raise ValueError("basis set contains duplicates")
    for k in keys:
        if k < 0 or k >> width:
            raise ValueError(f"key {k:#x} does not fit a {width}-qubit register")
    if backend == "inject":
        amp = 1.0 / math.sqrt(len(keys))
        return SparseState(width, {k: amp + 0.0j for k in keys})
    if backend == "circuit":
        return _synthesize_superposition(width, keys)
    raise ValueError(f"unknown preparation backend {backend!r}")


def _synthesize_superposition(width: int, keys: list[int]) -> SparseState:
    """Walk qubits in order, splitting prefix counts with controlled blocks."""
    state = SparseState.zero(width)
    prefixes: dict[int, list[int]] = {0: keys}
    for q in range(width):
        next_prefixes: dict[int, list[int]] = {}
        for prefix, members in prefixes.items():
            zeros = [k for k in members if not (k >> q) & 1]
            ones = [k for k in members if (k >> q) & 1]
            if zeros:
                next_prefixes[prefix] = zeros
            if ones:
                next_prefixes[prefix | (1 << q)] = ones
            if not ones:
                continue
            controls = tuple((j, (prefix >> j) & 1) for j in range(q))
            if not zeros:
                state = apply_gate(state, PauliX(q), controls)
            else:
                c0 = math.sqrt(len(zeros) / len(members))
                c1 = math.sqrt(len(ones) / len(members))
                block = SmallUnitary((q,), np.array([[c0, -c1], [c1, c0]]))
                state = apply_gate(state, block, controls)
        prefixes = next_prefixes
    return state


# --- measurement and expectation -------------------------------------------


def basis_label(key: int, width: int) -> str:
    """ASCII bit string, character i = qubit i (qubit 0 leftmost)."""
    return "".join("1" if (key >> i) & 1 else "0" for i in range(width))


def measure_histogram(state: SparseState, shots: int, seed: int) -> dict[str, int]:
    """Multinomial sample over |amplitude|^2; bit-identical for equal seeds."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    keys = sorted(state.entries)
    probs = np.array([state.probability(k) for k in keys], dtype=float)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    return {basis_label(k, state.width): int(c) for k, c in zip(keys, counts)}


def histogram_record(state: SparseState, shots: int, seed: int) -> dict:
    return {
        "width": state.width,
        "shots": shots,
        "seed": seed,
        "counts": measure_histogram(state, shots, seed),
    }


def expectation(state: SparseState, diag: Mapping[int, float] | Callable[[int], float]) -> float:
    """Exact <state| D |state> for a diagonal observable (absent keys read 0)."""
    if callable(diag):
        lookup = diag
    else:
        lookup = lambda k: diag.get(k, 0.0)  # noqa: E731
    total = 0.0
    for key, amp in state.entries.items():
        total += (amp.real * amp.real + amp.imag * amp.imag) * lookup(key)
    return total
