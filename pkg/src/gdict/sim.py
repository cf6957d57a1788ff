"""Dense state-vector simulation of reversible circuits.

Conventions used throughout the package:

* Bit order is LSB-first: bit k of a basis-state integer is the state of
  qubit k.  A register's integer value likewise has bit j on qubit
  ``register.qubits[j]``.
* Supported gate kinds are H, X, Z, SWAP, MCX and MCZ.  Multi-controlled
  gates carry polarity-tagged controls (positive fires on |1>, negative on
  |0>) and are simulated natively as pattern-matched amplitude kernels, not
  decomposed.  All kinds are self-inverse.
* A StateVector is mutated in place by ``apply_gate``/``apply_circuit`` and
  is owned by a single simulation context at a time.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapacityError, ParseError

DEFAULT_MAX_QUBITS = 26
MAX_QUBITS_ENV = "GDICT_MAX_QUBITS"

GATE_KINDS = ("H", "X", "Z", "SWAP", "MCX", "MCZ")


def resolve_max_qubits(explicit: int | None = None) -> int:
    """Qubit cap: explicit argument, else GDICT_MAX_QUBITS, else 26."""
    if explicit is not None:
        return explicit
    env = os.environ.get(MAX_QUBITS_ENV)
    return int(env) if env else DEFAULT_MAX_QUBITS


@dataclass(frozen=True)
class Register:
    """Named, ordered group of qubits; qubits[0] is the LSB of its value."""

    name: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"register {self.name!r} repeats a qubit")

    def __len__(self) -> int:
        return len(self.qubits)

    def value_of(self, basis_index: int) -> int:
        """Extract this register's integer value from a basis-state index."""
        v = 0
        for j, q in enumerate(self.qubits):
            v |= ((basis_index >> q) & 1) << j
        return v

    def place_value(self, value: int) -> int:
        """Basis-state bits holding ``value`` on this register, 0 elsewhere."""
        if not 0 <= value < (1 << len(self.qubits)):
            raise ValueError(f"value {value} does not fit register {self.name!r}")
        b = 0
        for j, q in enumerate(self.qubits):
            b |= ((value >> j) & 1) << q
        return b


def pack_registers(assignments: dict[Register, int]) -> int:
    """Combine per-register values into one basis-state index."""
    b = 0
    for reg, val in assignments.items():
        b |= reg.place_value(val)
    return b


@dataclass(frozen=True)
class Gate:
    """One reversible gate.

    ``controls`` is a tuple of (qubit, polarity) pairs where polarity True
    means the control fires on |1> and False on |0>.  MCZ has no target;
    its control pattern alone selects the amplitudes to negate.
    """

    kind: str
    targets: tuple[int, ...] = ()
    controls: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        nt, nc = len(self.targets), len(self.controls)
        if self.kind in ("H", "X", "Z") and (nt != 1 or nc != 0):
            raise ValueError(f"{self.kind} takes exactly one target and no controls")
        if self.kind == "SWAP" and (nt != 2 or nc != 0):
            raise ValueError("SWAP takes exactly two targets")
        if self.kind == "MCX" and nt != 1:
            raise ValueError("MCX takes exactly one target")
        if self.kind == "MCZ" and (nt != 0 or nc == 0):
            raise ValueError("MCZ takes control qubits only, at least one")
        ctrl_qubits = [q for q, _ in self.controls]
        if len(set(ctrl_qubits)) != nc or len(set(self.targets)) != nt:
            raise ValueError("gate repeats a qubit")
        if set(ctrl_qubits) & set(self.targets):
            raise ValueError("control and target sets overlap")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.controls) + self.targets

    def inverse(self) -> "Gate":
        return self  # every supported kind is self-inverse


# Short constructors mirroring circuit-diagram vocabulary.
def H(q: int) -> Gate:
    return Gate("H", (q,))


def X(q: int) -> Gate:
    return Gate("X", (q,))


def Z(q: int) -> Gate:
    return Gate("Z", (q,))


def SWAP(a: int, b: int) -> Gate:
    return Gate("SWAP", (a, b))


def MCX(controls, target: int) -> Gate:
    return Gate("MCX", (target,), tuple((q, bool(p)) for q, p in controls))


def MCZ(controls) -> Gate:
    return Gate("MCZ", (), tuple((q, bool(p)) for q, p in controls))


def CNOT(control: int, target: int) -> Gate:
    return MCX([(control, True)], target)


def CCX(c1: int, c2: int, target: int) -> Gate:
    return MCX([(c1, True), (c2, True)], target)


@dataclass
class Circuit:
    """Ordered gate list over ``num_qubits`` qubits plus a register map."""

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    registers: dict[str, Register] = field(default_factory=dict)

    def __post_init__(self):
        seen: set[int] = set()
        for reg in self.registers.values():
            overlap = seen & set(reg.qubits)
            if overlap:
                raise ValueError(f"registers share qubits {sorted(overlap)}")
            seen |= set(reg.qubits)

    def add(self, *gates: Gate) -> "Circuit":
        self.gates.extend(gates)
        return self

    def extend(self, gates) -> "Circuit":
        self.gates.extend(gates)
        return self

    def add_register(self, reg: Register) -> Register:
        if reg.name in self.registers:
            raise ValueError(f"duplicate register {reg.name!r}")
        for other in self.registers.values():
            if set(other.qubits) & set(reg.qubits):
                raise ValueError(f"register {reg.name!r} overlaps {other.name!r}")
        self.registers[reg.name] = reg
        return reg


def inverse(circuit: Circuit) -> Circuit:
    """Reverse the gate list; every supported gate is self-inverse."""
    return Circuit(
        circuit.num_qubits,
        [g.inverse() for g in reversed(circuit.gates)],
        dict(circuit.registers),
    )


class StateVector:
    """2**num_qubits complex amplitudes, unit L2 norm."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes: np.ndarray):
        self.num_qubits = num_qubits
        self.amplitudes = amplitudes

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def new_state(
    num_qubits: int,
    basis_value: int = 0,
    *,
    dtype=np.complex128,
    max_qubits: int | None = None,
) -> StateVector:
    """Computational basis state |basis_value> on ``num_qubits`` qubits."""
    cap = resolve_max_qubits(max_qubits)
    if num_qubits < 1:
        raise ValueError("need at least one qubit")
    if num_qubits > cap:
        raise CapacityError(f"{num_qubits} qubits exceeds cap of {cap}")
    if not 0 <= basis_value < (1 << num_qubits):
        raise ValueError(f"basis value {basis_value} out of range for {num_qubits} qubits")
    amps = np.zeros(1 << num_qubits, dtype=dtype)
    amps[basis_value] = 1.0
    return StateVector(num_qubits, amps)


def _check_qubits(gate: Gate, num_qubits: int) -> None:
    for q in gate.qubits:
        if not 0 <= q < num_qubits:
            raise ValueError(f"qubit {q} out of range for {num_qubits}-qubit state")


# Amplitude kernels.  The hot path compiles with numba when available: a
# fixed-bit index expansion enumerates exactly the amplitudes a gate touches
# (2**(q - fixed) of them), which keeps multi-controlled gates cheap on large
# states.  A pure-numpy fallback implements the same arithmetic on strided
# views; both paths write each amplitude exactly once, so results are
# bit-identical and independent of any internal scheduling.

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def _njit(**kwargs):
        def wrap(fn):
            return fn

        return wrap

USE_NUMBA = HAVE_NUMBA


@_njit(cache=True)
def _expand(j, positions, values):
    # Scatter the free bits of j around the fixed positions (ascending order),
    # filling each fixed position with its required bit.
    i = j
    for k in range(positions.shape[0]):
        p = positions[k]
        low = i & ((1 << p) - 1)
        i = ((i >> p) << (p + 1)) | (values[k] << p) | low
    return i


@_njit(cache=True)
def _kern_flip(amps, positions, values, tbit, n_free):
    # MCX / X: swap amplitude pairs where the control pattern matches.
    for j in range(1 << n_free):
        i0 = _expand(j, positions, values)
        i1 = i0 | tbit
        amps[i0], amps[i1] = amps[i1], amps[i0]


@_njit(cache=True)
def _kern_negate(amps, positions, values, n_free):
    # MCZ / Z: negate amplitudes where the control pattern matches.
    for j in range(1 << n_free):
        i = _expand(j, positions, values)
        amps[i] = -amps[i]


@_njit(cache=True)
def _kern_hadamard(amps, positions, values, tbit, n_free, scale):
    for j in range(1 << n_free):
        i0 = _expand(j, positions, values)
        i1 = i0 | tbit
        a0 = amps[i0]
        a1 = amps[i1]
        amps[i0] = (a0 + a1) * scale
        amps[i1] = (a0 - a1) * scale


@_njit(cache=True)
def _kern_swap(amps, positions, values, abit, bbit, n_free):
    # Fixed pattern a=0, b=1; partner index has the two bits exchanged.
    for j in range(1 << n_free):
        i = _expand(j, positions, values)
        k = i ^ abit ^ bbit
        amps[i], amps[k] = amps[k], amps[i]


def _fixed_bits(entries) -> tuple[np.ndarray, np.ndarray]:
    entries = sorted(entries)
    positions = np.array([p for p, _ in entries], dtype=np.int64)
    values = np.array([v for _, v in entries], dtype=np.int64)
    return positions, values


@lru_cache(maxsize=8192)
def _gate_plan(gate: Gate):
    # Per-gate kernel arguments; gates repeat across iterations and
    # exhaustive sweeps, so this is worth caching.
    kind = gate.kind
    if kind in ("MCX", "X"):
        fixed = [(c, 1 if pos else 0) for c, pos in gate.controls]
        t = gate.targets[0]
        fixed.append((t, 0))
        positions, values = _fixed_bits(fixed)
        return ("flip", positions, values, 1 << t)
    if kind in ("MCZ", "Z"):
        if kind == "Z":
            fixed = [(gate.targets[0], 1)]
        else:
            fixed = [(c, 1 if pos else 0) for c, pos in gate.controls]
        positions, values = _fixed_bits(fixed)
        return ("negate", positions, values, 0)
    if kind == "H":
        t = gate.targets[0]
        positions, values = _fixed_bits([(t, 0)])
        return ("hadamard", positions, values, 1 << t)
    a, b = gate.targets  # SWAP
    positions, values = _fixed_bits([(a, 0), (b, 1)])
    return ("swap", positions, values, (1 << a) | (1 << b))


def _apply_gate_fast(state: StateVector, gate: Gate) -> None:
    amps, q = state.amplitudes, state.num_qubits
    op, positions, values, bits = _gate_plan(gate)
    n_free = q - positions.shape[0]
    if op == "flip":
        _kern_flip(amps, positions, values, bits, n_free)
    elif op == "negate":
        _kern_negate(amps, positions, values, n_free)
    elif op == "hadamard":
        _kern_hadamard(amps, positions, values, bits, n_free, amps.dtype.type(2 ** -0.5))
    else:
        a, b = gate.targets
        _kern_swap(amps, positions, values, 1 << a, 1 << b, n_free)


def _axis_view(amps: np.ndarray, qubit: int) -> np.ndarray:
    # Shape (high, 2, low) where axis 1 is the chosen qubit's bit.
    return amps.reshape(-1, 2, 1 << qubit)


def _pattern_selector(num_qubits: int, controls) -> list:
    sel: list = [slice(None)] * num_qubits
    for q, positive in controls:
        sel[num_qubits - 1 - q] = 1 if positive else 0
    return sel


def _apply_gate_numpy(state: StateVector, gate: Gate) -> None:
    amps, q = state.amplitudes, state.num_qubits
    kind = gate.kind
    if kind == "H":
        v = _axis_view(amps, gate.targets[0])
        s = amps.dtype.type(2 ** -0.5)
        a0 = v[:, 0, :].copy()
        v[:, 0, :] = (a0 + v[:, 1, :]) * s
        v[:, 1, :] = (a0 - v[:, 1, :]) * s
    elif kind == "X":
        v = _axis_view(amps, gate.targets[0])
        a0 = v[:, 0, :].copy()
        v[:, 0, :] = v[:, 1, :]
        v[:, 1, :] = a0
    elif kind == "Z":
        v = _axis_view(amps, gate.targets[0])
        v[:, 1, :] *= -1
    elif kind == "SWAP":
        a, b = gate.targets
        view = amps.reshape((2,) * q)
        s01: list = [slice(None)] * q
        s10: list = [slice(None)] * q
        s01[q - 1 - a], s01[q - 1 - b] = 0, 1
        s10[q - 1 - a], s10[q - 1 - b] = 1, 0
        tmp = view[tuple(s01)].copy()
        view[tuple(s01)] = view[tuple(s10)]
        view[tuple(s10)] = tmp
    elif kind == "MCX":
        view = amps.reshape((2,) * q)
        sel = _pattern_selector(q, gate.controls)
        t = q - 1 - gate.targets[0]
        s0, s1 = list(sel), list(sel)
        s0[t], s1[t] = 0, 1
        tmp = view[tuple(s0)].copy()
        view[tuple(s0)] = view[tuple(s1)]
        view[tuple(s1)] = tmp
    else:  # MCZ
        view = amps.reshape((2,) * q)
        sel = _pattern_selector(q, gate.controls)
        view[tuple(sel)] *= -1


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate in place and return the state."""
    _check_qubits(gate, state.num_qubits)
    if USE_NUMBA:
        _apply_gate_fast(state, gate)
    else:
        _apply_gate_numpy(state, gate)
    return state


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    """Apply all gates in order; requires circuit fits inside the state."""
    if circuit.num_qubits > state.num_qubits:
        raise ValueError(
            f"circuit needs {circuit.num_qubits} qubits, state has {state.num_qubits}"
        )
    for gate in circuit.gates:
        apply_gate(state, gate)
    return state


def marginal_distribution(state: StateVector, register: Register) -> dict[int, float]:
    """Probability of each register value, summed over the other qubits."""
    q = state.num_qubits
    _check_register(register, q)
    probs = state.probabilities().reshape((2,) * q)
    axes_keep = [q - 1 - qb for qb in register.qubits]
    drop = tuple(a for a in range(q) if a not in set(axes_keep))
    if drop:
        probs = probs.sum(axis=drop)
    remaining = sorted(axes_keep)
    pos = {a: i for i, a in enumerate(remaining)}
    r = len(register.qubits)
    perm = [pos[axes_keep[j]] for j in reversed(range(r))]
    flat = probs.transpose(perm).reshape(-1)
    return {v: float(flat[v]) for v in range(1 << r)}


def _check_register(register: Register, num_qubits: int) -> None:
    for qb in register.qubits:
        if not 0 <= qb < num_qubits:
            raise ValueError(f"register qubit {qb} out of range")


def sample(state: StateVector, register: Register, shots: int, seed: int) -> dict[int, int]:
    """Multinomial measurement counts over a register, reproducible by seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    dist = marginal_distribution(state, register)
    values = sorted(dist)
    pvals = np.array([dist[v] for v in values], dtype=np.float64)
    pvals /= pvals.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, pvals)
    return {v: int(c) for v, c in zip(values, counts) if c > 0}


def gate_count(circuit: Circuit, decompose: bool = False) -> dict[str, int]:
    """Native gate counts; with ``decompose``, adds a ``toffoli_equiv`` entry
    estimating each MCX/MCZ with c controls as max(1, 2c - 3) two-controlled
    gates (standard Toffoli-ladder figure; reported only, never simulated)."""
    counts = Counter(g.kind for g in circuit.gates)
    out = {k: counts[k] for k in GATE_KINDS if counts[k]}
    if decompose:
        equiv = 0
        for g in circuit.gates:
            if g.kind in ("MCX", "MCZ"):
                equiv += max(1, 2 * len(g.controls) - 3)
        out["toffoli_equiv"] = equiv
    return out


# Circuit text format: one gate per line, REG header lines, '#' comments.
#   REG data q2,q3,q4
#   H q3 | X q0 | Z q2 | SWAP q1 q4 | MCX [+q0,-q1] q5 | MCZ [+q0,-q3]

def _controls_to_text(controls) -> str:
    return "[" + ",".join(f"{'+' if p else '-'}q{q}" for q, p in controls) + "]"


def gate_to_text(gate: Gate) -> str:
    if gate.kind in ("H", "X", "Z"):
        return f"{gate.kind} q{gate.targets[0]}"
    if gate.kind == "SWAP":
        return f"SWAP q{gate.targets[0]} q{gate.targets[1]}"
    if gate.kind == "MCX":
        return f"MCX {_controls_to_text(gate.controls)} q{gate.targets[0]}"
    return f"MCZ {_controls_to_text(gate.controls)}"


def circuit_to_text(circuit: Circuit) -> str:
    lines = [
        f"REG {reg.name} " + ",".join(f"q{q}" for q in reg.qubits)
        for reg in circuit.registers.values()
    ]
    lines.extend(gate_to_text(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def _parse_qubit(token: str, line: int) -> int:
    if not token.startswith("q") or not token[1:].isdigit():
        raise ParseError(f"expected qubit like 'q3', got {token!r}", line)
    return int(token[1:])


def _parse_controls(token: str, line: int):
    if not (token.startswith("[") and token.endswith("]")):
        raise ParseError(f"expected control list like '[+q0,-q1]', got {token!r}", line)
    body = token[1:-1]
    if not body:
        return ()
    controls = []
    for part in body.split(","):
        if len(part) < 2 or part[0] not in "+-":
            raise ParseError(f"bad control {part!r}", line)
        controls.append((_parse_qubit(part[1:], line), part[0] == "+"))
    return tuple(controls)


def circuit_from_text(text: str) -> Circuit:
    """Parse the circuit text format; inverse of ``circuit_to_text``."""
    gates: list[Gate] = []
    registers: dict[str, Register] = {}
    max_q = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        op = tokens[0]
        try:
            if op == "REG":
                if len(tokens) != 3:
                    raise ParseError("REG takes a name and a qubit list", lineno)
                name = tokens[1]
                qubits = tuple(_parse_qubit(t, lineno) for t in tokens[2].split(","))
                if name in registers:
                    raise ParseError(f"duplicate register {name!r}", lineno)
                registers[name] = Register(name, qubits)
            elif op in ("H", "X", "Z"):
                if len(tokens) != 2:
                    raise ParseError(f"{op} takes one qubit", lineno)
                gates.append(Gate(op, (_parse_qubit(tokens[1], lineno),)))
            elif op == "SWAP":
                if len(tokens) != 3:
                    raise ParseError("SWAP takes two qubits", lineno)
                gates.append(
                    Gate("SWAP", (_parse_qubit(tokens[1], lineno), _parse_qubit(tokens[2], lineno)))
                )
            elif op == "MCX":
                if len(tokens) != 3:
                    raise ParseError("MCX takes a control list and a target", lineno)
                gates.append(
                    Gate("MCX", (_parse_qubit(tokens[2], lineno),), _parse_controls(tokens[1], lineno))
                )
            elif op == "MCZ":
                if len(tokens) != 2:
                    raise ParseError("MCZ takes a control list", lineno)
                gates.append(Gate("MCZ", (), _parse_controls(tokens[1], lineno)))
            else:
                raise ParseError(f"unknown directive {op!r}", lineno)
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
        if gates:
            max_q = max(max_q, max(gates[-1].qubits, default=-1))
    for reg in registers.values():
        max_q = max(max_q, max(reg.qubits))
    if max_q < 0:
        raise ParseError("circuit text contains no gates or registers")
    return Circuit(max_q + 1, gates, registers)


def save_circuit(circuit: Circuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(circuit_to_text(circuit))


def load_circuit(path) -> Circuit:
    with open(path, "r", encoding="utf-8") as fh:
        return circuit_from_text(fh.read())
