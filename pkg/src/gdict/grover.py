"""Grover search over dictionary-encoded databases.

One search iteration applies the dictionary mapping, phases the data-register
states satisfying the clause, unmaps (disentangling the data register), and
reflects the index register about the uniform superposition.  The winner
count is known classically (synthesis reads every record anyway), so the
round count and success probability follow in closed form:

    theta0 = arcsin(sqrt(M / N))
    p(R)   = sin((2R + 1) * theta0) ** 2

All contracts here are stated on probabilities or relative phases; the
diffuser realization carries a global phase of -1, which is unobservable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dictionary import Database, build_dictionary, pad_database
from .errors import NoWinnerError
from .sim import (
    Circuit,
    H,
    MCX,
    MCZ,
    Register,
    StateVector,
    X,
    apply_circuit,
    gate_count,
    inverse,
    marginal_distribution,
    new_state,
)

PHASE_FLIP = "phase_flip"
ANCILLA_KICKBACK = "ancilla_kickback"
ORACLE_MODES = (PHASE_FLIP, ANCILLA_KICKBACK)


@dataclass(frozen=True)
class Clause:
    """Mask-match predicate: record r satisfies it iff r & mask == target & mask."""

    num_bits: int
    target_value: int
    mask: int

    def __post_init__(self):
        full = (1 << self.num_bits) - 1
        if self.mask & ~full or self.target_value & ~full:
            raise ValueError("clause bits exceed record width")

    def matches(self, record_value: int) -> bool:
        return (record_value & self.mask) == (self.target_value & self.mask)

    @classmethod
    def from_pattern(cls, pattern: str) -> "Clause":
        """Pattern over {0,1,x}, leftmost char = most significant bit;
        'x' leaves a bit unconstrained."""
        n = len(pattern)
        if n == 0:
            raise ValueError("empty clause pattern")
        value = mask = 0
        for pos, ch in enumerate(pattern):
            bit = 1 << (n - 1 - pos)
            if ch == "x":
                continue
            if ch not in "01":
                raise ValueError(f"clause characters must be 0, 1 or x, got {ch!r}")
            mask |= bit
            if ch == "1":
                value |= bit
        return cls(n, value, mask)

    def to_pattern(self) -> str:
        chars = []
        for pos in range(self.num_bits):
            bit = 1 << (self.num_bits - 1 - pos)
            if not self.mask & bit:
                chars.append("x")
            else:
                chars.append("1" if self.target_value & bit else "0")
        return "".join(chars)


@dataclass(frozen=True)
class GroverPlan:
    search_space_size: int
    winner_count: int
    theta0: float
    rounds: int
    predicted_success: float


def success_probability(N: int, M: int, R: int) -> float:
    """Winner probability after R iterations: sin((2R+1) arcsin(sqrt(M/N)))**2."""
    if not 1 <= M <= N:
        raise ValueError(f"need 1 <= M <= N, got M={M}, N={N}")
    if R < 0:
        raise ValueError("round count must be >= 0")
    theta0 = math.asin(math.sqrt(M / N))
    return math.sin((2 * R + 1) * theta0) ** 2


def optimal_rounds(N: int, M: int) -> GroverPlan:
    """Nearest integer R solving (2R + 1) * theta0 = pi / 2, floored at 0."""
    if not 1 <= M <= N:
        raise ValueError(f"need 1 <= M <= N, got M={M}, N={N}")
    theta0 = math.asin(math.sqrt(M / N))
    exact = (math.pi / (2 * theta0) - 1) / 2
    rounds = max(0, math.floor(exact + 0.5))
    return GroverPlan(N, M, theta0, rounds, success_probability(N, M, rounds))


def hadamard_transform(register: Register) -> Circuit:
    """One H per register qubit; |0> becomes the uniform superposition."""
    top = max(register.qubits)
    circuit = Circuit(top + 1, [H(q) for q in register.qubits])
    circuit.add_register(register)
    return circuit


def phase_oracle(clause: Clause, data_register: Register, mode: str = PHASE_FLIP,
                 ancilla: int | None = None) -> Circuit:
    """Multiply clause-satisfying basis states by -1.

    phase_flip emits one MCZ whose control pattern follows the clause;
    ancilla_kickback emits the same pattern as an MCX onto a qubit the
    caller has prepared in the |-> state.  Both leave non-matching
    amplitudes untouched.
    """
    if clause.mask == 0:
        raise ValueError("clause constrains no bits; oracle would phase everything")
    if len(data_register.qubits) < clause.num_bits:
        raise ValueError("data register narrower than the clause")
    if mode not in ORACLE_MODES:
        raise ValueError(f"unknown oracle mode {mode!r}")
    controls = [
        (data_register.qubits[k], bool(clause.target_value >> k & 1))
        for k in range(clause.num_bits)
        if clause.mask >> k & 1
    ]
    if mode == PHASE_FLIP:
        gates = [MCZ(controls)]
        top = max(q for q, _ in controls)
    else:
        if ancilla is None:
            raise ValueError("ancilla_kickback mode needs an ancilla qubit")
        gates = [MCX(controls, ancilla)]
        top = max(ancilla, max(q for q, _ in controls))
    circuit = Circuit(top + 1, gates)
    return circuit


def diffuser(register: Register) -> Circuit:
    """Reflection about the uniform superposition, up to a global -1.

    Realized as H on every qubit, one MCZ firing on the all-zero pattern
    (negative controls throughout), then H again: the middle gate is
    I - 2|0..0><0..0|, so the sandwich is I - 2|S><S|.  This stays correct
    for any register width, including a single qubit.
    """
    hs = [H(q) for q in register.qubits]
    mcz = MCZ([(q, False) for q in register.qubits])
    circuit = Circuit(max(register.qubits) + 1, hs + [mcz] + list(hs))
    return circuit


@dataclass
class SearchResult:
    distribution: dict[int, float]
    top_index: int
    top_record: str
    plan: GroverPlan
    gate_counts: dict[str, int]
    iteration_gate_counts: dict[str, int]
    winner_indices: tuple[int, ...]
    winner_probability: float
    executed_rounds: int
    circuit: Circuit


def clause_winners(database: Database, clause: Clause) -> list[int]:
    """Indices of (padded) records satisfying the clause."""
    return [i for i, r in enumerate(database.records) if clause.matches(int(r, 2))]


def run_search(
    database: Database,
    clause: Clause,
    rounds: int | None = None,
    oracle_mode: str = PHASE_FLIP,
    *,
    override_winner_count: int | None = None,
    dtype=np.complex128,
    max_qubits: int | None = None,
) -> SearchResult:
    """Plan and simulate a full dictionary search.

    The winner count for planning comes from a classical scan of the padded
    records (``override_winner_count`` replaces it for experiments; the
    executed circuit is unaffected).  The index register ends up measured as
    a marginal distribution; the data register is checked to have returned
    to |0> so the diffuser acted on an unentangled index register every
    round.
    """
    if clause.num_bits != database.n:
        raise ValueError(
            f"clause width {clause.num_bits} != record width {database.n}"
        )
    padded = pad_database(database)
    winners = clause_winners(padded, clause)
    if not winners:
        raise NoWinnerError(f"no record satisfies clause {clause.to_pattern()!r}")

    m, n = padded.m, padded.n
    planned_m = len(winners) if override_winner_count is None else override_winner_count
    plan = optimal_rounds(1 << m, planned_m)
    executed = plan.rounds if rounds is None else rounds
    if executed < 0:
        raise ValueError("round count must be >= 0")

    kickback = oracle_mode == ANCILLA_KICKBACK
    num_qubits = m + n + (1 if kickback else 0)

    dictionary = build_dictionary(padded)
    index_reg = dictionary.index
    data_reg = dictionary.data

    full = Circuit(num_qubits)
    full.add_register(index_reg)
    full.add_register(data_reg)
    ancilla = None
    if kickback:
        ancilla = m + n
        full.add_register(Register("ancilla", (ancilla,)))

    full.extend(H(q) for q in index_reg.qubits)
    iteration = Circuit(num_qubits)
    if executed > 0:
        oracle = phase_oracle(clause, data_reg, oracle_mode, ancilla)
        undo = inverse(dictionary.circuit)
        diff = diffuser(index_reg)
        iteration.extend(dictionary.circuit.gates)
        iteration.extend(oracle.gates)
        iteration.extend(undo.gates)
        iteration.extend(diff.gates)
        if kickback:
            full.add(X(ancilla), H(ancilla))  # prepare |->
        for _ in range(executed):
            full.extend(iteration.gates)
        if kickback:
            full.add(H(ancilla), X(ancilla))  # park the ancilla back at |0>

    state = new_state(num_qubits, 0, dtype=dtype, max_qubits=max_qubits)
    apply_circuit(state, full)

    data_dist = marginal_distribution(state, data_reg)
    residual = 1.0 - data_dist[0]
    tol = 1e-9 if state.amplitudes.dtype == np.complex128 else 1e-4
    if residual > tol:
        raise RuntimeError(f"data register failed to disentangle (residual {residual:.3e})")

    distribution = marginal_distribution(state, index_reg)
    top_index = max(distribution, key=lambda v: (distribution[v], -v))
    return SearchResult(
        distribution=distribution,
        top_index=top_index,
        top_record=padded.records[top_index],
        plan=plan,
        gate_counts=gate_count(full),
        iteration_gate_counts=gate_count(iteration),
        winner_indices=tuple(winners),
        winner_probability=float(sum(distribution[i] for i in winners)),
        executed_rounds=executed,
        circuit=full,
    )
