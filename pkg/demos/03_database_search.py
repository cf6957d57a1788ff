"""Amplitude-amplified database search, end to end.

The search never touches record values directly: the clause constrains the
data register, the dictionary maps index to record and back around the
oracle, and the diffuser amplifies on the index register alone.  The winner
probability after R rounds follows sin((2R+1) arcsin(sqrt(M/N)))**2 exactly,
which the sweep below reproduces from simulation.

Run with:  python3 demos/03_database_search.py
"""

from gdict import Clause, Database, optimal_rounds, run_search, success_probability

db = Database(("0101000", "1000110", "1010110", "0110101"))

# Exact-match clause: N=4, M=1 sits at the sweet spot where one round
# reaches certainty.
clause = Clause.from_pattern("1010110")
result = run_search(db, clause)
print(f"clause {clause.to_pattern()}: planned R={result.plan.rounds}, "
      f"predicted p={result.plan.predicted_success}")
print(f"  measured distribution over indices: "
      f"{ {k: round(v, 6) for k, v in result.distribution.items()} }")
print(f"  top index {result.top_index} -> record {result.top_record}\n")

# Masked clause: 'x' bits are unconstrained.  Exactly one record ends in 1.
masked = Clause.from_pattern("xxxxxx1")
result = run_search(db, masked)
print(f"clause {masked.to_pattern()}: winner index {result.top_index} "
      f"(record {result.top_record}, p={result.winner_probability:.9f})\n")

# An 8-record space with a single winner needs two rounds and tops out at
# 0.9453125; more rounds overshoot and the probability comes back down.
records = tuple(format(v, "04b") for v in (8, 1, 2, 3, 4, 5, 6, 7))
db8 = Database(records)
clause8 = Clause.from_pattern("1000")
plan = optimal_rounds(8, 1)
print(f"8 records, 1 winner: optimal R={plan.rounds}, "
      f"predicted p={plan.predicted_success}")
print("round sweep, simulated vs analytic:")
for rounds in range(6):
    result = run_search(db8, clause8, rounds=rounds)
    analytic = success_probability(8, 1, rounds)
    print(f"  R={rounds}: simulated {result.winner_probability:.9f}  "
          f"analytic {analytic:.9f}")

print("\nper-iteration gate budget:", result.iteration_gate_counts)
