"""The referee/player protocol: sample label pairs from a distribution Pi,
collect +/-1 answers from a strategy, pay -w[s,t]*a*b/Pi(s,t), and estimate
the average payoff.

Honest players answer by measuring their shared state; the built-in cheating
strategy answers from shared classical randomness instead and reproduces the
maximally entangled state's diagonal correlations.  Runs are reproducible:
a (config, strategy, weights, seed) tuple always yields the same transcript,
on either compute backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, NamedTuple

import numpy as np

from . import backends, qcore
from .witness import PauliWeights

PI_SUM_TOL = 1e-12
RECORD_LIMIT = 100_000

# Joint outcomes are indexed 0..2^n-1; party j's answer is the j-th bit from
# the left, with bit 0 meaning +1 and bit 1 meaning -1.


def decode_answers(outcome: int, n_parties: int) -> tuple[int, ...]:
    return tuple(1 - 2 * ((outcome >> (n_parties - 1 - j)) & 1) for j in range(n_parties))


def encode_answers(answers) -> int:
    k = 0
    for a in answers:
        k = (k << 1) | (0 if a == 1 else 1)
    return k


def outcome_parity(n_parties: int) -> np.ndarray:
    """Product of all answers for each joint outcome index."""
    return np.array(
        [int(np.prod(decode_answers(k, n_parties))) for k in range(2 ** n_parties)],
        dtype=np.int64,
    )


@dataclass(frozen=True, eq=False)
class GameConfig:
    """Label distribution, round count and RNG seed for one game run."""

    pi: np.ndarray
    rounds: int
    seed: int

    def __post_init__(self):
        p = np.asarray(self.pi, dtype=np.float64)
        n = p.ndim
        if p.shape != (4,) * n or n not in (2, 3):
            raise ValueError(f"pi must have shape (4, 4) or (4, 4, 4), got {p.shape}")
        if np.any(p < 0):
            raise ValueError("pi entries must be nonnegative")
        if abs(p.sum() - 1.0) > PI_SUM_TOL:
            raise ValueError(f"pi must sum to 1, got {p.sum():.15g}")
        if self.rounds < 1:
            raise ValueError("rounds must be positive")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "pi", p)

    @property
    def n_parties(self) -> int:
        return self.pi.ndim

    @classmethod
    def uniform(cls, rounds: int, seed: int, n_parties: int = 2) -> "GameConfig":
        cells = 4 ** n_parties
        return cls(np.full((4,) * n_parties, 1.0 / cells), rounds, seed)

    @classmethod
    def support_only(cls, weights: PauliWeights, rounds: int, seed: int) -> "GameConfig":
        """Uniform distribution restricted to cells with nonzero weight;
        lowers the payoff estimator's variance without biasing it."""
        mask = weights.table != 0.0
        return cls(mask / mask.sum(), rounds, seed)

    def validate_against(self, weights: PauliWeights) -> None:
        if self.pi.shape != weights.table.shape:
            raise ValueError("pi and weights must have matching shapes")
        bad = (weights.table != 0.0) & (self.pi == 0.0)
        if np.any(bad):
            cells = [tuple(ix) for ix in np.argwhere(bad)]
            raise ValueError(f"pi is zero on cells with nonzero weight: {cells}")


class RoundRecord(NamedTuple):
    s: int
    t: int
    a: int
    b: int
    payoff: float


@dataclass(frozen=True, eq=False)
class Strategy:
    """How the players answer: a responder mapping labels (plus an RNG) to
    +/-1 answers, and, for the built-ins, the exact joint outcome
    distribution per label cell that drives the fast sampling path."""

    name: str
    responder: Callable
    outcome_table: np.ndarray | None = None

    @property
    def n_parties(self) -> int:
        if self.outcome_table is None:
            raise ValueError(f"strategy {self.name!r} has no outcome table")
        return self.outcome_table.ndim - 1


@dataclass(frozen=True, eq=False)
class Transcript:
    """Per-cell moments of one game run, plus the raw rounds when retained.

    counts, parity_sums (sum of answer products) and the payoff first/second
    moments are indexed by the raveled label cell.  records is None when the
    run streamed (rounds above the retention limit).
    """

    n_parties: int
    counts: np.ndarray
    parity_sums: np.ndarray
    payoff_sums: np.ndarray
    payoff_sq_sums: np.ndarray
    rounds: int
    seed: int
    labels: np.ndarray | None = None
    answers: np.ndarray | None = None
    payoffs: np.ndarray | None = None

    @property
    def has_records(self) -> bool:
        return self.labels is not None

    def round_records(self):
        """Iterate rounds as RoundRecord tuples (two-party transcripts)."""
        if not self.has_records:
            raise ValueError("transcript was streamed; per-round records were discarded")
        if self.n_parties != 2:
            raise ValueError("RoundRecord view is for two-party games")
        for (s, t), (a, b), p in zip(self.labels, self.answers, self.payoffs):
            yield RoundRecord(int(s), int(t), int(a), int(b), float(p))

    def to_csv(self, path) -> None:
        """Write one row per round; columns s,t,a,b,payoff (plus c for three
        parties, with labels i,j,k)."""
        if not self.has_records:
            raise ValueError("transcript was streamed; per-round records were discarded")
        label_cols = ["s", "t"] if self.n_parties == 2 else ["i", "j", "k"]
        answer_cols = ["a", "b", "c"][: self.n_parties]
        with open(path, "w", newline="") as fh:
            fh.write(",".join(label_cols + answer_cols + ["payoff"]) + "\n")
            for lab, ans, pay in zip(self.labels, self.answers, self.payoffs):
                cells = [str(int(x)) for x in lab] + [str(int(x)) for x in ans]
                fh.write(",".join(cells + [f"{pay:.17g}"]) + "\n")


def empirical_payoff(tr: Transcript) -> tuple[float, float]:
    """Sample mean payoff and its standard error."""
    n = tr.rounds
    if n < 2:
        raise ValueError("need at least two rounds for a standard error")
    mean = tr.payoff_sums.sum() / n
    var = max(0.0, (tr.payoff_sq_sums.sum() - n * mean * mean)) / (n - 1)
    return float(mean), float(np.sqrt(var / n))


# ---------------------------------------------------------------------------
# Measurement statistics and built-in strategies
# ---------------------------------------------------------------------------

def _projectors(label: int) -> tuple[np.ndarray, np.ndarray]:
    # Label 0 measures the identity: the answer is +1 with certainty.
    if label == 0:
        return np.eye(2, dtype=np.complex128), np.zeros((2, 2), dtype=np.complex128)
    eye = np.eye(2)
    return (eye + qcore.PAULIS[label]) / 2.0, (eye - qcore.PAULIS[label]) / 2.0


def outcome_distribution(rho: qcore.DensityMatrix, s: int, t: int) -> np.ndarray:
    """Born-rule probabilities of the four joint answers (+1,+1), (+1,-1),
    (-1,+1), (-1,-1) when the parties measure labels s and t."""
    if rho.n_qubits != 2:
        raise ValueError("outcome_distribution takes a two-qubit state")
    if s not in (0, 1, 2, 3) or t not in (0, 1, 2, 3):
        raise ValueError(f"labels must be in 0..3, got ({s}, {t})")
    table = outcome_table(rho)
    return table[s, t].copy()


def outcome_table(rho: qcore.DensityMatrix) -> np.ndarray:
    """Joint answer distribution for every label cell, shape (4,)*n + (2^n,)."""
    n = rho.n_qubits
    if n not in (2, 3):
        raise ValueError("games are defined for two or three qubits")
    projs = [_projectors(l) for l in range(4)]
    n_out = 2 ** n
    table = np.empty((4,) * n + (n_out,), dtype=np.float64)
    for labels in product(range(4), repeat=n):
        for k in range(n_out):
            answers = decode_answers(k, n)
            op = projs[labels[0]][(1 - answers[0]) // 2]
            for lab, ans in zip(labels[1:], answers[1:]):
                op = np.kron(op, projs[lab][(1 - ans) // 2])
            val = np.trace(rho.matrix @ op)
            table[labels + (k,)] = val.real
    if np.min(table) < -1e-10:
        raise ValueError(f"negative outcome probability {np.min(table):.3e}")
    sums = table.sum(axis=-1)
    if np.max(np.abs(sums - 1.0)) > 1e-10:
        raise ValueError("outcome probabilities do not sum to 1")
    return table


def _table_cdfs(table: np.ndarray) -> np.ndarray:
    flat = np.clip(table.reshape(-1, table.shape[-1]), 0.0, None)
    flat = flat / flat.sum(axis=1, keepdims=True)
    cdf = np.cumsum(flat, axis=1)
    cdf[:, -1] = 1.0
    return cdf


def _sample_from_row(cdf_row: np.ndarray, rng: np.random.Generator) -> int:
    return int(min(np.searchsorted(cdf_row, rng.random(), side="right"),
                   len(cdf_row) - 1))


def honest_strategy(rho: qcore.DensityMatrix) -> Strategy:
    """Players measure the Pauli operators named by their labels on a shared
    copy of rho and report the outcomes."""
    table = outcome_table(rho)
    n = rho.n_qubits
    cdfs = _table_cdfs(table).reshape((4,) * n + (2 ** n,))

    def responder(*args):
        *labels, rng = args
        k = _sample_from_row(cdfs[tuple(labels)], rng)
        return decode_answers(k, n)

    return Strategy(name="honest", responder=responder, outcome_table=table)


def cheat_outcome_table() -> np.ndarray:
    """Exact joint answer distribution of the classical cheat, enumerated
    over its eight equally likely shared bit patterns."""
    table = np.zeros((4, 4, 4), dtype=np.float64)
    for b1, b2, b3 in product((1, -1), repeat=3):
        alice = (1, b1, b2, b3)
        bob = (1, b1, -b2, b3)
        for s in range(4):
            for t in range(4):
                table[s, t, encode_answers((alice[s], bob[t]))] += 1.0 / 8.0
    return table


def classical_cheat_strategy() -> Strategy:
    """Answer from three fresh shared random bits per round: both parties use
    bit 1 for label 1 and bit 3 for label 3, while on label 2 Bob flips
    bit 2.  This reproduces the (+1, -1, +1) diagonal correlations of the
    maximally entangled state without any shared entanglement."""

    def responder(s, t, rng):
        bits = 1 - 2 * rng.integers(0, 2, size=3)
        alice = (1, int(bits[0]), int(bits[1]), int(bits[2]))
        bob = (1, int(bits[0]), -int(bits[1]), int(bits[2]))
        return alice[s], bob[t]

    return Strategy(name="cheat", responder=responder, outcome_table=cheat_outcome_table())


# ---------------------------------------------------------------------------
# Running games
# ---------------------------------------------------------------------------

def payoff_table(config: GameConfig, weights: PauliWeights) -> np.ndarray:
    """Per-cell, per-outcome payment -w[cell] * parity(outcome) / pi[cell]."""
    n = config.n_parties
    parity = outcome_parity(n)
    pi = config.pi.ravel()
    w = weights.table.ravel()
    out = np.zeros((pi.size, parity.size), dtype=np.float64)
    live = pi > 0.0
    out[live] = -w[live, None] * parity[None, :] / pi[live, None]
    return out


def _play_rounds(config: GameConfig, strategy: Strategy, rounds: int,
                 rng: np.random.Generator, pays: np.ndarray, parity: np.ndarray,
                 label_cdf: np.ndarray):
    """Core loop: returns (cells, outcomes, counts, parity_sums, payoff sums,
    payoff square sums) for `rounds` rounds driven by `rng`."""
    if strategy.outcome_table is not None:
        if strategy.outcome_table.shape[:-1] != config.pi.shape:
            raise ValueError("strategy outcome table does not match pi's shape")
        out_cdf = _table_cdfs(strategy.outcome_table)
        u = rng.random((rounds, 2))
        return backends.sample_rounds(u, label_cdf, out_cdf, pays, parity)

    cells = np.empty(rounds, dtype=np.int64)
    outcomes = np.empty(rounds, dtype=np.int64)
    counts = np.zeros(pays.shape[0], dtype=np.int64)
    parity_sums = np.zeros(pays.shape[0], dtype=np.int64)
    pay_sums = np.zeros(pays.shape[0], dtype=np.float64)
    pay_sqs = np.zeros(pays.shape[0], dtype=np.float64)
    for r in range(rounds):
        c = int(min(np.searchsorted(label_cdf, rng.random(), side="right"),
                    label_cdf.size - 1))
        labels = np.unravel_index(c, config.pi.shape)
        answers = strategy.responder(*labels, rng)
        if any(a not in (1, -1) for a in answers):
            raise ValueError(f"strategy {strategy.name!r} returned non +/-1 answers")
        k = encode_answers(answers)
        pay = pays[c, k]
        cells[r] = c
        outcomes[r] = k
        counts[c] += 1
        parity_sums[c] += parity[k]
        pay_sums[c] += pay
        pay_sqs[c] += pay * pay
    return cells, outcomes, counts, parity_sums, pay_sums, pay_sqs


def run_game(config: GameConfig, strategy: Strategy, weights: PauliWeights,
             keep_records: bool | None = None, workers: int = 1) -> Transcript:
    """Play all rounds and return the transcript.

    Strategies with an exact outcome table go through the compiled sampling
    kernel; other strategies are queried round by round through their
    responder.  keep_records defaults to rounds <= 100000; past that the
    transcript retains only per-cell moments.

    With workers > 1 the rounds are split across independent RNG streams
    seeded by (seed, worker index) and the per-cell moments are merged in
    worker order; per-round records are not retained in that mode.  The
    single-worker run is the bit-reproducibility reference.
    """
    n = config.n_parties
    if weights.n_qubits != n:
        raise ValueError("weights and config have different party counts")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    config.validate_against(weights)

    parity = outcome_parity(n)
    pays = payoff_table(config, weights)
    label_cdf = np.cumsum(config.pi.ravel())
    label_cdf[-1] = 1.0

    if workers > 1:
        counts = np.zeros(pays.shape[0], dtype=np.int64)
        parity_sums = np.zeros(pays.shape[0], dtype=np.int64)
        pay_sums = np.zeros(pays.shape[0], dtype=np.float64)
        pay_sqs = np.zeros(pays.shape[0], dtype=np.float64)
        base = config.rounds // workers
        for w in range(workers):
            share = base + (1 if w < config.rounds % workers else 0)
            if share == 0:
                continue
            rng = np.random.default_rng([config.seed, w])
            _, _, c, p, ps, pq = _play_rounds(config, strategy, share, rng,
                                              pays, parity, label_cdf)
            counts += c
            parity_sums += p
            pay_sums += ps
            pay_sqs += pq
        return Transcript(n_parties=n, counts=counts, parity_sums=parity_sums,
                          payoff_sums=pay_sums, payoff_sq_sums=pay_sqs,
                          rounds=config.rounds, seed=config.seed)

    if keep_records is None:
        keep_records = config.rounds <= RECORD_LIMIT
    rng = np.random.default_rng(config.seed)
    cells, outcomes, counts, parity_sums, pay_sums, pay_sqs = _play_rounds(
        config, strategy, config.rounds, rng, pays, parity, label_cdf)

    labels = answers_arr = payoffs = None
    if keep_records:
        labels = np.stack(np.unravel_index(cells, config.pi.shape), axis=1).astype(np.int8)
        answers_arr = np.array(
            [decode_answers(k, n) for k in range(2 ** n)], dtype=np.int8)[outcomes]
        payoffs = pays[cells, outcomes]
    return Transcript(
        n_parties=n, counts=counts, parity_sums=parity_sums,
        payoff_sums=pay_sums, payoff_sq_sums=pay_sqs,
        rounds=config.rounds, seed=config.seed,
        labels=labels, answers=answers_arr, payoffs=payoffs,
    )


def exact_average_payoff(pi: np.ndarray, outcome_table: np.ndarray,
                         weights: PauliWeights) -> float:
    """Enumerate sum over cells and outcomes of Pi * V * payment.

    This is the exact expectation of the per-round payment for any strategy
    described by its outcome table; for honest play it reproduces
    -Tr(rho W) through the importance weighting by 1/Pi.
    """
    pi = np.asarray(pi, dtype=np.float64)
    n = pi.ndim
    parity = outcome_parity(n)
    flat_pi = pi.ravel()
    flat_v = outcome_table.reshape(flat_pi.size, parity.size)
    flat_w = weights.table.ravel()
    total = 0.0
    for c in range(flat_pi.size):
        if flat_pi[c] == 0.0:
            continue
        pays = -flat_w[c] * parity / flat_pi[c]
        total += flat_pi[c] * float(flat_v[c] @ pays)
    return total


# ---------------------------------------------------------------------------
# CHSH expectation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChshReport:
    """CHSH combination value with the classical (2) and strengthened
    (sqrt(2), valid for the x/z setting) bound checks."""

    value: float
    violates_classical: bool
    violates_strengthened: bool


def chsh_value(rho: qcore.DensityMatrix, a, a2, b, b2) -> ChshReport:
    """Expectation of A(x)B + A'(x)B + A(x)B' - A'(x)B' on rho."""
    obs = [qcore.validate_spin_observable(o, n) for o, n in
           ((a, "A"), (a2, "A'"), (b, "B"), (b2, "B'"))]
    a, a2, b, b2 = obs
    bell = np.kron(a, b) + np.kron(a2, b) + np.kron(a, b2) - np.kron(a2, b2)
    val = np.trace(rho.matrix @ bell)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"CHSH value has imaginary residue {val.imag:.3e}")
    s = float(val.real)
    return ChshReport(
        value=s,
        violates_classical=bool(abs(s) > 2.0),
        violates_strengthened=bool(abs(s) > np.sqrt(2.0)),
    )
