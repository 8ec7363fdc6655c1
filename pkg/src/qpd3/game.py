"""The three-player quantum Prisoner's Dilemma pipeline.

Game model
----------
The arbiter prepares the three-qubit state

    |psi_in> = cos(gamma/2) |000> + i sin(gamma/2) |111>,     0 <= gamma <= pi/2,

sends one qubit to each player through the correlated dephasing channel
(:func:`qpd3.channel.correlated_triple`), the players apply local unitaries

    U(theta, alpha, beta) = [[ e^{i alpha} cos(theta/2),  i e^{i beta}  sin(theta/2)],
                             [ i e^{-i beta} sin(theta/2), e^{-i alpha} cos(theta/2)]],

the qubits return through a second channel passage, and the arbiter measures
in the entangled basis

    |chi_lmn> = cos(delta/2) |lmn> + i sin(delta/2) |l'm'n'>,   0 <= delta <= pi/2,

where l'm'n' is the bitwise complement of lmn.  The relative phase is +i on
every basis state; this uniform convention makes the eight states an
orthonormal, complete set for every delta (verified at construction) and is
the convention under which the closed-form payoff expression below holds.
Payoffs are $_k = sum_lmn table[lmn][k] * Tr(P_lmn rho_final).

Move encoding: qubit value 0 is Cooperate, 1 is Defect; tensor slots are
(Alice, Bob, Charlie) left to right, matching the payoff-table outcome labels.

Closed form
-----------
:func:`closed_form_payoffs` evaluates, term by term, a direct trigonometric
expression for the payoffs whose phase-damping enters only through the
per-passage coherence factor :func:`mu_p_factor`.  The expression is exact at
gamma = delta = pi/2 but its two interference blocks (the ones proportional
to cos(delta) and cos(gamma)) are transcribed from a source with known
defects, so the evaluator is a diagnostic: it always reports its discrepancy
against the density-matrix pipeline, which is authoritative.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelParams, KrausSet, correlated_triple, kraus_sum
from .linalg import (
    DEFAULT_ATOL,
    InvariantViolation,
    check_density_matrix,
    frozen,
    kron_all,
    max_abs,
)

#: Name of the measurement-basis phase convention in use (see module docstring).
BASIS_READING = "uniform-plus-i"

#: Outcome labels in index order: bit 0 is Cooperate, bit 1 is Defect.
OUTCOMES = ("000", "001", "010", "011", "100", "101", "110", "111")

#: Classical payoff table: outcome -> (Alice, Bob, Charlie).
DEFAULT_TABLE = {
    "000": (3.0, 3.0, 3.0),
    "001": (2.0, 2.0, 5.0),
    "010": (2.0, 5.0, 2.0),
    "011": (0.0, 4.0, 4.0),
    "100": (5.0, 2.0, 2.0),
    "101": (4.0, 0.0, 4.0),
    "110": (4.0, 4.0, 0.0),
    "111": (1.0, 1.0, 1.0),
}

PLAYER_NAMES = ("alice", "bob", "charlie")


@dataclass(frozen=True)
class StrategyParams:
    """One player's move: theta in [0, pi], alpha and beta in [-pi, pi]."""

    theta: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.theta) and 0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must be in [0, pi], got {self.theta}")
        for name, val in (("alpha", self.alpha), ("beta", self.beta)):
            if not (np.isfinite(val) and -math.pi <= val <= math.pi):
                raise ValueError(f"{name} must be in [-pi, pi], got {val}")


#: The two classical moves as strategy parameters.
COOPERATE = StrategyParams(0.0, 0.0, 0.0)
DEFECT = StrategyParams(math.pi, 0.0, 0.0)


@dataclass(frozen=True)
class PayoffTable:
    """Payoff triples (Alice, Bob, Charlie) for the eight classical outcomes."""

    entries: dict = field(default_factory=lambda: dict(DEFAULT_TABLE))

    def __post_init__(self):
        missing = [k for k in OUTCOMES if k not in self.entries]
        if missing:
            raise ValueError(f"payoff table is missing outcomes: {missing}")
        extra = [k for k in self.entries if k not in OUTCOMES]
        if extra:
            raise ValueError(f"payoff table has unknown outcomes: {extra}")
        clean = {}
        for k in OUTCOMES:
            v = tuple(float(x) for x in self.entries[k])
            if len(v) != 3 or not all(np.isfinite(v)):
                raise ValueError(f"payoff entry for {k} must be 3 finite numbers, got {self.entries[k]}")
            clean[k] = v
        object.__setattr__(self, "entries", clean)

    def payoff(self, outcome: str) -> tuple[float, float, float]:
        if outcome not in self.entries:
            raise ValueError(f"unknown outcome label {outcome!r}")
        return self.entries[outcome]

    def as_array(self) -> np.ndarray:
        """(8, 3) array in outcome-index order."""
        return np.array([self.entries[k] for k in OUTCOMES])

    @classmethod
    def from_json(cls, path) -> "PayoffTable":
        """Load a table from a JSON object mapping outcome labels to triples."""
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("payoff table file must contain a JSON object")
        return cls(entries=data)


@dataclass(frozen=True)
class GameConfig:
    """A full game instance.

    ``passage1`` is the channel from the arbiter to the players, ``passage2``
    the channel back.  By convention sweeps set both passages equal unless
    told otherwise; the config keeps them independent.
    """

    gamma: float
    delta: float
    passage1: ChannelParams
    passage2: ChannelParams
    strategies: tuple[StrategyParams, StrategyParams, StrategyParams]
    payoffs: PayoffTable = field(default_factory=PayoffTable)

    def __post_init__(self):
        for name, val in (("gamma", self.gamma), ("delta", self.delta)):
            if not (np.isfinite(val) and 0.0 <= val <= math.pi / 2):
                raise ValueError(f"{name} must be in [0, pi/2], got {val}")
        strategies = tuple(self.strategies)
        if len(strategies) != 3 or not all(isinstance(s, StrategyParams) for s in strategies):
            raise ValueError("strategies must be a triple of StrategyParams")
        object.__setattr__(self, "strategies", strategies)

    def with_strategies(self, strategies) -> "GameConfig":
        return GameConfig(
            self.gamma, self.delta, self.passage1, self.passage2,
            tuple(strategies), self.payoffs,
        )

    def with_noise(self, params: ChannelParams) -> "GameConfig":
        """Both passages set to the same parameters."""
        return GameConfig(
            self.gamma, self.delta, params, params, self.strategies, self.payoffs,
        )


def initial_state(gamma: float) -> np.ndarray:
    """Density matrix of cos(gamma/2)|000> + i sin(gamma/2)|111>."""
    if not (np.isfinite(gamma) and 0.0 <= gamma <= math.pi / 2):
        raise ValueError(f"gamma must be in [0, pi/2], got {gamma}")
    psi = np.zeros(8, dtype=complex)
    psi[0] = math.cos(gamma / 2)
    psi[7] = 1j * math.sin(gamma / 2)
    return np.outer(psi, psi.conj())


def strategy_unitary(s: StrategyParams) -> np.ndarray:
    """The 2x2 unitary for one player's (theta, alpha, beta)."""
    ct = math.cos(s.theta / 2)
    st = math.sin(s.theta / 2)
    return np.array(
        [
            [np.exp(1j * s.alpha) * ct, 1j * np.exp(1j * s.beta) * st],
            [1j * np.exp(-1j * s.beta) * st, np.exp(-1j * s.alpha) * ct],
        ]
    )


@functools.lru_cache(maxsize=128)
def _projectors_cached(delta: float) -> tuple[np.ndarray, ...]:
    c = math.cos(delta / 2)
    s = math.sin(delta / 2)
    projectors = []
    vectors = []
    for m in range(8):
        v = np.zeros(8, dtype=complex)
        v[m] = c
        v[7 - m] = 1j * s
        vectors.append(v)
        projectors.append(frozen(np.outer(v, v.conj())))
    # Construction-time soundness: the eight states must form an orthonormal,
    # complete set for the payoff decomposition to be meaningful.
    total = sum(projectors)
    if max_abs(total - np.eye(8)) > DEFAULT_ATOL:
        raise InvariantViolation("measurement projectors do not sum to identity")
    for a in range(8):
        for b in range(a + 1, 8):
            if abs(np.vdot(vectors[a], vectors[b])) > DEFAULT_ATOL:
                raise InvariantViolation(
                    f"measurement states {OUTCOMES[a]} and {OUTCOMES[b]} are not orthogonal"
                )
    return tuple(projectors)


def measurement_projectors(delta: float) -> tuple[np.ndarray, ...]:
    """Eight rank-1 projectors onto the entangled measurement basis.

    Ordered 000..111; each |chi_lmn> pairs |lmn> with its bitwise complement
    at relative phase +i (the ``uniform-plus-i`` convention).  Completeness
    and pairwise orthogonality are checked at construction.  The returned
    arrays are read-only and shared between calls.
    """
    if not (np.isfinite(delta) and 0.0 <= delta <= math.pi / 2):
        raise ValueError(f"delta must be in [0, pi/2], got {delta}")
    return _projectors_cached(float(delta))


@functools.lru_cache(maxsize=256)
def _channel_cached(params: ChannelParams) -> KrausSet:
    return correlated_triple(params)


class PreparedGame:
    """A game with everything but the strategies precomputed.

    Used by parameter sweeps and strategy searches, which evaluate many
    strategy profiles against fixed (gamma, delta, noise) settings.  The
    evaluation is the same Kraus-operator arithmetic as the public pipeline;
    only redundant re-validation of already-validated components is skipped.
    """

    def __init__(self, cfg: GameConfig):
        self.cfg = cfg
        ks1 = _channel_cached(cfg.passage1)
        self.ks2 = _channel_cached(cfg.passage2)
        self.rho1 = kraus_sum(ks1, initial_state(cfg.gamma))
        self.projectors = measurement_projectors(cfg.delta)
        self.table = cfg.payoffs.as_array()

    def final_state(self, strategies) -> np.ndarray:
        u = kron_all(*(strategy_unitary(s) for s in strategies))
        rho2 = u @ self.rho1 @ u.conj().T
        return kraus_sum(self.ks2, rho2)

    def probabilities_of(self, rho3: np.ndarray) -> np.ndarray:
        return np.array([np.trace(p @ rho3).real for p in self.projectors])

    def outcome_probabilities(self, strategies) -> np.ndarray:
        return self.probabilities_of(self.final_state(strategies))

    def payoffs(self, strategies) -> tuple[float, float, float]:
        probs = self.outcome_probabilities(strategies)
        pay = probs @ self.table
        return (float(pay[0]), float(pay[1]), float(pay[2]))


def final_state(cfg: GameConfig, tol: float = DEFAULT_ATOL) -> np.ndarray:
    """State after channel -> strategies -> channel, validated at each stage."""
    check_density_matrix(initial_state(cfg.gamma), tol)
    prepared = PreparedGame(cfg)
    check_density_matrix(prepared.rho1, tol)
    return check_density_matrix(prepared.final_state(cfg.strategies), tol)


def outcome_probabilities(cfg: GameConfig, tol: float = DEFAULT_ATOL) -> np.ndarray:
    """Probabilities of the eight measurement outcomes, in label order."""
    prepared = PreparedGame(cfg)
    check_density_matrix(prepared.rho1, tol)
    rho3 = check_density_matrix(prepared.final_state(cfg.strategies), tol)
    probs = prepared.probabilities_of(rho3)
    total = probs.sum()
    if abs(total - 1.0) > max(tol, 1e-10):
        raise InvariantViolation(f"outcome probabilities sum to {total}, not 1")
    return probs


def pipeline_payoffs(cfg: GameConfig) -> tuple[float, float, float]:
    """Expected payoffs (Alice, Bob, Charlie) from the density-matrix pipeline."""
    probs = outcome_probabilities(cfg)
    pay = probs @ cfg.payoffs.as_array()
    return (float(pay[0]), float(pay[1]), float(pay[2]))


def classical_payoff(profile, table: PayoffTable | None = None) -> tuple[float, float, float]:
    """Table lookup for a pure-move profile, e.g. ("C", "D", "C")."""
    table = table if table is not None else PayoffTable()
    bits = []
    for move in profile:
        m = str(move).upper()
        if m not in ("C", "D"):
            raise ValueError(f"moves must be 'C' or 'D', got {move!r}")
        bits.append("0" if m == "C" else "1")
    if len(bits) != 3:
        raise ValueError(f"profile must have exactly 3 moves, got {len(bits)}")
    return table.payoff("".join(bits))


def mu_p_factor(params: ChannelParams) -> float:
    """Coherence survival factor of one channel passage.

    Literal polynomial
        (1 - p)(1 - 2p + 4 mu p - 2 mu^2 p + p^2 - 2 mu p^2 + mu^2 p^2);
    equals the factor by which one passage damps the <000|rho|111> coherence.
    Limits: 1 at p=0, (1-p)^3 at mu=0, (1-p) at mu=1.
    """
    p, mu = params.p, params.mu
    return (1.0 - p) * (
        1.0 - 2.0 * p + 4.0 * mu * p - 2.0 * mu**2 * p
        + p**2 - 2.0 * mu * p**2 + mu**2 * p**2
    )


@dataclass(frozen=True)
class ClosedFormTerms:
    """The scalar factors entering the closed-form payoff expression."""

    mu_p1: float
    mu_p2: float
    eta1: float
    eta2: float
    xi: float
    c: tuple[float, float, float]
    s: tuple[float, float, float]


@dataclass(frozen=True)
class ClosedFormResult:
    """Closed-form payoffs plus their discrepancy against the pipeline."""

    payoffs: tuple[float, float, float]
    pipeline: tuple[float, float, float]
    per_player_discrepancy: tuple[float, float, float]
    max_abs_discrepancy: float
    terms: ClosedFormTerms
    basis_reading: str = BASIS_READING

    def as_dict(self) -> dict:
        return {
            "payoffs": list(self.payoffs),
            "pipeline_payoffs": list(self.pipeline),
            "per_player_discrepancy": list(self.per_player_discrepancy),
            "max_abs_discrepancy": self.max_abs_discrepancy,
            "basis_reading": self.basis_reading,
            "terms": {
                "mu_p1": self.terms.mu_p1,
                "mu_p2": self.terms.mu_p2,
                "eta1": self.terms.eta1,
                "eta2": self.terms.eta2,
                "xi": self.terms.xi,
                "c": list(self.terms.c),
                "s": list(self.terms.s),
            },
        }


def closed_form_terms(cfg: GameConfig) -> ClosedFormTerms:
    g, d = cfg.gamma, cfg.delta
    thetas = [s.theta for s in cfg.strategies]
    return ClosedFormTerms(
        mu_p1=mu_p_factor(cfg.passage1),
        mu_p2=mu_p_factor(cfg.passage2),
        eta1=math.cos(g / 2) ** 2 * math.cos(d / 2) ** 2
        + math.sin(g / 2) ** 2 * math.sin(d / 2) ** 2,
        eta2=math.sin(g / 2) ** 2 * math.cos(d / 2) ** 2
        + math.sin(d / 2) ** 2 * math.cos(g / 2) ** 2,
        xi=0.5 * math.sin(d) * math.sin(g),
        c=tuple(math.cos(t / 2) ** 2 for t in thetas),
        s=tuple(math.sin(t / 2) ** 2 for t in thetas),
    )


def closed_form_payoffs(cfg: GameConfig) -> ClosedFormResult:
    """Evaluate the closed-form payoff expression and compare to the pipeline.

    The expression is transcribed term by term from its source, including two
    interference blocks (proportional to cos(delta) and cos(gamma)) that are
    known to be garbled there: the second block repeats a sin(theta_2) factor
    where sin(theta_3) is plausibly intended.  Agreement with the pipeline is
    therefore expected only where those blocks vanish (gamma = delta = pi/2)
    and at the analytic anchor configurations; elsewhere the discrepancy is
    reported, never asserted away.
    """
    terms = closed_form_terms(cfg)
    (t1, a1, b1), (t2, a2, b2), (t3, a3, b3) = (
        (s.theta, s.alpha, s.beta) for s in cfg.strategies
    )
    c1, c2, c3 = terms.c
    s1, s2, s3 = terms.s
    e1, e2, xi = terms.eta1, terms.eta2, terms.xi
    mm = terms.mu_p1 * terms.mu_p2
    cos = math.cos
    sin = math.sin

    payoffs = []
    for k in range(3):
        pk = {label: cfg.payoffs.payoff(label)[k] for label in OUTCOMES}
        v = c1 * c2 * c3 * (
            e1 * pk["000"] + e2 * pk["111"]
            + (pk["000"] - pk["111"]) * mm * xi * cos(2 * (a1 + a2 + a3))
        )
        v += s1 * s2 * s3 * (
            e2 * pk["000"] + e1 * pk["111"]
            - (pk["000"] - pk["111"]) * mm * xi * cos(2 * (b1 + b2 + b3))
        )
        v += c1 * c2 * s3 * (
            e1 * pk["001"] + e2 * pk["110"]
            + (pk["001"] - pk["110"]) * mm * xi * cos(2 * (a1 + a2 - b3))
        )
        v += s1 * s2 * c3 * (
            e2 * pk["001"] + e1 * pk["110"]
            - (pk["001"] - pk["110"]) * mm * xi * cos(2 * (b1 + b2 - a3))
        )
        v += s1 * c2 * c3 * (
            e1 * pk["100"] + e2 * pk["011"]
            + (pk["100"] - pk["011"]) * mm * xi * cos(2 * (a2 + a3 - b1))
        )
        v += c1 * s2 * s3 * (
            e2 * pk["100"] + e1 * pk["011"]
            - (pk["100"] - pk["011"]) * mm * xi * cos(2 * (b2 + b3 - a1))
        )
        v += s1 * c2 * s3 * (
            e1 * pk["101"] + e2 * pk["010"]
            + (pk["101"] - pk["010"]) * mm * xi * cos(2 * (b1 + b3 - a2))
        )
        v += c1 * s2 * c3 * (
            e2 * pk["101"] + e1 * pk["010"]
            - (pk["101"] - pk["010"]) * mm * xi * cos(2 * (a1 + a3 - b2))
        )
        # First interference block, weight mu_p1/8 * cos(delta).
        v += (
            (terms.mu_p1 / 8.0)
            * (cos(cfg.delta / 2) ** 2 - sin(cfg.delta / 2) ** 2)
            * (
                pk["000"] - pk["111"] - pk["001"] + pk["110"]
                - pk["010"] + pk["101"] + pk["011"] - pk["100"]
            )
            * sin(cfg.gamma) * sin(t1) * sin(t2) * sin(t3)
            * cos(a1 + a2 + a3 - b1 - b2 - b3)
        )
        # Second interference block, weight mu_p2/8 * cos(gamma); the repeated
        # sin(t2) factor is transcribed as found.
        block = (pk["000"] - pk["111"]) * sin(cfg.delta) * sin(t1) * sin(t2) * sin(t2) * cos(
            a1 + a2 + a3 - b1 - b2 - b3
        )
        block += (pk["110"] - pk["001"]) * sin(cfg.delta) * sin(t1) * sin(t2) * sin(t2) * cos(
            a1 + a2 - a3 + b1 + b2 - b3
        )
        block += (pk["010"] - pk["101"]) * sin(cfg.delta) * sin(t1) * sin(t2) * sin(t2) * cos(
            a1 - a2 + a3 + b1 - b2 + b3
        )
        block += (pk["100"] - pk["011"]) * sin(cfg.delta) * sin(t1) * sin(t2) * sin(t2) * cos(
            a1 - a2 - a3 + b1 - b2 - b3
        )
        v += block * (terms.mu_p2 / 8.0) * (
            cos(cfg.gamma / 2) ** 2 - sin(cfg.gamma / 2) ** 2
        )
        payoffs.append(v)

    pipeline = pipeline_payoffs(cfg)
    diffs = tuple(abs(a - b) for a, b in zip(payoffs, pipeline))
    return ClosedFormResult(
        payoffs=tuple(payoffs),
        pipeline=pipeline,
        per_player_discrepancy=diffs,
        max_abs_discrepancy=max(diffs),
        terms=terms,
    )
