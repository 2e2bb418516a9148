"""Conversion protocols: entangling circuits, probe readout, recovery iteration.

Each protocol wires a fixed GHZ-class input through a spread stage (CNOTs from
photon 2), wave plates, and a fold stage (CNOTs back onto photons 1 and 2),
then tags the branches with the cross-Kerr probe and reads the tag out.  A
single-L tag yields a W state; the four-photon circuit succeeds on either tag;
the five-photon circuit also emits a two-R/three-L Dicke branch; the all-L
failure branch is recovered and re-enters the tagging suffix.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .cavity import CavityParams
from .cnot import (
    BENCHMARK_G,
    BENCHMARK_GAMMA_TOTAL,
    BENCHMARK_KAPPA,
    cnot_full,
    cnot_ideal,
)
from .kerr import HomodyneModel, apply_cross_kerr, homodyne_measure
from .optics import hwp, qwp
from .qstate import QuantumState, Spin, inner, ket, superpose

PROBE_THETA = 0.1
PROBE_ALPHA = math.sqrt(1.3e4)

_INPUT_TERMS = {3: ("RLR", "LRL"), 4: ("RLRR", "LRLL"), 5: ("RLRRR", "LRLLL")}

# classified tag -> declared outcome; absent tags trigger recovery
_SUCCESS_TAGS = {3: {1: "W"}, 4: {1: "W", 3: "W"}, 5: {1: "W", 3: "Dicke"}}

_MC_CHUNK = 1024


def _default_params() -> CavityParams:
    return CavityParams(g=BENCHMARK_G, kappa=BENCHMARK_KAPPA, gamma=BENCHMARK_GAMMA_TOTAL)


@dataclass(frozen=True)
class ProtocolSpec:
    """Everything one conversion run depends on."""

    n_photons: int
    max_iterations: int = 4
    gate_mode: str = "ideal"          # "ideal" | "realistic"
    homodyne_mode: str = "ideal"      # "ideal" | "gaussian"
    params: CavityParams = field(default_factory=_default_params)
    theta: float = PROBE_THETA
    alpha: float = PROBE_ALPHA
    standardize_flipped: bool = False  # flip the four-photon single-R branch to single-L form

    def __post_init__(self) -> None:
        if self.n_photons not in (3, 4, 5):
            raise ValueError(f"unsupported photon number: {self.n_photons}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.gate_mode not in ("ideal", "realistic"):
            raise ValueError(f"unknown gate mode {self.gate_mode!r}")
        if self.homodyne_mode not in ("ideal", "gaussian"):
            raise ValueError(f"unknown homodyne mode {self.homodyne_mode!r}")


@dataclass(frozen=True)
class ProtocolRun:
    """Record of one conversion attempt."""

    iterations_used: int
    outcome_class: str                # "W" | "Dicke" | "failed_max_iter"
    final_state: QuantumState
    homodyne_tags: tuple[int, ...]    # classified tags, one per iteration
    true_tags: tuple[int, ...]
    misclassification_events: int
    accumulated_norm: float           # survival probability of all gate bounces (1 in ideal mode)


@dataclass(frozen=True)
class SuccessSeries:
    """Closed-form per-round and cumulative success probabilities."""

    n_photons: int
    outcome_class: str
    per_round: tuple[float, ...]
    cumulative: float
    limit: float


@dataclass(frozen=True)
class StateClass:
    """Support-pattern classification of a photons-only state.

    For Dicke support both excitation conventions are reported: the L-count
    of the support terms and its complement, since either polarization may be
    read as the excited mode.
    """

    kind: str                          # "W" | "W_flipped" | "Dicke" | "GHZ_like" | "other"
    n_photons: int
    l_excitations: int | None = None
    r_excitations: int | None = None


def conversion_input(n_photons: int) -> QuantumState:
    """The GHZ-class input state the n-photon circuit is wired for."""
    try:
        a, b = _INPUT_TERMS[n_photons]
    except KeyError:
        raise ValueError(f"unsupported photon number: {n_photons}") from None
    return superpose([(ket(a), 1.0), (ket(b), 1.0)])


def circuit_wiring(n_photons: int) -> tuple[tuple, ...]:
    """Frozen element order of the n-photon conversion circuit.

    The fold-stage control/target assignment is the unique one in this family
    that reproduces the hand-expanded pre-tag states (pinned by tests).
    """
    if n_photons not in (3, 4, 5):
        raise ValueError(f"unsupported photon number: {n_photons}")
    n = n_photons
    spread = tuple(("cnot", 2, t) for t in range(3, n + 1))
    plates = tuple(("hwp", t) for t in range(3, n + 1)) + tuple(("qwp", t) for t in range(3, n + 1))
    fold = {3: (("cnot", 3, 1),), 4: (("cnot", 3, 1), ("cnot", 4, 2)), 5: (("cnot", 3, 1), ("cnot", 4, 2), ("cnot", 5, 1))}[n]
    return spread + plates + fold + (("kerr",), ("homodyne",))


def recovery_sequence(n_photons: int) -> tuple[tuple, ...]:
    """Recovery of the all-L failure branch followed by re-entry into the tagging suffix."""
    if n_photons not in (3, 5):
        raise ValueError("no recovery path")
    wiring = circuit_wiring(n_photons)
    reentry = wiring[wiring.index(("hwp", 3)):]
    return (("hwp", 2), ("qwp", 2), ("cnot", 2, 1)) + reentry


def _run_gates(state, elements, spec, rng, spin_iter):
    """Apply the gate prefix of an element list, stopping at the probe tag.

    Returns the evolved state and the product of pre-readout squared norms of
    the realistic gates (1.0 in ideal mode).
    """
    norm_factor = 1.0
    for el in elements:
        kind = el[0]
        if kind == "cnot":
            _, control, target = el
            if spec.gate_mode == "ideal":
                state = cnot_ideal(state, control, target)
            else:
                forced = next(spin_iter) if spin_iter is not None else None
                out = cnot_full(state, control, target, spec.params, ideal=False, rng=rng, forced_spin=forced)
                state = out.post_state
                norm_factor *= out.pre_measurement_norm
        elif kind == "hwp":
            state = hwp(state, el[1])
        elif kind == "qwp":
            state = qwp(state, el[1])
        elif kind == "kerr":
            break
        else:
            raise ValueError(f"unknown circuit element {el!r}")
    return state, norm_factor


def run_protocol(
    spec: ProtocolSpec,
    rng: np.random.Generator | None = None,
    forced_tags=None,
    forced_spins=None,
) -> ProtocolRun:
    """Execute one conversion attempt with recovery iteration.

    ``forced_tags`` (one per iteration) and ``forced_spins`` (one per
    realistic gate) pin the stochastic choices for branch-by-branch analysis;
    otherwise outcomes are sampled from ``rng``.  Control flow follows the
    classified tag, so a gaussian-mode misclassification steers the protocol
    down the wrong arm while the state keeps the true branch; such events are
    counted on the run record.
    """
    state = conversion_input(spec.n_photons)
    tag_iter = iter(forced_tags) if forced_tags is not None else None
    spin_iter = iter(forced_spins) if forced_spins is not None else None
    tags: list[int] = []
    true_tags: list[int] = []
    misses = 0
    survival = 1.0
    outcome_class = "failed_max_iter"
    success = _SUCCESS_TAGS[spec.n_photons]
    for iteration in range(1, spec.max_iterations + 1):
        elements = circuit_wiring(spec.n_photons) if iteration == 1 else recovery_sequence(spec.n_photons)
        state, norm_factor = _run_gates(state, elements, spec, rng, spin_iter)
        survival *= norm_factor
        partition = apply_cross_kerr(state, spec.theta, spec.alpha)
        model = HomodyneModel.for_tags(spec.alpha, spec.theta, partition.tags())
        forced_tag = next(tag_iter) if tag_iter is not None else None
        outcome = homodyne_measure(partition, model, spec.homodyne_mode, rng=rng, forced_tag=forced_tag)
        tags.append(outcome.tag)
        true_tags.append(outcome.true_tag)
        misses += int(outcome.misclassified)
        state = outcome.state
        declared = success.get(outcome.tag)
        if declared is not None:
            outcome_class = declared
            if spec.n_photons == 4 and outcome.tag == 3 and spec.standardize_flipped:
                for photon in range(1, 5):
                    state = hwp(state, photon)
            break
    return ProtocolRun(len(tags), outcome_class, state, tuple(tags), tuple(true_tags), misses, survival)


def classify_state(state: QuantumState, tol: float = 1e-9) -> StateClass:
    """Classify a photons-only normalized state by its basis support pattern."""
    if state.has_spin:
        raise ValueError("classification expects a photons-only state")
    n = state.n_photons
    amps = state.amplitudes
    support = np.flatnonzero(np.abs(amps) > tol)
    if support.size == 0:
        return StateClass("other", n)
    mags = np.abs(amps[support])
    equal_mags = bool(np.all(np.abs(mags - 1.0 / math.sqrt(support.size)) <= tol))
    l_counts = np.array([bin(int(i)).count("1") for i in support])
    phases_uniform = bool(np.all(np.abs(amps[support] / amps[support[0]] - 1.0) <= tol))
    if equal_mags and np.all(l_counts == l_counts[0]):
        c = int(l_counts[0])
        if support.size == math.comb(n, c):
            if c == 1 and phases_uniform:
                return StateClass("W", n, l_excitations=1, r_excitations=n - 1)
            if c == n - 1 and phases_uniform:
                return StateClass("W_flipped", n, l_excitations=n - 1, r_excitations=1)
            if 2 <= c <= n - 2:
                return StateClass("Dicke", n, l_excitations=c, r_excitations=n - c)
    if support.size == 2 and equal_mags and (int(support[0]) ^ int(support[1])) == state.dim - 1:
        return StateClass("GHZ_like", n)
    return StateClass("other", n)


def success_series(n_photons: int, rounds: int) -> list[SuccessSeries]:
    """Closed-form conversion probabilities per round, with cumulative sums and limits."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if n_photons == 3:
        raw = [("W", [Fraction(3, 4) * Fraction(1, 4) ** (m - 1) for m in range(1, rounds + 1)], Fraction(1))]
    elif n_photons == 4:
        raw = [("W", [Fraction(1)] + [Fraction(0)] * (rounds - 1), Fraction(1))]
    elif n_photons == 5:
        raw = [
            ("W", [Fraction(5, 16) * Fraction(1, 16) ** (m - 1) for m in range(1, rounds + 1)], Fraction(1, 3)),
            ("Dicke", [Fraction(10, 16) * Fraction(1, 16) ** (m - 1) for m in range(1, rounds + 1)], Fraction(2, 3)),
        ]
    else:
        raise ValueError(f"unsupported photon number: {n_photons}")
    return [
        SuccessSeries(n_photons, label, tuple(float(p) for p in per), float(sum(per)), float(lim))
        for label, per, lim in raw
    ]


@dataclass(frozen=True)
class MonteCarloResult:
    """Outcome frequencies of a seeded trial ensemble."""

    trials: int
    counts: dict[tuple[str, int], int]   # (outcome_class, iterations_used) -> count

    def class_counts(self) -> dict[str, int]:
        totals: Counter = Counter()
        for (cls, _), c in self.counts.items():
            totals[cls] += c
        return dict(totals)

    def class_frequency(self, outcome_class: str) -> float:
        return self.class_counts().get(outcome_class, 0) / self.trials


def _ideal_round_weights(spec: ProtocolSpec):
    """Tag weights of round one, checked to be the fixed point of recovery."""
    state, _ = _run_gates(conversion_input(spec.n_photons), circuit_wiring(spec.n_photons), spec, None, None)
    first = apply_cross_kerr(state, spec.theta, spec.alpha)
    weights = first.weights()
    if spec.n_photons != 4:
        retry_tag = max(first.tags())
        retry_state = first.branches[retry_tag].normalized()
        state2, _ = _run_gates(retry_state, recovery_sequence(spec.n_photons), spec, None, None)
        second = apply_cross_kerr(state2, spec.theta, spec.alpha).weights()
        if set(second) != set(weights) or any(abs(second[k] - weights[k]) > 1e-12 for k in weights):
            raise ValueError("recovery does not reproduce the first-round branch weights")
    return weights


def _monte_carlo_chain(spec: ProtocolSpec, trials: int, rng: np.random.Generator) -> MonteCarloResult:
    """Vectorized ideal-mode ensemble over the per-round tag weights."""
    weights = _ideal_round_weights(spec)
    tags = sorted(weights)
    probs = np.array([weights[k] for k in tags])
    probs = probs / probs.sum()
    cutoffs = np.cumsum(probs)
    # outcome code per tag: 0 recover, 1 W, 2 Dicke
    code_of = {"W": 1, "Dicke": 2}
    tag_codes = np.array([code_of.get(_SUCCESS_TAGS[spec.n_photons].get(k), 0) for k in tags])
    outcome = np.zeros(trials, dtype=np.int8)
    iterations = np.full(trials, spec.max_iterations, dtype=np.int64)
    alive = np.arange(trials)
    for round_idx in range(1, spec.max_iterations + 1):
        if alive.size == 0:
            break
        draws = rng.random(alive.size)
        codes = tag_codes[np.searchsorted(cutoffs, draws, side="right")]
        done = codes != 0
        outcome[alive[done]] = codes[done]
        iterations[alive[done]] = round_idx
        alive = alive[~done]
    labels = {0: "failed_max_iter", 1: "W", 2: "Dicke"}
    counts: Counter = Counter()
    for code, iters in zip(outcome, iterations):
        counts[(labels[int(code)], int(iters))] += 1
    return MonteCarloResult(trials, dict(counts))


def _mc_chunk(args) -> dict:
    spec, n, rng = args
    counts: Counter = Counter()
    for _ in range(n):
        run = run_protocol(spec, rng=rng)
        counts[(run.outcome_class, run.iterations_used)] += 1
    return dict(counts)


def _monte_carlo_full(spec: ProtocolSpec, trials: int, rng: np.random.Generator, jobs: int) -> MonteCarloResult:
    sizes = [_MC_CHUNK] * (trials // _MC_CHUNK)
    if trials % _MC_CHUNK:
        sizes.append(trials % _MC_CHUNK)
    streams = rng.spawn(len(sizes))
    work = [(spec, n, stream) for n, stream in zip(sizes, streams)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            partials = list(pool.map(_mc_chunk, work))
    else:
        partials = [_mc_chunk(w) for w in work]
    total: Counter = Counter()
    for p in partials:
        total.update(p)
    return MonteCarloResult(trials, dict(total))


def monte_carlo(
    spec: ProtocolSpec,
    trials: int,
    rng: np.random.Generator,
    jobs: int = 1,
    force_full_simulation: bool = False,
) -> MonteCarloResult:
    """Empirical outcome frequencies over seeded trials.

    Fully ideal ensembles sample the per-round tag weights extracted from one
    symbolic circuit execution (the recovery fixed point is verified first),
    which keeps million-trial ensembles cheap.  Realistic gates or gaussian
    readout force a full per-trial simulation; those trials run on independent
    child streams chunk by chunk, so results do not depend on ``jobs``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not force_full_simulation and spec.gate_mode == "ideal" and spec.homodyne_mode == "ideal":
        return _monte_carlo_chain(spec, trials, rng)
    return _monte_carlo_full(spec, trials, rng, jobs)


@dataclass(frozen=True)
class RealisticTrace:
    """Lockstep comparison of a realistic run against the ideal circuit."""

    run: ProtocolRun
    ideal_run: ProtocolRun
    gate_fidelities: tuple[float, ...]
    protocol_fidelity: float


def realistic_vs_ideal(spec: ProtocolSpec, forced_tags, forced_spins=None) -> RealisticTrace:
    """Run realistic and ideal circuits on the same forced branch schedule.

    Per-gate fidelities compare each realistic gate against the ideal gate on
    the ideal trajectory's input at that point (renormalized overlap, same
    forced spin outcome); the protocol fidelity is the squared overlap of the
    two final states.
    """
    forced_tags = tuple(forced_tags)
    spin_feed = iter(forced_spins) if forced_spins is not None else itertools.repeat(Spin.PLUS)
    spin_trace: list = []

    def recorded_spins():
        for s in spin_feed:
            spin_trace.append(s)
            yield s

    real_spec = replace(spec, gate_mode="realistic", homodyne_mode="ideal")
    run = run_protocol(real_spec, forced_tags=forced_tags, forced_spins=recorded_spins())
    ideal_spec = replace(spec, gate_mode="ideal", homodyne_mode="ideal")
    ideal_run = run_protocol(ideal_spec, forced_tags=forced_tags)

    # walk the ideal trajectory, scoring each realistic gate on its input
    gate_fidelities: list[float] = []
    spin_replay = iter(spin_trace)
    state = conversion_input(spec.n_photons)
    for iteration in range(1, run.iterations_used + 1):
        elements = circuit_wiring(spec.n_photons) if iteration == 1 else recovery_sequence(spec.n_photons)
        for el in elements:
            kind = el[0]
            if kind == "cnot":
                _, control, target = el
                ideal_out = cnot_ideal(state, control, target)
                real_out = cnot_full(
                    state, control, target, spec.params, ideal=False, forced_spin=next(spin_replay)
                ).post_state
                gate_fidelities.append(abs(inner(real_out, ideal_out)) ** 2)
                state = ideal_out
            elif kind == "hwp":
                state = hwp(state, el[1])
            elif kind == "qwp":
                state = qwp(state, el[1])
            elif kind == "kerr":
                partition = apply_cross_kerr(state, spec.theta, spec.alpha)
                state = partition.branches[forced_tags[iteration - 1]].normalized()
                break
    fidelity = abs(inner(run.final_state, ideal_run.final_state)) ** 2
    return RealisticTrace(run, ideal_run, tuple(gate_fidelities), fidelity)


def composite_fidelity_report(gate_fidelity: float = 0.996) -> list[dict]:
    """Products of per-gate fidelities for each conversion scenario.

    Iterated rounds are counted under both re-entry conventions: suffix
    re-entry (recovery gate plus the tagging suffix, what ``run_protocol``
    executes) and full re-entry (recovery gate plus the whole circuit).  Both
    regenerate the same branch structure but differ in gate count, so the
    composite product is quoted for each; the reference fidelities follow the
    full-re-entry count.
    """
    cases = [
        {"label": "three_photon_round1", "suffix_gates": 2, "full_gates": 2, "reference": 0.992},
        {"label": "four_photon", "suffix_gates": 4, "full_gates": 4, "reference": 0.984},
        {"label": "three_photon_rounds4", "suffix_gates": 2 + 3 * 2, "full_gates": 2 + 3 * 3, "reference": 0.957},
        {"label": "five_photon_rounds4", "suffix_gates": 6 + 3 * 4, "full_gates": 6 + 3 * 7, "reference": 0.897},
    ]
    return [
        {
            **case,
            "product_suffix": gate_fidelity ** case["suffix_gates"],
            "product_full": gate_fidelity ** case["full_gates"],
        }
        for case in cases
    ]
