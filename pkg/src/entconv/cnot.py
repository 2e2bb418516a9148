"""Measurement-assisted two-photon CNOT built from two resonator bounces.

The target photon bounces first, sandwiched between quarter-wave plates that
turn the conditional pi phase into a spin-controlled polarization flip; the
control photon bounces second, sandwiched between spin Hadamards that copy
its polarization onto the spin.  Reading the spin out and applying a
feed-forward X on the target for the minus outcome leaves a deterministic
flip of the target wherever the control photon is L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cavity import CavityParams, spin_photon_map
from .optics import HWP, hwp, qwp, spin_hadamard
from .qstate import (
    QuantumState,
    Spin,
    apply_controlled,
    attach_spin,
    discard_spin,
    inner,
    ket,
    measure_spin,
    superpose,
)

SPIN_READY = np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)

# reference parameter set for the fidelity report, in GHz; the emitter decay
# rate comes in two readings (total vs zero-phonon-line emission)
BENCHMARK_G = 0.3
BENCHMARK_KAPPA = 26.0
BENCHMARK_GAMMA_TOTAL = 0.013
BENCHMARK_GAMMA_ZPL = 0.0004
TARGET_FIDELITY = {"plus": 0.996, "minus": 0.995}


@dataclass(frozen=True)
class CnotOutcome:
    """One gate execution: spin readout, feed-forward applied, photons kept."""

    spin_result: Spin
    correction: str              # "identity" or "x_target"
    post_state: QuantumState     # photons only, renormalized
    success_probability: float   # pre-collapse weight of the measured spin branch
    pre_measurement_norm: float  # squared norm before spin readout; 1 for unitary maps


@dataclass(frozen=True)
class GateFidelityPoint:
    """One sweep row: gate fidelity at a resonant coupling-ratio pair."""

    g_over_kappa: float
    g_over_gamma: float
    outcome: Spin
    fidelity: float


def cnot_ideal(state: QuantumState, control: int, target: int) -> QuantumState:
    """Flip the target polarization on branches where the control photon is L."""
    return apply_controlled(state, control, target, HWP)


def cnot_full(
    state: QuantumState,
    control: int,
    target: int,
    params: CavityParams,
    ideal: bool = True,
    rng: np.random.Generator | None = None,
    forced_spin: Spin | int | None = None,
) -> CnotOutcome:
    """Run the bounce-measure-correct sequence for one CNOT.

    The register may arrive photons-only (a fresh spin ancilla in
    (|+> + |->)/sqrt2 is attached) or with the spin already prepared.  The
    element order below is frozen: it is the unique arrangement of this
    family whose two readout branches match the direct controlled-flip gate
    after feed-forward (pinned by the regression tests).
    """
    if control == target:
        raise ValueError("control and target must differ")
    work = state if state.has_spin else attach_spin(state, SPIN_READY)
    bounce = spin_photon_map(params, ideal)
    work = qwp(work, target)
    work = bounce.apply(work, target)
    work = qwp(work, target)
    work = spin_hadamard(work)
    work = bounce.apply(work, control)
    work = spin_hadamard(work)
    pre_norm = work.norm2()
    record, collapsed = measure_spin(work, rng=rng, forced=forced_spin)
    photons = discard_spin(collapsed)
    if record.outcome == "minus":
        photons = hwp(photons, target)
        correction = "x_target"
        spin_result = Spin.MINUS
    else:
        correction = "identity"
        spin_result = Spin.PLUS
    return CnotOutcome(spin_result, correction, photons, record.probability, pre_norm)


def cnot_fidelity(params: CavityParams, input_state: QuantumState, outcome: Spin) -> float:
    """Squared overlap of the renormalized realistic output with the ideal output.

    Norm shrinkage is read as heralded loss rather than infidelity, so the
    realistic branch is renormalized before the overlap.  Control is photon 2
    and target photon 1, the layout the gate benchmark is defined for.
    """
    if input_state.has_spin or input_state.n_photons != 2:
        raise ValueError("fidelity benchmark expects a two-photon, photons-only input")
    try:
        real = cnot_full(input_state, control=2, target=1, params=params, ideal=False, forced_spin=outcome)
    except ValueError as err:
        if "impossible outcome" in str(err):
            raise ValueError("branch extinguished") from err
        raise
    ideal_out = cnot_ideal(input_state, control=2, target=1)
    return abs(inner(real.post_state, ideal_out)) ** 2


def uniform_input() -> QuantumState:
    """Equal-weight superposition of all four two-photon basis states."""
    return superpose([(ket(s), 1.0) for s in ("RR", "RL", "LR", "LL")])


def basis_inputs() -> tuple[QuantumState, ...]:
    return tuple(ket(s) for s in ("RR", "RL", "LR", "LL"))


def basis_average_fidelity(params: CavityParams, outcome: Spin) -> float:
    """Gate fidelity averaged over the four two-photon basis inputs."""
    return float(np.mean([cnot_fidelity(params, s, outcome) for s in basis_inputs()]))


def point_fidelity(params: CavityParams, outcome: Spin, input_mode: str) -> float:
    if input_mode == "uniform":
        return cnot_fidelity(params, uniform_input(), outcome)
    if input_mode == "basis_average":
        return basis_average_fidelity(params, outcome)
    raise ValueError(f"unknown input mode {input_mode!r}")


def fidelity_grid(gk_values, gg_values, input_mode: str = "uniform") -> list[GateFidelityPoint]:
    """Gate fidelity over a resonant coupling-ratio grid, one row per spin outcome."""
    points = []
    for gk in gk_values:
        for gg in gg_values:
            params = CavityParams.from_ratios(float(gk), float(gg))
            for outcome in (Spin.PLUS, Spin.MINUS):
                points.append(
                    GateFidelityPoint(float(gk), float(gg), outcome, point_fidelity(params, outcome, input_mode))
                )
    return points


def benchmark_report(tolerance_pp: float = 0.5) -> dict[str, dict]:
    """Gate fidelity at the reference parameter set, all convention combinations.

    The decay rate is evaluated in both readings and the fidelity under both
    input conventions; each entry records the deviation from the target
    fidelities (99.6% plus / 99.5% minus) in percentage points and whether it
    falls within ``tolerance_pp``.
    """
    report = {}
    for gamma_label, gamma in (("gamma_total", BENCHMARK_GAMMA_TOTAL), ("gamma_zpl", BENCHMARK_GAMMA_ZPL)):
        params = CavityParams(g=BENCHMARK_G, kappa=BENCHMARK_KAPPA, gamma=gamma)
        for input_mode in ("uniform", "basis_average"):
            for outcome, label in ((Spin.PLUS, "plus"), (Spin.MINUS, "minus")):
                fidelity = point_fidelity(params, outcome, input_mode)
                target = TARGET_FIDELITY[label]
                deviation_pp = abs(fidelity - target) * 100.0
                report[f"{gamma_label}:{input_mode}:{label}"] = {
                    "gamma": gamma,
                    "input_mode": input_mode,
                    "outcome": label,
                    "fidelity": fidelity,
                    "target": target,
                    "deviation_pp": deviation_pp,
                    "matched": deviation_pp <= tolerance_pp,
                }
    return report
