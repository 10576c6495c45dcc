"""Quantum counting core: the Grover operator over the data register, phase
estimation of its rotation angle, and the AND-simulation circuit that turns
"column j is all ones" into a Grover phase with bounded error.

The circuits here never measure; readouts are exact amplitude diagnostics.
Implementation uses a structured dense path (sector views of the packed
state, a mean-based diffusion update, FFT Fourier transforms) that is
cross-checked in the tests against the generic gate-by-gate engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .oracles import OracleHandle, QueryLedger
from .statevec import RegisterLayout, StateVector, new_uniform


def l_bits(n: int) -> int:
    """Phase-register width ceil(n/2) + 3 used by every counting circuit."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return (n + 1) // 2 + 3


def phase_estimate_query_cost(l: int) -> int:
    """Bit-oracle queries of one phase estimation: 2**l - 1 controlled
    Grover steps, each worth two bit queries."""
    return 2 * ((1 << l) - 1)


def sim_and_query_cost(l: int) -> int:
    """Bit-oracle queries of one AND-simulation run (estimate + uncompute)."""
    return 4 * ((1 << l) - 1)


def controlled_sim_and_query_cost(l: int) -> int:
    """Bit-oracle queries of a controlled AND-simulation: every oracle call
    gains one more control layer, doubling its bit-query cost."""
    return 8 * ((1 << l) - 1)


def meter_phase_estimate(ledger: QueryLedger, l: int, times: int = 1) -> None:
    ledger.record("controlled_phase_oracle", times * ((1 << l) - 1))
    ledger.record("bit_oracle", times * phase_estimate_query_cost(l))


def meter_sim_and(ledger: QueryLedger, l: int, times: int = 1, controlled: bool = False) -> None:
    ledger.record("controlled_phase_oracle", times * 2 * ((1 << l) - 1))
    cost = controlled_sim_and_query_cost(l) if controlled else sim_and_query_cost(l)
    ledger.record("bit_oracle", times * cost)


# -- structured dense kernels -------------------------------------------------


def _sector(amps: np.ndarray, dk: int, dn: int, control_offset: int | None):
    """Writable (..., dk, dn) view of the flat state; with a control offset c
    (control qubit = n + k + c), only the sector where that bit is 1."""
    rest = amps.size // (dk * dn)
    if control_offset is None:
        return amps.reshape(rest, dk, dn)
    lo = 1 << control_offset
    hi = rest // (2 * lo)
    if hi < 1:
        raise ValueError("control qubit outside the state")
    return amps.reshape(hi, 2, lo, dk, dn)[:, 1]


def _diffuse_data(view: np.ndarray, dn: int) -> None:
    """2|+><+| - I on the data axis: psi -> (2/dn) * sum - psi."""
    total = view.sum(axis=-1, keepdims=True)
    np.negative(view, out=view)
    view += total * (2.0 / dn)


def _grover_flat(
    amps: np.ndarray,
    n: int,
    k: int,
    signs: np.ndarray,
    ledger: QueryLedger,
    control_offset: int | None = None,
    inverse: bool = False,
) -> None:
    view = _sector(amps, 1 << k, 1 << n, control_offset)
    if inverse:
        _diffuse_data(view, 1 << n)
        view *= signs
    else:
        view *= signs
        _diffuse_data(view, 1 << n)
    if control_offset is None:
        ledger.record("phase_oracle")
        ledger.record("bit_oracle")
    else:
        ledger.record("controlled_phase_oracle")
        ledger.record("bit_oracle", 2)


def _fourier_top(amps: np.ndarray, l: int, inverse: bool) -> None:
    dl = 1 << l
    block = amps.reshape(dl, -1)
    if inverse:
        block[:] = np.fft.fft(block, axis=0) / math.sqrt(dl)
    else:
        block[:] = np.fft.ifft(block, axis=0) * math.sqrt(dl)


def _ladder_flat(amps, n, k, l, signs, ledger, inverse: bool) -> None:
    order = range(l - 1, -1, -1) if inverse else range(l)
    for t in order:
        for _ in range(1 << t):
            _grover_flat(amps, n, k, signs, ledger, control_offset=t, inverse=inverse)


def _sim_and_flat(amps, n, k, l, signs, ledger) -> None:
    _ladder_flat(amps, n, k, l, signs, ledger, inverse=False)
    _fourier_top(amps, l, inverse=True)
    amps.reshape(1 << l, -1)[1 << (l - 1)] *= -1.0  # flip the s = 10..0 readout
    _fourier_top(amps, l, inverse=False)
    _ladder_flat(amps, n, k, l, signs, ledger, inverse=True)


# -- public operations ---------------------------------------------------------


def _check(state: StateVector, layout: RegisterLayout, handle: OracleHandle) -> None:
    if layout.n != handle.n or layout.k != handle.k:
        raise ValueError("layout does not match the padded table registers")
    if state.num_qubits != layout.num_qubits:
        raise ValueError("state size does not match the layout")
    if layout.a != 0:
        raise ValueError("counting circuits use scratch-free layouts")


def grover_operator(
    state: StateVector, layout: RegisterLayout, handle: OracleHandle, control: int | None = None
) -> StateVector:
    """One amplitude-amplification step on the data register: the phase
    oracle followed by the reflection about |+>^n, acting identically on
    every hyperplane component.  With ``control`` (a qubit above the
    data/plane registers) the whole step is applied on the control-1 sector
    and the oracle call costs two bit queries."""
    _check(state, layout, handle)
    offset = None
    if control is not None:
        offset = int(control) - (layout.n + layout.k)
        if offset < 0:
            raise ValueError("control must lie above the data/plane registers")
    _grover_flat(state.amps, layout.n, layout.k, handle.signs, handle.ledger, offset)
    return state


def grover_operator_inverse(
    state: StateVector, layout: RegisterLayout, handle: OracleHandle, control: int | None = None
) -> StateVector:
    _check(state, layout, handle)
    offset = None
    if control is not None:
        offset = int(control) - (layout.n + layout.k)
        if offset < 0:
            raise ValueError("control must lie above the data/plane registers")
    _grover_flat(
        state.amps, layout.n, layout.k, handle.signs, handle.ledger, offset, inverse=True
    )
    return state


def phase_estimate(state: StateVector, layout: RegisterLayout, handle: OracleHandle) -> StateVector:
    """Controlled-Grover ladder (2**t steps controlled on phase qubit t)
    followed by the inverse Fourier transform on the phase register.  The
    phase register must enter in |+>^l.  Costs exactly 2 * (2**l - 1) bit
    queries."""
    _check(state, layout, handle)
    if layout.l < 1:
        raise ValueError("phase estimation needs a phase register")
    _ladder_flat(
        state.amps, layout.n, layout.k, layout.l, handle.signs, handle.ledger, inverse=False
    )
    _fourier_top(state.amps, layout.l, inverse=True)
    return state


def phase_estimate_inverse(
    state: StateVector, layout: RegisterLayout, handle: OracleHandle
) -> StateVector:
    """Exact inverse of :func:`phase_estimate` at the same query cost."""
    _check(state, layout, handle)
    if layout.l < 1:
        raise ValueError("phase estimation needs a phase register")
    _fourier_top(state.amps, layout.l, inverse=False)
    _ladder_flat(
        state.amps, layout.n, layout.k, layout.l, handle.signs, handle.ledger, inverse=True
    )
    return state


def sim_and(state: StateVector, layout: RegisterLayout, handle: OracleHandle) -> StateVector:
    """Phase estimation, a Z on the top phase qubit open-controlled on the
    remaining phase qubits (so only the s = 10..0 readout is flipped), then
    the inverse phase estimation.

    On each |j> component the output is approximately (-1)**g~(j) times the
    input, where g~(j) agrees with the column-AND g(j) with probability at
    least 2/3, exactly when g(j) = 1.  Costs exactly 4 * (2**l - 1) bit
    queries regardless of the table.
    """
    _check(state, layout, handle)
    if layout.l < 1:
        raise ValueError("sim_and needs a phase register")
    _sim_and_flat(
        state.amps, layout.n, layout.k, layout.l, handle.signs, handle.ledger
    )
    return state


@dataclass(frozen=True)
class GTildeReadout:
    """Sign imprinted on one hyperplane component and the squared overlap
    with the ideal +-|input> outcome."""

    sign: int
    fidelity: float


def sim_and_overlap(j: int, handle: OracleHandle, l: int | None = None) -> complex:
    """<input| SimAnd |input> for the basis hyperplane j, computed on the
    single-column subspace (the circuit is block diagonal in j).  Executes
    one full AND-simulation worth of metered queries."""
    if not (0 <= j < (1 << handle.k)):
        raise ValueError(f"hyperplane index {j} out of range")
    if l is None:
        l = l_bits(handle.n)
    dn, dl = 1 << handle.n, 1 << l
    signs = handle.signs[j : j + 1]
    amps = np.full(dl * dn, 1.0 / math.sqrt(dl * dn), dtype=np.complex128)
    reference = amps.copy()
    _sim_and_flat(amps, handle.n, 0, l, signs, handle.ledger)
    return complex(np.vdot(reference, amps))


def g_tilde_readout(j: int, handle: OracleHandle, l: int | None = None) -> GTildeReadout:
    """Deterministic diagnostic of the AND-simulation on hyperplane j:
    sign of Re <in|out> and |<in|out>|**2."""
    eta = sim_and_overlap(j, handle, l)
    sign = -1 if eta.real < 0.0 else +1
    return GTildeReadout(sign=sign, fidelity=abs(eta) ** 2)


def phase_register_distribution(
    j: int, handle: OracleHandle, l: int | None = None
) -> np.ndarray:
    """Exact readout distribution of the phase register after phase
    estimation on hyperplane j (unmetered helper)."""
    if not (0 <= j < (1 << handle.k)):
        raise ValueError(f"hyperplane index {j} out of range")
    if l is None:
        l = l_bits(handle.n)
    dn, dl = 1 << handle.n, 1 << l
    signs = handle.signs[j : j + 1]
    amps = np.full(dl * dn, 1.0 / math.sqrt(dl * dn), dtype=np.complex128)
    with handle.ledger.muted():
        _ladder_flat(amps, handle.n, 0, l, signs, handle.ledger, inverse=False)
        _fourier_top(amps, l, inverse=True)
    return np.abs(amps.reshape(dl, dn)) ** 2 @ np.ones(dn)


@dataclass(frozen=True)
class CountEstimate:
    """Modal phase-estimation readout: the folded bit string, its angle
    theta_hat = pi * s / 2**l, and the solution-count estimate
    2**n * sin(theta_hat)**2 over the padded data register."""

    s_bits: str
    theta_hat: float
    l_hat: float


def quantum_count(
    j: int, handle: OracleHandle, shots: int, rng_seed=None, l: int | None = None
) -> CountEstimate:
    """Sample the phase-register readout ``shots`` times, fold the two
    conjugate branches s and 2**l - s onto one angle, and return the modal
    estimate.  Each shot is metered as one full phase estimation."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if l is None:
        l = l_bits(handle.n)
    probs = phase_register_distribution(j, handle, l)
    meter_phase_estimate(handle.ledger, l, times=shots)
    rng = np.random.default_rng(rng_seed)
    dl = 1 << l
    samples = rng.choice(dl, size=shots, p=probs / probs.sum())
    folded = np.minimum(samples, dl - samples)
    mode = int(np.bincount(folded, minlength=(dl // 2) + 1).argmax())
    theta = math.pi * mode / dl
    return CountEstimate(
        s_bits=format(mode, f"0{l}b"),
        theta_hat=theta,
        l_hat=(1 << handle.n) * math.sin(theta) ** 2,
    )


def phase_gap_bound_check(n: int, m: int) -> bool:
    """For a column with m misclassified elements out of 2**n, check that the
    conjugate phase branch (2 pi - 2 theta) / 2 pi clears 1/2 by at least one
    unit in the last of the ceil(n/2) + 3 phase bits, which is what forces a
    nonzero trailing readout bit whenever the column AND is 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (1 <= m <= (1 << n)):
        raise ValueError(f"m must be in [1, {1 << n}], got {m}")
    theta = math.acos(math.sqrt(m / (1 << n)))
    lhs = (2.0 * math.pi - 2.0 * theta) / (2.0 * math.pi)
    return lhs >= 0.5 + 2.0 ** -l_bits(n)


def counting_layout(handle: OracleHandle, l: int | None = None) -> RegisterLayout:
    """Scratch-free layout sized for the handle with the standard phase
    register width."""
    return handle.layout(l=l_bits(handle.n) if l is None else l)


def uniform_counting_state(
    handle: OracleHandle, fixed_j: int | None = None, l: int | None = None
) -> StateVector:
    layout = counting_layout(handle, l)
    return new_uniform(layout, fixed_j=fixed_j)
