"""The Boolean classification matrix f(i, j), its quantum bit- and
phase-oracle forms, and the query ledger that every complexity claim is
stated in.

Non-power-of-two tables are padded up to full registers: padded data rows
read f = 1 inside real columns (a phantom point must never block a column's
AND) and padded hyperplane columns read f = 0 everywhere (a phantom plane
must never look like a solution).
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .perceptron import Dataset, Hyperplane
from .statevec import RegisterLayout, StateVector, _masked_indices

LEDGER_TAGS = ("bit_oracle", "phase_oracle", "controlled_phase_oracle", "classical_f")


@dataclass
class QueryLedger:
    """Monotone counters of oracle invocations.  ``bit_oracle`` is the
    universal currency: every phase-oracle call adds 1 underlying bit query
    and every singly-controlled call adds 2."""

    bit_oracle: int = 0
    phase_oracle: int = 0
    controlled_phase_oracle: int = 0
    classical_f: int = 0
    enabled: bool = True

    def record(self, tag: str, times: int = 1) -> None:
        if times < 0:
            raise ValueError("ledger only counts forward")
        if self.enabled:
            setattr(self, tag, getattr(self, tag) + times)

    def snapshot(self) -> dict[str, int]:
        return {tag: getattr(self, tag) for tag in LEDGER_TAGS}

    @contextmanager
    def muted(self):
        """Suspend metering, e.g. while precomputing a deterministic state
        that will be paid for by explicit arithmetic metering."""
        prev = self.enabled
        self.enabled = False
        try:
            yield self
        finally:
            self.enabled = prev


class TruthTable:
    """N x K matrix over {0, 1}; rows index data elements, columns index
    hyperplanes."""

    def __init__(self, bits):
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("truth table must be a nonempty 2-D array")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("truth table entries must be 0 or 1")
        self.bits = arr

    @property
    def n_rows(self) -> int:
        return self.bits.shape[0]

    @property
    def n_cols(self) -> int:
        return self.bits.shape[1]

    def __eq__(self, other):
        return isinstance(other, TruthTable) and np.array_equal(self.bits, other.bits)


def from_perceptron(data: Dataset, planes: list[Hyperplane]) -> TruthTable:
    """bits[i][j] = 1 iff planes[j] strictly correctly classifies point i."""
    if not planes:
        raise ValueError("need at least one hyperplane")
    X, y = data.as_arrays()
    if any(p.dim != X.shape[1] for p in planes):
        raise ValueError("hyperplane dimension does not match the data")
    W = np.stack([p.w for p in planes])
    b = np.array([p.b for p in planes])
    margins = y[:, None] * (X @ W.T + b[None, :])
    return TruthTable((margins > 0.0).astype(np.uint8))


def save_truth_table(table: TruthTable, path) -> None:
    """Text format: header ``N K`` then N rows of K space-separated bits."""
    with open(path, "w") as fh:
        fh.write(f"{table.n_rows} {table.n_cols}\n")
        for row in table.bits:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def load_truth_table(path) -> TruthTable:
    with open(path) as fh:
        n, k = (int(v) for v in fh.readline().split())
        rows = [[int(v) for v in fh.readline().split()] for _ in range(n)]
    arr = np.array(rows, dtype=np.uint8)
    if arr.shape != (n, k):
        raise ValueError(f"expected a {n} x {k} table")
    return TruthTable(arr)


def _ceil_log2(x: int) -> int:
    return max(0, (x - 1).bit_length())


class OracleHandle:
    """A truth table bound to a query ledger, with the padded register view
    used by every quantum application."""

    def __init__(self, table: TruthTable, ledger: QueryLedger | None = None):
        self.table = table
        self.ledger = ledger if ledger is not None else QueryLedger()
        self.n = _ceil_log2(table.n_rows)
        self.k = _ceil_log2(table.n_cols)
        dn, dk = 1 << self.n, 1 << self.k
        padded = np.zeros((dn, dk), dtype=np.uint8)
        padded[: table.n_rows, : table.n_cols] = table.bits
        padded[table.n_rows :, : table.n_cols] = 1  # phantom rows pass every real column
        self.padded = padded
        # (2**k, 2**n) sign matrix (-1)**f, plane-major to match the packing.
        self.signs = (1.0 - 2.0 * padded.T).astype(np.float64)
        self._fvec = padded.T.reshape(-1).astype(bool)  # index (j << n) | i

    @property
    def n_rows(self) -> int:
        return self.table.n_rows

    @property
    def n_cols(self) -> int:
        return self.table.n_cols

    def layout(self, l: int = 0, scratch: bool = False) -> RegisterLayout:
        return RegisterLayout(self.n, self.k, l, 1 if scratch else 0)

    def solution_mask(self) -> np.ndarray:
        """Unmetered column-AND over the true table (test/diagnostic oracle)."""
        return self.table.bits.all(axis=0)

    # -- flat-index caches -------------------------------------------------

    def _f_one_indices(self, num_qubits: int, ones: tuple[int, ...], zeros=()):
        key = (num_qubits, ones, zeros)
        cache = getattr(self, "_idx_cache", None)
        if cache is None:
            cache = self._idx_cache = {}
        if key not in cache:
            x = np.arange(1 << num_qubits, dtype=np.int64)
            keep = self._fvec[x & ((1 << (self.n + self.k)) - 1)].copy()
            for q in ones:
                keep &= (x >> q) & 1 == 1
            for q in zeros:
                keep &= (x >> q) & 1 == 0
            cache[key] = np.nonzero(keep)[0]
        return cache[key]


def _check_table_layout(layout: RegisterLayout, handle: OracleHandle) -> None:
    if layout.n != handle.n or layout.k != handle.k:
        raise ValueError(
            f"layout registers ({layout.n}, {layout.k}) do not match the "
            f"padded table ({handle.n}, {handle.k})"
        )


def apply_bit_oracle(state: StateVector, layout: RegisterLayout, handle: OracleHandle) -> StateVector:
    """XOR the scratch qubit with f(i, j) on every basis state."""
    _check_table_layout(layout, handle)
    if layout.scratch_qubit is None:
        raise ValueError("bit oracle needs a scratch qubit in the layout")
    s = layout.scratch_qubit
    lo = handle._f_one_indices(state.num_qubits, (), zeros=(s,))
    hi = lo + (1 << s)
    amps = state.amps
    tmp = amps[lo].copy()
    amps[lo] = amps[hi]
    amps[hi] = tmp
    handle.ledger.record("bit_oracle")
    return state


def apply_phase_oracle(
    state: StateVector, layout: RegisterLayout, handle: OracleHandle, controls=()
) -> StateVector:
    """Multiply each |i, j, .> component by (-1)**f(i, j), restricted to the
    sector where every control bit is 1.

    Metering: a plain call is one bit query (phase kickback off a |-> scratch);
    each control layer doubles the underlying bit-oracle count, so one control
    costs 2 and c controls cost 2**c.
    """
    _check_table_layout(layout, handle)
    cs = tuple(sorted(int(c) for c in controls))
    for c in cs:
        if c < layout.n + layout.k:
            raise ValueError("oracle controls must lie above the data/plane registers")
    idx = handle._f_one_indices(state.num_qubits, cs)
    state.amps[idx] *= -1.0
    if cs:
        handle.ledger.record("controlled_phase_oracle")
        handle.ledger.record("bit_oracle", 2 ** len(cs))
    else:
        handle.ledger.record("phase_oracle")
        handle.ledger.record("bit_oracle")
    return state


def apply_controlled_phase_oracle(
    state: StateVector, control: int, layout: RegisterLayout, handle: OracleHandle
) -> StateVector:
    """Controlled phase oracle built literally from two bit-oracle calls
    around a CZ between the control and the scratch qubit; the scratch must
    enter in |0> and is returned to |0>."""
    _check_table_layout(layout, handle)
    if layout.scratch_qubit is None:
        raise ValueError("controlled phase oracle needs a scratch qubit")
    s = layout.scratch_qubit
    hot = _masked_indices(state.num_qubits, (s,), ())
    if np.linalg.norm(state.amps[hot]) > 1e-9:
        raise AssertionError("scratch qubit must be |0> at entry")
    apply_bit_oracle(state, layout, handle)
    cz = _masked_indices(state.num_qubits, (int(control), s), ())
    state.amps[cz] *= -1.0
    apply_bit_oracle(state, layout, handle)
    handle.ledger.record("controlled_phase_oracle")
    return state


def column_count(handle: OracleHandle, j: int) -> int:
    """Exact number of 1s in true column j; meters the classical baseline
    cost of one full column scan."""
    if not (0 <= j < handle.n_cols):
        raise ValueError(f"column {j} out of range")
    handle.ledger.record("classical_f", handle.n_rows)
    return int(handle.table.bits[:, j].sum())


def controlled_phase_oracle_identity_gap(table: TruthTable) -> float:
    """Worst amplitude difference, over every scratch-|0> basis state,
    between the literal two-bit-oracle-call construction of the controlled
    phase oracle and the directly applied controlled phase."""
    handle = OracleHandle(table, QueryLedger(enabled=False))
    layout = handle.layout(l=1, scratch=True)
    control = layout.phase_qubits[0]
    scratch = layout.scratch_qubit
    gap = 0.0
    for x in range(1 << layout.num_qubits):
        if (x >> scratch) & 1:
            continue
        built = StateVector.basis(layout.num_qubits, x)
        direct = StateVector.basis(layout.num_qubits, x)
        apply_controlled_phase_oracle(built, control, layout, handle)
        apply_phase_oracle(direct, layout, handle, controls=(control,))
        gap = max(gap, float(np.max(np.abs(built.amps - direct.amps))))
    return gap
