"""Classical reference algorithms: the exact sequential version-space scan,
online perceptron training, and the unmetered brute-force column AND."""

from __future__ import annotations

import numpy as np

from .oracles import OracleHandle
from .perceptron import Dataset, Hyperplane
from .search import SearchOutcome


def classical_version_space_search(handle: OracleHandle) -> SearchOutcome:
    """Scan columns left to right, rows top down, leaving a column at its
    first 0; every f lookup is metered as one classical query."""
    bits = handle.table.bits
    queries = 0
    for j in range(handle.n_cols):
        ok = True
        for i in range(handle.n_rows):
            queries += 1
            if bits[i, j] == 0:
                ok = False
                break
        if ok:
            handle.ledger.record("classical_f", queries)
            return SearchOutcome(
                index=j,
                queries={"classical_f": queries},
                trials={"columns_scanned": j + 1},
            )
    handle.ledger.record("classical_f", queries)
    return SearchOutcome(
        index=None,
        queries={"classical_f": queries},
        trials={"columns_scanned": handle.n_cols, "reason": "exhausted"},
    )


def brute_force_g(handle: OracleHandle) -> np.ndarray:
    """Exact column-AND vector over the true table; unmetered test oracle."""
    return handle.table.bits.all(axis=0).astype(np.uint8)


def online_train(
    data: Dataset, max_updates: int, initial: Hyperplane | None = None
) -> Hyperplane | None:
    """Additive-update online training: every point with y (w.x + b) <= 0
    triggers w += y x, b += y; returns the first hyperplane surviving a full
    clean pass, or None if the update budget runs out.  Starts from the zero
    vector unless ``initial`` is given; the nonstrict trigger makes the very
    first point an update from zero and guarantees any returned plane
    strictly separates the data."""
    if max_updates < 1:
        raise ValueError("max_updates must be >= 1")
    X, y = data.as_arrays()
    w = initial.w.astype(float).copy() if initial is not None else np.zeros(data.dim)
    b = float(initial.b) if initial is not None else 0.0
    updates = 0
    while updates <= max_updates:
        clean = True
        for i in range(data.n_points):
            if y[i] * (float(w @ X[i]) + b) <= 0.0:
                w = w + y[i] * X[i]
                b = b + float(y[i])
                updates += 1
                clean = False
                if updates > max_updates:
                    return None
        if clean:
            return Hyperplane(w, b)
    return None


def perceptron_mistake_bound(data: Dataset, separator: Hyperplane) -> float:
    """(R s / gamma)**2 bound on online updates, with R the largest augmented
    point norm, s the augmented norm of the known separator and gamma its
    worst-case functional margin over the data."""
    X, y = data.as_arrays()
    R = float(np.sqrt((np.linalg.norm(X, axis=1) ** 2 + 1.0).max()))
    s = float(np.sqrt(np.linalg.norm(separator.w) ** 2 + separator.b**2))
    functional = float(np.min(y * (X @ separator.w + separator.b)))
    if functional <= 0.0:
        raise ValueError("separator must classify the data with positive margin")
    return (R * s / functional) ** 2
