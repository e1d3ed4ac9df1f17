"""Exact feasibility of ``{y >= 0 : M y = b}`` via a rational phase-one simplex.

Bland's rule guarantees termination.  This is the authoritative decision
procedure; callers may try a floating-point solver first and only come here
when a cheap exact certificate could not be produced.
"""

from fractions import Fraction
from typing import List, Optional, Sequence


def feasible_point(M: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """Return some ``y >= 0`` with ``M y = b`` or ``None`` if none exists."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if rows == 0:
        return [Fraction(0)] * cols
    tab = []
    for i in range(rows):
        r = [Fraction(x) for x in M[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            r = [-x for x in r]
            rhs = -rhs
        art = [Fraction(0)] * rows
        art[i] = Fraction(1)
        tab.append(r + art + [rhs])
    width = cols + rows
    basis = [cols + i for i in range(rows)]
    # reduced costs of the phase-one objective (sum of artificials)
    cost = [Fraction(0)] * (width + 1)
    for r in tab:
        for j in range(width + 1):
            cost[j] -= r[j]
    for i in range(rows):
        cost[cols + i] = Fraction(0)

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(rows):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:  # unbounded direction cannot occur in phase one
            break
        piv = tab[leave][enter]
        prow = [x / piv for x in tab[leave]]
        tab[leave] = prow
        for i in range(rows):
            if i != leave:
                f = tab[i][enter]
                if f:
                    tab[i] = [x - f * y for x, y in zip(tab[i], prow)]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, prow)]
        basis[leave] = enter

    if -cost[width] != 0:
        return None
    y = [Fraction(0)] * cols
    for i, j in enumerate(basis):
        if j < cols:
            y[j] = tab[i][width]
        elif tab[i][width] != 0:  # pragma: no cover - objective is zero
            return None
    return y
