"""Stencil coefficient tables for WENO reconstruction, orders r = 2..5.

All coefficients are stored as exact integer ratios and converted to binary
floating point exactly once, so the row-sum assertions below are exact and
any transcription error trips them at import/load time rather than showing
up as a mysterious order loss.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = ["StencilTables", "load_tables", "SUPPORTED_ORDERS"]

SUPPORTED_ORDERS = (2, 3, 4, 5)

# Candidate coefficients a[k][l]: q_k = sum_l a[k][l] * f[k + l] on a window
# f[0 .. 2r-2] holding samples u_{j-r+1} .. u_{j+r-1}.
_A = {
    2: [
        [(-1, 2), (3, 2)],
        [(1, 2), (1, 2)],
    ],
    3: [
        [(2, 6), (-7, 6), (11, 6)],
        [(-1, 6), (5, 6), (2, 6)],
        [(2, 6), (5, 6), (-1, 6)],
    ],
    4: [
        [(-3, 12), (13, 12), (-23, 12), (25, 12)],
        [(1, 12), (-5, 12), (13, 12), (3, 12)],
        [(-1, 12), (7, 12), (7, 12), (-1, 12)],
        [(3, 12), (13, 12), (-5, 12), (1, 12)],
    ],
    5: [
        [(12, 60), (-63, 60), (137, 60), (-163, 60), (137, 60)],
        [(-3, 60), (17, 60), (-43, 60), (77, 60), (12, 60)],
        [(2, 60), (-13, 60), (47, 60), (27, 60), (-3, 60)],
        [(-3, 60), (27, 60), (47, 60), (-13, 60), (2, 60)],
        [(12, 60), (77, 60), (-43, 60), (17, 60), (-3, 60)],
    ],
}

# Linear weights d[k].
_D = {
    2: [(1, 3), (2, 3)],
    3: [(1, 10), (6, 10), (3, 10)],
    4: [(1, 35), (12, 35), (18, 35), (4, 35)],
    5: [(1, 126), (20, 126), (60, 126), (40, 126), (5, 126)],
}

# Smoothness-indicator inner rows b[k][m][l] (integers) and outer scale
# factors c[m]: IS_k = sum_m c[m] * (sum_l b[k][m][l] * f[k + l])**2.
_B = {
    2: [
        [[-1, 1]],
        [[-1, 1]],
    ],
    3: [
        [[1, -4, 3], [1, -2, 1]],
        [[-1, 0, 1], [1, -2, 1]],
        [[3, -4, 1], [1, -2, 1]],
    ],
    4: [
        [[-2, 9, -18, 11], [-1, 4, -5, 2], [-1, 3, -3, 1]],
        [[1, -6, 3, 2], [0, 1, -2, 1], [-1, 3, -3, 1]],
        [[-2, -3, 6, -1], [1, -2, 1, 0], [-1, 3, -3, 1]],
        [[-11, 18, -9, 2], [2, -5, 4, -1], [-1, 3, -3, 1]],
    ],
    5: [
        [[3, -16, 36, -48, 25], [119, -606, 1234, -1126, 379],
         [3, -14, 24, -18, 5], [1, -4, 6, -4, 1]],
        [[1, -6, 18, -10, -3], [11, -44, -64, 216, -119],
         [1, -6, 12, -10, 3], [1, -4, 6, -4, 1]],
        [[1, -8, 0, 9, -1], [11, -174, 326, -174, 11],
         [1, -2, 0, 2, -1], [1, -4, 6, -4, 1]],
        [[3, 10, -18, 6, -1], [119, -216, 64, 44, -11],
         [3, -10, 12, -6, 1], [1, -4, 6, -4, 1]],
        [[25, -48, 36, -16, 3], [379, -1126, 1234, -606, 119],
         [5, -18, 24, -14, 3], [1, -4, 6, -4, 1]],
    ],
}

_C = {
    2: [(1, 1)],
    3: [(1, 4), (13, 12)],
    4: [(1, 36), (13, 12), (781, 720)],
    5: [(1, 144), (13, 202800), (781, 2880), (1421461, 1310400)],
}

# The shipped r=5 center-stencil first-derivative row fails an independent
# quadratic-form oracle (its entry 9 breaks the reflection symmetry the
# center stencil must have; 8 restores it).  The default keeps the shipped
# value and the order diagnostic reports the resulting degradation; the
# "symmetric" variant applies the one-digit repair.
_R5_CENTER_ROW_SYMMETRIC = [1, -8, 0, 8, -1]


class TableError(ValueError):
    """Unsupported stencil order or table-consistency failure."""


@dataclass(frozen=True)
class StencilTables:
    """Coefficient set for one stencil order r.

    a : (r, r) candidate coefficients, a[k, l] applied to window entry k+l
    d : (r,) linear weights
    b : (r, r-1, r) indicator inner rows, b[k, m, l] applied to entry k+l
    c : (r-1,) indicator outer scale factors
    """

    r: int
    a: np.ndarray
    d: np.ndarray
    b: np.ndarray
    c: np.ndarray
    variant: str = "printed"

    @property
    def width(self) -> int:
        return 2 * self.r - 1

    def candidate_matrix(self) -> np.ndarray:
        """(r, 2r-1) matrix Q with q = Q @ window."""
        q = np.zeros((self.r, self.width))
        for k in range(self.r):
            q[k, k:k + self.r] = self.a[k]
        return q

    def indicator_matrix(self) -> np.ndarray:
        """(r, r-1, 2r-1) inner-row matrix aligned to the full window."""
        bm = np.zeros((self.r, self.r - 1, self.width))
        for k in range(self.r):
            for m in range(self.r - 1):
                bm[k, m, k:k + self.r] = self.b[k, m]
        return bm


def _exact(pairs):
    return [Fraction(p, q) for p, q in pairs]


def load_tables(r: int, variant: str = "printed") -> StencilTables:
    """Build the coefficient set for stencil order r in {2, 3, 4, 5}.

    variant="symmetric" applies the r=5 center-row repair described above;
    it changes nothing for r < 5.
    """
    if r not in SUPPORTED_ORDERS:
        raise TableError(f"unsupported stencil order r={r}; expected one of {SUPPORTED_ORDERS}")
    if variant not in ("printed", "symmetric"):
        raise TableError(f"unknown table variant {variant!r}")

    a_rows = [_exact(row) for row in _A[r]]
    d_row = _exact(_D[r])
    c_row = _exact(_C[r])
    b_rows = [[list(map(Fraction, row)) for row in krows] for krows in _B[r]]
    if r == 5 and variant == "symmetric":
        b_rows[2][0] = list(map(Fraction, _R5_CENTER_ROW_SYMMETRIC))

    for k, row in enumerate(a_rows):
        if sum(row) != 1:
            raise TableError(f"candidate row r={r} k={k} does not sum to 1")
    if sum(d_row) != 1:
        raise TableError(f"linear weights for r={r} do not sum to 1")
    if any(dk <= 0 for dk in d_row):
        raise TableError(f"nonpositive linear weight for r={r}")
    if any(cm <= 0 for cm in c_row):
        raise TableError(f"nonpositive indicator scale for r={r}")

    return StencilTables(
        r=r,
        a=np.array(a_rows, dtype=float),
        d=np.array(d_row, dtype=float),
        b=np.array(b_rows, dtype=float),
        c=np.array(c_row, dtype=float),
        variant=variant,
    )
