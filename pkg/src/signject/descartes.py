"""Hypothesis checkers for the multivariate rule of one positive solution.

Given A (n x r) and B (r x n), the system A x^B = y has at most one positive
solution for every y when the paired maximal minors of A and B share a sign
(bnd); it has exactly one for every y in the open cone of A when additionally
the rows of B fit in an open half-space and A and B^T define the same oriented
matroid (ex). The classical univariate variation count is kept alongside as a
cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import RankDeficient, ShapeMismatch, TooLarge
from .feasibility import cone_interior_membership, open_halfspace_contains_rows
from .matroid import GROUND_SET_GUARD, image_sign_vectors, matroid_vectors
from .ratmat import RationalMatrix, det, rank
from .signs import sign_of


@dataclass(frozen=True)
class DescartesReport:
    bnd_holds: bool
    ex_holds: bool
    halfspace_witness: Optional[tuple] = None
    matroid_equal: bool = False
    conflicting_J: Optional[tuple] = None  # pair of column subsets
    cone_membership: Optional[bool] = None

    def __post_init__(self):
        if self.ex_holds and not self.bnd_holds:
            raise AssertionError("(ex) holds but (bnd) does not; internal bug")

    def to_json_dict(self):
        return {
            "bnd_holds": self.bnd_holds,
            "ex_holds": self.ex_holds,
            "halfspace_witness": None
            if self.halfspace_witness is None
            else [str(v) for v in self.halfspace_witness],
            "matroid_equal": self.matroid_equal,
            "conflicting_J": None
            if self.conflicting_J is None
            else [list(self.conflicting_J[0]), list(self.conflicting_J[1])],
            "cone_membership": self.cone_membership,
        }


def _require_shapes(A: RationalMatrix, B: RationalMatrix):
    n, r = A.rows, A.cols
    if B.rows != r or B.cols != n:
        raise ShapeMismatch("need A n x r and B r x n")
    if rank(A) < n:
        raise RankDeficient("A does not have full row rank")
    if rank(B) < n:
        raise RankDeficient("B does not have full column rank")
    return n, r


def check_bnd(A: RationalMatrix, B: RationalMatrix):
    """True iff all nonzero products det(A_J) det(B_J) share one sign.

    Returns (holds, ledger); the ledger carries the first conflicting pair of
    column subsets in lexicographic order, if any.
    """
    n, r = _require_shapes(A, B)
    rows = list(range(n))
    common = 0
    first = None
    conflict = None
    for J in combinations(range(r), n):
        p = det(A.submatrix(rows, J)) * det(B.submatrix(J, rows))
        sg = sign_of(p)
        if sg == 0:
            continue
        if common == 0:
            common, first = sg, J
        elif sg != common and conflict is None:
            conflict = (first, J)
    holds = common != 0 and conflict is None
    ledger = {
        "common_sign": common,
        "conflicting_J": None if conflict is None else [list(conflict[0]), list(conflict[1])],
    }
    return holds, ledger


def check_ex(A: RationalMatrix, B: RationalMatrix) -> DescartesReport:
    """(ex): half-space on the rows of B plus minor-sign agreement with zeros matching."""
    n, r = _require_shapes(A, B)
    rows = list(range(n))
    agree = None  # +1 same sign everywhere, -1 opposite everywhere
    conflict = None
    first = None
    for J in combinations(range(r), n):
        sa = sign_of(det(A.submatrix(rows, J)))
        sb = sign_of(det(B.submatrix(J, rows)))
        if sa == 0 and sb == 0:
            continue
        if sa == 0 or sb == 0:
            if conflict is None:
                conflict = (first if first is not None else J, J)
            continue
        rel = sa * sb
        if agree is None:
            agree, first = rel, J
        elif rel != agree and conflict is None:
            conflict = (first, J)
    matroid_equal = agree is not None and conflict is None

    hs = open_halfspace_contains_rows(B)
    witness = hs.witness if hs.feasible else None

    ex_holds = matroid_equal and hs.feasible
    bnd_holds, _ = check_bnd(A, B)
    return DescartesReport(
        bnd_holds=bnd_holds,
        ex_holds=ex_holds,
        halfspace_witness=witness,
        matroid_equal=matroid_equal,
        conflicting_J=conflict,
    )


def cone_query(A: RationalMatrix, y) -> bool:
    """Is y an interior point of the cone of positive combinations of columns of A?"""
    return cone_interior_membership(A, y).feasible


def univariate_sign_variations(coeffs) -> int:
    """Drop zeros, then count adjacent sign changes."""
    signs = [sign_of(c) for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def check_at_most_one_solution(A: RationalMatrix, B: RationalMatrix) -> bool:
    """At most one positive solution of A x^B = y for every y (m arbitrary).

    Equivalent to sigma(ker A) intersecting sigma(im B) only in zero. For
    m = n this reduces to the paired-minor test; m < n never holds on
    dimension grounds.
    """
    m, r = A.rows, A.cols
    if B.rows != r:
        raise ShapeMismatch("B must have one row per column of A")
    n = B.cols
    if rank(B) < n:
        raise RankDeficient("B does not have full column rank")
    if m < n:
        return False
    if m == n and rank(A) == n:
        holds, _ = check_bnd(A, B)
        return holds
    if r > GROUND_SET_GUARD:
        raise TooLarge(f"sign-set intersection guarded at ground-set size {GROUND_SET_GUARD}")
    kerA = set(matroid_vectors(A))
    imB = set(image_sign_vectors(B))
    return all(v.is_zero() for v in kerA & imB)
