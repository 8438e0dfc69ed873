"""Sparse exact linear algebra over Q: echelon forms with combination
tracking, nullspaces, affine solves, and subspace dimension arithmetic.

Vectors are dicts keyed by comparable tuples with Fraction values; pivoting
always picks the largest key, so everything is deterministic.
"""

from __future__ import annotations

from fractions import Fraction

Vec = dict


def vec_add_scaled(target: Vec, src: Vec, c: Fraction) -> None:
    for k, x in src.items():
        nv = target.get(k, 0) + c * x
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class Echelon:
    """Row echelon with unit pivots; rows optionally carry combination tags
    expressing each row in terms of the inserted vectors."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict = {}  # pivot key -> (vector, tag)

    def reduce(self, vec: Vec, tag: Vec | None = None):
        """Eliminate against stored rows; returns (residual, tag_residual)."""
        vec = dict(vec)
        tag = dict(tag or {})
        while vec:
            lead = max(vec)
            row = self.rows.get(lead)
            if row is None:
                return vec, tag
            rvec, rtag = row
            c = -vec[lead]
            vec_add_scaled(vec, rvec, c)
            vec_add_scaled(tag, rtag, c)
        return vec, tag

    def insert(self, vec: Vec, tag: Vec | None = None):
        """Returns (added, tag_residual). If not added, the tag residual is a
        linear combination of previously inserted vectors equal to ``vec``."""
        vec, tag = self.reduce(vec, tag)
        if not vec:
            return False, tag
        lead = max(vec)
        c = vec[lead]
        vec = {k: x / c for k, x in vec.items()}
        tag = {k: x / c for k, x in tag.items()}
        self.rows[lead] = (vec, tag)
        return True, tag

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "Echelon":
        e = Echelon()
        e.rows = dict(self.rows)
        return e


def rank_of(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.insert(v)
    return e.rank


def echelon_of(vectors) -> Echelon:
    e = Echelon()
    for v in vectors:
        e.insert(v)
    return e


def nullspace(columns: list[Vec]) -> list[dict[int, Fraction]]:
    """Combinations (by column index) summing to zero; a basis of the kernel
    of the matrix whose columns are given.

    Invariant: a tracked pair (vec, tag) always satisfies
    vec = sum_k tag[k] * columns[k], so a vanishing residual hands back the
    kernel combination directly."""
    e = Echelon()
    out = []
    for i, col in enumerate(columns):
        added, tag = e.insert(col, {i: Fraction(1)})
        if not added:
            out.append(dict(tag))
    return out


def solve(columns: list[Vec], target: Vec) -> list[Fraction] | None:
    """Coefficients x with sum x_i columns_i = target, or None.

    The target is tracked with an empty tag, so after reduction
    0 = target + sum tag[k] columns[k] and the solution is -tag."""
    e = Echelon()
    for i, col in enumerate(columns):
        e.insert(col, {i: Fraction(1)})
    residual, tag = e.reduce(target)
    if residual:
        return None
    return [-tag.get(i, Fraction(0)) for i in range(len(columns))]


def dim_intersection(echelon_a: Echelon, vectors_b: list[Vec], rank_b: int) -> int:
    """dim(A meet B) = rank A + rank B - rank(A + B)."""
    joint = echelon_a.copy()
    for v in vectors_b:
        joint.insert(v)
    return echelon_a.rank + rank_b - joint.rank


def quotient_representatives(sub: Echelon, candidates: list[Vec]) -> list[Vec]:
    """Candidates surviving modulo the subspace; they represent a basis of
    span(candidates + sub) / sub."""
    e = sub.copy()
    reps = []
    for v in candidates:
        added, _ = e.insert(v)
        if added:
            reps.append(v)
    return reps
