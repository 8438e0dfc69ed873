"""Small exact matrices over coordinate rings (tuples of tuples of elements)."""

from __future__ import annotations

from fractions import Fraction

from .errors import RingMismatch
from .rings import Ring, RingElement

Mat = tuple[tuple[RingElement, ...], ...]


def mat_from_rows(rows) -> Mat:
    return tuple(tuple(row) for row in rows)


def parse_matrix(ring: Ring, rows: list[list[str]]) -> Mat:
    return tuple(tuple(ring.parse(cell) for cell in row) for row in rows)


def identity(ring: Ring, r: int) -> Mat:
    one, zero = ring.one(), ring.zero()
    return tuple(
        tuple(one if i == j else zero for j in range(r)) for i in range(r)
    )


def zero_matrix(ring: Ring, r: int, c: int | None = None) -> Mat:
    zero = ring.zero()
    c = r if c is None else c
    return tuple(tuple(zero for _ in range(c)) for _ in range(r))


def mat_ring(m: Mat) -> Ring:
    return m[0][0].ring


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Mat) -> Mat:
    return tuple(tuple(-x for x in row) for row in a)


def mat_scale(a: Mat, c) -> Mat:
    return tuple(tuple(x * c for x in row) for row in a)


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a and b and len(a[0]) != len(b):
        raise RingMismatch("matrix dimensions do not match")
    bt = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                acc = acc + x * y
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def mat_apply(m: Mat, vec):
    return tuple(
        sum((x * v for x, v in zip(row, vec)), start=mat_ring(m).zero()) for row in m
    )


def mat_commutator(a: Mat, b: Mat) -> Mat:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def mat_is_zero(a: Mat) -> bool:
    return all(x.is_zero() for row in a for x in row)


def mat_eq(a: Mat, b: Mat) -> bool:
    return len(a) == len(b) and all(
        len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb))
        for ra, rb in zip(a, b)
    )


def mat_partial(a: Mat, name: str) -> Mat:
    return tuple(tuple(x.partial(name) for x in row) for row in a)


def mat_map(a: Mat, fn) -> Mat:
    return tuple(tuple(fn(x) for x in row) for row in a)


def mat_trace(a: Mat) -> RingElement:
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def determinant(a: Mat) -> RingElement:
    """Cofactor expansion; ranks here are tiny (r <= 4)."""
    r = len(a)
    if r == 0:
        return Ring(()).one()
    if r == 1:
        return a[0][0]
    ring = mat_ring(a)
    acc = ring.zero()
    sign = Fraction(1)
    for j in range(r):
        minor = tuple(row[:j] + row[j + 1 :] for row in a[1:])
        acc = acc + a[0][j] * determinant(minor) * sign
        sign = -sign
    return acc


def mat_inverse(a: Mat) -> Mat:
    """Adjugate divided by determinant; the determinant must be a unit."""
    r = len(a)
    if r == 0:
        return a
    det_inv = determinant(a).inverse()
    if r == 1:
        return ((det_inv,),)
    cof = []
    for i in range(r):
        row = []
        for j in range(r):
            minor = tuple(
                tuple(x for jj, x in enumerate(rr) if jj != j)
                for ii, rr in enumerate(a)
                if ii != i
            )
            sign = 1 if (i + j) % 2 == 0 else -1
            row.append(determinant(minor) * sign)
        cof.append(row)
    # adjugate = transpose of cofactors
    return tuple(
        tuple(cof[j][i] * det_inv for j in range(r)) for i in range(r)
    )


def mat_max_abs_degree(a: Mat) -> int:
    return max((x.max_abs_degree() for row in a for x in row), default=0)


def mat_str(a: Mat) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in a) + "]"
