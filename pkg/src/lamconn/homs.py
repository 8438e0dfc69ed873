"""Ring homomorphisms given on generators, their interpolation, and the
universal derivation with the eps*d(eps) = 0 normalization."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionViolated, RingMismatch, SourceMismatch, SquareZeroViolation
from .rings import Ring, RingElement


class RingHom:
    """A homomorphism determined by generator images.

    Validity is checked eagerly: every inverted source variable must map to a
    unit (single-term body on inverted target variables, plus square-zero
    corrections), and every square-zero source generator must map to an
    element whose square is zero.
    """

    __slots__ = ("source", "target", "images", "_inverses")

    def __init__(self, source: Ring, target: Ring, images: dict[str, RingElement]):
        if set(images) != set(source.generators):
            missing = set(source.generators) - set(images)
            extra = set(images) - set(source.generators)
            raise RingMismatch(
                f"generator images mismatch (missing {sorted(missing)}, extra {sorted(extra)})"
            )
        self.source = source
        self.target = target
        self.images = {g: images[g] for g in source.generators}
        self._inverses: dict[str, RingElement] = {}
        for g, img in self.images.items():
            if img.ring != target:
                raise RingMismatch(f"image of {g} lies in {img.ring}, not {target}")
            if g in source.inverted:
                self._inverses[g] = img.inverse()  # raises if not a unit
            if source.is_nilpotent_gen(g):
                if not (img * img).is_zero():
                    raise RingMismatch(f"image of square-zero generator {g} has nonzero square")

    def __call__(self, elem: RingElement) -> RingElement:
        if elem.ring != self.source:
            raise RingMismatch(f"element ring {elem.ring} is not the hom source {self.source}")
        gens = self.source.generators
        out = self.target.zero()
        cache: dict[tuple[str, int], RingElement] = {}
        for exps, coeff in elem.terms.items():
            term = self.target.const(coeff)
            for name, k in zip(gens, exps):
                if k == 0:
                    continue
                key = (name, k)
                p = cache.get(key)
                if p is None:
                    base = self.images[name] if k > 0 else self._inverses[name]
                    p = base ** abs(k)
                    cache[key] = p
                term = term * p
            out = out + term
        return out

    def matrix(self, rows):
        """Apply entrywise to a matrix (tuple of tuples of elements)."""
        return tuple(tuple(self(x) for x in row) for row in rows)

    def compose(self, inner: "RingHom") -> "RingHom":
        """self after inner."""
        if inner.target != self.source:
            raise SourceMismatch("composition rings do not match")
        return RingHom(
            inner.source, self.target, {g: self(img) for g, img in inner.images.items()}
        )

    def equal_on_generators(self, other: "RingHom") -> bool:
        return (
            self.source == other.source
            and self.target == other.target
            and all(self.images[g] == other.images[g] for g in self.source.generators)
        )

    def __repr__(self):
        ims = ", ".join(f"{g} -> {img}" for g, img in self.images.items())
        return f"RingHom({self.source} -> {self.target}; {ims})"


def identity_hom(ring: Ring) -> RingHom:
    return RingHom(ring, ring, {g: ring.var(g) for g in ring.generators})


def inclusion_hom(source: Ring, target: Ring) -> RingHom:
    """Source generators must exist verbatim in the target."""
    return RingHom(source, target, {g: target.var(g) for g in source.generators})


def hom_from_images(source: Ring, target: Ring, **images) -> RingHom:
    """Convenience constructor; unspecified square-zero generators map to
    themselves when the name exists in the target."""
    full = dict(images)
    for g in source.generators:
        if g not in full and g in target.generators:
            full[g] = target.var(g)
    return RingHom(source, target, full)


def _require_parallel(f0: RingHom, f1: RingHom):
    if f0.source != f1.source or f0.target != f1.target:
        raise SourceMismatch("homomorphisms do not share source and target")


def hom_square_zero_close(f0: RingHom, f1: RingHom) -> bool:
    """True iff every generator difference (f1 - f0)(g) has zero body."""
    _require_parallel(f0, f1)
    return all(
        (f1.images[g] - f0.images[g]).body().is_zero() for g in f0.source.generators
    )


def _check_square_zero_pairs(homs: list[RingHom]):
    """All pairwise generator differences must have zero body and pairwise
    vanishing products; this is what the interpolation lemma consumes."""
    gens = homs[0].source.generators
    diffs = []
    for i in range(len(homs)):
        for j in range(i + 1, len(homs)):
            for g in gens:
                d = homs[i].images[g] - homs[j].images[g]
                if not d.body().is_zero():
                    raise SquareZeroViolation(
                        f"difference at generator {g} has nonzero body: {d.body()}"
                    )
                diffs.append(d)
    for i in range(len(diffs)):
        for j in range(i, len(diffs)):
            if not (diffs[i] * diffs[j]).is_zero():
                raise SquareZeroViolation(
                    "generator differences do not lie in a common square-zero ideal: "
                    f"({diffs[i]}) * ({diffs[j]}) = {diffs[i] * diffs[j]}"
                )


def hom_affine_combination(pairs: list[tuple[Fraction, RingHom]]) -> RingHom:
    """sum c_i f_i with sum c_i = 1; the f_i must be pairwise square-zero close."""
    total = sum(c for c, _ in pairs)
    if total != 1:
        raise PreconditionViolated(f"combination coefficients sum to {total}, not 1")
    homs = [f for _, f in pairs]
    for f in homs[1:]:
        _require_parallel(homs[0], f)
    _check_square_zero_pairs(homs)
    source, target = homs[0].source, homs[0].target
    images = {}
    for g in source.generators:
        acc = target.zero()
        for c, f in pairs:
            acc = acc + f.images[g] * c
        images[g] = acc
    return RingHom(source, target, images)


def interpolate_homs(f0: RingHom, f1: RingHom, lam: Fraction) -> RingHom:
    """The homomorphism extending g -> (1-lam) f0(g) + lam f1(g)."""
    lam = Fraction(lam)
    return hom_affine_combination([(1 - lam, f0), (lam, f1)])


# ----------------------------------------------------------------------
# Kaehler differentials
# ----------------------------------------------------------------------


@dataclass
class KaehlerForm:
    """A 1-form sum_g coeffs[g] * d(g) over a ring.

    For a square-zero generator e the relation e*de = 0 holds (char 0), so the
    coefficient of de is normalized modulo e: any term containing e is dropped.
    """

    ring: Ring
    coeffs: dict[str, RingElement]

    def __post_init__(self):
        normalized = {}
        for g, c in self.coeffs.items():
            if c.ring != self.ring:
                raise RingMismatch("form coefficient in the wrong ring")
            if self.ring.is_nilpotent_gen(g):
                c = _drop_generator(c, g)
            if not c.is_zero():
                normalized[g] = c
        self.coeffs = normalized

    def coefficient(self, g: str) -> RingElement:
        return self.coeffs.get(g, self.ring.zero())

    def __add__(self, other: "KaehlerForm") -> "KaehlerForm":
        if other.ring != self.ring:
            raise RingMismatch("forms over different rings")
        keys = set(self.coeffs) | set(other.coeffs)
        return KaehlerForm(
            self.ring, {g: self.coefficient(g) + other.coefficient(g) for g in keys}
        )

    def __sub__(self, other: "KaehlerForm") -> "KaehlerForm":
        return self + (other * -1)

    def __mul__(self, elem) -> "KaehlerForm":
        return KaehlerForm(self.ring, {g: c * elem for g, c in self.coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, KaehlerForm)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*d{g}" for g, c in sorted(self.coeffs.items()))


def _drop_generator(elem: RingElement, name: str) -> RingElement:
    i = elem.ring.index(name)
    return RingElement(
        elem.ring, {e: c for e, c in elem.terms.items() if e[i] == 0}, _checked=True
    )


def kahler_d(elem: RingElement) -> KaehlerForm:
    """Universal derivation d: coefficients are formal partials, with the
    d(eps)-coefficients reduced modulo eps."""
    return KaehlerForm(
        elem.ring, {g: elem.partial(g) for g in elem.ring.generators}
    )
