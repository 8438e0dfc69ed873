"""Explicit affine covers at desk scale: 1 to 3 charts with monomial
transition coordinates, plus square-zero extensions of a whole cover."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedCover
from .homs import RingHom
from .rings import Ring, RingElement


@dataclass(frozen=True)
class Chart:
    name: str
    ring: Ring


@dataclass(frozen=True)
class Overlap:
    """A common localization of two charts with restriction homs from both."""

    ring: Ring
    restrictions: dict[str, RingHom]  # chart name -> hom into ``ring``

    def restrict(self, chart: str, elem: RingElement) -> RingElement:
        return self.restrictions[chart](elem)


@dataclass(frozen=True)
class TripleOverlap:
    ring: Ring
    from_pair: dict[tuple[str, str], RingHom]  # ordered pair key -> hom overlap.ring -> ring


@dataclass(frozen=True)
class Cover:
    charts: tuple[Chart, ...]
    overlaps: dict[tuple[str, str], Overlap]
    triples: dict[tuple[str, str, str], TripleOverlap]

    def __post_init__(self):
        if not 1 <= len(self.charts) <= 3:
            raise UnsupportedCover("covers carry 1 to 3 charts")

    def chart(self, name: str) -> Chart:
        for c in self.charts:
            if c.name == name:
                return c
        raise KeyError(name)

    def chart_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.charts)

    def pair_keys(self) -> list[tuple[str, str]]:
        names = self.chart_names()
        return [
            (names[i], names[j])
            for i in range(len(names))
            for j in range(i + 1, len(names))
        ]

    def triple_keys(self) -> list[tuple[str, str, str]]:
        names = self.chart_names()
        if len(names) < 3:
            return []
        return [tuple(names)]

    def overlap(self, a: str, b: str) -> Overlap:
        key = self.pair_key(a, b)
        return self.overlaps[key]

    def pair_key(self, a: str, b: str) -> tuple[str, str]:
        names = self.chart_names()
        if names.index(a) > names.index(b):
            a, b = b, a
        return (a, b)

    def coordinate(self, chart: str) -> str:
        ring = self.chart(chart).ring
        if len(ring.variables) != 1:
            raise UnsupportedCover("this operation needs 1-dimensional charts")
        return ring.variables[0]

    def jacobian(self, a: str, b: str) -> RingElement:
        """d x_a / d x_b as an element of the overlap ring (1-dim charts)."""
        ov = self.overlap(a, b)
        w = ov.ring.variables[0]
        num = ov.restrict(a, self.chart(a).ring.var(self.coordinate(a))).partial(w)
        den = ov.restrict(b, self.chart(b).ring.var(self.coordinate(b))).partial(w)
        return num * den.inverse()

    def with_nilpotents(self, names: tuple[str, ...]) -> "Cover":
        cached = _EXTENSION_CACHE.get((id(self), names))
        if cached is not None and cached[0] is self:
            return cached[1]

        def extend_ring(r: Ring) -> Ring:
            return r.with_nilpotents(names)

        def extend_hom(h: RingHom, src: Ring, tgt: Ring) -> RingHom:
            images = {g: img.into(tgt) for g, img in h.images.items()}
            for n in names:
                images[n] = tgt.var(n)
            return RingHom(src, tgt, images)

        charts = tuple(Chart(c.name, extend_ring(c.ring)) for c in self.charts)
        overlaps = {}
        for key, ov in self.overlaps.items():
            ring = extend_ring(ov.ring)
            restrictions = {
                name: extend_hom(h, extend_ring(h.source), ring)
                for name, h in ov.restrictions.items()
            }
            overlaps[key] = Overlap(ring, restrictions)
        triples = {}
        for key, tr in self.triples.items():
            ring = extend_ring(tr.ring)
            triples[key] = TripleOverlap(
                ring,
                {
                    pk: extend_hom(h, extend_ring(h.source), ring)
                    for pk, h in tr.from_pair.items()
                },
            )
        out = Cover(charts, overlaps, triples)
        _EXTENSION_CACHE[(id(self), names)] = (self, out)
        return out


# keyed by (id, names) with a strong reference to the source cover, so ids
# stay valid for the cache lifetime
_EXTENSION_CACHE: dict[tuple[int, tuple[str, ...]], tuple["Cover", "Cover"]] = {}


def affine_cover(ring: Ring, name: str = "main") -> Cover:
    """A single affine chart; no overlap data."""
    return Cover((Chart(name, ring),), {}, {})


def proj_line_cover() -> Cover:
    """The standard 2-chart cover: Q[u], Q[v] glued along Q[u, u^-1], v = u^-1."""
    qu = Ring(("u",))
    qv = Ring(("v",))
    loc = Ring(("u",), inverted=frozenset({"u"}))
    r_u = RingHom(qu, loc, {"u": loc.var("u")})
    r_v = RingHom(qv, loc, {"v": loc.parse("u^-1")})
    return Cover(
        (Chart("u", qu), Chart("v", qv)),
        {("u", "v"): Overlap(loc, {"u": r_u, "v": r_v})},
        {},
    )


def proj_line_cover_redundant() -> Cover:
    """A 3-chart refinement of the projective line: the two standard charts
    plus the torus chart w = u. All transitions stay monomial."""
    qu = Ring(("u",))
    qv = Ring(("v",))
    qw = Ring(("w",), inverted=frozenset({"w"}))
    loc = Ring(("u",), inverted=frozenset({"u"}))
    r_u = RingHom(qu, loc, {"u": loc.var("u")})
    r_v = RingHom(qv, loc, {"v": loc.parse("u^-1")})
    r_w = RingHom(qw, loc, {"w": loc.var("u")})
    overlaps = {
        ("u", "v"): Overlap(loc, {"u": r_u, "v": r_v}),
        ("u", "w"): Overlap(loc, {"u": r_u, "w": r_w}),
        ("v", "w"): Overlap(loc, {"v": r_v, "w": r_w}),
    }
    ident = RingHom(loc, loc, {"u": loc.var("u")})
    triples = {
        ("u", "v", "w"): TripleOverlap(
            loc,
            {("u", "v"): ident, ("u", "w"): ident, ("v", "w"): ident},
        )
    }
    return Cover((Chart("u", qu), Chart("v", qv), Chart("w", qw)), overlaps, triples)
