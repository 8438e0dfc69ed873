"""Windowed exact Cech cohomology on 1-dimensional covers.

Degrees are truncated to a window, but images of the differentials are never
projected: domains are enlarged by the data's degree spread and quotient
dimensions computed as dim C_w - dim(C_w meet im), which keeps boundary
artifacts out. Every public dimension is recomputed on a window widened by 2
(the saturation check) and a mismatch is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bundles import HiggsBundleData, VectorBundle
from .errors import UnsupportedCover, WindowNotSaturated
from .exactla import (
    Vec,
    dim_intersection,
    echelon_of,
    nullspace,
    quotient_representatives,
)
from .matrices import (
    Mat,
    mat_inverse,
    mat_max_abs_degree,
    mat_mul,
    mat_scale,
    mat_sub,
    zero_matrix,
)
from .rings import Ring


@dataclass(frozen=True)
class DegreeWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty degree window")

    def widen(self, n: int) -> "DegreeWindow":
        return DegreeWindow(self.lo - n, self.hi + n)

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def default_window(dmax: int, rank: int) -> DegreeWindow:
    m = dmax + rank + 4
    return DegreeWindow(-m, m)


def _chart_degrees(ring: Ring, lo: int, hi: int) -> range:
    v = ring.variables[0]
    if v in ring.inverted:
        return range(lo, hi + 1)
    return range(0, hi + 1)


def _mat_entries_to_vec(tag: str, idx: int, m: Mat, out: Vec) -> None:
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            for exps, c in x.terms.items():
                key = (tag, idx, i, j, exps[0])
                nv = out.get(key, 0) + c
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)


class HiggsComplex:
    """Precomputed transition/field data for the ad(E) Cech complexes of a
    Higgs bundle over 1-dimensional charts."""

    def __init__(self, h: HiggsBundleData, flip_sign: bool = False):
        self.h = h
        self.cover = h.cover
        self.rank = h.rank
        self.sign = Fraction(-1 if flip_sign else 1)
        for chart in self.cover.charts:
            if len(chart.ring.variables) != 1:
                raise UnsupportedCover("cohomology needs 1-dimensional charts")
        self.charts = list(self.cover.chart_names())
        self.pairs = self.cover.pair_keys()
        self.pair_data = {}
        for key in self.pairs:
            a, b = key
            ov = self.cover.overlap(a, b)
            g = h.bundle.transitions[key]
            g_inv = mat_inverse(g)
            jac_ba = self.cover.jacobian(b, a)  # d x_b / d x_a on the overlap
            phi_loc = ov.restrictions[a].matrix(h.field_matrix(a))
            self.pair_data[key] = (ov, g, g_inv, jac_ba, phi_loc)
        self.phi = {c: h.field_matrix(c) for c in self.charts}
        self._columns_cache: dict = {}

    # -- degree bookkeeping ---------------------------------------------

    def data_degree(self) -> int:
        d = 0
        for key in self.pairs:
            ov, g, g_inv, jac, phi_loc = self.pair_data[key]
            d = max(d, mat_max_abs_degree(g), mat_max_abs_degree(g_inv),
                    jac.max_abs_degree(), mat_max_abs_degree(phi_loc))
            for name, hom in ov.restrictions.items():
                for img in hom.images.values():
                    d = max(d, img.max_abs_degree())
        for c in self.charts:
            d = max(d, mat_max_abs_degree(self.phi[c]))
        return d

    def shift_margin(self) -> int:
        return 2 * self.data_degree() + 2

    def window_for(self, extra_degree: int = 0) -> DegreeWindow:
        return default_window(self.data_degree() + extra_degree, self.rank)

    # -- symbolic differentials -----------------------------------------

    def delta0(self, u: dict[str, Mat]) -> dict[tuple[str, str], Mat]:
        """(delta u)_{ab} = g r_b(u_b) g^-1 - r_a(u_a), in the a-frame."""
        out = {}
        for key in self.pairs:
            a, b = key
            ov, g, g_inv, _, _ = self.pair_data[key]
            ub = ov.restrictions[b].matrix(u[b])
            ua = ov.restrictions[a].matrix(u[a])
            out[key] = mat_sub(mat_mul(g, mat_mul(ub, g_inv)), ua)
        return out

    def theta_ad(self, u: dict[str, Mat]) -> dict[str, Mat]:
        """theta^ad(u) = phi u - u phi per chart (times the debug sign)."""
        out = {}
        for c in self.charts:
            phi = self.phi[c]
            out[c] = mat_scale(mat_sub(mat_mul(phi, u[c]), mat_mul(u[c], phi)), self.sign)
        return out

    def m_theta(self, key: tuple[str, str], s: Mat) -> Mat:
        """m_theta(s) = s Phi - Phi s on the overlap (times the debug sign)."""
        _, _, _, _, phi_loc = self.pair_data[key]
        return mat_scale(mat_sub(mat_mul(s, phi_loc), mat_mul(phi_loc, s)), self.sign)

    def convert_t(self, key: tuple[str, str], t_b: Mat) -> Mat:
        """Express the chart-b form coefficient in the a-frame and
        a-coordinate: g r_b(t_b) g^-1 * (d x_b / d x_a)."""
        a, b = key
        ov, g, g_inv, jac_ba, _ = self.pair_data[key]
        return mat_scale(mat_mul(g, mat_mul(ov.restrictions[b].matrix(t_b), g_inv)), jac_ba)

    def condition2_residual(self, key: tuple[str, str], s: Mat, t: dict[str, Mat]) -> Mat:
        """m_theta(s_ab) - t_a + t_b (a-frame); zero iff condition (2)."""
        a, b = key
        ov = self.pair_data[key][0]
        ta = ov.restrictions[a].matrix(t[a])
        tb = self.convert_t(key, t[b])
        return mat_sub(mat_sub(self.m_theta(key, s), ta), mat_scale(tb, -1))

    def delta1_c2(self, s: dict[tuple[str, str], Mat]) -> dict[tuple[str, str, str], Mat]:
        """(delta s)_{abc} = g_ab s_bc g_ab^-1 - s_ac + s_ab over the triple."""
        out = {}
        for tk in self.cover.triple_keys():
            a, b, c = tk
            tr = self.cover.triples[tk]
            g_ab = tr.from_pair[(a, b)].matrix(self.pair_data[(a, b)][1])
            g_ab_inv = tr.from_pair[(a, b)].matrix(self.pair_data[(a, b)][2])
            s_ab = tr.from_pair[(a, b)].matrix(s[(a, b)])
            s_bc = tr.from_pair[(b, c)].matrix(s[(b, c)])
            s_ac = tr.from_pair[(a, c)].matrix(s[(a, c)])
            conv = mat_mul(g_ab, mat_mul(s_bc, g_ab_inv))
            out[tk] = mat_sub(mat_sub(conv, s_ac), mat_scale(s_ab, -1))
        return out

    # -- basis builders ---------------------------------------------------

    def zero_u(self) -> dict[str, Mat]:
        return {
            c: zero_matrix(self.cover.chart(c).ring, self.rank) for c in self.charts
        }

    def u_basis_elem(self, chart: str, i: int, j: int, k: int) -> dict[str, Mat]:
        u = self.zero_u()
        ring = self.cover.chart(chart).ring
        m = [list(row) for row in u[chart]]
        m[i][j] = ring.monomial(1, {ring.variables[0]: k})
        u[chart] = tuple(tuple(row) for row in m)
        return u

    def d0_column(self, chart: str, i: int, j: int, k: int) -> Vec:
        u = self.u_basis_elem(chart, i, j, k)
        vec: Vec = {}
        d = self.delta0(u)
        for idx, key in enumerate(self.pairs):
            _mat_entries_to_vec("c1", idx, d[key], vec)
        th = self.theta_ad(u)
        for idx, c in enumerate(self.charts):
            _mat_entries_to_vec("t0", idx, th[c], vec)
        return vec

    def d0_columns(self, window: DegreeWindow, margin: int):
        cache_key = (window.lo, window.hi, margin)
        hit = self._columns_cache.get(cache_key)
        if hit is not None:
            return hit
        cols, meta = [], []
        for ci, c in enumerate(self.charts):
            ring = self.cover.chart(c).ring
            for k in _chart_degrees(ring, window.lo - margin, window.hi + margin):
                for i in range(self.rank):
                    for j in range(self.rank):
                        cols.append(self.d0_column(c, i, j, k))
                        meta.append((c, i, j, k))
        self._columns_cache[cache_key] = (cols, meta)
        return cols, meta

    def d1_domain_and_columns(self, window: DegreeWindow):
        """Windowed (s, t) basis and the corresponding d1 columns."""
        cols, meta, unit_keys = [], [], []
        for pi, key in enumerate(self.pairs):
            ov = self.pair_data[key][0]
            for k in window.degrees():
                for i in range(self.rank):
                    for j in range(self.rank):
                        s = {
                            kk: zero_matrix(self.pair_data[kk][0].ring, self.rank)
                            for kk in self.pairs
                        }
                        m = [list(row) for row in s[key]]
                        m[i][j] = ov.ring.monomial(1, {ov.ring.variables[0]: k})
                        s[key] = tuple(tuple(row) for row in m)
                        vec: Vec = {}
                        for ti, tk in enumerate(self.cover.triple_keys()):
                            _mat_entries_to_vec("c2", ti, self.delta1_c2(s)[tk], vec)
                        for qi, qk in enumerate(self.pairs):
                            _mat_entries_to_vec(
                                "t1", qi, self.m_theta(qk, s[qk]), vec
                            )
                        cols.append(vec)
                        meta.append(("s", key, i, j, k))
                        unit_keys.append(("c1", pi, i, j, k))
        for ci, c in enumerate(self.charts):
            ring = self.cover.chart(c).ring
            for k in _chart_degrees(ring, window.lo, window.hi):
                for i in range(self.rank):
                    for j in range(self.rank):
                        t = self.zero_u()
                        m = [list(row) for row in t[c]]
                        m[i][j] = ring.monomial(1, {ring.variables[0]: k})
                        t[c] = tuple(tuple(row) for row in m)
                        vec = {}
                        for qi, qk in enumerate(self.pairs):
                            a, b = qk
                            ov = self.pair_data[qk][0]
                            contrib = zero_matrix(ov.ring, self.rank)
                            if a == c:
                                contrib = mat_scale(ov.restrictions[a].matrix(t[c]), -1)
                            if b == c:
                                contrib = mat_sub(contrib, mat_scale(self.convert_t(qk, t[c]), -1))
                            _mat_entries_to_vec("t1", qi, contrib, vec)
                        cols.append(vec)
                        meta.append(("t", c, i, j, k))
                        unit_keys.append(("t0", ci, i, j, k))
        return cols, meta, unit_keys


# strong references keep ids valid for the cache lifetime
_COMPLEX_CACHE: dict[tuple[int, bool], tuple[HiggsBundleData, "HiggsComplex"]] = {}


def higgs_complex_for(h: HiggsBundleData, flip_sign: bool = False) -> HiggsComplex:
    key = (id(h), flip_sign)
    hit = _COMPLEX_CACHE.get(key)
    if hit is not None and hit[0] is h:
        return hit[1]
    cplx = HiggsComplex(h, flip_sign)
    _COMPLEX_CACHE[key] = (h, cplx)
    return cplx


@dataclass
class HyperResult:
    h0: int
    h1: int
    h2: int | None  # computed on 2-chart covers only
    representatives: list  # list of (s: dict pair -> Mat, t: dict chart -> Mat)
    window: DegreeWindow

    def euler(self) -> int:
        if self.h2 is None:
            raise UnsupportedCover("H^2 is computed on 2-chart covers only")
        return self.h0 - self.h1 + self.h2


def _combo_to_domain_vec(combo: dict[int, Fraction], unit_keys: list) -> Vec:
    return {unit_keys[i]: c for i, c in combo.items() if c}


def _hyper_dims_once(cplx: HiggsComplex, window: DegreeWindow) -> HyperResult:
    margin = cplx.shift_margin()
    # H^0: kernel of d0 on the windowed chart domain
    cols0_win, _ = cplx.d0_columns(window, 0)
    h0 = len(nullspace(cols0_win))

    # H^1: windowed kernel of d1 modulo the image of d0 (enlarged domain)
    cols1, meta1, unit_keys = cplx.d1_domain_and_columns(window)
    kernel_combos = nullspace(cols1)
    kernel_vecs = [_combo_to_domain_vec(c, unit_keys) for c in kernel_combos]
    cols0, meta0 = cplx.d0_columns(window, margin)
    im_echelon = echelon_of(cols0)
    reps_vecs = quotient_representatives(im_echelon, kernel_vecs)
    h1 = len(reps_vecs)

    # H^2 (2-chart covers): cokernel of d1 on the windowed t1 space
    if len(cplx.charts) == 2:
        cols1_big, _, _ = cplx.d1_domain_and_columns(window.widen(margin))
        im1 = echelon_of(cols1_big)
        c2_keys = [
            ("t1", 0, i, j, k)
            for k in window.degrees()
            for i in range(cplx.rank)
            for j in range(cplx.rank)
        ]
        unit_vecs = [{key: Fraction(1)} for key in c2_keys]
        inter = dim_intersection(im1, unit_vecs, len(unit_vecs))
        h2 = len(c2_keys) - inter
    else:
        h2 = None  # computed on 2-chart covers only

    reps = [_vec_to_cochain(cplx, v) for v in reps_vecs]
    return HyperResult(h0, h1, h2, reps, window)


def _vec_to_cochain(cplx: HiggsComplex, vec: Vec):
    s = {
        key: zero_matrix(cplx.pair_data[key][0].ring, cplx.rank) for key in cplx.pairs
    }
    t = cplx.zero_u()
    s_work = {key: [list(row) for row in s[key]] for key in s}
    t_work = {c: [list(row) for row in t[c]] for c in t}
    for key, c in vec.items():
        tag, idx, i, j, k = key
        if tag == "c1":
            pk = cplx.pairs[idx]
            ring = cplx.pair_data[pk][0].ring
            s_work[pk][i][j] = s_work[pk][i][j] + ring.monomial(c, {ring.variables[0]: k})
        elif tag == "t0":
            ch = cplx.charts[idx]
            ring = cplx.cover.chart(ch).ring
            t_work[ch][i][j] = t_work[ch][i][j] + ring.monomial(c, {ring.variables[0]: k})
        else:  # pragma: no cover - kernel vectors live in the domain space
            raise AssertionError(f"unexpected key {key}")
    s = {k: tuple(tuple(row) for row in m) for k, m in s_work.items()}
    t = {k: tuple(tuple(row) for row in m) for k, m in t_work.items()}
    return s, t


def hyper_dims(
    h: HiggsBundleData,
    window: DegreeWindow | None = None,
    *,
    flip_sign: bool = False,
    saturate: bool = True,
) -> HyperResult:
    """(H^0, H^1, H^2) of the two-term Higgs deformation complex, with basis
    representatives for H^1. Saturation-guarded."""
    cplx = higgs_complex_for(h, flip_sign)
    window = window or cplx.window_for()
    res = _hyper_dims_once(cplx, window)
    if saturate:
        res_wide = _hyper_dims_once(cplx, window.widen(2))
        if (res.h0, res.h1, res.h2) != (res_wide.h0, res_wide.h1, res_wide.h2):
            raise WindowNotSaturated(
                (res.h0, res.h1, res.h2), (res_wide.h0, res_wide.h1, res_wide.h2)
            )
    return res


# ----------------------------------------------------------------------
# Sheaf cohomology of a vector bundle (column-vector sections)
# ----------------------------------------------------------------------


class SheafComplex:
    def __init__(self, bundle: VectorBundle):
        self.bundle = bundle
        self.cover = bundle.cover
        self.rank = bundle.rank
        self.charts = list(self.cover.chart_names())
        self.pairs = self.cover.pair_keys()
        self.pair_data = {}
        for key in self.pairs:
            ov = self.cover.overlap(*key)
            g = bundle.transitions[key]
            self.pair_data[key] = (ov, g, mat_inverse(g))

    def data_degree(self) -> int:
        d = 0
        for key in self.pairs:
            ov, g, g_inv = self.pair_data[key]
            d = max(d, mat_max_abs_degree(g), mat_max_abs_degree(g_inv))
            for hom in ov.restrictions.values():
                for img in hom.images.values():
                    d = max(d, img.max_abs_degree())
        return d

    def shift_margin(self) -> int:
        return 2 * self.data_degree() + 2

    def window_for(self) -> DegreeWindow:
        return default_window(self.data_degree(), self.rank)

    def delta0_column(self, chart: str, i: int, k: int) -> Vec:
        vec: Vec = {}
        ring = self.cover.chart(chart).ring
        x = ring.monomial(1, {ring.variables[0]: k})
        for idx, key in enumerate(self.pairs):
            a, b = key
            ov, g, _ = self.pair_data[key]
            contrib = None
            if a == chart:
                r = ov.restrictions[a](x)
                contrib = [
                    (r * Fraction(-1) if row == i else ov.ring.zero())
                    for row in range(self.rank)
                ]
            if b == chart:
                r = ov.restrictions[b](x)
                col = [g[row][i] * r for row in range(self.rank)]
                if contrib is None:
                    contrib = col
                else:
                    contrib = [p + q for p, q in zip(contrib, col)]
            if contrib is None:
                continue
            for row, el in enumerate(contrib):
                for exps, c in el.terms.items():
                    key2 = ("c1", idx, row, 0, exps[0])
                    nv = vec.get(key2, 0) + c
                    if nv:
                        vec[key2] = nv
                    else:
                        vec.pop(key2, None)
        return vec

    def d0_columns(self, window: DegreeWindow, margin: int):
        cols, meta = [], []
        for c in self.charts:
            ring = self.cover.chart(c).ring
            for k in _chart_degrees(ring, window.lo - margin, window.hi + margin):
                for i in range(self.rank):
                    cols.append(self.delta0_column(c, i, k))
                    meta.append((c, i, k))
        return cols, meta

    def d1_domain_and_columns(self, window: DegreeWindow):
        cols, unit_keys = [], []
        for pi, key in enumerate(self.pairs):
            ov = self.pair_data[key][0]
            for k in window.degrees():
                for i in range(self.rank):
                    vec: Vec = {}
                    for ti, tk in enumerate(self.cover.triple_keys()):
                        a, b, c = tk
                        tr = self.cover.triples[tk]
                        x = ov.ring.monomial(1, {ov.ring.variables[0]: k})
                        sec = [
                            x if row == i else ov.ring.zero() for row in range(self.rank)
                        ]
                        comp = [tr.ring.zero() for _ in range(self.rank)]
                        if key == (b, c):
                            g_ab = tr.from_pair[(a, b)].matrix(self.pair_data[(a, b)][1])
                            moved = [tr.from_pair[key](v) for v in sec]
                            comp = [
                                sum(
                                    (g_ab[row][m] * moved[m] for m in range(self.rank)),
                                    start=tr.ring.zero(),
                                )
                                for row in range(self.rank)
                            ]
                        elif key == (a, c):
                            comp = [-tr.from_pair[key](v) for v in sec]
                        elif key == (a, b):
                            comp = [tr.from_pair[key](v) for v in sec]
                        for row, el in enumerate(comp):
                            for exps, cc in el.terms.items():
                                k2 = ("c2", ti, row, 0, exps[0])
                                nv = vec.get(k2, 0) + cc
                                if nv:
                                    vec[k2] = nv
                                else:
                                    vec.pop(k2, None)
                    cols.append(vec)
                    unit_keys.append(("c1", pi, i, 0, k))
        return cols, unit_keys


@dataclass
class SheafResult:
    h0: int
    h1: int
    representatives: list
    window: DegreeWindow


def _sheaf_dims_once(cplx: SheafComplex, window: DegreeWindow) -> SheafResult:
    margin = cplx.shift_margin()
    cols0_win, _ = cplx.d0_columns(window, 0)
    h0 = len(nullspace(cols0_win))
    cols0, _ = cplx.d0_columns(window, margin)
    im = echelon_of(cols0)
    if cplx.cover.triple_keys():
        cols1, unit_keys = cplx.d1_domain_and_columns(window)
        kernel = [
            _combo_to_domain_vec(c, unit_keys) for c in nullspace(cols1)
        ]
        reps = quotient_representatives(im, kernel)
    else:
        unit_vecs = [
            {("c1", pi, i, 0, k): Fraction(1)}
            for pi in range(len(cplx.pairs))
            for k in window.degrees()
            for i in range(cplx.rank)
        ]
        reps = quotient_representatives(im, unit_vecs)
    return SheafResult(h0, len(reps), reps, window)


def sheaf_dims(
    bundle: VectorBundle, window: DegreeWindow | None = None, *, saturate: bool = True
) -> SheafResult:
    cplx = SheafComplex(bundle)
    window = window or cplx.window_for()
    res = _sheaf_dims_once(cplx, window)
    if saturate:
        wide = _sheaf_dims_once(cplx, window.widen(2))
        if (res.h0, res.h1) != (wide.h0, wide.h1):
            raise WindowNotSaturated((res.h0, res.h1), (wide.h0, wide.h1))
    return res


def cech_h1(target, window: DegreeWindow | None = None, *, flip_sign: bool = False):
    """Dimension and basis of H^1 (vector bundle) or of the first
    hypercohomology of the Higgs complex (HiggsBundleData)."""
    if isinstance(target, HiggsBundleData):
        return hyper_dims(target, window, flip_sign=flip_sign)
    if isinstance(target, VectorBundle):
        return sheaf_dims(target, window)
    raise TypeError(f"cech_h1 expects a bundle or Higgs data, got {type(target)!r}")


def line_bundle_h1_monomial_count(d: int, window: DegreeWindow | None = None) -> int:
    """Independent oracle: count overlap monomials u^k missed by both chart
    images, i.e. d < k < 0. Pure enumeration, no linear algebra."""
    window = window or default_window(abs(d), 1)
    return sum(1 for k in window.degrees() if d < k < 0)
