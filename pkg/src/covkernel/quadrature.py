"""Globally adaptive Gauss-Legendre quadrature for integrands given by
their logarithm.

Integrands along the contours range over hundreds of orders of magnitude,
so callers supply log(integrand * dz/dt) and the engine keeps a common
scale factor exp(log_scale) outside every sum.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import PrecisionError

GL_ORDER = 16
MAX_DEPTH = 14
DEFAULT_RTOL = 1e-10
_RESCALE_MARGIN = 600.0

_X, _W = np.polynomial.legendre.leggauss(GL_ORDER)


@dataclass
class LogSegment:
    """Integral of exp(log_f(t)) over [lo, hi] split into ``panels`` pieces."""

    name: str
    log_f: Callable[[np.ndarray], np.ndarray]
    lo: float
    hi: float
    panels: int = 1
    sign: float = 1.0


@dataclass
class QuadResult:
    value: complex
    error: float
    log_scale: float
    segments: dict = field(default_factory=dict)
    segment_errors: dict = field(default_factory=dict)
    evaluations: int = 0

    def scaled(self, name=None) -> complex:
        return self.value if name is None else self.segments[name]

    @property
    def unscaled(self) -> complex:
        """value * exp(log_scale); may overflow for large scales."""
        return self.value * math.exp(self.log_scale) if self.value else 0j


def _nodes(lo, hi):
    """GL nodes on [lo, mid], [mid, hi] and [lo, hi] for arrays of panels."""
    mid = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    hh = 0.5 * h
    t_left = (0.5 * (lo + mid))[:, None] + hh[:, None] * _X
    t_right = (0.5 * (mid + hi))[:, None] + hh[:, None] * _X
    t_whole = mid[:, None] + h[:, None] * _X
    return t_left, t_right, t_whole, h, hh


class _State:
    def __init__(self, segments):
        self.segments = segments
        self.scale = None
        self.evals = 0

    def eval_panels(self, seg_idx, lo, hi):
        seg = self.segments[seg_idx]
        tl, tr, tw, h, hh = _nodes(lo, hi)
        k = lo.size
        lg = seg.log_f(np.concatenate([tl, tr, tw], axis=1).ravel()).reshape(k, 3 * GL_ORDER)
        self.evals += lg.size
        lg = np.where(np.isnan(lg), -np.inf, lg)
        return lg, h, hh

    def sums(self, lg, h, hh, sign):
        with np.errstate(over="ignore", invalid="ignore"):
            e = np.exp(lg - self.scale)
        e = np.where(np.isfinite(lg), e, 0.0)
        left = (e[:, :GL_ORDER] @ _W) * hh
        right = (e[:, GL_ORDER:2 * GL_ORDER] @ _W) * hh
        whole = (e[:, 2 * GL_ORDER:] @ _W) * h
        fine = sign * (left + right)
        err = np.abs(sign * whole - fine)
        return fine, err


def integrate_log(segments, rtol: float = DEFAULT_RTOL, atol: float = 0.0,
                  max_depth: int = MAX_DEPTH, max_evals: int = 50_000_000,
                  noise: float = 0.0) -> QuadResult:
    """Sum over segments of sign * int exp(log_f(t)) dt.

    Panels are bisected largest-error-first until the total error estimate
    is below max(rtol |total|, atol) (both in units of exp(log_scale)).
    ``noise`` is the relative accuracy of a single integrand value; together
    with rounding it sets a floor noise * int |f| below which refining is
    pointless, and the returned error never drops below that floor.
    Raises PrecisionError, carrying the best estimate, when no panel can
    be refined further or the evaluation budget is spent.
    """
    st = _State(segments)
    raw = []
    for i, seg in enumerate(segments):
        edges = np.linspace(seg.lo, seg.hi, seg.panels + 1)
        lg, h, hh = st.eval_panels(i, edges[:-1], edges[1:])
        raw.append((i, edges[:-1], edges[1:], lg, h, hh))
    finite_max = [float(np.max(np.where(np.isfinite(r[3].real), r[3].real, -np.inf))) for r in raw]
    st.scale = max(finite_max)
    if not math.isfinite(st.scale):
        st.scale = 0.0
    # panel store: id -> [seg, lo, hi, depth, value, err]
    panels = {}
    heap = []
    next_id = 0

    def add(i, lo, hi, depth, lg, h, hh):
        nonlocal next_id
        val, err = st.sums(lg, h, hh, segments[i].sign)
        for j in range(lo.size):
            panels[next_id] = [i, float(lo[j]), float(hi[j]), depth, complex(val[j]), float(err[j])]
            if depth < max_depth:
                heapq.heappush(heap, (-float(err[j]), next_id))
            next_id += 1

    for i, lo, hi, lg, h, hh in raw:
        add(i, lo, hi, 0, lg, h, hh)

    def totals():
        vals = [p[4] for p in panels.values()]
        mass = math.fsum(abs(v) for v in vals)
        return (complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals)),
                math.fsum(p[5] for p in panels.values()), mass)

    total, err, mass = totals()
    # cancellation between panels limits what any refinement can achieve
    floor = lambda: (64 * np.finfo(float).eps + noise) * mass
    while err > max(rtol * abs(total), atol, floor()):
        if not heap or st.evals > max_evals:
            raise PrecisionError(
                f"quadrature tolerance not met (error {err:.3g}, value {abs(total):.3g}, "
                f"scale exp({st.scale:.6g}))",
                estimate=_finish(panels, segments, st, total, err), bound=err)
        # refine a batch of the worst panels
        target = max(rtol * abs(total), atol, floor())
        batch = []
        acc = 0.0
        while heap and (not batch or (acc < err - target and len(batch) < 4096)):
            negerr, pid = heapq.heappop(heap)
            if pid not in panels:
                continue
            batch.append(pid)
            acc += -negerr
            if -negerr < 0.01 * err / max(1, len(panels)):
                break
        by_seg = {}
        for pid in batch:
            i, lo, hi, depth, _, _ = panels.pop(pid)
            mid = 0.5 * (lo + hi)
            by_seg.setdefault(i, []).extend([(lo, mid, depth + 1), (mid, hi, depth + 1)])
        rescale = False
        for i, items in by_seg.items():
            lo = np.array([x[0] for x in items])
            hi = np.array([x[1] for x in items])
            depth = np.array([x[2] for x in items])
            lg, h, hh = st.eval_panels(i, lo, hi)
            mx = np.max(np.where(np.isfinite(lg.real), lg.real, -np.inf))
            if mx > st.scale + _RESCALE_MARGIN:
                rescale = True
            for d in np.unique(depth):
                sel = depth == d
                add(i, lo[sel], hi[sel], int(d), lg[sel], h[sel], hh[sel])
        if rescale:
            raise PrecisionError("integrand peak missed by the initial panels; "
                                 "increase the initial panel count")
        total, err, mass = totals()
    return _finish(panels, segments, st, total, max(err, floor()))


def _finish(panels, segments, st, total, err):
    seg_vals = {}
    seg_errs = {}
    order = sorted(panels.values(), key=lambda p: (p[0], p[1]))
    for i, seg in enumerate(segments):
        ps = [p for p in order if p[0] == i]
        seg_vals[seg.name] = complex(math.fsum(p[4].real for p in ps), math.fsum(p[4].imag for p in ps))
        seg_errs[seg.name] = math.fsum(p[5] for p in ps)
    total = complex(math.fsum(v.real for v in seg_vals.values()),
                    math.fsum(v.imag for v in seg_vals.values()))
    return QuadResult(total, err, st.scale, seg_vals, seg_errs, st.evals)


def integrate(f, lo, hi, panels=1, rtol=DEFAULT_RTOL, atol=0.0, max_depth=MAX_DEPTH) -> QuadResult:
    """Adaptive GL for an ordinary (not log-valued) vectorised integrand."""
    def log_f(t):
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(f(t), dtype=np.complex128))
    return integrate_log([LogSegment("main", log_f, lo, hi, panels)], rtol, atol, max_depth)
