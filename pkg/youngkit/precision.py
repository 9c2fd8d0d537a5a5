"""Bounds on the gap of the inequality

All bounds are computed for a `YoungInstance`. The gap itself always comes
from `check_young` so that each report compares two independently computed
quantities.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Dict, List

import numpy as np

from . import settings
from .errors import ConvergenceError, PreconditionError
from .monotone import MonotoneFn
from .quadrature import ProductKernel, QuadConfig, rect_measure, region_measure
from .young import InequalityReport, YoungInstance, check_young, check_young_classical


logger = logging.getLogger("youngkit.precision")

__all__ = [
    "GapBoundReport", "bound_rectangle", "bound_minguzzi", "bound_jp", "bound_merkle",
    "check_bounds", "sampled_shape",
]

BOUND_KINDS = ("rectangle", "minguzzi", "jp_upper", "jp_lower", "merkle_max")


@dataclass
class GapBoundReport:
    """Comparison of a bounded quantity with its bound

    `value` is the bounded quantity: the gap for every kind except
    ``merkle_max``, where it is the sum of the hypograph and epigraph measures.
    ``jp_lower`` is a lower bound, every other kind an upper bound, and
    `slack` is signed so that it is nonnegative when the bound holds.
    """
    bound_kind: str
    gap: float
    value: float
    bound: float
    satisfied: bool
    slack: float
    equality: bool
    tolerance: float

    def to_dict(self) -> Dict:
        return asdict(self)


def _report(kind: str, young: InequalityReport, value: float, bound: float, equality: bool,
            extra_error: float = 0.0) -> GapBoundReport:
    tolerance = young.tolerance + extra_error
    slack = value - bound if kind == "jp_lower" else bound - value
    return GapBoundReport(
        bound_kind=kind,
        gap=young.gap,
        value=value,
        bound=bound,
        satisfied=bool(slack >= -tolerance),
        slack=slack,
        equality=bool(equality),
        tolerance=tolerance,
    )


def bound_rectangle(inst: YoungInstance, cfg: QuadConfig = None) -> GapBoundReport:
    """``gap <= |measure of [g(c), b] x [c, f(b)]|`` (corners sorted)"""
    young = check_young(inst, cfg)
    f, b, c, g_c = inst.f, inst.b, inst.c, inst.g_c
    fb = f(b)
    try:
        rect = rect_measure(inst.K, min(g_c, b), max(g_c, b), min(c, fb), max(c, fb), cfg)
    except ConvergenceError as e:
        raise e.with_context("rectangle bound")
    return _report("rectangle", young, young.gap, abs(rect.value), inst.is_equality(), rect.error_estimate)


def bound_minguzzi(f: MonotoneFn, a: float, b: float, c: float, cfg: QuadConfig = None) -> GapBoundReport:
    """``gap <= (f^{-1}(c) - b)(c - f(b))`` for ``K = 1`` and a continuous increasing `f`"""
    g_c = f.pseudo_inverse("sup")(c)
    lo, hi = min(a, g_c), max(b, g_c)
    if not f.is_strictly_increasing_on(lo, hi):
        raise PreconditionError("f must be continuous and increasing on [{}, {}]".format(lo, hi))
    young = check_young_classical(f, a, b, c, cfg)
    fb = f(b)
    bound = (g_c - b) * (c - fb)
    return _report("minguzzi", young, young.gap, bound, abs(c - fb) <= settings.c_tol)


def sampled_shape(f: MonotoneFn, lo: float, hi: float, n: int = None, tol: float = None) -> str:
    """``"affine"``, ``"convex"``, ``"concave"`` or ``"none"`` from sampled second differences"""
    if n is None:
        n = settings.shape_samples
    if tol is None:
        tol = settings.shape_tol
    values = f(np.linspace(lo, hi, n))
    second = values[2:] - 2 * values[1:-1] + values[:-2]
    scale = tol * (1 + np.max(np.abs(values)))
    convex = bool(np.all(second >= -scale))
    concave = bool(np.all(second <= scale))
    if convex and concave:
        return "affine"
    if convex:
        return "convex"
    if concave:
        return "concave"
    return "none"


def bound_jp(inst: YoungInstance, cfg: QuadConfig = None, shape: str = None) -> GapBoundReport:
    """Chord bound for a convex or concave `f`

    Let ``L`` be the chord through ``(g(c), c)`` and ``(b, f(b))``. The bound is
    the measure of the triangle between ``L`` and the level ``c``. For a convex
    `f` it bounds the gap from above when ``c <= f(b)`` and from below when
    ``c >= f(b)``; the roles are reversed for a concave `f`. Affine functions
    attain the bound.

    :param shape: ``"convex"`` or ``"concave"``; detected when `None`.
    """
    f, b, c, g_c = inst.f, inst.b, inst.c, inst.g_c
    if f.left(b) != f.right(b):
        raise PreconditionError("the chord bound needs f continuous at b={}".format(b))
    fb = f(b)
    if abs(c - fb) <= settings.c_tol:
        young = check_young(inst, cfg)
        return _report("jp_upper", young, young.gap, 0.0, True)
    lo, hi = min(g_c, b), max(g_c, b)
    # jumps_in excludes lo, so a jump at g(c) is checked separately
    if not f.is_continuous_on(lo, hi) or f.left(lo) != f.right(lo):
        raise PreconditionError("the chord bound needs f continuous on [{}, {}]".format(lo, hi))
    detected = sampled_shape(f, lo, hi)
    if shape is None:
        if detected == "none":
            raise PreconditionError("f is neither convex nor concave on [{}, {}]".format(lo, hi))
        shape = "concave" if detected == "concave" else "convex"
    elif shape not in ("convex", "concave"):
        raise ValueError("shape must be 'convex' or 'concave'")
    elif detected not in (shape, "affine"):
        raise PreconditionError("f is not {} on [{}, {}]".format(shape, lo, hi))
    young = check_young(inst, cfg)
    slope = (fb - c) / (b - g_c)

    def chord(x):
        return c + slope * (x - g_c)

    try:
        if c < fb:
            triangle = region_measure(inst.K, g_c, b, lambda x: c, chord, cfg, context="chord triangle")
        else:
            triangle = region_measure(inst.K, b, g_c, chord, lambda x: c, cfg, context="chord triangle")
    except ConvergenceError as e:
        raise e.with_context("jp bound")
    upper = (shape == "convex") == (c < fb)
    kind = "jp_upper" if upper else "jp_lower"
    return _report(kind, young, young.gap, triangle.value, detected == "affine", triangle.error_estimate)


def bound_merkle(inst: YoungInstance, cfg: QuadConfig = None) -> GapBoundReport:
    """``hyp + epi <= max(measure [a, b] x [f(a), f(b)], measure [a, g(c)] x [f(a), c])``"""
    young = check_young(inst, cfg)
    K, f, a, b, c, fa = inst.K, inst.f, inst.a, inst.b, inst.c, inst.fa
    try:
        first = rect_measure(K, a, b, fa, f(b), cfg)
        second = rect_measure(K, a, inst.g_c, fa, c, cfg)
    except ConvergenceError as e:
        raise e.with_context("merkle bound")
    total = young.rhs
    return _report("merkle_max", young, total, max(first.value, second.value), inst.is_equality(),
                   first.error_estimate + second.error_estimate)


def check_bounds(inst: YoungInstance, cfg: QuadConfig = None) -> List[GapBoundReport]:
    """Every bound that applies to the instance

    The rectangle and Merkle bounds always apply; the Minguzzi bound needs
    ``K = 1`` and a continuous increasing `f`; the chord bounds need a
    continuous `f` that is convex or concave between ``g(c)`` and ``b``.
    """
    reports = [bound_rectangle(inst, cfg)]
    if isinstance(inst.K, ProductKernel) and inst.K.is_one:
        try:
            reports.append(bound_minguzzi(inst.f, inst.a, inst.b, inst.c, cfg))
        except PreconditionError as e:
            logger.debug("minguzzi bound skipped: {}".format(e))
    try:
        reports.append(bound_jp(inst, cfg))
    except PreconditionError as e:
        logger.debug("chord bound skipped: {}".format(e))
    reports.append(bound_merkle(inst, cfg))
    return reports
