"""Young's inequality for nondecreasing functions and kernel-weighted measures

For a kernel ``K >= 0``, a nondecreasing ``f`` and ``a < b``, ``c >= f(a)``::

    ∫_a^b ∫_{f(a)}^c K  <=  ∫_a^b ∫_{f(a)}^{f(x)} K dy dx + ∫_{f(a)}^c ∫_a^{f_sup^{-1}(y)} K dx dy

with equality exactly when ``c`` lies in ``[f(b-), f(b+)]`` (``K > 0`` a.e.).
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from . import settings
from .errors import ConfigError, ConvergenceError, DomainError, PreconditionError, UnsupportedDimensionError
from .monotone import MonotoneFn, PowerPiece
from .quadrature import (
    IntegralResult, Kernel, NKernel, ProductKernel, QuadConfig,
    epigraph_measure, hypograph_measure, integrate_1d, rect_measure, region_measure,
)


logger = logging.getLogger("youngkit.young")

__all__ = [
    "YoungInstance", "InequalityReport", "check_young", "gap_region", "check_young_classical",
    "check_gaussian_young", "check_young_ndim", "ndim_from_young",
]


@dataclass
class InequalityReport:
    """Both sides of one inequality instance, ``lhs <= rhs``

    `gap` is ``rhs - lhs``. `equality` is the verdict of the geometric
    equality condition, `equality_witness` the interval it was decided on.
    """
    kind: str
    lhs: float
    rhs: float
    lhs_error: float = 0.0
    rhs_error: float = 0.0
    equality: bool = False
    equality_witness: Optional[Tuple[float, float]] = None
    verdict_tolerance: float = 0.0
    details: Dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        return self.rhs - self.lhs

    @property
    def tolerance(self) -> float:
        return self.lhs_error + self.rhs_error + self.verdict_tolerance

    @property
    def satisfied(self) -> bool:
        """Whether ``lhs <= rhs`` holds within the combined tolerance"""
        return bool(self.gap >= -self.tolerance)

    def to_dict(self) -> Dict:
        result = asdict(self)
        result["gap"] = self.gap
        result["satisfied"] = self.satisfied
        if self.equality_witness is not None:
            result["equality_witness"] = list(self.equality_witness)
        return result


def _check_equality(report: InequalityReport, strictly_positive: bool, distance: float):
    """Compare the geometric equality verdict with the size of the numerical gap

    `distance` is how far the parameter lies from the equality set; verdicts
    closer than ``settings.strict_gray_zone`` are not cross-checked.
    """
    if not strictly_positive:
        return
    numerically_equal = abs(report.gap) <= report.tolerance
    if report.equality and not numerically_equal:
        logger.warning("{}: equality expected but the gap is {:.3g}".format(report.kind, report.gap))
    elif not report.equality and numerically_equal and distance > settings.strict_gray_zone:
        logger.warning("{}: strict inequality expected but the gap is {:.3g}".format(report.kind, report.gap))


class YoungInstance:
    """A kernel, a nondecreasing function and the parameters ``a < b``, ``c >= f(a)``"""
    def __init__(self, K: Kernel, f: MonotoneFn, a: float, b: float, c: float):
        self.K = K
        self.f = f
        self.a = float(a)
        self.b = float(b)
        self.c = float(c)
        x_lo, x_hi = f.domain
        if not self.a < self.b:
            raise DomainError("a={} must be smaller than b={}".format(a, b))
        if not (x_lo <= self.a and self.b <= x_hi):
            raise DomainError("[{}, {}] is not inside the domain of f {}".format(a, b, f.domain))
        fa = f(self.a)
        if self.c < fa:
            raise DomainError("c={} is below f(a)={}".format(c, fa))
        if self.c > f.codomain[1]:
            raise DomainError("c={} is above the range of f, max {}".format(c, f.codomain[1]))
        self.fa = fa
        self.g_c = f.pseudo_inverse("sup")(self.c)
        K.check_box(self.a, self.b, fa, max(self.c, f.right(self.b)))
        K.check_box(self.a, max(self.b, self.g_c), fa, self.c)

    @property
    def witness(self) -> Tuple[float, float]:
        """``[f(b-), f(b+)]``"""
        return self.f.left(self.b), self.f.right(self.b)

    def is_equality(self, c_tol: float = None) -> bool:
        if c_tol is None:
            c_tol = settings.c_tol
        lo, hi = self.witness
        return lo - c_tol <= self.c <= hi + c_tol

    def distance_to_equality(self) -> float:
        lo, hi = self.witness
        return max(lo - self.c, self.c - hi, 0.0)

    def with_c(self, c: float) -> "YoungInstance":
        return YoungInstance(self.K, self.f, self.a, self.b, c)

    def to_dict(self) -> Dict:
        return {"kernel": self.K.to_dict(), "f": self.f.to_dict(), "a": self.a, "b": self.b, "c": self.c}

    @staticmethod
    def from_dict(data: Dict) -> "YoungInstance":
        """Build an instance from ``{"kernel": ..., "f": ..., "a": ..., "b": ..., "c": ...}``"""
        if not isinstance(data, dict):
            raise ConfigError("instance", "expected an object")
        kernel = Kernel.from_dict(data.get("kernel", {"name": "one"}), "kernel")
        f = MonotoneFn.from_dict(data.get("f"), "f")
        params = []
        for key in ("a", "b", "c"):
            if key not in data:
                raise ConfigError(key, "missing")
            try:
                params.append(float(data[key]))
            except (TypeError, ValueError):
                raise ConfigError(key, "expected a number")
        try:
            return YoungInstance(kernel, f, *params)
        except DomainError as e:
            raise ConfigError("instance", str(e))

    def __repr__(self):
        return "YoungInstance({!r}, {!r}, a={:g}, b={:g}, c={:g})".format(
            self.K, self.f, self.a, self.b, self.c)


def _measure(name: str, func, *args) -> IntegralResult:
    try:
        return func(*args)
    except ConvergenceError as e:
        raise e.with_context(name)


def check_young(inst: YoungInstance, cfg: QuadConfig = None, verdict_tol: float = None,
                c_tol: float = None) -> InequalityReport:
    """Check the inequality on one instance

    ``lhs`` is the measure of ``[a, b] x [f(a), c]``, ``rhs`` the sum of the
    hypograph of `f` over ``[a, b]`` and its epigraph up to ``c``.

    Example
    -------
    >>> inst = YoungInstance(ProductKernel.one(), identity(0, 4), 0, 2, 3)
    >>> round(check_young(inst).gap, 10)
    0.5
    """
    if verdict_tol is None:
        verdict_tol = settings.verdict_tol
    K, f, a, b, c = inst.K, inst.f, inst.a, inst.b, inst.c
    lhs = _measure("young", rect_measure, K, a, b, inst.fa, c, cfg)
    hyp = _measure("young", hypograph_measure, K, f, a, b, cfg)
    epi = _measure("young", epigraph_measure, K, f, a, c, cfg)
    rhs = hyp + epi
    report = InequalityReport(
        kind="young",
        lhs=lhs.value,
        rhs=rhs.value,
        lhs_error=lhs.error_estimate,
        rhs_error=rhs.error_estimate,
        equality=inst.is_equality(c_tol),
        equality_witness=inst.witness,
        verdict_tolerance=verdict_tol,
        details={"hypograph": hyp.value, "epigraph": epi.value,
                 "subdivisions": lhs.subdivisions + rhs.subdivisions},
    )
    _check_equality(report, K.strictly_positive, inst.distance_to_equality())
    return report


def gap_region(inst: YoungInstance, cfg: QuadConfig = None) -> IntegralResult:
    """The gap computed directly as the measure of the region between the graph and the level ``c``

    For ``c < f(b-)`` it is ``∫_{g(c)}^b ∫_c^{f(x)} K``; for ``c > f(b+)``
    it is ``∫_{f(b+)}^c ∫_b^{g(y)} K``; otherwise it vanishes.
    """
    K, f, b, c = inst.K, inst.f, inst.b, inst.c
    left, right = inst.witness
    if left <= c <= right:
        return IntegralResult(0.0, 0.0, 0)
    try:
        if c < left:
            lo = inst.g_c
            return region_measure(K, lo, b, lambda x: c, f, cfg, f.knots_in(lo, b), context="gap region")
        g = f.pseudo_inverse("sup")
        points = [y for y in g.breakpoints if right < y < c]
        return region_measure(K, right, c, lambda y: b, g, cfg, points, outer="y", context="gap region")
    except ConvergenceError as e:
        raise e.with_context("young")


def check_young_classical(f: MonotoneFn, a: float, b: float, c: float, cfg: QuadConfig = None,
                          verdict_tol: float = None) -> InequalityReport:
    """``bc - a f(a) <= ∫_a^b f + ∫_{f(a)}^c f^{-1}`` for a continuous increasing `f`

    The left hand side is computed in closed form and checked against the
    quadrature of the rectangle.
    """
    if not f.is_strictly_increasing_on(a, b):
        raise PreconditionError("f must be continuous and increasing on [{}, {}]".format(a, b))
    fa = f(a)
    if not c > fa:
        raise PreconditionError("c={} must exceed f(a)={}".format(c, fa))
    inst = YoungInstance(ProductKernel.one(), f, a, b, c)
    report = check_young(inst, cfg, verdict_tol)
    rect = (b - a) * (c - fa)
    if abs(rect - report.lhs) > report.lhs_error + report.verdict_tolerance:
        logger.warning("rectangle quadrature {} differs from its closed form {}".format(report.lhs, rect))
    lhs = b * c - a * fa
    integral_f = report.details["hypograph"] + (b - a) * fa
    integral_inverse = report.details["epigraph"] + a * (c - fa)
    report.kind = "young_classical"
    report.lhs = lhs
    report.rhs = integral_f + integral_inverse
    report.lhs_error = 0.0
    report.details.update({"rectangle": rect, "integral_f": integral_f, "integral_inverse": integral_inverse})
    return report


def check_gaussian_young(x: float, y: float, p: float = 2, cfg: QuadConfig = None,
                         verdict_tol: float = None) -> InequalityReport:
    """The error function companion of the inequality

    ``erf(x) erf(y) <= 2/√π ∫_0^x erf(s^(p-1)) e^(-s²) ds + 2/√π ∫_0^y erf(t^(q-1)) e^(-t²) dt``
    with ``q = p/(p-1)``. It is the inequality for the kernel
    ``(4/π) exp(-s² - t²)`` and ``f(s) = s^(p-1)``; equality holds on ``y = x^(p-1)``.
    """
    if not p > 1:
        raise DomainError("p={} must exceed 1".format(p))
    if not (x > 0 and y >= 0):
        raise DomainError("x must be positive and y nonnegative")
    alpha = p - 1
    top = max(x, y ** (1 / alpha)) * 1.25
    f = MonotoneFn([PowerPiece(0, top, alpha)])
    K = ProductKernel.gaussian(box=((0, np.inf), (0, np.inf)), scale=4 / np.pi)
    report = check_young(YoungInstance(K, f, 0, x, y), cfg, verdict_tol)
    closed_form = special.erf(x) * special.erf(y)
    if abs(closed_form - report.lhs) > report.lhs_error + report.verdict_tolerance:
        logger.warning("erf(x)erf(y)={} but the rectangle quadrature gives {}".format(
            closed_form, report.lhs))
    report.kind = "gaussian_young"
    report.details.update({"closed_form_lhs": float(closed_form), "p": p, "q": p / alpha})
    return report


def check_young_ndim(K_n: NKernel, phis: Sequence[MonotoneFn], a: Sequence[float], b: Sequence[float],
                     cfg: QuadConfig = None, verdict_tol: float = None) -> InequalityReport:
    """The higher dimensional analogue for product kernels

    ``lhs`` is the integral of `K_n` over ``prod [phi_i(a_i), phi_i(b_i)]``;
    ``rhs`` is the sum over ``i`` of::

        ∫_{phi_i(a_i)}^{phi_i(b_i)} k_i(s) prod_{j != i} ∫_{phi_j(a_j)}^{phi_j(s)} k_j ds

    the inner upper limits all being driven by the outer variable ``s``.
    For ``n = 2`` with ``phi_1 = f_sup^{-1}`` and ``phi_2 = f`` this is the
    two dimensional inequality with ``c = f(b)``.
    """
    n = K_n.ndim
    if not 2 <= n <= settings.max_ndim:
        raise UnsupportedDimensionError("n={} is outside 2..{}".format(n, settings.max_ndim))
    if not len(phis) == len(a) == len(b) == n:
        raise DomainError("expected {} functions and {} bounds on each side".format(n, n))
    if verdict_tol is None:
        verdict_tol = settings.verdict_tol
    lo = [phi(u) for phi, u in zip(phis, a)]
    hi = [phi(v) for phi, v in zip(phis, b)]
    lhs = K_n.box_measure(lo, hi)
    terms = []
    rhs = IntegralResult(0.0)
    for i in range(n):
        others = [j for j in range(n) if j != i]
        for j in others:
            x_lo, x_hi = phis[j].domain
            if not x_lo <= lo[i] <= hi[i] <= x_hi:
                raise DomainError("phi_{} is evaluated on [{}, {}] outside its domain {}".format(
                    j, lo[i], hi[i], phis[j].domain))

        def integrand(s, i=i, others=others):
            product = K_n.factors[i](s)
            for j in others:
                product *= K_n.factors[j].integral(lo[j], phis[j](s))
            return K_n.scale * product

        points = set(K_n.factors[i].singular_points(lo[i], hi[i]))
        for j in others:
            points.update(phis[j].knots_in(lo[i], hi[i]))
        try:
            term = integrate_1d(integrand, lo[i], hi[i], cfg, sorted(points),
                                K_n.factors[i].tolerant_below)
        except ConvergenceError as e:
            raise e.with_context("ndim: term {}".format(i + 1))
        terms.append(term.value)
        rhs = rhs + term
    return InequalityReport(
        kind="young_ndim",
        lhs=lhs,
        rhs=rhs.value,
        rhs_error=rhs.error_estimate,
        equality=bool(abs(rhs.value - lhs) <= rhs.error_estimate + verdict_tol),
        verdict_tolerance=verdict_tol,
        details={"terms": terms, "box": [list(v) for v in zip(lo, hi)]},
    )


def ndim_from_young(inst: YoungInstance) -> Tuple[NKernel, List[MonotoneFn], List[float], List[float]]:
    """The two dimensional analogue of an instance, taken at ``c = f(b)``

    Returns ``(K_n, phis, a, b)`` with ``phi_1 = f_sup^{-1}`` on ``[f(a), f(b)]``
    and ``phi_2 = f`` on ``[a, b]``.
    """
    if not isinstance(inst.K, ProductKernel):
        raise PreconditionError("the higher dimensional analogue needs a product kernel")
    f = inst.f
    fb = f(inst.b)
    inverse = f.pseudo_inverse("sup").as_monotone()
    return NKernel.from_kernel(inst.K), [inverse, f], [inst.fa, inst.a], [fb, inst.b]
