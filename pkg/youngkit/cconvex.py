"""Costs generated by kernels, c-transforms and the c-convex form of the inequality

A kernel ``K`` on ``[a, b] x [A, B]`` generates the cost
``c(x, y) = ∫_a^x ∫_A^y K(s, t) dt ds``; its partial derivatives are the inner
integrals of the kernel, so no numerical differentiation is ever needed.
"""
import logging
from typing import Callable, Dict, Sequence, Tuple

import numpy as np
from scipy import optimize

from . import settings
from .errors import ConfigError, ConvergenceError, DomainError
from .monotone import MonotoneFn
from .quadrature import (Kernel, ProductKernel, QuadConfig, epigraph_measure, hypograph_measure,
                         region_measure)
from .young import InequalityReport, _check_equality


logger = logging.getLogger("youngkit.cconvex")

__all__ = [
    "CostFn", "GridFunction", "tabulate", "c_transform", "transform_on_grid", "YoungPotential",
    "young_pair", "check_cconv_young", "COST_NAMES",
]

COST_NAMES = ("product", "kernel", "fractional_part")


class CostFn:
    """``c(x, y) = ∫_a^x ∫_A^y K(s, t) dt ds`` on ``x_range x y_range``

    Parameters
    ----------
    kernel: `Kernel`
        The mixed second derivative of the cost.
    x_range, y_range: tuple
        ``(a, b)`` and ``(A, B)``; the cost vanishes on ``x = a`` and on ``y = A``.
    """
    def __init__(self, kernel: Kernel, x_range: Tuple[float, float], y_range: Tuple[float, float],
                 cfg: QuadConfig = None):
        a, b = map(float, x_range)
        A, B = map(float, y_range)
        if not (a < b and A < B):
            raise DomainError("the cost box [{}, {}] x [{}, {}] is empty".format(a, b, A, B))
        kernel.check_box(a, b, A, B)
        self.kernel = kernel
        self.x_range = (a, b)
        self.y_range = (A, B)
        self.cfg = cfg

    def _check(self, x: float, y: float):
        (a, b), (A, B) = self.x_range, self.y_range
        if not (a <= x <= b and A <= y <= B):
            raise DomainError("({}, {}) outside the cost box {} x {}".format(
                x, y, self.x_range, self.y_range))

    def __call__(self, x: float, y: float) -> float:
        self._check(x, y)
        return float(self.kernel.measure(self.x_range[0], x, self.y_range[0], y, self.cfg))

    def dx(self, x: float, y: float) -> float:
        """``∂c/∂x(x, y) = ∫_A^y K(x, t) dt``"""
        self._check(x, y)
        return self.kernel.inner_y(x, self.y_range[0], y, self.cfg).value

    def dy(self, x: float, y: float) -> float:
        """``∂c/∂y(x, y) = ∫_a^x K(s, y) ds``"""
        self._check(x, y)
        return self.kernel.inner_x(y, self.x_range[0], x, self.cfg).value

    def table(self, xs: Sequence[float], ys: Sequence[float]) -> np.ndarray:
        """The matrix ``c(xs[i], ys[j])``"""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        K = self.kernel
        if isinstance(K, ProductKernel):
            (a, _), (A, _) = self.x_range, self.y_range
            px = K.fx.primitive(xs) - K.fx.primitive(a)
            py = K.fy.primitive(ys) - K.fy.primitive(A)
            return K.scale * np.outer(px, py)
        return np.array([[self(x, y) for y in ys] for x in xs])

    def to_dict(self) -> Dict:
        return {"kernel": self.kernel.to_dict(), "x_range": list(self.x_range), "y_range": list(self.y_range)}

    @staticmethod
    def from_name(name: str, x_range: Tuple[float, float], y_range: Tuple[float, float],
                  kernel: Dict = None, cfg: QuadConfig = None) -> "CostFn":
        """A named cost

        ``"product"`` is ``(x - a)(y - A)`` (``K = 1``), ``"fractional_part"`` is
        generated by the product of the fractional parts of ``1/s`` and ``1/t``
        and ``"kernel"`` by the kernel described by `kernel` (a Gaussian product
        when omitted).
        """
        box = (tuple(x_range), tuple(y_range))
        if name == "product":
            K = ProductKernel.one()
        elif name == "fractional_part":
            K = ProductKernel.fractional_part()
        elif name == "kernel":
            K = ProductKernel.gaussian() if kernel is None else Kernel.from_dict(kernel)
        else:
            raise ConfigError("cost", "unknown cost {!r}, expected one of {}".format(name, COST_NAMES))
        if K.box[0][0] > box[0][0] or K.box[1][0] > box[1][0]:
            raise ConfigError("cost", "the box {} leaves the support of the {} kernel".format(box, name))
        return CostFn(K, x_range, y_range, cfg)

    def __repr__(self):
        return "CostFn({!r}, {}, {})".format(self.kernel, self.x_range, self.y_range)


class GridFunction:
    """Values of a function on a grid

    When `func` is given it is used between grid points, otherwise the
    values are interpolated linearly.
    """
    def __init__(self, grid: np.ndarray, values: np.ndarray, func: Callable[[float], float] = None):
        self.grid = np.asarray(grid, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.grid.shape != self.values.shape:
            raise ValueError("grid and values must have the same shape")
        self.func = func

    def __call__(self, t):
        if self.func is not None:
            return self.func(t)
        return np.interp(t, self.grid, self.values)

    def on(self, grid: np.ndarray) -> np.ndarray:
        """Values on `grid`, reusing the table when the grids agree"""
        if grid.shape == self.grid.shape and np.array_equal(grid, self.grid):
            return self.values
        return np.array([self(t) for t in grid])


def tabulate(G: Callable[[float], float], grid: Sequence[float]) -> GridFunction:
    """Evaluate `G` once on `grid`"""
    grid = np.asarray(grid, dtype=float)
    return GridFunction(grid, np.array([G(t) for t in grid]), G)


def _grid(interval: Tuple[float, float], grid_n: int) -> np.ndarray:
    return np.linspace(interval[0], interval[1], grid_n)


def _refine(objective: Callable[[float], float], grid: np.ndarray, k: int, best: float) -> float:
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]
    if hi <= lo:
        return best
    result = optimize.minimize_scalar(lambda t: -objective(t), bounds=(lo, hi), method="bounded",
                                      options={"xatol": settings.conjugate_xatol})
    return max(best, -float(result.fun))


def c_transform(G: Callable[[float], float], cost: CostFn, x: float, over: str = "y",
                grid_n: int = None) -> float:
    """``sup_y {c(x, y) - G(y)}``, or ``sup_x {c(x, y) - G(x)}`` with ``over="x"``

    The supremum is taken on a uniform grid of the cost box and refined once
    around the best grid point.
    """
    if grid_n is None:
        grid_n = settings.ctransform_grid_n
    if over not in ("x", "y"):
        raise ValueError("over must be 'x' or 'y'")
    lo, hi = cost.x_range if over == "y" else cost.y_range
    if not lo <= x <= hi:
        raise DomainError("{}={} outside [{}, {}]".format("x" if over == "y" else "y", x, lo, hi))
    if over == "y":
        grid = _grid(cost.y_range, grid_n)
        row = cost.table([x], grid)[0]

        def objective(t):
            return cost(x, t) - float(G(t))
    else:
        grid = _grid(cost.x_range, grid_n)
        row = cost.table(grid, [x])[:, 0]

        def objective(t):
            return cost(t, x) - float(G(t))
    values = G.on(grid) if isinstance(G, GridFunction) else np.array([G(t) for t in grid])
    diffs = row - values
    k = int(np.argmax(diffs))
    return _refine(objective, grid, k, float(diffs[k]))


def transform_on_grid(G: Callable[[float], float], cost: CostFn, over: str = "y",
                      grid_n: int = None) -> GridFunction:
    """The c-transform of `G` tabulated on the grid of the other variable

    `G` is tabulated once and the cost once; each point is then refined
    separately. The result interpolates linearly between its grid points.
    """
    if grid_n is None:
        grid_n = settings.ctransform_grid_n
    if over == "y":
        source, target = _grid(cost.y_range, grid_n), _grid(cost.x_range, grid_n)
        table = cost.table(target, source)
    elif over == "x":
        source, target = _grid(cost.x_range, grid_n), _grid(cost.y_range, grid_n)
        table = cost.table(source, target).T
    else:
        raise ValueError("over must be 'x' or 'y'")
    if not isinstance(G, GridFunction):
        G = tabulate(G, source)
    diffs = table - G.on(source)[np.newaxis, :]
    result = np.empty(len(target))
    for i, s in enumerate(target):
        k = int(np.argmax(diffs[i]))
        if over == "y":
            def objective(t, s=s):
                return cost(s, t) - float(G(t))
        else:
            def objective(t, s=s):
                return cost(t, s) - float(G(t))
        result[i] = _refine(objective, source, k, float(diffs[i, k]))
    return GridFunction(target, result)


class YoungPotential:
    """One of the two potentials of a monotone function

    ``"F"``: ``x -> ∫_a^x ∫_{f(a)}^{f(s)} K dt ds``;
    ``"G"``: ``y -> ∫_{f(a)}^y ∫_a^{g(t)} K ds dt`` with ``g`` the sup-flavoured inverse.
    """
    def __init__(self, name: str, cost: CostFn, f: MonotoneFn, domain: Tuple[float, float]):
        if name not in ("F", "G"):
            raise ValueError("name must be 'F' or 'G'")
        self.name = name
        self.cost = cost
        self.f = f
        self.domain = domain

    def __call__(self, t) -> float:
        if np.ndim(t) != 0:
            return np.array([self(v) for v in np.ravel(t)]).reshape(np.shape(t))
        t = float(t)
        lo, hi = self.domain
        if not lo <= t <= hi:
            raise DomainError("{}({}) outside [{}, {}]".format(self.name, t, lo, hi))
        a = self.cost.x_range[0]
        try:
            if self.name == "F":
                return hypograph_measure(self.cost.kernel, self.f, a, t, self.cost.cfg).value
            return epigraph_measure(self.cost.kernel, self.f, a, t, self.cost.cfg).value
        except ConvergenceError as e:
            raise e.with_context("potential " + self.name)

    def __repr__(self):
        return "YoungPotential({!r}, domain={})".format(self.name, self.domain)


def young_pair(cost: CostFn, f: MonotoneFn) -> Tuple[YoungPotential, YoungPotential]:
    """The potentials ``F`` and ``G`` of `f`, conjugate to each other for `cost`

    `f` must start at the corner of the cost box: ``f`` is defined on
    ``x_range`` and ``f(a) = A``. ``G`` is defined up to the smaller of ``B``
    and the last value of `f`.
    """
    (a, b), (A, B) = cost.x_range, cost.y_range
    if f.domain != (a, b):
        raise DomainError("f is defined on {}, the cost on {}".format(f.domain, cost.x_range))
    fa = f(a)
    if abs(fa - A) > settings.c_tol:
        raise DomainError("f(a)={} differs from the corner A={} of the cost box".format(fa, A))
    top = min(B, f.codomain[1])
    return YoungPotential("F", cost, f, (a, b)), YoungPotential("G", cost, f, (fa, top))


def check_cconv_young(cost: CostFn, f: MonotoneFn, x: float, y: float, cfg: QuadConfig = None,
                      verdict_tol: float = None) -> InequalityReport:
    """``c(x, y) - c(a, f(a)) <= ∫_a^x ∂c/∂x(t, f(t)) dt + ∫_{f(a)}^y ∂c/∂y(g(s), s) ds``

    ``g`` is the sup-flavoured inverse of `f`. With a strictly positive kernel
    equality holds exactly when ``f(x-) <= y <= f(x+)``.
    """
    if verdict_tol is None:
        verdict_tol = settings.verdict_tol
    if cfg is None:
        cfg = cost.cfg
    (a, _), (A, _) = cost.x_range, cost.y_range
    x_lo, x_hi = f.domain
    if not x_lo <= a <= x <= x_hi:
        raise DomainError("[{}, {}] is not inside the domain of f {}".format(a, x, f.domain))
    fa = f(a)
    g = f.pseudo_inverse("sup")
    y_lo, y_hi = g.codomain
    if not max(fa, y_lo) <= y <= y_hi:
        raise DomainError("y={} outside [f(a), {}]".format(y, y_hi))
    cost._check(x, y)
    K = cost.kernel
    K.check_box(a, max(x, g(y)), min(A, fa), max(f.right(x), y))
    try:
        # c vanishes on x = a
        lhs = cost(x, y)
        along_f = region_measure(K, a, x, lambda t: A, f, cfg, f.knots_in(a, x), context="dc/dx along f")
        points = [s for s in g.breakpoints if fa < s < y]
        along_g = region_measure(K, fa, y, lambda s: a, g, cfg, points, outer="y",
                                 context="dc/dy along the inverse")
    except ConvergenceError as e:
        raise e.with_context("c-convex young")
    rhs = along_f + along_g
    witness = (f.left(x), f.right(x))
    report = InequalityReport(
        kind="cconv_young",
        lhs=float(lhs),
        rhs=rhs.value,
        lhs_error=0.0,
        rhs_error=rhs.error_estimate,
        equality=bool(witness[0] - settings.c_tol <= y <= witness[1] + settings.c_tol),
        equality_witness=witness,
        verdict_tolerance=verdict_tol,
        details={"along_f": along_f.value, "along_inverse": along_g.value},
    )
    _check_equality(report, K.strictly_positive, max(witness[0] - y, y - witness[1], 0.0))
    return report
