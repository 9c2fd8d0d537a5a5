"""Kernel-weighted measures of rectangles, hypographs and epigraphs

All two dimensional integrals are iterated: the outer integral runs through
`scipy.integrate.quad` (21-point Gauss-Kronrod, QUADPACK) one cell at a time,
the cells being delimited by the breakpoints of the limits and the singular
lines of the kernel. Inner integrals are exact for product kernels and
nested adaptive integrals otherwise.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from . import settings
from .errors import ConfigError, ConvergenceError, DomainError, PreconditionError
from .monotone import MonotoneFn


logger = logging.getLogger("youngkit.quadrature")

__all__ = [
    "QuadConfig", "IntegralResult", "Factor", "Kernel", "ProductKernel", "NKernel",
    "fractional_part_primitive", "integrate_1d", "region_measure",
    "rect_measure", "hypograph_measure", "epigraph_measure",
]

BASE_RULES = ("gk21", "gk15")


class QuadConfig:
    """Parameters of the adaptive quadrature

    Any parameter left as `None` is read from `youngkit.settings` at construction.

    :param rel_tol: Relative tolerance of every 1-D integral.
    :param abs_tol: Absolute tolerance of every 1-D integral.
    :param max_depth: Subdivision depth; each cell may be bisected into
        at most ``20 * max_depth`` subintervals.
    :param base_rule: ``"gk21"`` (QUADPACK through `scipy.integrate.quad`)
        or ``"gk15"`` (`scipy.integrate.quad_vec`).
    """
    def __init__(self, rel_tol: float = None, abs_tol: float = None, max_depth: int = None,
                 base_rule: str = None):
        self.rel_tol = settings.rel_tol if rel_tol is None else float(rel_tol)
        self.abs_tol = settings.abs_tol if abs_tol is None else float(abs_tol)
        self.max_depth = settings.max_depth if max_depth is None else int(max_depth)
        self.base_rule = settings.base_rule if base_rule is None else base_rule
        if not self.rel_tol > 0:
            raise ConfigError("rel_tol", "must be positive")
        if not self.abs_tol > 0:
            raise ConfigError("abs_tol", "must be positive")
        if self.max_depth < 1:
            raise ConfigError("max_depth", "must be at least 1")
        if self.base_rule not in BASE_RULES:
            raise ConfigError("base_rule", "expected one of {}".format(BASE_RULES))

    @property
    def limit(self) -> int:
        return 20 * self.max_depth

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def to_dict(self) -> Dict:
        return {"rel_tol": self.rel_tol, "abs_tol": self.abs_tol, "max_depth": self.max_depth,
                "base_rule": self.base_rule}

    def __repr__(self):
        return "QuadConfig(rel_tol={}, abs_tol={}, max_depth={}, base_rule={!r})".format(
            self.rel_tol, self.abs_tol, self.max_depth, self.base_rule)


@dataclass
class IntegralResult:
    """Value of an integral with its (nonnegative) error estimate"""
    value: float
    error_estimate: float = 0.0
    subdivisions: int = 0

    def __add__(self, other: "IntegralResult") -> "IntegralResult":
        return IntegralResult(self.value + other.value, self.error_estimate + other.error_estimate,
                              self.subdivisions + other.subdivisions)

    def __sub__(self, other: "IntegralResult") -> "IntegralResult":
        return IntegralResult(self.value - other.value, self.error_estimate + other.error_estimate,
                              self.subdivisions + other.subdivisions)

    def __neg__(self) -> "IntegralResult":
        return IntegralResult(-self.value, self.error_estimate, self.subdivisions)

    def scaled(self, factor: float) -> "IntegralResult":
        return IntegralResult(factor * self.value, abs(factor) * self.error_estimate, self.subdivisions)


def _quad_cell(func: Callable, lo: float, hi: float, cfg: QuadConfig) -> Tuple[float, float, int, bool]:
    """Integrate over one cell, returning ``(value, error, subdivisions, converged)``"""
    if cfg.base_rule == "gk15":
        value, error, info = integrate.quad_vec(
            func, lo, hi, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.limit,
            quadrature="gk15", full_output=True)
        return float(value), float(error), int(info.intervals.shape[0]), bool(info.success)
    result = integrate.quad(func, lo, hi, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.limit,
                            full_output=1)
    value, error, info = result[:3]
    # a fourth entry carries the QUADPACK warning message
    converged = len(result) == 3
    return float(value), float(error), int(info["last"]), converged


def _sup_abs(func: Callable, lo: float, hi: float, n: int = 17) -> float:
    xs = np.linspace(lo, hi, n + 2)[1:-1]
    return max(abs(func(x)) for x in xs)


def integrate_1d(func: Callable[[float], float], lo: float, hi: float, cfg: QuadConfig = None,
                 points: Sequence[float] = (), tolerant_below: float = None,
                 context: str = "") -> IntegralResult:
    """Adaptive integral of `func` over ``[lo, hi]``

    The interval is split at every point of `points` inside ``(lo, hi)`` and
    each cell is integrated separately. Cells that lie entirely below
    `tolerant_below` are accepted whatever QUADPACK reports; their error
    estimate is increased by ``width * sup|func|`` on the cell.

    Raises
    ------
    ConvergenceError
        If a cell misses ``max(abs_tol, rel_tol * |value|)``.
    """
    if cfg is None:
        cfg = QuadConfig()
    if hi < lo:
        raise DomainError("integration bounds are reversed: [{}, {}]".format(lo, hi))
    if hi == lo:
        return IntegralResult(0.0, 0.0, 0)
    cuts = sorted(set([lo, hi] + [p for p in points if lo < p < hi]))
    value = 0.0
    error = 0.0
    subdivisions = 0
    failed = False
    for u, v in zip(cuts[:-1], cuts[1:]):
        cell_value, cell_error, cell_subdivisions, converged = _quad_cell(func, u, v, cfg)
        if tolerant_below is not None and v <= tolerant_below:
            cell_error += (v - u) * _sup_abs(func, u, v)
        elif not converged and cell_error > cfg.tolerance(cell_value):
            logger.debug("cell [{}, {}] missed its tolerance: error {:.3g}".format(u, v, cell_error))
            failed = True
        value += cell_value
        error += cell_error
        subdivisions += cell_subdivisions
    if failed:
        raise ConvergenceError(value, error, context)
    return IntegralResult(value, error, subdivisions)


def fractional_part_primitive(x):
    """Primitive of the fractional part of ``1/s`` vanishing at 0

    With ``N = floor(1/x)`` the primitive is ``ln x + N/(N+1) - N x + psi(N+2)``,
    valid for every ``x > 0`` (``N = 0`` when ``x > 1``).
    """
    x = np.asarray(x, dtype=float)
    tiny = x < 1e-8
    safe = np.where(tiny, 1.0, x)
    n = np.floor(1 / safe)
    result = np.log(safe) + n / (n + 1) - n * safe + special.digamma(n + 2)
    result = np.where(tiny, 0.5 * x, result)
    if result.ndim == 0:
        return float(result)
    return result


def _fractional_part(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    result = np.where(x > 0, 1 / safe - np.floor(1 / safe), 0.0)
    if result.ndim == 0:
        return float(result)
    return result


class Factor:
    """A nonnegative function of one variable together with its primitive

    Parameters
    ----------
    name: str
        Name of the factor, used in JSON descriptions.
    density: callable
        The factor itself.
    primitive: callable
        Any antiderivative of `density`.
    domain: tuple
        Interval on which the factor is defined.
    singular: callable
        ``singular(lo, hi)`` lists the points of ``(lo, hi)`` where the factor
        is not smooth; they become cell boundaries.
    tolerant_below: float
        Cells below this abscissa are integrated tolerantly.
    """
    def __init__(self, name: str, density: Callable, primitive: Callable,
                 domain: Tuple[float, float] = (-np.inf, np.inf), singular: Callable = None,
                 tolerant_below: float = None, params: Dict = None):
        self.name = name
        self.density = density
        self.primitive = primitive
        self.domain = domain
        self._singular = singular
        self.tolerant_below = tolerant_below
        self.params = {} if params is None else params

    def __call__(self, x):
        return self.density(x)

    def integral(self, lo: float, hi: float) -> float:
        """Exact ``∫_lo^hi factor``, oriented"""
        if lo == hi:
            return 0.0
        return float(self.primitive(hi) - self.primitive(lo))

    def singular_points(self, lo: float, hi: float) -> List[float]:
        if self._singular is None:
            return []
        return self._singular(lo, hi)

    @staticmethod
    def one() -> "Factor":
        return Factor("one", lambda x: 1.0 + 0 * np.asarray(x, dtype=float), lambda x: x)

    @staticmethod
    def gaussian(rate: float = 1) -> "Factor":
        """``exp(-(rate x)**2)``"""
        rate = float(rate)
        if not rate > 0:
            raise ConfigError("rate", "must be positive")
        return Factor(
            "gaussian",
            lambda x: np.exp(-(rate * x) ** 2),
            lambda x: np.sqrt(np.pi) / (2 * rate) * special.erf(rate * x),
            params={"rate": rate},
        )

    @staticmethod
    def power(alpha: float = 1) -> "Factor":
        """``x**alpha`` on ``[0, inf)``, ``alpha > -1``"""
        alpha = float(alpha)
        if not alpha > -1:
            raise ConfigError("alpha", "must be larger than -1 for the factor to be integrable")
        return Factor(
            "power",
            lambda x: np.power(x, alpha),
            lambda x: np.power(x, alpha + 1) / (alpha + 1),
            domain=(0, np.inf),
            params={"alpha": alpha},
        )

    @staticmethod
    def fractional_part(cutoff: float = None) -> "Factor":
        """The fractional part of ``1/x`` on ``[0, inf)``

        Its jumps at ``1/n`` are declared down to `cutoff`; below the cutoff
        the integrals are computed tolerantly.
        """
        if cutoff is None:
            cutoff = settings.singular_cutoff

        def singular(lo, hi):
            n_max = int(np.floor(1 / cutoff))
            n_min = max(1, int(np.ceil(1 / hi))) if hi > 0 else n_max + 1
            return [1 / n for n in range(n_min, n_max + 1) if lo < 1 / n < hi]

        return Factor(
            "fractional_part",
            _fractional_part,
            fractional_part_primitive,
            domain=(0, np.inf),
            singular=singular,
            tolerant_below=cutoff,
            params={"cutoff": cutoff},
        )

    def to_dict(self) -> Dict:
        return dict({"name": self.name}, **self.params)

    @staticmethod
    def from_dict(data: Dict, field: str = "factor") -> "Factor":
        params = dict(data)
        name = params.pop("name", None)
        builders = {
            "one": Factor.one,
            "gaussian": Factor.gaussian,
            "power": Factor.power,
            "fractional_part": Factor.fractional_part,
        }
        if name not in builders:
            raise ConfigError(field + ".name", "unknown factor {!r}".format(name))
        try:
            return builders[name](**params)
        except TypeError as e:
            raise ConfigError(field, str(e))


def _as_box(box) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    (x_lo, x_hi), (y_lo, y_hi) = box
    return (float(x_lo), float(x_hi)), (float(y_lo), float(y_hi))


class Kernel:
    """A nonnegative density ``K(x, y)`` on a box

    Parameters
    ----------
    density: callable
        ``density(x, y)`` for scalar `x` and `y`.
    box: tuple
        ``((x_lo, x_hi), (y_lo, y_hi))``; infinite bounds are allowed.
    strictly_positive: bool
        Whether ``K > 0`` almost everywhere, which makes the equality
        conditions of the inequalities necessary as well as sufficient.
    x_points, y_points: list
        Lines ``x = const`` and ``y = const`` across which `density` is not smooth.
    """
    name = "callable"

    def __init__(self, density: Callable[[float, float], float], box=((-np.inf, np.inf), (-np.inf, np.inf)),
                 strictly_positive: bool = True, x_points: Sequence[float] = (),
                 y_points: Sequence[float] = ()):
        self.density = density
        self.box = _as_box(box)
        self.strictly_positive = strictly_positive
        self.x_points = sorted(x_points)
        self.y_points = sorted(y_points)
        self._validate()

    def _sample_axis(self, lo: float, hi: float, n: int = 9) -> np.ndarray:
        lo = max(lo, -10.0)
        hi = min(hi, 10.0)
        if hi <= lo:
            return np.array([lo])
        return np.linspace(lo, hi, n + 2)[1:-1]

    def _validate(self):
        (x_lo, x_hi), (y_lo, y_hi) = self.box
        if not (x_lo < x_hi and y_lo < y_hi):
            raise DomainError("the kernel box {} is empty".format(self.box))
        for x in self._sample_axis(x_lo, x_hi):
            for y in self._sample_axis(y_lo, y_hi):
                value = self(x, y)
                if not np.isfinite(value) or value < 0:
                    raise PreconditionError("kernel takes the value {} at ({}, {})".format(value, x, y))

    def __call__(self, x, y):
        return self.density(x, y)

    @property
    def is_one(self) -> bool:
        return False

    def check_box(self, x_lo: float, x_hi: float, y_lo: float, y_hi: float):
        """Raise a `DomainError` unless the rectangle lies inside the box"""
        (bx_lo, bx_hi), (by_lo, by_hi) = self.box
        if not (bx_lo <= x_lo <= x_hi <= bx_hi and by_lo <= y_lo <= y_hi <= by_hi):
            raise DomainError("[{}, {}] x [{}, {}] is not inside the kernel box {}".format(
                x_lo, x_hi, y_lo, y_hi, self.box))

    def points_x(self, lo: float, hi: float) -> List[float]:
        return [p for p in self.x_points if lo < p < hi]

    def points_y(self, lo: float, hi: float) -> List[float]:
        return [p for p in self.y_points if lo < p < hi]

    def tolerant_x(self) -> Optional[float]:
        return None

    def tolerant_y(self) -> Optional[float]:
        return None

    def inner_y(self, x: float, lo: float, hi: float, cfg: QuadConfig = None) -> IntegralResult:
        """``∫_lo^hi K(x, y) dy``, oriented"""
        if hi < lo:
            return -self.inner_y(x, hi, lo, cfg)
        return integrate_1d(lambda y: self(x, y), lo, hi, cfg, self.points_y(lo, hi),
                            self.tolerant_y(), "inner dy")

    def inner_x(self, y: float, lo: float, hi: float, cfg: QuadConfig = None) -> IntegralResult:
        """``∫_lo^hi K(x, y) dx``, oriented"""
        if hi < lo:
            return -self.inner_x(y, hi, lo, cfg)
        return integrate_1d(lambda x: self(x, y), lo, hi, cfg, self.points_x(lo, hi),
                            self.tolerant_x(), "inner dx")

    def measure(self, x_lo: float, x_hi: float, y_lo: float, y_hi: float, cfg: QuadConfig = None) -> float:
        """``∫∫ K`` over a rectangle, oriented in both variables"""
        return region_measure(self, x_lo, x_hi, lambda x: y_lo, lambda x: y_hi, cfg,
                              context="measure").value

    def to_dict(self) -> Dict:
        raise ConfigError("kernel", "a callable kernel has no JSON form")

    @staticmethod
    def from_dict(data: Dict, field: str = "kernel") -> "Kernel":
        """Build one of the builtin product kernels

        ``{"name": "one" | "gaussian_product" | "power_product" | "fractional_part_product", ...}``
        with optional ``"box": [[x_lo, x_hi], [y_lo, y_hi]]`` and ``"scale"``.
        """
        if not isinstance(data, dict):
            raise ConfigError(field, "expected an object")
        params = dict(data)
        name = params.pop("name", None)
        builders = {
            "one": ProductKernel.one,
            "gaussian_product": ProductKernel.gaussian,
            "power_product": ProductKernel.power,
            "fractional_part_product": ProductKernel.fractional_part,
        }
        if name not in builders:
            raise ConfigError(field + ".name", "unknown kernel {!r}".format(name))
        if "box" in params:
            try:
                params["box"] = _as_box(params["box"])
            except (TypeError, ValueError):
                raise ConfigError(field + ".box", "expected [[x_lo, x_hi], [y_lo, y_hi]]")
        try:
            return builders[name](**params)
        except TypeError as e:
            raise ConfigError(field, str(e))
        except (DomainError, PreconditionError) as e:
            raise ConfigError(field, str(e))


class ProductKernel(Kernel):
    """``K(x, y) = scale * fx(x) * fy(y)``

    The inner integrals are exact, computed from the primitives of the factors.
    """
    def __init__(self, fx: Factor, fy: Factor, scale: float = 1, box=None, name: str = None,
                 strictly_positive: bool = True):
        self.fx = fx
        self.fy = fy
        self.scale = float(scale)
        if not self.scale > 0:
            raise ConfigError("scale", "must be positive")
        if box is None:
            box = (fx.domain, fy.domain)
        if name is not None:
            self.name = name
        super().__init__(self._density, box, strictly_positive)

    def _density(self, x, y):
        return self.scale * self.fx(x) * self.fy(y)

    @property
    def is_one(self) -> bool:
        return self.fx.name == "one" and self.fy.name == "one" and self.scale == 1

    def points_x(self, lo, hi):
        return self.fx.singular_points(lo, hi)

    def points_y(self, lo, hi):
        return self.fy.singular_points(lo, hi)

    def tolerant_x(self):
        return self.fx.tolerant_below

    def tolerant_y(self):
        return self.fy.tolerant_below

    def inner_y(self, x, lo, hi, cfg=None):
        return IntegralResult(float(self.scale * self.fx(x) * self.fy.integral(lo, hi)))

    def inner_x(self, y, lo, hi, cfg=None):
        return IntegralResult(float(self.scale * self.fy(y) * self.fx.integral(lo, hi)))

    def measure(self, x_lo, x_hi, y_lo, y_hi, cfg=None):
        return self.scale * self.fx.integral(x_lo, x_hi) * self.fy.integral(y_lo, y_hi)

    def to_dict(self):
        result = {"name": self.name, "scale": self.scale, "box": [list(self.box[0]), list(self.box[1])]}
        if self.name == "power_product":
            result.update({"alpha": self.fx.params["alpha"], "beta": self.fy.params["alpha"]})
        elif self.name == "fractional_part_product":
            result["cutoff"] = self.fx.params["cutoff"]
        return result

    @staticmethod
    def one(box=None, scale: float = 1) -> "ProductKernel":
        """The Lebesgue measure, ``K = 1``"""
        return ProductKernel(Factor.one(), Factor.one(), scale, box, "one")

    @staticmethod
    def gaussian(box=None, scale: float = 2 / np.pi) -> "ProductKernel":
        """``scale * exp(-x**2 - y**2)``"""
        return ProductKernel(Factor.gaussian(), Factor.gaussian(), scale, box, "gaussian_product")

    @staticmethod
    def power(alpha: float = 1, beta: float = 1, box=None, scale: float = 1) -> "ProductKernel":
        """``scale * x**alpha * y**beta`` on the first quadrant"""
        return ProductKernel(Factor.power(alpha), Factor.power(beta), scale, box, "power_product")

    @staticmethod
    def fractional_part(box=None, scale: float = 1, cutoff: float = None) -> "ProductKernel":
        """Product of the fractional parts of ``1/x`` and ``1/y``"""
        return ProductKernel(Factor.fractional_part(cutoff), Factor.fractional_part(cutoff), scale, box,
                             "fractional_part_product")

    def __repr__(self):
        return "ProductKernel({}, scale={:g}, box={})".format(self.name, self.scale, self.box)


class NKernel:
    """An n-ary product kernel ``scale * prod_i factors[i](s_i)``"""
    def __init__(self, factors: Sequence[Factor], scale: float = 1):
        self.factors = list(factors)
        self.scale = float(scale)
        if not self.scale > 0:
            raise ConfigError("scale", "must be positive")

    @property
    def ndim(self) -> int:
        return len(self.factors)

    def __call__(self, *s):
        return self.scale * np.prod([k(v) for k, v in zip(self.factors, s)])

    def box_measure(self, lo: Sequence[float], hi: Sequence[float]) -> float:
        """Exact integral over the box ``prod [lo_i, hi_i]``"""
        return self.scale * float(np.prod([k.integral(u, v) for k, u, v in zip(self.factors, lo, hi)]))

    @staticmethod
    def one(n: int) -> "NKernel":
        return NKernel([Factor.one() for _ in range(n)])

    @staticmethod
    def from_kernel(kernel: ProductKernel) -> "NKernel":
        """The two dimensional product kernel as an `NKernel`"""
        return NKernel([kernel.fx, kernel.fy], kernel.scale)

    @staticmethod
    def from_dict(data: Dict, field: str = "kernel") -> "NKernel":
        """``{"factors": [{"name": ...}, ...], "scale": 1}``"""
        if not isinstance(data, dict) or not isinstance(data.get("factors"), list):
            raise ConfigError(field + ".factors", "expected a list of factors")
        factors = [Factor.from_dict(f, "{}.factors[{}]".format(field, k))
                   for k, f in enumerate(data["factors"])]
        return NKernel(factors, data.get("scale", 1))

    def to_dict(self) -> Dict:
        return {"factors": [k.to_dict() for k in self.factors], "scale": self.scale}


def region_measure(K: Kernel, lo: float, hi: float, lower: Callable[[float], float],
                   upper: Callable[[float], float], cfg: QuadConfig = None, points: Sequence[float] = (),
                   outer: str = "x", context: str = "region") -> IntegralResult:
    """Iterated integral of `K` between two curves

    With ``outer="x"`` this is ``∫_lo^hi ∫_{lower(x)}^{upper(x)} K(x, y) dy dx``;
    with ``outer="y"`` the roles of the variables are exchanged.
    `points` are extra cell boundaries of the outer integral, typically the
    breakpoints of the curves.
    """
    if cfg is None:
        cfg = QuadConfig()
    if outer == "x":
        inner = K.inner_y
        outer_points = K.points_x(lo, hi)
        tolerant = K.tolerant_x()
    elif outer == "y":
        inner = K.inner_x
        outer_points = K.points_y(lo, hi)
        tolerant = K.tolerant_y()
    else:
        raise ValueError("outer must be 'x' or 'y'")
    inner_errors = [0.0]

    def integrand(t):
        result = inner(t, lower(t), upper(t), cfg)
        if result.error_estimate > inner_errors[0]:
            inner_errors[0] = result.error_estimate
        return result.value

    try:
        result = integrate_1d(integrand, lo, hi, cfg, list(points) + outer_points, tolerant)
    except ConvergenceError as e:
        raise e.with_context(context)
    result.error_estimate += (hi - lo) * inner_errors[0]
    return result


def rect_measure(K: Kernel, a: float, b: float, c: float, d: float, cfg: QuadConfig = None) -> IntegralResult:
    """Measure of the rectangle ``[a, b] x [c, d]``

    >>> rect_measure(ProductKernel.one(), 0, 2, 0, 3).value
    6.0
    """
    if a > b or c > d:
        raise DomainError("degenerate orientation: [{}, {}] x [{}, {}]".format(a, b, c, d))
    K.check_box(a, b, c, d)
    if a == b or c == d:
        return IntegralResult(0.0, 0.0, 0)
    return region_measure(K, a, b, lambda x: c, lambda x: d, cfg, context="rectangle")


def hypograph_measure(K: Kernel, f: MonotoneFn, a: float, b: float, cfg: QuadConfig = None) -> IntegralResult:
    """``∫_a^b ∫_{f(a)}^{f(x)} K(x, y) dy dx``"""
    x_lo, x_hi = f.domain
    if not x_lo <= a <= b <= x_hi:
        raise DomainError("[{}, {}] is not inside the domain of f {}".format(a, b, f.domain))
    fa = f(a)
    K.check_box(a, b, fa, f.right(b))
    if a == b:
        return IntegralResult(0.0, 0.0, 0)
    return region_measure(K, a, b, lambda x: fa, f, cfg, f.knots_in(a, b), context="hypograph")


def epigraph_measure(K: Kernel, f: MonotoneFn, a: float, c: float, cfg: QuadConfig = None,
                     flavor: str = "sup") -> IntegralResult:
    """``∫_{f(a)}^c ∫_a^{g(y)} K(x, y) dx dy`` where `g` is a pseudo-inverse of `f`

    The sup-flavoured inverse is used unless `flavor` says otherwise;
    all flavours give the same value.
    """
    fa = f(a)
    if c < fa:
        raise DomainError("c={} is below f(a)={}".format(c, fa))
    g = f.pseudo_inverse(flavor)
    top = g(c)
    K.check_box(a, max(a, top), fa, c)
    if c == fa:
        return IntegralResult(0.0, 0.0, 0)
    points = [y for y in g.breakpoints if fa < y < c]
    return region_measure(K, fa, c, lambda y: a, g, cfg, points, outer="y", context="epigraph")
