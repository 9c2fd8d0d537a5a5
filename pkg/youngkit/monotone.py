"""Nondecreasing functions with jumps and plateaus, and their pseudo-inverses

A `MonotoneFn` is a finite sequence of contiguous `Piece` objects, each a
continuous nondecreasing elementary function on its own closed interval.
Jumps are not stored separately: they appear wherever two adjacent pieces
disagree at their common knot. Point values at a jump are the right limits.
"""
import bisect
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from . import settings
from .errors import ConfigError, DomainError, PreconditionError


logger = logging.getLogger("youngkit.monotone")

__all__ = [
    "Piece", "AffinePiece", "PowerPiece", "ExpPiece", "ErfPiece", "StepPiece", "InversePiece",
    "CallablePiece", "register_callable", "MonotoneFn", "PseudoInverse",
    "identity", "affine", "power", "step", "from_pieces", "from_callable",
    "evaluate", "pseudo_inverse", "eval_inverse",
]

SIDES = ("left", "right", "point")
FLAVORS = ("sup", "inf", "quantile")


class Piece:
    """A continuous nondecreasing function on ``[start, end]``

    Subclasses implement `__call__` and, when it exists in closed form,
    `inverse`. The generalized inverses fall back to bisection.
    """
    kind = None

    def __init__(self, start: float, end: float):
        start = float(start)
        end = float(end)
        if not start < end:
            raise DomainError("piece start {} must be smaller than its end {}".format(start, end))
        self.start = start
        self.end = end

    def __call__(self, x):
        raise NotImplementedError

    @property
    def strict(self) -> bool:
        """Whether the piece is strictly increasing"""
        return False

    def inverse(self, y: float) -> Optional[float]:
        """Closed form inverse, or `None` when there is none"""
        return None

    def params(self) -> Dict:
        return {}

    def to_dict(self) -> Dict:
        result = {"kind": self.kind, "start": self.start, "end": self.end}
        result.update(self.params())
        return result

    def _clip(self, x: float) -> float:
        return min(max(x, self.start), self.end)

    def sup_inverse(self, y: float) -> float:
        """inf{x in [start, end] : p(x) > y}"""
        if self.strict:
            x = self.inverse(y)
            if x is not None:
                return self._clip(x)
        return self._bisect(lambda v: v > y)

    def inf_inverse(self, y: float) -> float:
        """sup{x in [start, end] : p(x) < y}"""
        if self.strict:
            x = self.inverse(y)
            if x is not None:
                return self._clip(x)
        return self._bisect(lambda v: v >= y)

    def _bisect(self, above: Callable[[float], bool]) -> float:
        """Locate the point where the predicate `above(p(x))` switches from False to True"""
        lo, hi = self.start, self.end
        if above(self(lo)):
            return lo
        if not above(self(hi)):
            return hi
        for _ in range(settings.bisection_max_iter):
            if hi - lo <= settings.bisection_tol:
                break
            mid = 0.5 * (lo + hi)
            if above(self(mid)):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)


class AffinePiece(Piece):
    """``slope * x + intercept``"""
    kind = "affine"

    def __init__(self, start, end, slope: float = 1, intercept: float = 0):
        super().__init__(start, end)
        self.slope = float(slope)
        self.intercept = float(intercept)
        if self.slope < 0:
            raise PreconditionError("affine piece has negative slope {}".format(self.slope))

    def __call__(self, x):
        return self.slope * x + self.intercept

    @property
    def strict(self):
        return self.slope > 0

    def inverse(self, y):
        return (y - self.intercept) / self.slope

    def params(self):
        return {"slope": self.slope, "intercept": self.intercept}


class PowerPiece(Piece):
    """``offset + scale * (x - shift)**alpha``"""
    kind = "power"

    def __init__(self, start, end, alpha: float, scale: float = 1, shift: float = 0, offset: float = 0):
        super().__init__(start, end)
        self.alpha = float(alpha)
        self.scale = float(scale)
        self.shift = float(shift)
        self.offset = float(offset)
        if self.alpha <= 0 or self.scale < 0:
            raise PreconditionError("power piece needs alpha > 0 and scale >= 0")
        if self.start < self.shift:
            raise DomainError("power piece starts at {} below its shift {}".format(self.start, self.shift))

    def __call__(self, x):
        return self.offset + self.scale * np.power(np.maximum(x - self.shift, 0.0), self.alpha)

    @property
    def strict(self):
        return self.scale > 0

    def inverse(self, y):
        ratio = max((y - self.offset) / self.scale, 0.0)
        return self.shift + ratio ** (1 / self.alpha)

    def params(self):
        return {"alpha": self.alpha, "scale": self.scale, "shift": self.shift, "offset": self.offset}


class ExpPiece(Piece):
    """``offset + scale * exp(rate * x)``"""
    kind = "exp"

    def __init__(self, start, end, rate: float = 1, scale: float = 1, offset: float = 0):
        super().__init__(start, end)
        self.rate = float(rate)
        self.scale = float(scale)
        self.offset = float(offset)
        if self.rate < 0 or self.scale < 0:
            raise PreconditionError("exp piece needs rate >= 0 and scale >= 0")

    def __call__(self, x):
        return self.offset + self.scale * np.exp(self.rate * x)

    @property
    def strict(self):
        return self.rate > 0 and self.scale > 0

    def inverse(self, y):
        ratio = (y - self.offset) / self.scale
        if ratio <= 0:
            return self.start
        return np.log(ratio) / self.rate

    def params(self):
        return {"rate": self.rate, "scale": self.scale, "offset": self.offset}


class ErfPiece(Piece):
    """``offset + scale * erf(rate * (x - shift))``"""
    kind = "erf"

    def __init__(self, start, end, rate: float = 1, scale: float = 1, shift: float = 0, offset: float = 0):
        super().__init__(start, end)
        self.rate = float(rate)
        self.scale = float(scale)
        self.shift = float(shift)
        self.offset = float(offset)
        if self.rate < 0 or self.scale < 0:
            raise PreconditionError("erf piece needs rate >= 0 and scale >= 0")

    def __call__(self, x):
        return self.offset + self.scale * special.erf(self.rate * (x - self.shift))

    @property
    def strict(self):
        return self.rate > 0 and self.scale > 0

    def inverse(self, y):
        ratio = (y - self.offset) / self.scale
        if not -1 < ratio < 1:
            return None
        return self.shift + special.erfinv(ratio) / self.rate

    def params(self):
        return {"rate": self.rate, "scale": self.scale, "shift": self.shift, "offset": self.offset}


class StepPiece(Piece):
    """A constant piece, the building block of steps and plateaus"""
    kind = "step"

    def __init__(self, start, end, value: float = 0):
        super().__init__(start, end)
        self.value = float(value)

    def __call__(self, x):
        return self.value + 0 * np.asarray(x, dtype=float)

    def sup_inverse(self, y):
        return self.start if self.value > y else self.end

    def inf_inverse(self, y):
        return self.end if self.value < y else self.start

    def params(self):
        return {"value": self.value}


class InversePiece(Piece):
    """The sup-flavoured generalized inverse of another piece

    Lives on ``[of(of.start), of(of.end)]`` and takes values in
    ``[of.start, of.end]``.
    """
    kind = "inverse"

    def __init__(self, start, end, of: Piece):
        super().__init__(start, end)
        self.of = of

    def __call__(self, y):
        if np.ndim(y) == 0:
            return self.of.sup_inverse(min(max(float(y), self.start), self.end))
        return np.array([self(v) for v in np.ravel(y)]).reshape(np.shape(y))

    @property
    def strict(self):
        return self.of.strict

    def inverse(self, x):
        return float(self.of(x))

    def params(self):
        return {"of": self.of.to_dict()}


_CALLABLES = {
    "sqrt": (np.sqrt, np.square),
    "log1p": (np.log1p, np.expm1),
    "tanh": (np.tanh, np.arctanh),
    "arctan": (np.arctan, np.tan),
}


def register_callable(name: str, func: Callable, inverse: Callable = None):
    """Register a continuous nondecreasing callable for use in JSON descriptions

    :param name: Name used as ``{"kind": "callable", "name": name}``.
    :param func: The function, accepting scalars and numpy arrays.
    :param inverse: Its inverse, if known in closed form.
    """
    _CALLABLES[name] = (func, inverse)


class CallablePiece(Piece):
    """A registered (or ad hoc) continuous nondecreasing callable"""
    kind = "callable"

    def __init__(self, start, end, func: Callable = None, name: str = None, inverse: Callable = None):
        super().__init__(start, end)
        if func is None:
            if name not in _CALLABLES:
                raise ConfigError("name", "unknown callable {!r}".format(name))
            func, inverse = _CALLABLES[name]
        self.func = func
        self.name = name
        self._inverse = inverse
        samples = func(np.linspace(self.start, self.end, settings.monotone_samples))
        self._strict = bool(np.all(np.diff(samples) > 0))

    def __call__(self, x):
        return self.func(x)

    @property
    def strict(self):
        return self._strict

    def inverse(self, y):
        if self._inverse is None:
            return None
        return float(self._inverse(y))

    def to_dict(self):
        if self.name is None:
            raise ConfigError("kind", "an unregistered callable piece has no JSON form")
        return super().to_dict()

    def params(self):
        return {"name": self.name}


PIECE_KINDS = {
    cls.kind: cls
    for cls in [AffinePiece, PowerPiece, ExpPiece, ErfPiece, StepPiece, InversePiece, CallablePiece]
}


def _piece_from_dict(data: Dict, field: str) -> Piece:
    if not isinstance(data, dict):
        raise ConfigError(field, "expected an object")
    params = dict(data)
    kind = params.pop("kind", None)
    if kind not in PIECE_KINDS:
        raise ConfigError(field + ".kind", "unknown piece kind {!r}".format(kind))
    for key in ("start", "end"):
        if key not in params:
            raise ConfigError("{}.{}".format(field, key), "missing")
    if kind == "inverse":
        params["of"] = _piece_from_dict(params.get("of"), field + ".of")
    try:
        return PIECE_KINDS[kind](**params)
    except TypeError as e:
        raise ConfigError(field, str(e))


class MonotoneFn:
    """A nondecreasing function on a closed interval

    Parameters
    ----------
    pieces: list of `Piece`
        Contiguous pieces, ``pieces[i].end == pieces[i+1].start``.
        Wherever ``pieces[i](end) < pieces[i+1](start)`` the function jumps;
        a decrease is rejected.

    The point value at a jump is the right limit and ``f(x_lo-) = f(x_lo)``.
    """
    def __init__(self, pieces: Sequence[Piece]):
        if len(pieces) == 0:
            raise DomainError("a monotone function needs at least one piece")
        for k in range(1, len(pieces)):
            if pieces[k].start != pieces[k-1].end:
                raise DomainError("piece {} starts at {} but piece {} ends at {}".format(
                    k, pieces[k].start, k-1, pieces[k-1].end))
        self.pieces = tuple(pieces)
        self.knots = [p.start for p in pieces] + [pieces[-1].end]
        n = len(pieces)
        right = [float(p(p.start)) for p in pieces] + [float(pieces[-1](pieces[-1].end))]
        left = [right[0]] + [float(pieces[k-1](self.knots[k])) for k in range(1, n + 1)]
        self._validate(left, right)
        self.left_values = left
        self.right_values = right
        # interleaved r_0 <= l_1 <= r_1 <= ... <= l_n <= r_n, the search table of the inverses
        values = [right[0]]
        for k in range(1, n + 1):
            values += [left[k], right[k]]
        self.values = list(np.maximum.accumulate(values))

    def _validate(self, left: List[float], right: List[float]):
        slack = settings.monotone_slack
        for k, piece in enumerate(self.pieces):
            samples = np.asarray(piece(np.linspace(piece.start, piece.end, settings.monotone_samples)))
            if not np.all(np.isfinite(samples)):
                raise PreconditionError("piece {} takes non-finite values".format(k))
            if np.any(np.diff(samples) < -slack):
                raise PreconditionError("piece {} ({}) is decreasing".format(k, piece.kind))
        for k in range(1, len(self.knots)):
            if left[k] > right[k] + slack:
                raise PreconditionError("jump down at x={}: {} > {}".format(self.knots[k], left[k], right[k]))

    @property
    def domain(self) -> Tuple[float, float]:
        return self.knots[0], self.knots[-1]

    @property
    def codomain(self) -> Tuple[float, float]:
        return self.values[0], self.values[-1]

    @property
    def breakpoints(self) -> List[Tuple[float, float, float]]:
        """``(x_i, f(x_i-), f(x_i+))`` for every knot"""
        return list(zip(self.knots, self.left_values, self.right_values))

    def _check(self, x: float):
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise DomainError("x={} outside the domain [{}, {}]".format(x, lo, hi))

    def evaluate(self, x: float, side: str = "point") -> float:
        """The lateral limit ``f(x-)``, ``f(x+)`` or the point value at `x`"""
        if side not in SIDES:
            raise ValueError("side must be one of {}".format(SIDES))
        x = float(x)
        self._check(x)
        k = bisect.bisect_right(self.knots, x) - 1
        if self.knots[k] == x:
            return self.left_values[k] if side == "left" else self.right_values[k]
        return float(self.pieces[k](x))

    def __call__(self, x):
        if np.ndim(x) == 0:
            return self.evaluate(x)
        return np.array([self.evaluate(v) for v in np.ravel(x)]).reshape(np.shape(x))

    def left(self, x: float) -> float:
        return self.evaluate(x, "left")

    def right(self, x: float) -> float:
        return self.evaluate(x, "right")

    def knots_in(self, lo: float, hi: float) -> List[float]:
        """Knots strictly inside ``(lo, hi)``"""
        return [x for x in self.knots if lo < x < hi]

    def jumps_in(self, lo: float, hi: float) -> List[float]:
        """Knots in ``(lo, hi]`` where the function jumps"""
        return [x for x, lv, rv in self.breakpoints if lo < x <= hi and rv > lv]

    def is_continuous_on(self, lo: float, hi: float) -> bool:
        return len(self.jumps_in(lo, hi)) == 0

    def is_strictly_increasing_on(self, lo: float, hi: float) -> bool:
        if not self.is_continuous_on(lo, hi):
            return False
        return all(p.strict for p in self.pieces if p.end > lo and p.start < hi)

    def pseudo_inverse(self, flavor: str = "sup") -> "PseudoInverse":
        return PseudoInverse(self, flavor)

    def to_dict(self) -> Dict:
        return {"domain": list(self.domain), "pieces": [p.to_dict() for p in self.pieces]}

    @staticmethod
    def from_dict(data: Dict, field: str = "f") -> "MonotoneFn":
        """Build a function from ``{"domain": [lo, hi], "pieces": [...]}``

        A single piece may omit ``start`` and ``end``; they default to the domain.
        """
        if not isinstance(data, dict):
            raise ConfigError(field, "expected an object")
        try:
            lo, hi = [float(v) for v in data["domain"]]
        except KeyError:
            raise ConfigError(field + ".domain", "missing")
        except (TypeError, ValueError):
            raise ConfigError(field + ".domain", "expected [lo, hi]")
        pieces = data.get("pieces")
        if not isinstance(pieces, list) or len(pieces) == 0:
            raise ConfigError(field + ".pieces", "expected a non-empty list")
        if len(pieces) == 1:
            pieces = [dict({"start": lo, "end": hi}, **pieces[0])]
        result = [_piece_from_dict(p, "{}.pieces[{}]".format(field, k)) for k, p in enumerate(pieces)]
        if result[0].start != lo or result[-1].end != hi:
            raise ConfigError(field + ".pieces", "pieces do not cover the domain [{}, {}]".format(lo, hi))
        try:
            return MonotoneFn(result)
        except (DomainError, PreconditionError) as e:
            raise ConfigError(field, str(e))

    def __repr__(self):
        return "MonotoneFn({})".format(", ".join(
            "{}[{:g},{:g}]".format(p.kind, p.start, p.end) for p in self.pieces))


class PseudoInverse:
    """A generalized inverse of a `MonotoneFn`

    ``sup``: ``inf{x : f(x) > y}``; ``inf``: ``sup{x : f(x) < y}``;
    ``quantile``: ``inf{x : f(x) >= y}``.
    Plateaus of the source become jumps of the inverse and jumps become plateaus.
    When the defining set is empty the sup flavour returns ``x_hi`` and the others ``x_lo``.
    """
    def __init__(self, source: MonotoneFn, flavor: str = "sup"):
        if flavor not in FLAVORS:
            raise ValueError("flavor must be one of {}".format(FLAVORS))
        self.source = source
        self.flavor = flavor

    @property
    def codomain(self) -> Tuple[float, float]:
        """The interval of admissible arguments, ``[f(x_lo), f(x_hi)]``"""
        return self.source.codomain

    @property
    def breakpoints(self) -> List[float]:
        """Arguments where the inverse may jump or turn into a plateau"""
        return sorted(set(self.source.values))

    def __call__(self, y):
        if np.ndim(y) != 0:
            return np.array([self(v) for v in np.ravel(y)]).reshape(np.shape(y))
        y = float(y)
        lo, hi = self.codomain
        if not lo <= y <= hi:
            raise DomainError("y={} outside the codomain [{}, {}]".format(y, lo, hi))
        f = self.source
        values = f.values
        if self.flavor == "sup":
            k = bisect.bisect_right(values, y)
            if k == len(values):
                return f.knots[-1]
        else:
            k = bisect.bisect_left(values, y)
            if k == 0:
                return f.knots[0]
            if k == len(values):
                return f.knots[-1]
        i, inside = divmod(k, 2)
        if not inside:
            return f.knots[i]
        piece = f.pieces[i]
        return piece.sup_inverse(y) if self.flavor == "sup" else piece.inf_inverse(y)

    def as_monotone(self) -> MonotoneFn:
        """The inverse as a `MonotoneFn` on the codomain of the source

        It agrees with every flavour except on the countable set of plateau values;
        its point values are those of the sup flavour.
        """
        f = self.source
        pieces = []
        for i, piece in enumerate(f.pieces):
            if i > 0 and f.right_values[i] > f.left_values[i]:
                pieces.append(StepPiece(f.left_values[i], f.right_values[i], f.knots[i]))
            lo, hi = f.right_values[i], f.left_values[i + 1]
            if hi > lo:
                pieces.append(InversePiece(lo, hi, piece))
        if not pieces:
            raise DomainError("a constant function has no invertible range")
        # the accumulated search table may have nudged endpoints; close the gaps exactly
        for k in range(1, len(pieces)):
            if pieces[k].start != pieces[k-1].end:
                pieces[k].start = pieces[k-1].end
        return MonotoneFn(pieces)

    def __repr__(self):
        return "PseudoInverse({!r}, {})".format(self.source, self.flavor)


def from_pieces(pieces: Sequence[Piece]) -> MonotoneFn:
    return MonotoneFn(pieces)


def identity(lo: float = 0, hi: float = 1) -> MonotoneFn:
    return MonotoneFn([AffinePiece(lo, hi, 1, 0)])


def affine(slope: float, intercept: float = 0, lo: float = 0, hi: float = 1) -> MonotoneFn:
    return MonotoneFn([AffinePiece(lo, hi, slope, intercept)])


def power(alpha: float, lo: float = 0, hi: float = 1, scale: float = 1, shift: float = 0,
          offset: float = 0) -> MonotoneFn:
    """``offset + scale * (x - shift)**alpha`` on ``[lo, hi]``"""
    return MonotoneFn([PowerPiece(lo, hi, alpha, scale, shift, offset)])


def step(at: float, below: float, above: float, lo: float = 0, hi: float = 1) -> MonotoneFn:
    """The step function equal to `below` on ``[lo, at)`` and `above` on ``[at, hi]``"""
    return MonotoneFn([StepPiece(lo, at, below), StepPiece(at, hi, above)])


def from_callable(func: Callable, lo: float, hi: float, inverse: Callable = None,
                  name: str = None) -> MonotoneFn:
    return MonotoneFn([CallablePiece(lo, hi, func, name, inverse)])


def evaluate(f: MonotoneFn, x: float, side: str = "point") -> float:
    """Lateral limit (``side="left"`` or ``"right"``) or point value of `f` at `x`

    The point value at a jump is the right limit.
    """
    return f.evaluate(x, side)


def pseudo_inverse(f: MonotoneFn, flavor: str = "sup") -> PseudoInverse:
    return PseudoInverse(f, flavor)


def eval_inverse(g: PseudoInverse, y: float) -> float:
    return g(y)
