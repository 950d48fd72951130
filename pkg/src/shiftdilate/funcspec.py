"""Symbolic function specs and their mini-language.

Grammar (whitespace-insensitive)::

    expr     := term ('|' modifier)*
    term     := gaussian(s) | hat(w) | bspline(n,w) | chirp(a)
              | sine(a) | zero | const(c)
    modifier := shift(x1[,x2,...]) | scale(c[,c_imag]) | compress(rho)

Terms evaluate on R^d for any d: gaussian and chirp are radial, hat and
bspline are tensor products over the axes.  Modifiers compose left to
right, so ``gaussian(1)|shift(2)|scale(0.5)`` is x -> 0.5 * g(x - 2).
``compress(rho)`` is the mass-preserving dilation rho^-d f(x/rho); it is
not part of the surface vocabulary of targets but is accepted so that
shifted dilates of a window are expressible as specs.

Definitions:

* ``gaussian(s)``: s^-d exp(-pi |x|^2 / s^2), unit integral, peak s^-d.
* ``hat(w)``: tensor triangle, support [-w, w]^d, peak 1.
* ``bspline(n, w)``: tensor cardinal B-spline of order n (n-fold
  convolution of a box), rescaled to support [-w, w] per axis;
  bspline(2, w) coincides with hat(w).
* ``chirp(a)``: exp(i pi a |x|^2).
* ``sine(a)``: prod_j sin(2 pi a x_j); zero mean on symmetric grids
  (the canonical window the approximation hypothesis rejects).
* ``const(c)``, ``zero``: constants.
"""

import functools
import re

import numpy as np
from scipy.interpolate import BSpline

from .errors import FunctionSpecError


def _fmt(value):
    """Shortest round-tripping decimal for canonical spec text."""
    if isinstance(value, float) and value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


class FunctionSpec:
    """A symbolic function R^d -> C.

    Callable on point arrays of shape (..., d); returns a complex array
    of shape (...).  The canonical text round-trips through parse().
    """

    def __init__(self, node):
        self._node = node
        self.text = node.canonical()

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        if points.ndim == 0:
            points = points.reshape(1)
        if points.ndim == 1:
            # interpret a bare vector as d=1 sample positions
            points = points[:, None]
        return np.asarray(self._node.evaluate(points), dtype=complex)

    def shifted(self, offset):
        """Spec for x -> f(x - offset)."""
        offset = tuple(float(v) for v in np.atleast_1d(offset))
        return FunctionSpec(_Shift(self._node, offset))

    def scaled(self, factor):
        """Spec for x -> factor * f(x); factor may be complex."""
        return FunctionSpec(_Scale(self._node, complex(factor)))

    def compressed(self, rho):
        """Spec for the mass-preserving dilation x -> rho^-d f(x/rho)."""
        if rho <= 0:
            raise ValueError(f"compression factor must be positive, got {rho}")
        return FunctionSpec(_Compress(self._node, float(rho)))

    def __repr__(self):
        return f"FunctionSpec({self.text!r})"

    def __eq__(self, other):
        return isinstance(other, FunctionSpec) and self.text == other.text

    def __hash__(self):
        return hash(self.text)


class _Gaussian:
    def __init__(self, width):
        if width <= 0:
            raise FunctionSpecError(f"gaussian needs a positive width, got {_fmt(width)}")
        self.width = width

    def evaluate(self, p):
        d = p.shape[-1]
        r2 = np.sum(p * p, axis=-1)
        return self.width ** (-d) * np.exp(-np.pi * r2 / self.width**2)

    def canonical(self):
        return f"gaussian({_fmt(self.width)})"


class _Hat:
    def __init__(self, width):
        if width <= 0:
            raise FunctionSpecError(f"hat needs a positive width, got {_fmt(width)}")
        self.width = width

    def evaluate(self, p):
        return np.prod(np.maximum(0.0, 1.0 - np.abs(p) / self.width), axis=-1)

    def canonical(self):
        return f"hat({_fmt(self.width)})"


@functools.lru_cache(maxsize=16)
def _cardinal_bspline(order):
    # order-fold convolution of the unit box, centered: support [-order/2, order/2]
    return BSpline.basis_element(np.arange(order + 1) - order / 2.0, extrapolate=False)


class _BSplineTerm:
    def __init__(self, order, width):
        if order < 1 or int(order) != order:
            raise FunctionSpecError(f"bspline order must be a positive integer, got {_fmt(order)}")
        if width <= 0:
            raise FunctionSpecError(f"bspline needs a positive width, got {_fmt(width)}")
        self.order = int(order)
        self.width = width

    def evaluate(self, p):
        basis = _cardinal_bspline(self.order)
        t = p * (self.order / (2.0 * self.width))
        vals = basis(t)
        vals = np.where(np.isnan(vals), 0.0, vals)
        return np.prod(vals, axis=-1)

    def canonical(self):
        return f"bspline({_fmt(float(self.order))},{_fmt(self.width)})"


class _Chirp:
    def __init__(self, rate):
        self.rate = rate

    def evaluate(self, p):
        r2 = np.sum(p * p, axis=-1)
        return np.exp(1j * np.pi * self.rate * r2)

    def canonical(self):
        return f"chirp({_fmt(self.rate)})"


class _Sine:
    # odd in every axis, hence zero mean on symmetric grids
    def __init__(self, freq):
        self.freq = freq

    def evaluate(self, p):
        return np.prod(np.sin(2.0 * np.pi * self.freq * p), axis=-1)

    def canonical(self):
        return f"sine({_fmt(self.freq)})"


class _Const:
    def __init__(self, value):
        self.value = value

    def evaluate(self, p):
        return np.full(p.shape[:-1], self.value, dtype=complex)

    def canonical(self):
        if self.value == 0:
            return "zero"
        return f"const({_fmt(self.value)})"


class _Shift:
    def __init__(self, inner, offset):
        self.inner = inner
        self.offset = offset

    def evaluate(self, p):
        d = p.shape[-1]
        off = np.asarray(self.offset, dtype=float)
        if off.size == 1:
            off = np.full(d, off.item())
        elif off.size != d:
            raise FunctionSpecError(
                f"shift has {off.size} components but points live in R^{d}"
            )
        return self.inner.evaluate(p - off)

    def canonical(self):
        args = ",".join(_fmt(v) for v in self.offset)
        return f"{self.inner.canonical()}|shift({args})"


class _Scale:
    def __init__(self, inner, factor):
        self.inner = inner
        self.factor = factor

    def evaluate(self, p):
        return self.factor * self.inner.evaluate(p)

    def canonical(self):
        if self.factor.imag == 0:
            args = _fmt(self.factor.real)
        else:
            args = f"{_fmt(self.factor.real)},{_fmt(self.factor.imag)}"
        return f"{self.inner.canonical()}|scale({args})"


class _Compress:
    def __init__(self, inner, rho):
        self.inner = inner
        self.rho = rho

    def evaluate(self, p):
        d = p.shape[-1]
        return self.rho ** (-d) * self.inner.evaluate(p / self.rho)

    def canonical(self):
        return f"{self.inner.canonical()}|compress({_fmt(self.rho)})"


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|[-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?|[(),|])")

_NUMBER = re.compile(r"[-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?$")


def _tokenize(text):
    tokens, pos = [], 0
    while pos < len(text) and text[pos:].strip():
        m = _TOKEN.match(text, pos)
        if m is None:
            snippet = text[pos:].lstrip()
            raise FunctionSpecError(f"unrecognized token at '{snippet[:12]}' in spec '{text}'")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def _parse_call(tokens, i, text):
    """Parse name or name(args); returns (name, args, next_index)."""
    name = tokens[i]
    if not name[0].isalpha() and name[0] != "_":
        raise FunctionSpecError(f"expected a term name, found '{name}' in spec '{text}'")
    i += 1
    args = []
    if i < len(tokens) and tokens[i] == "(":
        i += 1
        if i < len(tokens) and tokens[i] == ")":
            return name, args, i + 1
        while True:
            if i >= len(tokens):
                raise FunctionSpecError(f"unterminated argument list for '{name}' in spec '{text}'")
            tok = tokens[i]
            if not _NUMBER.match(tok):
                raise FunctionSpecError(f"expected a number in '{name}(...)', found '{tok}'")
            args.append(float(tok))
            i += 1
            if i >= len(tokens):
                raise FunctionSpecError(f"unterminated argument list for '{name}' in spec '{text}'")
            if tokens[i] == ",":
                i += 1
                continue
            if tokens[i] == ")":
                i += 1
                break
            raise FunctionSpecError(f"expected ',' or ')' after argument, found '{tokens[i]}'")
    return name, args, i


def _need(n_args, name, args, text):
    if len(args) != n_args:
        raise FunctionSpecError(
            f"'{name}' takes {n_args} argument(s), got {len(args)} in spec '{text}'"
        )


_MODIFIERS = {"shift", "scale", "compress"}


def parse(text):
    """Parse a spec expression into a FunctionSpec."""
    if isinstance(text, FunctionSpec):
        return text
    tokens = _tokenize(text)
    if not tokens:
        raise FunctionSpecError("empty function spec")
    name, args, i = _parse_call(tokens, 0, text)
    if name in _MODIFIERS:
        raise FunctionSpecError(f"modifier '{name}' cannot start a spec: '{text}'")
    if name == "gaussian":
        _need(1, name, args, text)
        node = _Gaussian(args[0])
    elif name == "hat":
        _need(1, name, args, text)
        node = _Hat(args[0])
    elif name == "bspline":
        _need(2, name, args, text)
        node = _BSplineTerm(args[0], args[1])
    elif name == "chirp":
        _need(1, name, args, text)
        node = _Chirp(args[0])
    elif name == "sine":
        _need(1, name, args, text)
        node = _Sine(args[0])
    elif name == "zero":
        _need(0, name, args, text)
        node = _Const(0.0)
    elif name == "const":
        _need(1, name, args, text)
        node = _Const(args[0])
    else:
        raise FunctionSpecError(f"unknown term '{name}' in spec '{text}'")

    while i < len(tokens):
        if tokens[i] != "|":
            raise FunctionSpecError(f"expected '|' between terms, found '{tokens[i]}' in '{text}'")
        i += 1
        if i >= len(tokens):
            raise FunctionSpecError(f"dangling '|' at end of spec '{text}'")
        name, args, i = _parse_call(tokens, i, text)
        if name == "shift":
            if not args:
                raise FunctionSpecError(f"'shift' needs at least one component in '{text}'")
            node = _Shift(node, tuple(args))
        elif name == "scale":
            if len(args) == 1:
                node = _Scale(node, complex(args[0]))
            elif len(args) == 2:
                node = _Scale(node, complex(args[0], args[1]))
            else:
                raise FunctionSpecError(f"'scale' takes 1 or 2 arguments, got {len(args)}")
        elif name == "compress":
            _need(1, name, args, text)
            if args[0] <= 0:
                raise FunctionSpecError(f"'compress' needs a positive factor in '{text}'")
            node = _Compress(node, args[0])
        else:
            raise FunctionSpecError(f"'{name}' is not a modifier (after '|') in spec '{text}'")
    return FunctionSpec(node)
