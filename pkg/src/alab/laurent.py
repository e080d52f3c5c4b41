"""Sparse integer Laurent polynomials in d commuting variables.

A polynomial is stored as a map from exponent vectors to nonzero Python
integers, so arithmetic is exact at any size.  Variables are written
``u1 .. ud`` in text form.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

Exponent = tuple[int, ...]

TWO_PI = 2.0 * math.pi


class PolySyntaxError(ValueError):
    """Raised when polynomial text cannot be parsed; ``pos`` is the offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class LaurentPoly:
    """Immutable sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("_dims", "_terms", "_hash")

    def __init__(self, dims: int, terms: Mapping[Sequence[int], int] | Iterable = ()):
        if int(dims) < 1:
            raise ValueError("dims must be >= 1")
        self._dims = int(dims)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, int] = {}
        for exp, coef in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != self._dims:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {self._dims}")
            if int(coef) != coef:
                raise TypeError(f"coefficient {coef!r} is not an integer")
            acc[exp] = acc.get(exp, 0) + int(coef)
        self._terms = {e: c for e, c in sorted(acc.items()) if c != 0}
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, c: int, dims: int) -> "LaurentPoly":
        return cls(dims, {(0,) * dims: c})

    @classmethod
    def monomial(cls, exp: Sequence[int], c: int = 1) -> "LaurentPoly":
        return cls(len(exp), {tuple(exp): c})

    @classmethod
    def variable(cls, j: int, dims: int) -> "LaurentPoly":
        """The variable ``u_j`` (1-based) in ``dims`` variables."""
        if not 1 <= j <= dims:
            raise ValueError(f"variable index {j} outside 1..{dims}")
        e = [0] * dims
        e[j - 1] = 1
        return cls(dims, {tuple(e): 1})

    @property
    def dims(self) -> int:
        return self._dims

    @property
    def terms(self) -> Mapping[Exponent, int]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def support(self) -> list[Exponent]:
        return list(self._terms)

    def coefficient(self, exp: Sequence[int]) -> int:
        return self._terms.get(tuple(exp), 0)

    def l1_norm(self) -> int:
        return sum(abs(c) for c in self._terms.values())

    def lipschitz_constant(self) -> float:
        """Bound on |f(e(t)) - f(e(s))| / ||t - s||_inf over the angle torus."""
        return TWO_PI * sum(abs(c) * sum(abs(e) for e in m) for m, c in self._terms.items())

    def support_box(self) -> tuple[Exponent, Exponent]:
        if not self._terms:
            raise ValueError("zero polynomial has no support")
        exps = np.array(list(self._terms), dtype=np.int64)
        return tuple(int(v) for v in exps.min(0)), tuple(int(v) for v in exps.max(0))

    def is_real_valued_on_torus(self) -> bool:
        return self == self.adjoint()

    # arithmetic
    def _check(self, other: "LaurentPoly") -> None:
        if other._dims != self._dims:
            raise ValueError(f"dims mismatch: {self._dims} vs {other._dims}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer)):
            return LaurentPoly.constant(int(other), self._dims)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self._dims, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self._dims, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self._dims, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are only defined for units")
        result = LaurentPoly.constant(1, self._dims)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, m: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial u^m."""
        return LaurentPoly(self._dims, {tuple(a + b for a, b in zip(e, m)): c
                                        for e, c in self._terms.items()})

    def adjoint(self) -> "LaurentPoly":
        return LaurentPoly(self._dims, {tuple(-a for a in e): c for e, c in self._terms.items()})

    def partial(self, j: int) -> "LaurentPoly":
        """Formal partial derivative with respect to ``u_j`` (1-based)."""
        if not 1 <= j <= self._dims:
            raise ValueError(f"axis {j} outside 1..{self._dims}")
        out = {}
        for e, c in self._terms.items():
            if e[j - 1] != 0:
                ne = list(e)
                ne[j - 1] -= 1
                out[tuple(ne)] = c * e[j - 1]
        return LaurentPoly(self._dims, out)

    def embed(self, dims: int) -> "LaurentPoly":
        """The same polynomial viewed in ``dims >= self.dims`` variables."""
        pad = (0,) * (dims - self._dims)
        return LaurentPoly(dims, {e + pad: c for e, c in self._terms.items()})

    def permute(self, perm: Sequence[int]) -> "LaurentPoly":
        """Relabel variables: new axis i carries old axis ``perm[i]`` (0-based)."""
        return LaurentPoly(self._dims, {tuple(e[p] for p in perm): c for e, c in self._terms.items()})

    # numeric views
    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Exponents as an (T, d) int array and coefficients as float64."""
        if not self._terms:
            return np.zeros((0, self._dims), dtype=np.int64), np.zeros(0)
        exps = np.array(list(self._terms), dtype=np.int64).reshape(-1, self._dims)
        coefs = np.array([float(c) for c in self._terms.values()])
        return exps, coefs

    def evaluate(self, angles: np.ndarray, chunk: int = 1 << 16) -> np.ndarray:
        """Vectorized f(e^{2 pi i t}) for an array of angle vectors, shape (..., d)."""
        t = np.asarray(angles, dtype=float)
        if t.shape[-1] != self._dims:
            raise ValueError("angle vectors have wrong length")
        flat = t.reshape(-1, self._dims)
        exps, coefs = self.arrays()
        out = np.empty(flat.shape[0], dtype=complex)
        for lo in range(0, flat.shape[0], chunk):
            phase = flat[lo:lo + chunk] @ exps.T
            phase -= np.floor(phase)
            out[lo:lo + chunk] = np.exp(TWO_PI * 1j * phase) @ coefs
        return out.reshape(t.shape[:-1])

    def evaluate_with_gradient(self, angles: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Values and d/dt gradients (shape (..., d)) of f(e^{2 pi i t})."""
        t = np.asarray(angles, dtype=float)
        flat = t.reshape(-1, self._dims)
        exps, coefs = self.arrays()
        phase = flat @ exps.T
        phase -= np.floor(phase)
        z = np.exp(TWO_PI * 1j * phase) * coefs
        val = z.sum(axis=1)
        grad = (TWO_PI * 1j) * (z @ exps.astype(float))
        return val.reshape(t.shape[:-1]), grad.reshape(t.shape)

    # comparisons and text
    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._dims == other._dims and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dims, tuple(self._terms.items())))
        return self._hash

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), key=lambda it: (sum(map(abs, it[0])), it[0])):
            factors = []
            for j, a in enumerate(e, start=1):
                if a == 1:
                    factors.append(f"u{j}")
                elif a != 0:
                    factors.append(f"u{j}^{a}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"LaurentPoly({self._dims}, {str(self)!r})"

    def to_json(self) -> dict:
        return {"dims": self._dims,
                "terms": [{"exp": list(e), "coef": c} for e, c in self._terms.items()]}

    @classmethod
    def from_json(cls, data: dict | str) -> "LaurentPoly":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["dims"], [(t["exp"], t["coef"]) for t in data["terms"]])


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>u(?P<idx>\d+))|(?P<op>[-+*^()]))")


def parse_laurent(text: str, dims: int) -> LaurentPoly:
    """Parse text such as ``"2 - u1 - 3*u2^-1 u3"`` into a LaurentPoly.

    Terms are joined by ``+``/``-``; each term is an optional integer
    coefficient, an optional ``*``, and factors ``uK`` or ``uK^E`` with E a
    possibly negative integer (``uK^(-E)`` is also accepted).  Factors may be
    juxtaposed or joined by ``*``.
    """
    src = text.replace("−", "-")
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {src[pos:].lstrip()[:1]!r}",
                                  len(src) - len(src[pos:].lstrip()))
        start = m.start(m.lastgroup if m.lastgroup != "idx" else "var")
        if m.group("int") is not None:
            tokens.append(("int", m.group("int"), start))
        elif m.group("var") is not None:
            tokens.append(("var", m.group("idx"), start))
        else:
            tokens.append(("op", m.group("op"), start))
        pos = m.end()
    tokens.append(("end", "", len(src)))

    i = 0
    terms: dict[Exponent, int] = {}

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def signed_int() -> int:
        kind, val, p = take()
        sign = 1
        while kind == "op" and val in "+-":
            sign = -sign if val == "-" else sign
            kind, val, p = take()
        if kind != "int":
            raise PolySyntaxError("expected integer exponent", p)
        return sign * int(val)

    def exponent() -> int:
        kind, val, p = peek()
        if kind == "op" and val == "(":
            take()
            e = signed_int()
            kind, val, p = take()
            if (kind, val) != ("op", ")"):
                raise PolySyntaxError("expected ')'", p)
            return e
        return signed_int()

    expect_term = True
    sign = 1
    while True:
        kind, val, p = peek()
        if kind == "end":
            if expect_term:
                raise PolySyntaxError("expected a term", p)
            break
        if kind == "op" and val in "+-":
            take()
            if val == "-":
                sign = -sign
            expect_term = True
            continue
        if not expect_term:
            raise PolySyntaxError(f"expected '+' or '-' before {val!r}", p)
        coef = 1
        exp = [0] * dims
        seen = False
        if kind == "int":
            take()
            coef = int(val)
            seen = True
            if peek()[:2] == ("op", "*"):
                take()
                if peek()[0] != "var":
                    raise PolySyntaxError("expected variable after '*'", peek()[2])
        while peek()[0] == "var":
            _, idx, vp = take()
            k = int(idx)
            if not 1 <= k <= dims:
                raise PolySyntaxError(f"variable u{k} exceeds dims={dims}", vp)
            e = 1
            if peek()[:2] == ("op", "^"):
                take()
                e = exponent()
            exp[k - 1] += e
            seen = True
            if peek()[:2] == ("op", "*"):
                take()
                if peek()[0] != "var":
                    raise PolySyntaxError("expected variable after '*'", peek()[2])
        if not seen:
            raise PolySyntaxError(f"unexpected token {val!r}", p)
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + sign * coef
        sign = 1
        expect_term = False
    return LaurentPoly(dims, terms)


def adjoint(f: LaurentPoly) -> LaurentPoly:
    """f*(u) = f(u^{-1})."""
    return f.adjoint()


@dataclass(frozen=True)
class Symmetry:
    """Outcome of the essential-symmetry test.

    ``kind`` is ``"symmetric"`` when f*(u) = u^shift f(u), ``"skew"`` when
    f*(u) = -u^shift f(u), and ``"none"`` otherwise (``shift`` is then None).
    """

    kind: str
    shift: Exponent | None

    @property
    def is_essentially_symmetric(self) -> bool:
        return self.kind != "none"


def essential_symmetry(f: LaurentPoly) -> Symmetry:
    if f.is_zero():
        raise ValueError("essential symmetry is undefined for the zero polynomial")
    lo, hi = f.support_box()
    # f* has support -S, u^m f has support S + m; matching boxes forces m.
    m = tuple(-(a + b) for a, b in zip(lo, hi))
    target = f.shift(m)
    fs = f.adjoint()
    if fs == target:
        return Symmetry("symmetric", m)
    if fs == -target:
        return Symmetry("skew", m)
    return Symmetry("none", None)


def poly_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def partial_derivative(f: LaurentPoly, j: int) -> LaurentPoly:
    return f.partial(j)


def eval_at_angles(f: LaurentPoly, t: Sequence[float]) -> complex:
    """f(e^{2 pi i t_1}, ..., e^{2 pi i t_d}) with exactly rounded summation.

    Angles may be floats or Fractions; the phase m.t is reduced mod 1 before
    the exponential, exactly when the angles are rational.
    """
    if len(t) != f.dims:
        raise ValueError("angle vector has wrong length")
    re_parts, im_parts = [], []
    for m, c in f.terms.items():
        phase = sum(a * b for a, b in zip(m, t))
        phase = float(phase - math.floor(phase))
        re_parts.append(c * math.cos(TWO_PI * phase))
        im_parts.append(c * math.sin(TWO_PI * phase))
    return complex(math.fsum(re_parts), math.fsum(im_parts))
