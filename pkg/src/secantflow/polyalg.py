"""Exact sparse polynomials in x, y, z over the rationals.

Everything symbolic in the package is built on :class:`Poly`: a frozen map
from exponent triples ``(dx, dy, dz)`` to nonzero :class:`fractions.Fraction`
coefficients.  The module also carries the text parser/printer, univariate
helpers used for root isolation, Sylvester resultants, and the two
blow-up decompositions of the z-chart ``sigma(x, y, z) = (xz, yz, z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

VARS = ("x", "y", "z")
_VAR_INDEX = {name: i for i, name in enumerate(VARS)}

Monomial = tuple[int, int, int]


class PolyError(ValueError):
    """Raised for invalid polynomial operations (bad division, zero input...)."""


class ParseError(PolyError):
    """Syntax error in polynomial text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


def _grlex_key(m: Monomial):
    return (sum(m), m)


class Poly:
    """Immutable sparse polynomial in ``x, y, z`` with rational coefficients.

    >>> x, y, z = Poly.gens()
    >>> str((x + y) * (x - y))
    'x^2 - y^2'
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coef in terms.items():
                if len(mono) != 3 or any(int(e) != e or e < 0 for e in mono):
                    raise PolyError(f"bad exponent triple {mono!r}")
                c = _frac(coef)
                if c:
                    key = (int(mono[0]), int(mono[1]), int(mono[2]))
                    clean[key] = clean.get(key, Fraction(0)) + c
                    if not clean[key]:
                        del clean[key]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> "Poly":
        # trusted constructor: terms already canonical (no zeros)
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        e = [0, 0, 0]
        e[_VAR_INDEX[name]] = 1
        return cls._raw({tuple(e): Fraction(1)})

    @classmethod
    def gens(cls) -> tuple["Poly", "Poly", "Poly"]:
        return cls.var("x"), cls.var("y"), cls.var("z")

    @classmethod
    def monomial(cls, dx: int, dy: int, dz: int, coef=1) -> "Poly":
        return cls({(dx, dy, dz): coef})

    # -- basic protocol ---------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    # -- ring operations --------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _frac(other)
            if not c:
                return Poly()
            return Poly._raw({m: v * c for m, v in self._terms.items()})
        if len(self._terms) < len(other._terms):
            a, b = self._terms, other._terms
        else:
            a, b = other._terms, self._terms
        out: dict[Monomial, Fraction] = {}
        for (a0, a1, a2), ca in a.items():
            for (b0, b1, b2), cb in b.items():
                key = (a0 + b0, a1 + b1, a2 + b2)
                out[key] = out.get(key, 0) + ca * cb
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise PolyError("polynomial powers need a non-negative integer exponent")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        return self * _frac(c)

    # -- structure --------------------------------------------------------
    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(m) for m in self._terms)
        i = _VAR_INDEX[var]
        return max(m[i] for m in self._terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0, 0, 0))

    def variables(self) -> set[str]:
        used = set()
        for m in self._terms:
            for i, e in enumerate(m):
                if e:
                    used.add(VARS[i])
        return used

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def coeffs_in(self, var: str) -> dict[int, "Poly"]:
        """Split into ``{k: coefficient of var^k}`` with coefficients free of ``var``."""
        i = _VAR_INDEX[var]
        parts: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            k = m[i]
            rest = list(m)
            rest[i] = 0
            parts.setdefault(k, {})[tuple(rest)] = c
        return {k: Poly._raw(v) for k, v in parts.items()}

    def z_divisible(self, k: int = 1) -> bool:
        return all(m[2] >= k for m in self._terms)

    def div_z_power(self, k: int) -> "Poly":
        """Exact division by ``z**k``."""
        if k < 0:
            raise PolyError("negative power of z")
        if not self.z_divisible(k):
            raise PolyError(f"polynomial is not divisible by z^{k}")
        return Poly._raw({(a, b, c - k): v for (a, b, c), v in self._terms.items()})

    def mul_z_power(self, k: int) -> "Poly":
        if k < 0:
            return self.div_z_power(-k)
        return Poly._raw({(a, b, c + k): v for (a, b, c), v in self._terms.items()})

    def restrict_z0(self) -> "Poly":
        """``f(x, y, 0)``."""
        return Poly._raw({m: c for m, c in self._terms.items() if m[2] == 0})

    # -- calculus / substitution -----------------------------------------
    def partial(self, var: str) -> "Poly":
        i = _VAR_INDEX[var]
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return Poly._raw(out)

    def diff(self, var: str) -> "Poly":
        return self.partial(var)

    def compose_blowup(self) -> "Poly":
        """``f(xz, yz, z)``: pull back through the z-chart of the blow-up."""
        return Poly._raw({(a, b, a + b + c): v for (a, b, c), v in self._terms.items()})

    def substitute_z(self, value) -> "Poly":
        """Exact specialisation ``f(x, y, value)``."""
        v = _frac(value)
        out: dict[Monomial, Fraction] = {}
        for (a, b, c), coef in self._terms.items():
            key = (a, b, 0)
            out[key] = out.get(key, 0) + coef * v**c
        return Poly._raw({m: c for m, c in out.items() if c})

    # -- evaluation -------------------------------------------------------
    def eval(self, point: Sequence) -> object:
        """Evaluate at ``(x, y, z)``; a 2-sequence means ``z = 0``.

        Exact when every coordinate is an int or Fraction, floating otherwise.
        """
        pt = list(point)
        if len(pt) == 2:
            pt.append(0)
        if len(pt) != 3:
            raise PolyError("evaluation point needs 2 or 3 coordinates")
        exact = all(isinstance(v, (int, Fraction)) for v in pt)
        if exact:
            pt = [Fraction(v) for v in pt]
            total = Fraction(0)
        else:
            pt = [float(v) for v in pt]
            total = 0.0
        powers = [dict(), dict(), dict()]
        for m, c in self._terms.items():
            term = c if exact else float(c)
            for i, e in enumerate(m):
                if e:
                    pw = powers[i].get(e)
                    if pw is None:
                        pw = pt[i] ** e
                        powers[i][e] = pw
                    term = term * pw
            total = total + term
        return total

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            return self.eval(point[0])
        return self.eval(point)

    def lambdify(self) -> "NumericPoly":
        return NumericPoly([self])

    # -- text -------------------------------------------------------------
    def to_text(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            mono = "*".join(
                VARS[i] if e == 1 else f"{VARS[i]}^{e}" for i, e in enumerate(m) if e
            )
            if not mono:
                body = _fmt_frac(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_frac(a)}*{mono}"
            if idx == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(pieces)

    def to_json(self) -> list:
        return [[list(m), str(c)] for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: Iterable) -> "Poly":
        return cls({tuple(m): Fraction(c) for m, c in data})


def _fmt_frac(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c.numerator}/{c.denominator})"


def x_y_z() -> tuple[Poly, Poly, Poly]:
    return Poly.gens()


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------

class NumericPoly:
    """Float evaluator for one or more polynomials sharing a monomial table.

    Calling it on scalars returns an array of component values; calling it on
    equally shaped arrays evaluates elementwise.
    """

    def __init__(self, polys: Sequence[Poly]):
        monos = sorted({m for p in polys for m in p._terms})
        self.n_out = len(polys)
        if not monos:
            monos = [(0, 0, 0)]
        self.exps = np.array(monos, dtype=np.int64).reshape(-1, 3)
        index = {m: i for i, m in enumerate(monos)}
        coef = np.zeros((len(polys), len(monos)))
        for k, p in enumerate(polys):
            for m, c in p._terms.items():
                coef[k, index[m]] = float(c)
        self.coef = coef
        self.maxdeg = self.exps.max(axis=0)
        self._ranges = [np.arange(d + 1) for d in self.maxdeg]

    def __call__(self, x, y, z):
        if np.ndim(x) == 0 and np.ndim(y) == 0 and np.ndim(z) == 0:
            px = float(x) ** self._ranges[0]
            py = float(y) ** self._ranges[1]
            pz = float(z) ** self._ranges[2]
            mono = px[self.exps[:, 0]] * py[self.exps[:, 1]] * pz[self.exps[:, 2]]
            return self.coef @ mono
        x, y, z = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(z, float))
        shape = x.shape
        flat = [v.ravel() for v in (x, y, z)]
        out = np.zeros((self.n_out, flat[0].size))
        pw = [np.power.outer(v, r) for v, r in zip(flat, self._ranges)]
        for j, (a, b, c) in enumerate(self.exps):
            mono = pw[0][:, a] * pw[1][:, b] * pw[2][:, c]
            out += np.outer(self.coef[:, j], mono)
        return out.reshape((self.n_out,) + shape)

    def grid_xy(self, xs: np.ndarray, ys: np.ndarray, z0: float) -> np.ndarray:
        """Values of the first polynomial on the tensor grid ``ys x xs`` at height z0.

        Returns an array indexed ``[iy, ix]``.
        """
        dx, dy = int(self.maxdeg[0]), int(self.maxdeg[1])
        C = np.zeros((dx + 1, dy + 1))
        zp = float(z0) ** self._ranges[2]
        for j, (a, b, c) in enumerate(self.exps):
            C[a, b] += self.coef[0, j] * zp[c]
        Vx = np.power.outer(np.asarray(xs, float), np.arange(dx + 1))
        Vy = np.power.outer(np.asarray(ys, float), np.arange(dy + 1))
        return Vy @ C.T @ Vx.T


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser:
    """Recursive descent over: expr := term (('+'|'-') term)*;
    term := unary ('*' unary)*; unary := '-' unary | '+' unary | power;
    power := atom ('^' INT)?; atom := NUMBER | VAR | '(' expr ')'.

    '/' is accepted only between numeric operands (rational literals such as
    1/4, or (1/4)); dividing by a polynomial is rejected.
    """

    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.pos = 0
        self.names = {name: VARS[i] for i, name in enumerate(names)}
        if len(names) > 3:
            raise PolyError("at most three variables are supported")

    def error(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Poly:
        if not self.text.strip():
            self.error("empty expression")
        p = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            where = self.pos
            self.pos += 1
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if q.variables() or q.is_zero() or q.degree() > 0:
                    self.error("division only by nonzero numeric constants", where)
                p = p * (1 / q.constant_term())
        return p

    def unary(self) -> Poly:
        c = self.peek()
        if c == "-":
            self.pos += 1
            return -self.unary()
        if c == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            if self.peek() == "-":
                self.error("negative exponent", start)
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("exponent must be a non-negative integer", start)
            return base ** int(self.text[start:self.pos])
        return base

    def atom(self) -> Poly:
        c = self.peek()
        if not c:
            self.error("unexpected end of input")
        if c == "(":
            self.pos += 1
            p = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return p
        if c.isdigit() or c == ".":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "."):
                self.pos += 1
            lit = self.text[start:self.pos]
            try:
                return Poly.const(Fraction(lit))
            except ValueError:
                self.error(f"bad number {lit!r}", start)
        if c.isalpha() or c == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.names:
                self.error(f"unknown variable {name!r}", start)
            return Poly.var(self.names[name])
        self.error(f"unexpected {c!r}")


def parse_poly(text: str, vars: Sequence[str] = VARS) -> Poly:
    """Parse polynomial text such as ``"(x^2-1/4)*(y^3-(1/4)*y)"``.

    ``vars`` names the variables in order; they map onto x, y, z.
    """
    return _Parser(text, vars).parse()


# ---------------------------------------------------------------------------
# exact division, univariate helpers, resultants
# ---------------------------------------------------------------------------

def _lex_lead(p: Poly) -> tuple[Monomial, Fraction]:
    m = max(p._terms)
    return m, p._terms[m]


def exact_div(p: Poly, q: Poly) -> Poly:
    """Quotient ``p / q``; raises :class:`PolyError` if the division is not exact."""
    if q.is_zero():
        raise PolyError("division by the zero polynomial")
    lq, cq = _lex_lead(q)
    rem = p
    quot: dict[Monomial, Fraction] = {}
    while rem:
        lr, cr = _lex_lead(rem)
        if any(a < b for a, b in zip(lr, lq)):
            raise PolyError("polynomial division is not exact")
        m = (lr[0] - lq[0], lr[1] - lq[1], lr[2] - lq[2])
        c = cr / cq
        quot[m] = c
        rem = rem - q * Poly._raw({m: c})
    return Poly._raw(quot)


def sylvester_matrix(p: Poly, q: Poly, var: str) -> list[list[Poly]]:
    m, n = p.degree(var), q.degree(var)
    pc, qc = p.coeffs_in(var), q.coeffs_in(var)
    size = m + n
    zero = Poly()
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + m - k] = pc.get(k, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + n - k] = qc.get(k, zero)
        rows.append(row)
    return rows


def _bareiss_det(mat: list[list[Poly]]) -> Poly:
    n = len(mat)
    if n == 0:
        return Poly.const(1)
    a = [row[:] for row in mat]
    sign = 1
    prev = Poly.const(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Poly()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = exact_div(num, prev)
            a[i][k] = Poly()
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def resultant(p: Poly, q: Poly, var: str) -> Poly:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``var``.

    The zero polynomial is returned when either input is zero (they share
    every root).  Two inputs both constant in ``var`` have no meaningful
    resultant and raise :class:`PolyError`.
    """
    if var not in _VAR_INDEX:
        raise PolyError(f"unknown variable {var!r}")
    if p.is_zero() or q.is_zero():
        return Poly()
    m, n = p.degree(var), q.degree(var)
    if m == 0 and n == 0:
        raise PolyError("resultant is degenerate: both inputs are constant in " + var)
    if n == 0:
        return q ** m
    if m == 0:
        return p ** n
    return _bareiss_det(sylvester_matrix(p, q, var))


def univariate_coeffs(p: Poly, var: str) -> list[Fraction]:
    """Coefficients (lowest degree first) of a polynomial in ``var`` only."""
    if p.variables() - {var}:
        raise PolyError(f"polynomial is not univariate in {var}")
    i = _VAR_INDEX[var]
    if p.is_zero():
        return []
    out = [Fraction(0)] * (p.degree(var) + 1)
    for m, c in p._terms.items():
        out[m[i]] = c
    return out


def _utrim(a: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _urem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = _utrim(a)
    b = _utrim(b)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = _utrim(a)
    return a


def _udiv(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = _utrim(a)
    b = _utrim(b)
    if len(a) < len(b):
        return []
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = _utrim(a)
    return q


def ugcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _utrim(a), _utrim(b)
    while b:
        a, b = b, _urem(a, b)
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def squarefree_part(a: list[Fraction]) -> list[Fraction]:
    a = _utrim(a)
    if len(a) <= 2:
        return a
    da = [c * i for i, c in enumerate(a)][1:]
    g = ugcd(a, da)
    return _udiv(a, g) if len(g) > 1 else a


def real_roots(coeffs: Sequence[Fraction], imag_tol: float = 1e-7) -> list[float]:
    """Real roots of a univariate rational polynomial, each reported once.

    Works on the square-free part so that multiple roots do not smear, then
    polishes every candidate with Newton steps in floating point.
    """
    sf = squarefree_part(list(coeffs))
    if len(sf) <= 1:
        return []
    # scale to monic with Fraction before going to floats
    c = [float(v / sf[-1]) for v in sf]
    roots = np.roots(c[::-1])
    scale = max(1.0, float(np.max(np.abs(roots)))) if roots.size else 1.0
    out = []
    dc = [i * v for i, v in enumerate(c)][1:]
    for r in roots:
        if abs(r.imag) > imag_tol * scale:
            continue
        t = float(r.real)
        for _ in range(4):
            f = np.polynomial.polynomial.polyval(t, c)
            d = np.polynomial.polynomial.polyval(t, dc)
            if d == 0:
                break
            step = f / d
            t -= step
            if abs(step) < 1e-16 * max(1.0, abs(t)):
                break
        out.append(t)
    out.sort()
    dedup: list[float] = []
    for t in out:
        if not dedup or abs(t - dedup[-1]) > 1e-9 * max(1.0, abs(t)):
            dedup.append(t)
    return dedup


# ---------------------------------------------------------------------------
# blow-up algebra
# ---------------------------------------------------------------------------

def compose_blowup(f: Poly) -> Poly:
    """``f(xz, yz, z)``."""
    return f.compose_blowup()


@dataclass(frozen=True)
class BlowupDecomposition:
    """An order and an exact quotient for one of the two z-chart factorisations.

    ``warning`` is set when the quotient does not vanish at the origin.
    """

    order: int
    quotient: Poly
    warning: str | None = None


def z_order_decompose(f: Poly) -> BlowupDecomposition:
    """Split ``f(xz, yz, z) = z**order * quotient`` with ``z`` not dividing the quotient.

    ``order`` is the lowest total degree of ``f``.
    """
    if f.is_zero():
        raise PolyError("z_order_decompose needs a nonzero polynomial")
    g = f.compose_blowup()
    k = min(m[2] for m in g._terms)
    q = g.div_z_power(k)
    warning = None
    if q.constant_term() != 0:
        warning = "quotient does not vanish at the origin"
    return BlowupDecomposition(k, q, warning)


def blowdown_decompose(f: Poly) -> BlowupDecomposition:
    """The pair ``(phi(f), psi(f))`` with ``psi(f)(xz, yz, z) = z**phi(f) * f``.

    ``f`` lives in the chart; ``psi(f)`` is the smallest ambient polynomial
    whose pull-back is ``f`` up to a power of ``z``.  Each chart monomial
    ``x^a y^b z^c`` becomes ``x^a y^b z^(phi + c - a - b)``, so
    ``phi(f) = max(a + b - c)`` and ``psi(f)(x, y, 0)`` is never identically
    zero.  ``order`` may come out non-positive (e.g. ``f = z``); callers that
    need ``phi >= 1`` must check.
    """
    if f.is_zero():
        raise PolyError("blowdown_decompose needs a nonzero polynomial")
    k = max(a + b - c for (a, b, c) in f._terms)
    q = Poly._raw({(a, b, k + c - a - b): v for (a, b, c), v in f._terms.items()})
    warning = None
    if q.constant_term() != 0:
        warning = "psi(f) does not vanish at the origin"
    elif k < 1:
        warning = "phi(f) < 1"
    return BlowupDecomposition(k, q, warning)


def random_poly(rng: np.random.Generator, max_degree: int = 6, n_terms: int = 6,
                variables: str = "xyz", coef_range: int = 9, denominators: Sequence[int] = (1, 2, 3, 4)) -> Poly:
    """Random sparse polynomial with small rational coefficients (test fodder)."""
    terms: dict[Monomial, Fraction] = {}
    idx = [_VAR_INDEX[v] for v in variables]
    for _ in range(n_terms):
        deg = int(rng.integers(0, max_degree + 1))
        e = [0, 0, 0]
        for _ in range(deg):
            e[idx[int(rng.integers(0, len(idx)))]] += 1
        num = int(rng.integers(-coef_range, coef_range + 1))
        den = int(rng.choice(list(denominators)))
        terms[tuple(e)] = terms.get(tuple(e), Fraction(0)) + Fraction(num, den)
    return Poly(terms)


def binomial(n: int, k: int) -> int:
    return math.comb(n, k)
