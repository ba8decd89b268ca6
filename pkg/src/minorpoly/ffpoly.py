"""Sparse multivariate polynomials over the prime field Z_p.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable,
with every exponent positive; the empty tuple is the constant monomial.
Field elements are plain ints in ``[0, p)``.  Polynomials are immutable.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from itertools import product as cartesian
from typing import Iterable, Mapping

from .errors import DomainError, ResourceError

Monomial = tuple[tuple[int, int], ...]

DEFAULT_TERM_CAP = 1_000_000
DEFAULT_EVAL_CAP = 2_000_000


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def next_prime_above(x: int) -> int:
    """Least prime strictly greater than ``x``."""
    c = max(x + 1, 2)
    while not is_prime(c):
        c += 1
    return c


def reduced_exponent(e: int, p: int) -> int:
    """Exponent after repeatedly applying v^p = v; positive exponents stay positive."""
    if e < p:
        return e
    return (e - 1) % (p - 1) + 1


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_str(m: Monomial) -> str:
    return "*".join(f"v{v}" if e == 1 else f"v{v}^{e}" for v, e in m)


class FieldPoly:
    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping[Monomial, int] | None = None):
        if not is_prime(p):
            raise DomainError(f"modulus {p} is not prime")
        self.p = p
        clean: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            c %= p
            if c:
                clean[mono] = c
        self.terms = clean

    @classmethod
    def _raw(cls, p: int, terms: dict[Monomial, int]) -> FieldPoly:
        f = cls.__new__(cls)
        f.p = p
        f.terms = terms
        return f

    @classmethod
    def constant(cls, p: int, c: int) -> FieldPoly:
        return cls(p, {(): c})

    @classmethod
    def var(cls, p: int, v: int) -> FieldPoly:
        return cls(p, {((v, 1),): 1})

    @classmethod
    def linear(cls, p: int, v: int, c: int) -> FieldPoly:
        """The factor ``v - c``."""
        return cls(p, {((v, 1),): 1, (): -c})

    @classmethod
    def difference(cls, p: int, u: int, v: int) -> FieldPoly:
        """The factor ``u - v`` for two distinct variables."""
        return cls(p, {((u, 1),): 1, ((v, 1),): p - 1})

    # basic queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> list[int]:
        return sorted({v for m in self.terms for v, _ in m})

    def degree_in(self, v: int) -> int:
        return max((dict(m).get(v, 0) for m in self.terms), default=0)

    def max_exponent(self) -> int:
        return max((e for m in self.terms for _, e in m), default=0)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items())

    def _coerce(self, other: FieldPoly | int) -> FieldPoly:
        if isinstance(other, FieldPoly):
            if other.p != self.p:
                raise DomainError(f"modulus mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return FieldPoly.constant(self.p, other)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = FieldPoly.constant(self.p, other)
        if not isinstance(other, FieldPoly):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.p, frozenset(self.terms.items())))

    def __add__(self, other: FieldPoly | int) -> FieldPoly:
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self) -> FieldPoly:
        return FieldPoly._raw(self.p, {m: self.p - c for m, c in self.terms.items()})

    def __sub__(self, other: FieldPoly | int) -> FieldPoly:
        return add(self, -self._coerce(other))

    def __rsub__(self, other: FieldPoly | int) -> FieldPoly:
        return add(self._coerce(other), -self)

    def __mul__(self, other: FieldPoly | int) -> FieldPoly:
        return mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> FieldPoly:
        out = FieldPoly.constant(self.p, 1)
        for _ in range(k):
            out = mul(out, self)
        return out

    def __call__(self, point: Mapping[int, int]) -> int:
        return evaluate(self, point)

    def to_text(self) -> str:
        return f"p={self.p}\n{self.body_text()}"

    def body_text(self) -> str:
        if not self.terms:
            return "0"
        return "+".join(
            str(c) if not m else f"{c}*{_mono_str(m)}" for m, c in self.sorted_terms()
        )

    @classmethod
    def from_text(cls, text: str) -> FieldPoly:
        head, _, body = text.strip().partition("\n")
        if not head.startswith("p="):
            raise DomainError("missing modulus header")
        p = int(head[2:])
        terms: dict[Monomial, int] = {}
        body = body.strip()
        if body and body != "0":
            for chunk in body.split("+"):
                coeff, *factors = chunk.split("*")
                mono: dict[int, int] = {}
                for fac in factors:
                    name, _, exp = fac.partition("^")
                    if not name.startswith("v"):
                        raise DomainError(f"bad variable {name!r}")
                    v = int(name[1:])
                    mono[v] = mono.get(v, 0) + (int(exp) if exp else 1)
                key = tuple(sorted(mono.items()))
                terms[key] = terms.get(key, 0) + int(coeff)
        return cls(p, terms)

    def __repr__(self) -> str:
        return f"FieldPoly(p={self.p}, {self.body_text()})"


# arithmetic -------------------------------------------------------------------


def add(a: FieldPoly, b: FieldPoly) -> FieldPoly:
    if a.p != b.p:
        raise DomainError(f"modulus mismatch: {a.p} vs {b.p}")
    p = a.p
    out = dict(a.terms)
    for m, c in b.terms.items():
        s = (out.get(m, 0) + c) % p
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return FieldPoly._raw(p, out)


def mul(a: FieldPoly, b: FieldPoly, term_cap: int = DEFAULT_TERM_CAP) -> FieldPoly:
    if a.p != b.p:
        raise DomainError(f"modulus mismatch: {a.p} vs {b.p}")
    p = a.p
    if len(a.terms) < len(b.terms):
        a, b = b, a
    out: dict[Monomial, int] = {}
    bt = list(b.terms.items())
    for ma, ca in a.terms.items():
        for mb, cb in bt:
            m = _mono_mul(ma, mb)
            out[m] = (out.get(m, 0) + ca * cb) % p
        if len(out) > term_cap:
            raise ResourceError(f"product exceeded {term_cap} terms")
    return FieldPoly._raw(p, {m: c for m, c in out.items() if c})


def fermat_reduce(f: FieldPoly, exclude: Iterable[int] = ()) -> FieldPoly:
    """Apply v^p = v to every variable not in ``exclude`` until exponents are at most p - 1.

    The result agrees with ``f`` at every point of Z_p^n.
    """
    p = f.p
    skip = frozenset(exclude)
    out: dict[Monomial, int] = {}
    for m, c in f.terms.items():
        rm = tuple((v, e if v in skip else reduced_exponent(e, p)) for v, e in m)
        out[rm] = (out.get(rm, 0) + c) % p
    return FieldPoly._raw(p, {m: c for m, c in out.items() if c})


def product(
    factors: Iterable[FieldPoly],
    p: int,
    reduce: bool = True,
    exclude: Iterable[int] = (),
    term_cap: int = DEFAULT_TERM_CAP,
) -> FieldPoly:
    """Multiply ``factors``; with ``reduce`` the running product is kept Fermat-reduced."""
    skip = frozenset(exclude)
    out = FieldPoly.constant(p, 1)
    for f in factors:
        lin = _linear_parts(f)
        if lin is not None:
            out = _mul_linear(out, lin, p, None if not reduce else skip, term_cap)
        else:
            out = mul(out, f, term_cap)
            if reduce:
                out = fermat_reduce(out, skip)
        if out.is_zero():
            break
    return out


def _linear_parts(f: FieldPoly) -> list[tuple[int | None, int]] | None:
    """``[(var or None, coeff)]`` when ``f`` has degree at most one, else None."""
    parts = []
    for m, c in f.terms.items():
        if not m:
            parts.append((None, c))
        elif len(m) == 1 and m[0][1] == 1:
            parts.append((m[0][0], c))
        else:
            return None
    return parts


def _bump(m: Monomial, v: int, p: int, reduce: bool) -> Monomial:
    for i, (w, e) in enumerate(m):
        if w == v:
            e += 1
            if reduce and e >= p:
                e -= p - 1
            return m[:i] + ((v, e),) + m[i + 1:]
        if w > v:
            return m[:i] + ((v, 1),) + m[i:]
    return m + ((v, 1),)


def _mul_linear(
    f: FieldPoly, parts: list[tuple[int | None, int]], p: int,
    skip: frozenset[int] | None, term_cap: int,
) -> FieldPoly:
    # skip is None when no reduction is wanted at all
    out: dict[Monomial, int] = {}
    get = out.get
    for v, cv in parts:
        if v is None:
            for m, c in f.terms.items():
                out[m] = (get(m, 0) + c * cv) % p
            continue
        red = skip is not None and v not in skip
        for m, c in f.terms.items():
            nm = _bump(m, v, p, red)
            out[nm] = (get(nm, 0) + c * cv) % p
    if len(out) > term_cap:
        raise ResourceError(f"product exceeded {term_cap} terms")
    return FieldPoly._raw(p, {m: c for m, c in out.items() if c})


def evaluate(f: FieldPoly, point: Mapping[int, int]) -> int:
    p = f.p
    total = 0
    for m, c in f.terms.items():
        val = c
        for v, e in m:
            try:
                x = point[v]
            except KeyError:
                raise DomainError(f"no value for variable v{v}") from None
            val = val * pow(x, e, p) % p
            if not val:
                break
        total += val
    return total % p


def substitute(f: FieldPoly, v: int, c: int) -> FieldPoly:
    p = f.p
    c %= p
    out: dict[Monomial, int] = {}
    for m, coeff in f.terms.items():
        rest = []
        val = coeff
        for w, e in m:
            if w == v:
                val = val * pow(c, e, p) % p
            else:
                rest.append((w, e))
        if val:
            key = tuple(rest)
            out[key] = (out.get(key, 0) + val) % p
    return FieldPoly._raw(p, {m: x for m, x in out.items() if x})


def formal_derivative(f: FieldPoly, v: int) -> FieldPoly:
    p = f.p
    out: dict[Monomial, int] = {}
    for m, c in f.terms.items():
        d = dict(m)
        e = d.get(v, 0)
        if e == 0 or e % p == 0:
            continue
        if e == 1:
            del d[v]
        else:
            d[v] = e - 1
        key = tuple(sorted(d.items()))
        out[key] = (out.get(key, 0) + c * e) % p
    return FieldPoly._raw(p, {m: x for m, x in out.items() if x})


class Multiplicity(str, enum.Enum):
    NONE = "none"
    SIMPLE = "simple"
    MULTIPLE = "multiple"


def linear_factor_multiplicity(f: FieldPoly, v: int, beta: int) -> Multiplicity:
    """Whether ``(v - beta)`` divides ``f`` not at all, exactly once, or at least twice."""
    if f.is_zero():
        raise DomainError("multiplicity of a factor in the zero polynomial is undefined")
    if not substitute(f, v, beta).is_zero():
        return Multiplicity.NONE
    if not substitute(formal_derivative(f, v), v, beta).is_zero():
        return Multiplicity.SIMPLE
    return Multiplicity.MULTIPLE


def coefficient_profile(f: FieldPoly, v: int) -> dict[Monomial, FieldPoly]:
    """Group ``f`` as a sum of (univariate polynomial in v) x (monomial free of v)."""
    p = f.p
    groups: dict[Monomial, dict[Monomial, int]] = {}
    for m, c in f.terms.items():
        rest = tuple((w, e) for w, e in m if w != v)
        own = tuple((w, e) for w, e in m if w == v)
        groups.setdefault(rest, {})[own] = c
    return {rest: FieldPoly._raw(p, g) for rest, g in sorted(groups.items())}


def assemble_profile(profile: Mapping[Monomial, FieldPoly], p: int) -> FieldPoly:
    out = FieldPoly.constant(p, 0)
    for rest, coeff in profile.items():
        out = add(out, mul(coeff, FieldPoly(p, {rest: 1})))
    return out


def divide_linear(f: FieldPoly, v: int, beta: int) -> tuple[FieldPoly, FieldPoly]:
    """Divide ``f`` by ``(v - beta)`` as a polynomial in ``v``.

    Returns ``(quotient, remainder)``; the remainder is free of ``v`` and is
    zero exactly when the division is exact.
    """
    p = f.p
    profile: dict[int, dict[Monomial, int]] = {}
    for m, c in f.terms.items():
        e = dict(m).get(v, 0)
        rest = tuple((w, x) for w, x in m if w != v)
        profile.setdefault(e, {})[rest] = c
    if not profile:
        return f, f
    top = max(profile)
    quotient: dict[Monomial, int] = {}
    carry: dict[Monomial, int] = {}
    # synthetic division from the leading power of v downwards
    for e in range(top, 0, -1):
        row = dict(profile.get(e, {}))
        for rest, c in carry.items():
            row[rest] = (row.get(rest, 0) + c) % p
        row = {r: c for r, c in row.items() if c}
        for rest, c in row.items():
            key = tuple(sorted(rest + ((v, e - 1),))) if e > 1 else rest
            quotient[key] = c
        carry = {r: c * beta % p for r, c in row.items()}
    rem = dict(profile.get(0, {}))
    for rest, c in carry.items():
        rem[rest] = (rem.get(rest, 0) + c) % p
    return FieldPoly(p, quotient), FieldPoly(p, rem)


def is_zero_semantic(f: FieldPoly, eval_cap: int = DEFAULT_EVAL_CAP) -> bool:
    """True iff ``f`` vanishes at every point of Z_p^k, k = number of variables."""
    vs = f.variables()
    p = f.p
    if p ** len(vs) > eval_cap:
        raise ResourceError(f"{p}^{len(vs)} evaluation points exceed cap {eval_cap}")
    for values in cartesian(range(p), repeat=len(vs)):
        if evaluate(f, dict(zip(vs, values))):
            return False
    return True
