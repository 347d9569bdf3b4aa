"""Exact sparse Laurent polynomials over the integers and tropical monomials.

A :class:`LaurentPoly` lives over an ordered tuple of variable names and maps
integer exponent vectors (negative entries allowed) to nonzero Python ints.
The canonical term order is graded lexicographic, highest first, with the
first declared variable largest. Text output follows that order, e.g.
``x1*x2^-1 + x2^-1``.

:class:`TropMonomial` is an element of a tropical semifield: a finite map from
frozen-variable names to integer exponents, multiplied by adding exponents and
"added" (``oplus``) by taking componentwise minima. The empty registry gives
the trivial semifield.
"""

from __future__ import annotations

import heapq
from operator import add, sub
from collections.abc import Iterable, Mapping, Sequence

Exps = tuple[int, ...]


class NotDivisible(ArithmeticError):
    """Raised when an exact Laurent division has a nonzero remainder."""


def term_order_key(e: Exps):
    # ascending sort under this key gives descending graded lex
    return (-sum(e), tuple(-a for a in e))


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(map(add, a, b))


def _sub_exps(a: Exps, b: Exps) -> Exps:
    return tuple(map(sub, a, b))


class LaurentPoly:
    """Immutable sparse Laurent polynomial with big-integer coefficients."""

    __slots__ = ("names", "terms", "_hash")

    def __init__(self, names: Sequence[str], terms: Mapping[Sequence[int], int] | None = None):
        names = tuple(names)
        clean: dict[Exps, int] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(names):
                raise ValueError(f"exponent vector {e} does not match {len(names)} variables")
            if not isinstance(c, int) or isinstance(c, bool):
                raise TypeError(f"coefficient must be int, got {type(c).__name__}")
            clean[e] = clean.get(e, 0) + c
        self.names = names
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, names: tuple[str, ...], terms: dict[Exps, int]) -> LaurentPoly:
        # caller guarantees normalized terms
        p = object.__new__(cls)
        p.names = names
        p.terms = terms
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, names: Sequence[str]) -> LaurentPoly:
        return cls._raw(tuple(names), {})

    @classmethod
    def constant(cls, names: Sequence[str], c: int) -> LaurentPoly:
        names = tuple(names)
        return cls._raw(names, {(0,) * len(names): c} if c else {})

    @classmethod
    def one(cls, names: Sequence[str]) -> LaurentPoly:
        return cls.constant(names, 1)

    @classmethod
    def monomial(cls, names: Sequence[str], exps: Mapping[str, int] | Sequence[int], coeff: int = 1) -> LaurentPoly:
        names = tuple(names)
        if isinstance(exps, Mapping):
            unknown = set(exps) - set(names)
            if unknown:
                raise KeyError(f"unknown variables {sorted(unknown)}")
            e = tuple(exps.get(v, 0) for v in names)
        else:
            e = tuple(exps)
        return cls(names, {e: coeff})

    @classmethod
    def var(cls, names: Sequence[str], name: str) -> LaurentPoly:
        return cls.monomial(names, {name: 1})

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        """True for a single term (any nonzero coefficient)."""
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """True for ``±`` a Laurent monomial, the units of the ring."""
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def as_variable(self) -> str | None:
        """Name of the variable if this is exactly a bare variable, else None."""
        if len(self.terms) != 1:
            return None
        (e, c), = self.terms.items()
        if c != 1 or sorted(e) != [0] * (len(e) - 1) + [1]:
            return None
        return self.names[e.index(1)]

    def min_exponents(self) -> Exps:
        if not self.terms:
            return (0,) * len(self.names)
        return tuple(map(min, zip(*self.terms)))

    def max_exponents(self) -> Exps:
        if not self.terms:
            return (0,) * len(self.names)
        return tuple(map(max, zip(*self.terms)))

    def sorted_terms(self) -> list[tuple[Exps, int]]:
        return sorted(self.terms.items(), key=lambda t: term_order_key(t[0]))

    def leading_term(self) -> tuple[Exps, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = min(self.terms, key=term_order_key)
        return e, self.terms[e]

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def split(self, names: Sequence[str]) -> dict[Exps, LaurentPoly]:
        """Group terms by their exponents in ``names``.

        Returns a map from exponent vectors over ``names`` to the coefficient
        polynomial (over all variables, with ``names`` exponents zeroed).
        """
        idx = [self.names.index(v) for v in names]
        idx_set = set(idx)
        groups: dict[Exps, dict[Exps, int]] = {}
        for e, c in self.terms.items():
            alpha = tuple(e[i] for i in idx)
            rest = tuple(0 if i in idx_set else a for i, a in enumerate(e))
            groups.setdefault(alpha, {})[rest] = c
        return {a: LaurentPoly._raw(self.names, t) for a, t in groups.items()}

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            if other.names != self.names:
                raise ValueError(f"variable mismatch: {self.names} vs {other.names}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return LaurentPoly.constant(self.names, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return LaurentPoly._raw(self.names, terms)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw(self.names, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.terms) > len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        if len(a) * len(b) <= 16:
            out: dict[Exps, int] = {}
            for eb, cb in b.items():
                for ea, ca in a.items():
                    e = tuple(map(add, ea, eb))
                    out[e] = out.get(e, 0) + ca * cb
            return LaurentPoly._raw(self.names, {e: c for e, c in out.items() if c})
        return LaurentPoly._raw(self.names, _packed_product(a, b))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if not self.is_unit():
                raise NotDivisible(f"cannot invert non-unit {self}")
            (e, c), = self.terms.items()
            return LaurentPoly._raw(self.names, {tuple(a * k for a in e): c ** (-k)})
        result = LaurentPoly.one(self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, exps: Sequence[int]) -> LaurentPoly:
        """Multiply by the monomial with exponent vector ``exps``."""
        exps = tuple(exps)
        return LaurentPoly._raw(self.names, {_add_exps(e, exps): c for e, c in self.terms.items()})

    def substitute(self, images: Mapping[str, LaurentPoly], target: Sequence[str]) -> LaurentPoly:
        """Evaluate at ``images`` (name -> poly over ``target``).

        Variables without an image must also appear in ``target`` and are
        carried over unchanged. A negative exponent is only allowed on
        variables whose image is a unit.
        """
        target = tuple(target)
        carry = [(i, target.index(v)) for i, v in enumerate(self.names) if v not in images]
        subs = [(i, images[v]) for i, v in enumerate(self.names) if v in images]
        powers: dict[tuple[int, int], LaurentPoly] = {}

        def power(i: int, img: LaurentPoly, k: int) -> LaurentPoly:
            key = (i, k)
            if key not in powers:
                powers[key] = img ** k
            return powers[key]

        total = LaurentPoly.zero(target)
        for e, c in self.terms.items():
            base = [0] * len(target)
            for i, j in carry:
                base[j] = e[i]
            term = LaurentPoly._raw(target, {tuple(base): c})
            for i, img in subs:
                if e[i]:
                    term = term * power(i, img, e[i])
            total = total + term
        return total

    # -- comparison and text -------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = LaurentPoly.constant(self.names, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.names == other.names and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.names, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    def as_fraction(self) -> str:
        """Render as ``numerator/monomial`` with nonnegative exponents."""
        lo = self.min_exponents()
        den = tuple(-a if a < 0 else 0 for a in lo)
        if not any(den) or not self.terms:
            return str(self)
        num = self.shift(den)
        num_s = str(num)
        if len(num.terms) > 1:
            num_s = f"({num_s})"
        factors = _monomial_factors(self.names, den)
        den_s = "*".join(factors)
        if len(factors) > 1:
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"


def _monomial_factors(names: Sequence[str], e: Sequence[int]) -> list[str]:
    out = []
    for v, a in zip(names, e):
        if a == 1:
            out.append(v)
        elif a:
            out.append(f"{v}^{a}")
    return out


def _packed_product(a: dict[Exps, int], b: dict[Exps, int]) -> dict[Exps, int]:
    """Product of two term maps with exponent vectors packed into single ints.

    Each operand is shifted to nonnegative exponents and encoded in a mixed
    radix wide enough for the digit sums, so packed keys add without carries.
    """
    lo_a = tuple(map(min, zip(*a)))
    lo_b = tuple(map(min, zip(*b)))
    hi_a = tuple(map(max, zip(*a)))
    hi_b = tuple(map(max, zip(*b)))
    radices = [ha - la + hb - lb + 1 for la, ha, lb, hb in zip(lo_a, hi_a, lo_b, hi_b)]
    weights = []
    w = 1
    for r in radices:
        weights.append(w)
        w *= r

    def pack(terms, lo):
        return [(sum((x - l) * wt for x, l, wt in zip(e, lo, weights)), c) for e, c in terms.items()]

    pa = pack(a, lo_a)
    out: dict[int, int] = {}
    get = out.get
    for kb, cb in pack(b, lo_b):
        for ka, ca in pa:
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    base = tuple(map(add, lo_a, lo_b))
    result = {}
    for k, c in out.items():
        if c:
            e = []
            for r in radices:
                k, digit = divmod(k, r)
                e.append(digit)
            result[tuple(map(add, e, base))] = c
    return result


def format_poly(p: LaurentPoly) -> str:
    """Canonical text form: graded-lex order, ``*`` and ``^``, ``0`` for zero."""
    if not p.terms:
        return "0"
    parts = []
    for k, (e, c) in enumerate(p.sorted_terms()):
        factors = _monomial_factors(p.names, e)
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        if k == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(parts)


def _poly_divide(num: dict[Exps, int], den: dict[Exps, int]) -> dict[Exps, int]:
    """Exact division of polynomials (nonnegative exponents) by top reduction."""
    lead_e = min(den, key=term_order_key)
    lead_c = den[lead_e]
    rest = [(e, c) for e, c in den.items() if e != lead_e]
    rem = dict(num)
    heap = [(term_order_key(e), e) for e in rem]
    heapq.heapify(heap)
    quo: dict[Exps, int] = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = rem.pop(e, 0)
        if not c:
            continue
        qe = _sub_exps(e, lead_e)
        if min(qe, default=0) < 0 or c % lead_c:
            raise NotDivisible
        qc = c // lead_c
        quo[qe] = qc
        for de, dc in rest:
            t = _add_exps(qe, de)
            v = rem.get(t, 0) - qc * dc
            if v:
                if t not in rem:
                    heapq.heappush(heap, (term_order_key(t), t))
                rem[t] = v
            else:
                rem.pop(t, None)
    return quo


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Return ``q`` with ``q * den == num`` or raise :class:`NotDivisible`.

    Both operands are shifted by monomials so that neither has a monomial
    factor; the quotient of those polynomials is then found by graded-lex
    long division, which succeeds exactly when the division is exact.
    """
    den = num._coerce(den)
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return LaurentPoly.zero(num.names)
    g = den.min_exponents()
    h = num.min_exponents()
    d0 = den.shift(tuple(-a for a in g)).terms
    n0 = num.shift(tuple(-a for a in h)).terms
    try:
        q0 = _poly_divide(n0, d0)
    except NotDivisible:
        raise NotDivisible(f"{den} does not divide {num}") from None
    return LaurentPoly._raw(num.names, q0).shift(_sub_exps(h, g))


def divides(den: LaurentPoly, num: LaurentPoly) -> bool:
    """True iff ``num / den`` is a Laurent polynomial. ``den`` must be nonzero."""
    try:
        exact_div(num, den)
    except NotDivisible:
        return False
    return True


class TropMonomial:
    """Tropical semifield element: integer exponents over frozen variables."""

    __slots__ = ("exps",)

    def __init__(self, exps: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = exps.items() if isinstance(exps, Mapping) else exps
        acc: dict[str, int] = {}
        for v, a in items:
            acc[v] = acc.get(v, 0) + int(a)
        object.__setattr__(self, "exps", tuple(sorted((v, a) for v, a in acc.items() if a)))

    def __setattr__(self, name, value):
        raise AttributeError("TropMonomial is immutable")

    def __getitem__(self, name: str) -> int:
        for v, a in self.exps:
            if v == name:
                return a
        return 0

    def support(self) -> set[str]:
        return {v for v, _ in self.exps}

    def as_dict(self) -> dict[str, int]:
        return dict(self.exps)

    def is_one(self) -> bool:
        return not self.exps

    def __mul__(self, other: TropMonomial) -> TropMonomial:
        return TropMonomial(self.exps + other.exps)

    def inv(self) -> TropMonomial:
        return TropMonomial((v, -a) for v, a in self.exps)

    def __pow__(self, k: int) -> TropMonomial:
        return TropMonomial((v, a * k) for v, a in self.exps)

    def oplus(self, other: TropMonomial) -> TropMonomial:
        """Auxiliary addition: componentwise minimum, absent exponents are 0."""
        names = self.support() | other.support()
        return TropMonomial((v, min(self[v], other[v])) for v in names)

    def to_poly(self, names: Sequence[str]) -> LaurentPoly:
        """The Laurent monomial with coefficient 1 over ``names``."""
        return LaurentPoly.monomial(names, self.as_dict())

    def __eq__(self, other) -> bool:
        return isinstance(other, TropMonomial) and self.exps == other.exps

    def __hash__(self) -> int:
        return hash(self.exps)

    def __repr__(self) -> str:
        if not self.exps:
            return "TropMonomial(1)"
        return "TropMonomial(" + "*".join(v if a == 1 else f"{v}^{a}" for v, a in self.exps) + ")"


ONE = TropMonomial()
