"""Seeds, exchange matrices and mutation.

Indices are 0-based throughout the Python API. Cluster variables are stored
as Laurent polynomials in the initial cluster, so every mutation ends in an
exact division; a failed division means the Laurent phenomenon was violated,
which can only be a bug, and raises :class:`LaurentViolation`.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .algebra import LaurentPoly, NotDivisible, TropMonomial, exact_div


class InvalidSeed(ValueError):
    pass


class NotSkewSymmetrizable(InvalidSeed):
    pass


class LaurentViolation(RuntimeError):
    """An exchange relation did not divide exactly."""

    def __init__(self, message: str, word: Sequence[int] = (), step: int | None = None):
        super().__init__(message)
        self.word = tuple(word)
        self.step = step


class Kind(enum.Enum):
    MUTABLE = "mutable"
    FROZEN = "frozen"
    FROZEN_CLUSTER = "frozen-cluster"


@dataclass(frozen=True)
class Var:
    name: str
    kind: Kind


@dataclass(frozen=True)
class Registry:
    """Ordered variable declarations; the order fixes the polynomial term order."""

    vars: tuple[Var, ...]

    def __post_init__(self):
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            raise InvalidSeed(f"duplicate variable names in {names}")

    @classmethod
    def of(cls, mutable: Sequence[str], frozen: Sequence[str] = ()) -> Registry:
        return cls(tuple(Var(v, Kind.MUTABLE) for v in mutable) + tuple(Var(v, Kind.FROZEN) for v in frozen))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def kind(self, name: str) -> Kind:
        for v in self.vars:
            if v.name == name:
                return v.kind
        raise KeyError(name)

    @property
    def mutable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars if v.kind is Kind.MUTABLE)

    @property
    def coefficient_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars if v.kind is not Kind.MUTABLE)

    def promote(self, names: Sequence[str]) -> Registry:
        """Reclassify mutable variables as frozen cluster variables."""
        names = set(names)
        for n in names:
            if self.kind(n) is not Kind.MUTABLE:
                raise InvalidSeed(f"{n} is not a mutable variable")
        return Registry(tuple(Var(v.name, Kind.FROZEN_CLUSTER) if v.name in names else v for v in self.vars))


def find_symmetrizer(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Minimal positive integer ``d`` with ``diag(d) @ B`` skew-symmetric.

    Ratios ``d_i * B_ij = -d_j * B_ji`` are propagated over the graph of
    nonzero entries; each connected component is scaled to coprime integers.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSkewSymmetrizable("exchange matrix must be square")
    for i in range(n):
        if rows[i][i] != 0:
            raise NotSkewSymmetrizable(f"nonzero diagonal entry at {i}")
        for j in range(i + 1, n):
            a, b = rows[i][j], rows[j][i]
            if (a == 0) != (b == 0) or a * b > 0:
                raise NotSkewSymmetrizable(f"entries ({i},{j})={a} and ({j},{i})={b} violate sign-skew-symmetry")
    d: list[Fraction | None] = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        comp = [root]
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if rows[i][j] == 0:
                    continue
                want = -d[i] * rows[i][j] / rows[j][i]
                if d[j] is None:
                    d[j] = want
                    comp.append(j)
                    queue.append(j)
                elif d[j] != want:
                    raise NotSkewSymmetrizable(f"inconsistent symmetrizer ratios around index {j}")
        scale = lcm(*(d[i].denominator for i in comp))
        ints = [int(d[i] * scale) for i in comp]
        g = gcd(*ints)
        for i, v in zip(comp, ints):
            d[i] = Fraction(v // g)
    return tuple(int(x) for x in d)


@dataclass(frozen=True)
class ExchangeMatrix:
    entries: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "symmetrizer", find_symmetrizer(entries))

    @classmethod
    def zero(cls, n: int) -> ExchangeMatrix:
        return cls(tuple((0,) * n for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def submatrix(self, keep: Sequence[int]) -> ExchangeMatrix:
        return ExchangeMatrix(tuple(tuple(self.entries[i][j] for j in keep) for i in keep))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def mutate_matrix(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    n = B.n
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k} out of range for rank {n}")
    b = B.entries
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-b[i][j])
            else:
                twice = abs(b[i][k]) * b[k][j] + b[i][k] * abs(b[k][j])
                assert twice % 2 == 0
                row.append(b[i][j] + twice // 2)
        out.append(tuple(row))
    return ExchangeMatrix(tuple(out))


def mutate_coefficients(y: Sequence[TropMonomial], B: ExchangeMatrix, k: int) -> tuple[TropMonomial, ...]:
    yk = y[k]
    yk_plus = yk.oplus(TropMonomial())
    out = []
    for j, yj in enumerate(y):
        if j == k:
            out.append(yk.inv())
        else:
            bkj = B[k, j]
            out.append(yj * yk ** max(bkj, 0) * yk_plus ** (-bkj))
    return tuple(out)


@dataclass(frozen=True)
class Seed:
    """A seed: cluster expressions, tropical coefficients and exchange matrix.

    ``cluster[i]`` is the i-th cluster variable written as a Laurent
    polynomial over ``registry.names``; ``coeffs[i]`` is ``y_i``.
    """

    registry: Registry
    cluster: tuple[LaurentPoly, ...]
    coeffs: tuple[TropMonomial, ...]
    B: ExchangeMatrix

    @classmethod
    def initial(
        cls,
        mutable: Sequence[str],
        B: Sequence[Sequence[int]] | ExchangeMatrix,
        frozen: Sequence[str] = (),
        coeff_exponents: Sequence[Sequence[int]] = (),
    ) -> Seed:
        """Initial seed with tropical coefficients of geometric type.

        ``coeff_exponents[i][j]`` is the exponent of ``frozen[i]`` in ``y_j``.
        """
        registry = Registry.of(mutable, frozen)
        names = registry.names
        n = len(mutable)
        if len(coeff_exponents) != len(frozen):
            raise InvalidSeed(f"coeff_exponents has {len(coeff_exponents)} rows for {len(frozen)} frozen variables")
        for r in coeff_exponents:
            if len(r) != n:
                raise InvalidSeed(f"coeff_exponents row {list(r)} does not have {n} entries")
        coeffs = tuple(TropMonomial({u: row[j] for u, row in zip(frozen, coeff_exponents)}) for j in range(n))
        if not isinstance(B, ExchangeMatrix):
            B = ExchangeMatrix(tuple(tuple(r) for r in B))
        seed = cls(registry, tuple(LaurentPoly.var(names, v) for v in mutable), coeffs, B)
        validate_seed(seed)
        return seed

    @property
    def rank(self) -> int:
        return len(self.cluster)

    @property
    def names(self) -> tuple[str, ...]:
        return self.registry.names

    def y_poly(self, i: int) -> LaurentPoly:
        return self.coeffs[i].to_poly(self.names)

    def is_initial(self) -> bool:
        """True if every cluster entry is a bare mutable variable of the registry."""
        seen = set()
        for p in self.cluster:
            v = p.as_variable()
            if v is None or v in seen or self.registry.kind(v) is not Kind.MUTABLE:
                return False
            seen.add(v)
        return len(seen) == len(self.registry.mutable_names)

    def cluster_names(self) -> tuple[str, ...]:
        """Variable names of an initial seed's cluster, in index order."""
        if not self.is_initial():
            raise ValueError("seed cluster is not a set of bare initial variables")
        return tuple(p.as_variable() for p in self.cluster)


def validate_seed(s: Seed) -> None:
    """Raise :class:`InvalidSeed` naming the first violated invariant."""
    n = s.rank
    if len(s.coeffs) != n:
        raise InvalidSeed(f"{len(s.coeffs)} coefficients for {n} cluster variables")
    if s.B.n != n:
        raise InvalidSeed(f"{s.B.n}x{s.B.n} exchange matrix for {n} cluster variables")
    if find_symmetrizer(s.B.entries) != s.B.symmetrizer:
        raise InvalidSeed("cached symmetrizer is stale")
    names = s.names
    coeff_names = set(s.registry.coefficient_names)
    for i, p in enumerate(s.cluster):
        if p.names != names:
            raise InvalidSeed(f"cluster variable {i} is not over the seed registry")
        if p.is_zero():
            raise InvalidSeed(f"cluster variable {i} is zero")
    if len(set(s.cluster)) != n:
        raise InvalidSeed("cluster variables are not distinct")
    for i, y in enumerate(s.coeffs):
        extra = y.support() - coeff_names
        if extra:
            raise InvalidSeed(f"coefficient y{i} uses non-coefficient variables {sorted(extra)}")


def mutate_cluster(s: Seed, k: int) -> LaurentPoly:
    """The new cluster variable obtained by mutating ``s`` at ``k``."""
    names = s.names
    pos = s.y_poly(k)
    neg = LaurentPoly.one(names)
    for j, x in enumerate(s.cluster):
        b = s.B[j, k]
        if b > 0:
            pos = pos * x ** b
        elif b < 0:
            neg = neg * x ** (-b)
    den = s.coeffs[k].oplus(TropMonomial()).to_poly(names) * s.cluster[k]
    try:
        return exact_div(pos + neg, den)
    except NotDivisible:
        raise LaurentViolation(f"exchange relation at index {k} is not Laurent") from None


def mutate_seed(s: Seed, k: int) -> Seed:
    if not 0 <= k < s.rank:
        raise IndexError(f"mutation index {k} out of range for rank {s.rank}")
    cluster = list(s.cluster)
    cluster[k] = mutate_cluster(s, k)
    return Seed(s.registry, tuple(cluster), mutate_coefficients(s.coeffs, s.B, k), mutate_matrix(s.B, k))


def mutate_word(s: Seed, word: Sequence[int]) -> Seed:
    """Apply mutations left to right; failures report the word and step."""
    for step, k in enumerate(word):
        try:
            s = mutate_seed(s, k)
        except LaurentViolation as exc:
            raise LaurentViolation(f"{exc} (word {list(word)}, step {step})", word, step) from None
    return s


def permute_seed(s: Seed, perm: Sequence[int]) -> Seed:
    """Relabel so that new index ``i`` carries old index ``perm[i]``."""
    perm = tuple(perm)
    if sorted(perm) != list(range(s.rank)):
        raise ValueError(f"{perm} is not a permutation of range({s.rank})")
    b = s.B.entries
    B = ExchangeMatrix(tuple(tuple(b[p][q] for q in perm) for p in perm))
    return Seed(s.registry, tuple(s.cluster[p] for p in perm), tuple(s.coeffs[p] for p in perm), B)


def serialize_seed(s: Seed) -> str:
    x = " | ".join(str(p) for p in s.cluster)
    y = " | ".join(str(s.y_poly(i)) for i in range(s.rank))
    B = ";".join(",".join(map(str, r)) for r in s.B.entries)
    return f"x: {x}\ny: {y}\nB: {B}"


def canonical_form(s: Seed) -> tuple[Seed, str]:
    """Permutation representative and its key; equal keys iff equal up to permutation."""
    cols = [s.B.column(i) for i in range(s.rank)]
    order = sorted(range(s.rank), key=lambda i: (str(s.cluster[i]), str(s.y_poly(i)), cols[i], i))
    canon = permute_seed(s, order)
    return canon, serialize_seed(canon)
