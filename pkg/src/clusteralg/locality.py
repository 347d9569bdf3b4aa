"""Acyclicity, freezing, isolated covers and membership in A and U.

Membership inputs are Laurent polynomials in an *initial* seed's cluster
(every cluster entry a bare variable). Freezing only ever happens at such
bare variables, so a frozen seed shares its polynomial variables with the
seed it came from and elements never need rewriting.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Sequence

from .algebra import LaurentPoly, TropMonomial, divides, exact_div, term_order_key
from .explore import DEFAULT_MAX_SEEDS, collect_cluster_variables, explore_exchange_graph
from .seed import ExchangeMatrix, Kind, Registry, Seed, Var, mutate_seed


class NotAcyclic(ValueError):
    pass


class NotIsolated(ValueError):
    pass


class NotFiniteType(ValueError):
    pass


# -- acyclicity ----------------------------------------------------------


def mutation_digraph(B: ExchangeMatrix) -> dict[int, set[int]]:
    """Successor sets: ``i -> j`` iff ``B[j, i] > 0``."""
    return {i: {j for j in range(B.n) if B[j, i] > 0} for i in range(B.n)}


def is_acyclic(B: ExchangeMatrix) -> bool:
    # TopologicalSorter takes predecessor sets
    preds = {j: {i for i in range(B.n) if B[j, i] > 0} for j in range(B.n)}
    try:
        TopologicalSorter(preds).prepare()
    except CycleError:
        return False
    return True


def find_sink(B: ExchangeMatrix) -> int | None:
    """Smallest index whose column has no positive entry."""
    for i in range(B.n):
        if all(x <= 0 for x in B.column(i)):
            return i
    return None


# -- freezing ------------------------------------------------------------


@dataclass(frozen=True)
class FrozenSeed:
    base: Seed
    frozen: tuple[int, ...]  # indices into base
    seed: Seed

    @property
    def frozen_names(self) -> tuple[str, ...]:
        return tuple(self.base.cluster[k].as_variable() for k in self.frozen)

    @property
    def label(self) -> str:
        return "freeze{" + ",".join(self.frozen_names) + "}"


def freeze_one(s: Seed, k: int) -> Seed:
    """Move the bare cluster variable at index ``k`` into the coefficients."""
    v = s.cluster[k].as_variable()
    if v is None or s.registry.kind(v) is not Kind.MUTABLE:
        raise ValueError(f"cluster entry {k} ({s.cluster[k]}) is not a bare mutable variable")
    keep = [i for i in range(s.rank) if i != k]
    coeffs = tuple(s.coeffs[i] * TropMonomial({v: s.B[k, i]}) for i in keep)
    return Seed(s.registry.promote([v]), tuple(s.cluster[i] for i in keep), coeffs, s.B.submatrix(keep))


def freeze(s: Seed, S: Iterable[int]) -> FrozenSeed:
    """Freeze the indices in ``S`` one at a time, in increasing order."""
    S = tuple(sorted(set(S)))
    for k in S:
        if not 0 <= k < s.rank:
            raise IndexError(f"freeze index {k} out of range for rank {s.rank}")
    t = s
    for done, k in enumerate(S):
        t = freeze_one(t, k - done)
    return FrozenSeed(s, S, t)


def freezing_commutes_check(s: Seed, i: int, j: int) -> bool:
    """Freezing at ``j`` then mutating at ``i`` agrees with the other order."""
    if i == j:
        raise ValueError("mutation and freezing indices must differ")
    left = freeze(mutate_seed(s, i), [j]).seed
    right = mutate_seed(freeze(s, [j]).seed, i - (j < i))
    return left == right


# -- covers --------------------------------------------------------------


def isolated_exchange_constants(f: FrozenSeed | Seed) -> dict[str, LaurentPoly]:
    """``P_i`` with ``x_i * x_i' = P_i`` for each cluster variable of an isolated seed."""
    t = f.seed if isinstance(f, FrozenSeed) else f
    if not t.B.is_zero():
        raise NotIsolated("exchange matrix is not zero")
    out = {}
    for i, v in enumerate(t.cluster_names()):
        y = t.coeffs[i]
        out[v] = exact_div(y.to_poly(t.names) + 1, y.oplus(TropMonomial()).to_poly(t.names))
    return out


@dataclass(frozen=True)
class CoverLeaf:
    S: tuple[int, ...]
    seed: FrozenSeed
    P: dict[str, LaurentPoly] = field(compare=False)

    @property
    def label(self) -> str:
        return self.seed.label


def build_isolated_cover(s: Seed) -> list[CoverLeaf]:
    """Leaves of the sink/neighbour freezing recursion on an acyclic seed.

    At each level the smallest non-isolated sink ``i`` and the smallest ``j``
    with ``B[j, i] < 0`` are chosen; the branch freezing ``i`` comes first.
    """
    if not is_acyclic(s.B):
        raise NotAcyclic("exchange matrix has a directed cycle")
    s.cluster_names()
    leaves: list[CoverLeaf] = []

    def recurse(S: tuple[int, ...]) -> None:
        f = freeze(s, S)
        B = f.seed.B
        if B.is_zero():
            leaves.append(CoverLeaf(f.frozen, f, isolated_exchange_constants(f)))
            return
        remaining = [k for k in range(s.rank) if k not in S]
        i = min(k for k in range(B.n) if any(B.column(k)) and all(x <= 0 for x in B.column(k)))
        j = min(j for j in range(B.n) if B[j, i] < 0)
        recurse(tuple(sorted(S + (remaining[i],))))
        recurse(tuple(sorted(S + (remaining[j],))))

    recurse(())
    return leaves


def exchange_identity_check(s: Seed | FrozenSeed, i: int) -> bool:
    """At a sink ``i``: ``((y_i + 1)/y_i) x_i' x_i - y_i^-1 prod x_k^-B_ki == 1``."""
    t = s.seed if isinstance(s, FrozenSeed) else s
    if any(x > 0 for x in t.B.column(i)):
        raise ValueError(f"index {i} is not a sink")
    names = t.names
    y = t.coeffs[i]
    x_new = mutate_seed(t, i).cluster[i]
    prod = LaurentPoly.one(names)
    for k, x in enumerate(t.cluster):
        if t.B[k, i] < 0:
            prod = prod * x ** (-t.B[k, i])
    y_inv = y.inv().to_poly(names)
    lhs = (y.oplus(TropMonomial()) * y.inv()).to_poly(names) * x_new * t.cluster[i] - y_inv * prod
    return lhs == LaurentPoly.one(names)


# -- membership ----------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    where: str
    monomial: str | None = None
    coefficient: LaurentPoly | None = None
    divisor: LaurentPoly | None = None

    def as_dict(self) -> dict:
        return {
            "where": self.where,
            "monomial": self.monomial,
            "coefficient": None if self.coefficient is None else str(self.coefficient),
            "divisor": None if self.divisor is None else str(self.divisor),
        }


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    witness: Witness | None = None
    exhaustive: bool | None = None  # only meaningful for U checks

    def as_dict(self) -> dict:
        d = {"member": self.member, "witness": None if self.witness is None else self.witness.as_dict()}
        if self.exhaustive is not None:
            d["exhaustive"] = self.exhaustive
        return d


def _monomial_text(names: Sequence[str], alpha: Sequence[int]) -> str:
    return str(LaurentPoly.monomial(names, alpha))


def _isolated_parts(f: FrozenSeed | Seed, a: LaurentPoly):
    t = f.seed if isinstance(f, FrozenSeed) else f
    if a.names != t.names:
        raise ValueError(f"element is over {a.names}, seed is over {t.names}")
    xs = t.cluster_names()
    P = isolated_exchange_constants(t)
    one = LaurentPoly.one(t.names)
    for alpha, lam in sorted(a.split(xs).items(), key=lambda kv: term_order_key(kv[0])):
        divisor = one
        for v, e in zip(xs, alpha):
            if e < 0:
                divisor = divisor * P[v] ** (-e)
        yield xs, alpha, lam, divisor


def isolated_membership(f: FrozenSeed | Seed, a: LaurentPoly) -> MembershipVerdict:
    """``a`` is in an isolated algebra iff each ``lambda_alpha`` is divisible
    by the product of ``P_i^-alpha_i`` over the negative exponents."""
    where = f.label if isinstance(f, FrozenSeed) else "seed"
    for xs, alpha, lam, divisor in _isolated_parts(f, a):
        if not divides(divisor, lam):
            return MembershipVerdict(False, Witness(where, _monomial_text(xs, alpha), lam, divisor))
    return MembershipVerdict(True)


def isolated_certificate(f: FrozenSeed | Seed, a: LaurentPoly) -> dict[tuple[int, ...], LaurentPoly]:
    """Coefficients ``gamma_alpha`` of ``a`` on the products of ``x_i`` and ``x_i'``.

    ``a = sum gamma_alpha * prod_{alpha_i >= 0} x_i^alpha_i * prod_{alpha_i < 0} x_i'^-alpha_i``.
    Raises NotDivisible if ``a`` is not a member.
    """
    return {alpha: exact_div(lam, divisor) for _, alpha, lam, divisor in _isolated_parts(f, a)}


def acyclic_a_membership(
    s: Seed, a: LaurentPoly, cover: Sequence[CoverLeaf] | None = None
) -> MembershipVerdict:
    """Decide ``a in A`` as the intersection of the isolated leaves of the cover."""
    if cover is None:
        cover = build_isolated_cover(s)
    for leaf in cover:
        v = isolated_membership(leaf.seed, a)
        if not v.member:
            return v
    return MembershipVerdict(True)


@dataclass(frozen=True)
class Chart:
    """A cluster together with the initial variables written in its terms."""

    word: tuple[int, ...]
    cluster: tuple[LaurentPoly, ...]
    target: tuple[str, ...]  # variables of the images: cluster symbols, then coefficients
    images: tuple[tuple[str, LaurentPoly], ...]

    @property
    def label(self) -> str:
        return "cluster mu" + str(list(k + 1 for k in self.word)) + " {" + ", ".join(
            p.as_fraction() for p in self.cluster
        ) + "}"


def _fresh_names(taken: Iterable[str], n: int) -> tuple[str, ...]:
    taken = set(taken)
    prefix = "z"
    while any(f"{prefix}{i + 1}" in taken for i in range(n)):
        prefix += "_"
    return tuple(f"{prefix}{i + 1}" for i in range(n))


@lru_cache(maxsize=64)
def cluster_charts(s: Seed, depth: int | None, max_seeds: int = DEFAULT_MAX_SEEDS) -> tuple[tuple[Chart, ...], bool]:
    """Charts for every seed within ``depth`` of the initial seed ``s``.

    The initial variables are recovered in each cluster by mutating a copy of
    the target seed, with fresh symbols as its cluster, back along the
    reversed word. Returns the charts and whether the exchange graph closed.
    """
    xs = s.cluster_names()
    g = explore_exchange_graph(s, max_depth=depth, max_seeds=max_seeds)
    z = _fresh_names(s.names, s.rank)
    coeff_vars = tuple(v for v in s.registry.vars if v.kind is not Kind.MUTABLE)
    zreg = Registry(tuple(Var(v, Kind.MUTABLE) for v in z) + coeff_vars)
    charts = []
    for node in g.nodes.values():
        t = Seed(zreg, tuple(LaurentPoly.var(zreg.names, v) for v in z), node.raw.coeffs, node.raw.B)
        for k in reversed(node.word):
            t = mutate_seed(t, k)
        charts.append(Chart(node.word, node.raw.cluster, zreg.names, tuple(zip(xs, t.cluster))))
    return tuple(charts), g.closed


def laurent_in_chart(chart: Chart, xs: Sequence[str], a: LaurentPoly) -> tuple[bool, LaurentPoly, LaurentPoly]:
    """Whether ``a`` is Laurent in the chart's cluster; also numerator and denominator used."""
    lo = a.min_exponents()
    shift = [0] * len(a.names)
    for v in xs:
        i = a.names.index(v)
        shift[i] = max(0, -lo[i])
    images = dict(chart.images)
    num = a.shift(shift).substitute(images, chart.target)
    den = LaurentPoly.one(chart.target)
    for v in xs:
        m = shift[a.names.index(v)]
        if m:
            den = den * images[v] ** m
    return divides(den, num), num, den


def upper_membership_bounded(
    s: Seed, a: LaurentPoly, depth: int | None, max_seeds: int = DEFAULT_MAX_SEEDS
) -> MembershipVerdict:
    """``a`` is Laurent in every cluster within ``depth`` mutations.

    Exact membership in U when the exchange graph closes within the bounds
    (``exhaustive``); otherwise only a necessary condition.
    """
    if a.names != s.names:
        raise ValueError(f"element is over {a.names}, seed is over {s.names}")
    xs = s.cluster_names()
    charts, closed = cluster_charts(s, depth, max_seeds)
    for chart in charts:
        ok, num, den = laurent_in_chart(chart, xs, a)
        if not ok:
            return MembershipVerdict(False, Witness(chart.label, None, num, den), closed)
    return MembershipVerdict(True, None, closed)


# -- differential check ---------------------------------------------------


@dataclass
class AUReport:
    rows: list[tuple[str, bool, bool]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.rows)

    @property
    def agree(self) -> int:
        return sum(a == u for _, a, u in self.rows)

    @property
    def members(self) -> int:
        return sum(a for _, a, _ in self.rows)

    @property
    def disagreements(self) -> list[str]:
        return [e for e, a, u in self.rows if a != u]

    def as_dict(self) -> dict:
        return {
            "samples": self.total,
            "agree": self.agree,
            "members": self.members,
            "disagreements": self.disagreements,
        }


def sample_elements(s: Seed, variables: Sequence[LaurentPoly], count: int, rng: random.Random) -> list[LaurentPoly]:
    """Random ZP-combinations of products of cluster variables, half of them perturbed.

    Perturbations divide by an initial variable or add a Laurent monomial,
    which usually leaves A; the rest are members by construction.
    """
    names = s.names
    xs = s.cluster_names()
    coeff_names = s.registry.coefficient_names
    out = []
    for _ in range(count):
        a = LaurentPoly.zero(names)
        for _ in range(rng.randint(1, 3)):
            term = LaurentPoly.monomial(
                names, {u: rng.randint(-1, 1) for u in coeff_names}, rng.choice([-3, -2, -1, 1, 2, 3])
            )
            for _ in range(rng.randint(0, 2)):
                term = term * rng.choice(variables)
            a = a + term
        if xs and rng.random() < 0.5:
            if rng.random() < 0.5:
                a = a * LaurentPoly.monomial(names, {rng.choice(xs): -1})
            else:
                a = a + LaurentPoly.monomial(names, {v: rng.randint(-2, 1) for v in xs}, rng.choice([-1, 1]))
        out.append(a)
    return out


def au_differential(s: Seed, samples: int, rng: int = 0, max_seeds: int = DEFAULT_MAX_SEEDS) -> AUReport:
    """Compare cover-based A-membership with exhaustive U-membership on samples."""
    if not is_acyclic(s.B):
        raise NotAcyclic("exchange matrix has a directed cycle")
    report = AUReport()
    if samples <= 0:
        return report
    g = explore_exchange_graph(s, max_depth=None, max_seeds=max_seeds)
    if not g.closed:
        raise NotFiniteType(f"exchange graph did not close within {max_seeds} seeds")
    cover = build_isolated_cover(s)
    elements = sample_elements(s, collect_cluster_variables(g), samples, random.Random(rng))
    for a in elements:
        in_a = acyclic_a_membership(s, a, cover).member
        in_u = upper_membership_bounded(s, a, None, max_seeds).member
        report.rows.append((str(a), in_a, in_u))
    return report
