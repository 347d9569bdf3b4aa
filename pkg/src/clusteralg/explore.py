"""Bounded breadth-first exploration of the exchange graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .algebra import LaurentPoly
from .seed import LaurentViolation, Seed, canonical_form, mutate_seed

DEFAULT_MAX_DEPTH = 16
DEFAULT_MAX_SEEDS = 10000


@dataclass(frozen=True)
class Node:
    key: str
    seed: Seed  # canonical representative
    raw: Seed  # as reached from the input seed, positions unpermuted
    word: tuple[int, ...]  # raw mutation word from the input seed
    depth: int


@dataclass
class ExchangeGraph:
    """Exchange graph up to permutation.

    ``edges`` holds ``(key, k, key')`` where ``k`` indexes the *raw* seed of
    the source node. The mutated variable usually sits at a different raw
    index in the target, so the reverse edge has its own label.
    """

    nodes: dict[str, Node] = field(default_factory=dict)
    edges: list[tuple[str, int, str]] = field(default_factory=list)
    depth: int = 0
    closed: bool = False

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def root(self) -> Node:
        return next(iter(self.nodes.values()))


def explore_exchange_graph(
    seed: Seed, max_depth: int | None = DEFAULT_MAX_DEPTH, max_seeds: int = DEFAULT_MAX_SEEDS
) -> ExchangeGraph:
    """BFS over seeds up to permutation, deterministic in canonical-key order.

    ``closed`` is True only if every neighbour of every node is in the graph,
    i.e. the frontier emptied without either bound cutting it off. A
    ``max_depth`` of None means unbounded depth.
    """
    canon, key = canonical_form(seed)
    g = ExchangeGraph()
    g.nodes[key] = Node(key, canon, seed, (), 0)
    frontier = [key]
    truncated = False
    depth = 0
    while frontier:
        g.depth = depth
        nxt = []
        for key in sorted(frontier):
            node = g.nodes[key]
            for k in range(node.raw.rank):
                raw = mutate_seed(node.raw, k)
                canon, key2 = canonical_form(raw)
                if key2 not in g.nodes:
                    if (max_depth is not None and depth >= max_depth) or len(g.nodes) >= max_seeds:
                        truncated = True
                        continue
                    g.nodes[key2] = Node(key2, canon, raw, node.word + (k,), depth + 1)
                    nxt.append(key2)
                g.edges.append((key, k, key2))
        frontier = nxt
        if frontier:
            depth += 1
    g.closed = not truncated
    return g


def collect_cluster_variables(g: ExchangeGraph) -> tuple[LaurentPoly, ...]:
    """All cluster variables in the graph, deduplicated, sorted by canonical text."""
    seen: dict[str, LaurentPoly] = {}
    for node in g.nodes.values():
        for p in node.seed.cluster:
            seen.setdefault(str(p), p)
    return tuple(seen[s] for s in sorted(seen))


def is_finite_type(seed: Seed, max_seeds: int = DEFAULT_MAX_SEEDS) -> bool | None:
    """True if the exchange graph closes within ``max_seeds``; None if unknown."""
    g = explore_exchange_graph(seed, max_depth=None, max_seeds=max_seeds)
    return True if g.closed else None


@dataclass(frozen=True)
class AuditEntry:
    word: tuple[int, ...]
    depth: int
    max_terms: int


@dataclass
class AuditReport:
    entries: list[AuditEntry]

    @property
    def max_terms(self) -> int:
        return max((e.max_terms for e in self.entries), default=0)


def all_words(rank: int, max_len: int) -> list[tuple[int, ...]]:
    """Every word over ``range(rank)`` of length at most ``max_len``."""
    out: list[tuple[int, ...]] = []
    for length in range(max_len + 1):
        out.extend(product(range(rank), repeat=length))
    return out


def laurent_audit(seed: Seed, words: Iterable[Sequence[int]]) -> AuditReport:
    """Apply each word, relying on exact division to witness Laurentness.

    Seeds reached by shared prefixes are computed once. Raises
    :class:`LaurentViolation` carrying the offending word and step.
    """
    cache: dict[tuple[int, ...], Seed] = {(): seed}
    entries = []
    for word in sorted({tuple(w) for w in words}, key=lambda w: (len(w), w)):
        for k in word:
            if not 0 <= k < seed.rank:
                raise IndexError(f"index {k} in word {list(word)} out of range for rank {seed.rank}")
        prefix_len = len(word)
        while word[:prefix_len] not in cache:
            prefix_len -= 1
        s = cache[word[:prefix_len]]
        for step in range(prefix_len, len(word)):
            try:
                s = mutate_seed(s, word[step])
            except LaurentViolation:
                raise LaurentViolation(
                    f"exact division failed on word {list(word)} at step {step}", word, step
                ) from None
            cache[word[: step + 1]] = s
        for p in s.cluster:
            if not all(isinstance(c, int) for c in p.terms.values()):
                raise LaurentViolation(f"non-integer coefficient on word {list(word)}", word, len(word))
        entries.append(AuditEntry(word, len(word), max((len(p.terms) for p in s.cluster), default=0)))
    return AuditReport(entries)
