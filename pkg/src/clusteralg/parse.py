"""Seed files and element expressions.

Seed files are UTF-8 JSON::

    {"name": "A2", "mutable": ["x1", "x2"], "frozen": [],
     "B": [[0, -1], [1, 0]], "coeff_exponents": []}

Row ``i`` of ``coeff_exponents`` gives the exponent of ``frozen[i]`` in each
``y_j`` (the extended-matrix convention for geometric coefficients).

Element grammar (division only by monomials)::

    expr   := ["+"|"-"] term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := atom ("^" (int | "(" int ")"))?
    atom   := name | int | "(" expr ")"
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .algebra import LaurentPoly, NotDivisible, exact_div
from .seed import Seed

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    pass


class UnknownVariable(ParseError):
    pass


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("int", num, start))
        elif name is not None:
            tokens.append(("name", name, start))
        elif op in "+-*/^()":
            tokens.append(("op", op, start))
        else:
            raise ParseError(f"unexpected character {op!r} at column {start + 1}")
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, names: Sequence[str]):
        self.tokens = _tokenize(src)
        self.i = 0
        self.names = tuple(names)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, op: str) -> bool:
        kind, val, _ = self.peek()
        if kind == "op" and val == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str) -> None:
        if not self.accept(op):
            kind, val, pos = self.peek()
            got = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {op!r} at column {pos + 1}, got {got}")

    def parse(self) -> LaurentPoly:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r} at column {pos + 1}")
        return p

    def expr(self) -> LaurentPoly:
        negate = False
        if self.accept("-"):
            negate = True
        else:
            self.accept("+")
        p = self.term()
        if negate:
            p = -p
        while True:
            if self.accept("+"):
                p = p + self.term()
            elif self.accept("-"):
                p = p - self.term()
            else:
                return p

    def term(self) -> LaurentPoly:
        p = self.factor()
        while True:
            if self.accept("*"):
                p = p * self.factor()
            elif self.accept("/"):
                pos = self.peek()[2]
                d = self.factor()
                if d.is_zero():
                    raise ParseError(f"division by zero at column {pos + 1}")
                if not d.is_monomial():
                    raise ParseError(
                        f"denominator {d} at column {pos + 1} is not a monomial; "
                        "clear denominators so that only monomials are divided by"
                    )
                try:
                    p = exact_div(p, d)
                except NotDivisible:
                    raise ParseError(f"{p} is not divisible by {d} over the integers") from None
            else:
                return p

    def factor(self) -> LaurentPoly:
        base = self.atom()
        if not self.accept("^"):
            return base
        paren = self.accept("(")
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        kind, val, pos = self.take()
        if kind != "int":
            raise ParseError(f"expected integer exponent at column {pos + 1}")
        if paren:
            self.expect(")")
        k = sign * int(val)
        if k < 0 and not base.is_unit():
            raise ParseError(f"negative power of non-unit {base} at column {pos + 1}")
        return base ** k

    def atom(self) -> LaurentPoly:
        kind, val, pos = self.take()
        if kind == "int":
            return LaurentPoly.constant(self.names, int(val))
        if kind == "name":
            if val not in self.names:
                raise UnknownVariable(f"unknown variable {val!r} at column {pos + 1}")
            return LaurentPoly.var(self.names, val)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect(")")
            return p
        got = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {got} at column {pos + 1}")


def parse_element(src: str, names: Sequence[str]) -> LaurentPoly:
    """Parse an element over the ordered variable ``names``."""
    return _Parser(src, names).parse()


@dataclass
class SeedFile:
    name: str
    mutable: list[str]
    frozen: list[str] = field(default_factory=list)
    B: list[list[int]] = field(default_factory=list)
    coeff_exponents: list[list[int]] = field(default_factory=list)

    def to_seed(self) -> Seed:
        return Seed.initial(self.mutable, self.B, self.frozen, self.coeff_exponents)

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "mutable": self.mutable,
                "frozen": self.frozen,
                "B": self.B,
                "coeff_exponents": self.coeff_exponents,
            }
        )


_FIELDS = {"name", "mutable", "frozen", "B", "coeff_exponents"}


def _names_field(doc: dict, key: str, required: bool) -> list[str]:
    if key not in doc:
        if required:
            raise ParseError(f"missing field {key!r}")
        return []
    val = doc[key]
    if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
        raise ParseError(f"field {key!r} must be a list of variable names")
    for v in val:
        if not NAME_RE.match(v):
            raise ParseError(f"field {key!r}: {v!r} is not a valid variable name")
    return list(val)


def _int_rows(doc: dict, key: str, width: int, required: bool) -> list[list[int]]:
    if key not in doc:
        if required:
            raise ParseError(f"missing field {key!r}")
        return []
    rows = doc[key]
    if not isinstance(rows, list):
        raise ParseError(f"field {key!r} must be a list of rows")
    for r, row in enumerate(rows):
        if not isinstance(row, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
            raise ParseError(f"field {key!r} row {r + 1} must be a list of integers")
        if len(row) != width:
            raise ParseError(f"field {key!r} row {r + 1} has {len(row)} entries, expected {width}")
    return [list(r) for r in rows]


def read_seed_file(path: str | Path) -> SeedFile:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    unknown = set(doc) - _FIELDS
    if unknown:
        raise ParseError(f"{path}: unknown fields {sorted(unknown)}")
    name = doc.get("name", path.stem)
    if not isinstance(name, str):
        raise ParseError(f"{path}: field 'name' must be a string")
    try:
        mutable = _names_field(doc, "mutable", True)
        frozen = _names_field(doc, "frozen", False)
        n = len(mutable)
        B = _int_rows(doc, "B", n, True)
        if len(B) != n:
            raise ParseError(f"field 'B' has {len(B)} rows, expected {n}")
        coeff = _int_rows(doc, "coeff_exponents", n, False)
        if len(coeff) != len(frozen):
            raise ParseError(f"field 'coeff_exponents' has {len(coeff)} rows, expected {len(frozen)}")
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return SeedFile(name, mutable, frozen, B, coeff)


def parse_seed_file(path: str | Path) -> Seed:
    """Read and validate a seed file; raises ParseError or InvalidSeed."""
    return read_seed_file(path).to_seed()
