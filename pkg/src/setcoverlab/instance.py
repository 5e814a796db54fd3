"""Weighted set-cover instance model, validation and file I/O.

An instance is a universe {1..m} together with an ordered collection of
weighted subsets whose union is the whole universe.  Weights are exact
rationals (fractions.Fraction) so that every bound comparison downstream
is an exact comparison, never a float one.

Two file formats are supported:

* native ("scp 1"): whitespace-separated tokens::

      scp 1
      m n
      w_1 k_1 e_1 ... e_k1
      ...

  with 1-based element ids and weights written as decimals or "p/q".

* OR-Library set-covering format (read-only): "m n", then n column costs,
  then for each of the m rows a count c_j followed by c_j 1-based column
  indices.  Rows are elements and columns are sets; parsing transposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ElementOutOfRange,
    EmptySet,
    IndexOutOfRange,
    InvalidInstance,
    NegativeWeight,
    ScpSyntaxError,
    UnionNotUniverse,
)

NATIVE_MAGIC = "scp"
NATIVE_VERSION = "1"


@dataclass(frozen=True)
class SetEntry:
    """One candidate set: a sorted tuple of element ids plus its weight."""

    elements: tuple[int, ...]
    weight: Fraction

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Instance:
    """A validated-on-demand set-cover instance over the universe {1..m}."""

    m: int
    sets: tuple[SetEntry, ...]
    name: str | None = None

    @property
    def n(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class Cover:
    """A subcollection (by 0-based set index) whose union is the universe."""

    set_indices: tuple[int, ...]
    weight: Fraction


def make_instance(m, sets, name=None) -> Instance:
    """Build an Instance from (elements, weight) pairs; elements get sorted."""
    entries = tuple(
        SetEntry(tuple(sorted(set(els))), Fraction(w)) for els, w in sets
    )
    return Instance(m=m, sets=entries, name=name)


def validate(instance: Instance) -> None:
    """Raise the first invariant violation, or return None if all hold.

    Checked per set, in order: element range, non-emptiness, weight sign;
    then global coverage of the universe.
    """
    if instance.m < 1:
        raise InvalidInstance(f"universe size must be >= 1, got {instance.m}")
    if not instance.sets:
        raise InvalidInstance("instance has no sets")
    covered = 0
    full = (1 << instance.m) - 1
    for i, entry in enumerate(instance.sets):
        if not entry.elements:
            raise EmptySet(f"set {i} is empty", set_index=i)
        prev = 0
        for e in entry.elements:
            if not 1 <= e <= instance.m:
                raise ElementOutOfRange(
                    f"set {i} contains element {e} outside 1..{instance.m}",
                    set_index=i,
                )
            if e <= prev:
                raise InvalidInstance(
                    f"set {i} elements not sorted/duplicate-free", set_index=i
                )
            prev = e
        if entry.weight < 0:
            raise NegativeWeight(
                f"set {i} has negative weight {entry.weight}", set_index=i
            )
        for e in entry.elements:
            covered |= 1 << (e - 1)
    if covered != full:
        missing = next(
            e for e in range(1, instance.m + 1) if not covered >> (e - 1) & 1
        )
        raise UnionNotUniverse(
            f"element {missing} is covered by no set", missing_element=missing
        )


def element_masks(instance: Instance) -> list[int]:
    """Per-set bitmasks with bit (e-1) set for each element e."""
    masks = []
    for entry in instance.sets:
        mask = 0
        for e in entry.elements:
            mask |= 1 << (e - 1)
        masks.append(mask)
    return masks


def is_cover(instance: Instance, set_indices) -> bool:
    """True iff the union of the chosen sets equals {1..m}."""
    union = 0
    for i in set_indices:
        if not 0 <= i < instance.n:
            raise IndexOutOfRange(f"set index {i} outside 0..{instance.n - 1}")
        for e in instance.sets[i].elements:
            union |= 1 << (e - 1)
    return union == (1 << instance.m) - 1


def cover_weight(instance: Instance, set_indices) -> Fraction:
    return sum((instance.sets[i].weight for i in set_indices), Fraction(0))


def make_cover(instance: Instance, set_indices) -> Cover:
    """Build a Cover after checking it actually covers the universe."""
    idx = tuple(set_indices)
    if not is_cover(instance, idx):
        raise InvalidInstance("chosen sets do not cover the universe")
    return Cover(set_indices=idx, weight=cover_weight(instance, idx))


# ---------------------------------------------------------------------------
# weight scalars


def parse_weight(token: str) -> Fraction:
    """Parse a weight token: decimal ("5", "3.5") or rational ("7/2")."""
    return Fraction(token)


def format_weight(w: Fraction) -> str:
    """Integral weights print bare; everything else prints as "p/q"."""
    if w.denominator == 1:
        return str(w.numerator)
    return f"{w.numerator}/{w.denominator}"


# ---------------------------------------------------------------------------
# tokenizer shared by both parsers


class _Tokens:
    """Whitespace token stream with 1-based line/column positions."""

    def __init__(self, text: str):
        self.items: list[tuple[str, int, int]] = []
        for ln, line in enumerate(text.splitlines(), start=1):
            col = 1
            for piece in line.split():
                col = line.index(piece, col - 1) + 1
                self.items.append((piece, ln, col))
                col += len(piece)
        self.pos = 0

    def next(self, what: str) -> tuple[str, int, int]:
        if self.pos >= len(self.items):
            last = self.items[-1] if self.items else ("", 1, 1)
            raise ScpSyntaxError(f"unexpected end of input, expected {what}",
                                 line=last[1], column=last[2])
        tok = self.items[self.pos]
        self.pos += 1
        return tok

    def next_int(self, what: str) -> tuple[int, int, int]:
        tok, ln, col = self.next(what)
        try:
            return int(tok), ln, col
        except ValueError:
            raise ScpSyntaxError(f"expected {what}, got {tok!r}", ln, col) from None

    def next_weight(self, what: str) -> tuple[Fraction, int, int]:
        tok, ln, col = self.next(what)
        try:
            return parse_weight(tok), ln, col
        except (ValueError, ZeroDivisionError):
            raise ScpSyntaxError(f"expected {what}, got {tok!r}", ln, col) from None

    def at_end(self) -> bool:
        return self.pos >= len(self.items)


# ---------------------------------------------------------------------------
# native format


def parse_native(text: str, name: str | None = None) -> Instance:
    """Parse the native "scp 1" format; the result is validated."""
    toks = _Tokens(text)
    magic, ln, col = toks.next("format magic")
    if magic != NATIVE_MAGIC:
        raise ScpSyntaxError(f"expected {NATIVE_MAGIC!r} header, got {magic!r}", ln, col)
    version, ln, col = toks.next("format version")
    if version != NATIVE_VERSION:
        raise ScpSyntaxError(f"unsupported version {version!r}", ln, col)
    m, _, _ = toks.next_int("universe size m")
    n, _, _ = toks.next_int("set count n")
    sets = []
    for i in range(n):
        w, _, _ = toks.next_weight(f"weight of set {i}")
        k, ln, col = toks.next_int(f"cardinality of set {i}")
        if k < 0:
            raise ScpSyntaxError(f"negative cardinality for set {i}", ln, col)
        elements = []
        seen = set()
        for j in range(k):
            e, ln, col = toks.next_int(f"element {j} of set {i}")
            if e in seen:
                raise ScpSyntaxError(f"duplicate element {e} in set {i}", ln, col)
            seen.add(e)
            elements.append(e)
        sets.append(SetEntry(tuple(sorted(elements)), w))
    if not toks.at_end():
        tok, ln, col = toks.next("end of input")
        raise ScpSyntaxError(f"trailing token {tok!r}", ln, col)
    instance = Instance(m=m, sets=tuple(sets), name=name)
    validate(instance)
    return instance


def write_native(instance: Instance) -> str:
    """Emit the native format; inverse of parse_native on valid instances."""
    validate(instance)
    lines = [f"{NATIVE_MAGIC} {NATIVE_VERSION}", f"{instance.m} {instance.n}"]
    for entry in instance.sets:
        parts = [format_weight(entry.weight), str(entry.size)]
        parts.extend(str(e) for e in entry.elements)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# OR-Library format (element-major; transposed on read)


def parse_orlib(text: str, name: str | None = None) -> Instance:
    """Parse the OR-Library set-covering format into a set-major Instance."""
    toks = _Tokens(text)
    m, _, _ = toks.next_int("row count m")
    n, _, _ = toks.next_int("column count n")
    if m < 1 or n < 1:
        raise ScpSyntaxError("m and n must be positive")
    costs = []
    for i in range(n):
        w, _, _ = toks.next_weight(f"cost of column {i}")
        costs.append(w)
    columns: list[list[int]] = [[] for _ in range(n)]
    for row in range(1, m + 1):
        c, _, _ = toks.next_int(f"cover count of row {row}")
        if c < 1:
            raise UnionNotUniverse(
                f"element {row} is covered by no column", missing_element=row
            )
        seen = set()
        for j in range(c):
            col_idx, ln, col = toks.next_int(f"column {j} covering row {row}")
            if not 1 <= col_idx <= n:
                raise ScpSyntaxError(
                    f"column index {col_idx} outside 1..{n}", ln, col
                )
            if col_idx in seen:
                raise ScpSyntaxError(
                    f"row {row} lists column {col_idx} twice", ln, col
                )
            seen.add(col_idx)
            columns[col_idx - 1].append(row)
    if not toks.at_end():
        tok, ln, col = toks.next("end of input")
        raise ScpSyntaxError(f"trailing token {tok!r}", ln, col)
    sets = tuple(
        SetEntry(tuple(sorted(els)), w) for els, w in zip(columns, costs)
    )
    instance = Instance(m=m, sets=sets, name=name)
    validate(instance)
    return instance


def detect_format(text: str) -> str:
    """Sniff "native" vs "orlib" from the first token."""
    head = text.lstrip()[: len(NATIVE_MAGIC)]
    return "native" if head == NATIVE_MAGIC else "orlib"
