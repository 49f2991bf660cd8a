"""Synchronization algebras on a finite alphabet.

Labels are plain strings.  Two names are reserved: ``IDLE`` (``"0"``), the
idle action, and ``BOT`` (``"bot"``), the result of a forbidden
synchronization.  Every other label is an action of the alphabet.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import AlgebraError, UnknownLabelError
from .report import Report

IDLE = "0"
BOT = "bot"
TAU = "tau"
RESERVED = frozenset({IDLE, BOT, "nil", "rec", "nu"})

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def label_sort_key(label: str) -> tuple[int, str]:
    """Total order Idle < Bot < actions (lexicographic)."""
    if label == IDLE:
        return (0, "")
    if label == BOT:
        return (1, "")
    return (2, label)


@dataclass(frozen=True, eq=False)
class SyncAlgebra:
    """A finite synchronization table over ``alphabet`` plus ``IDLE`` and ``BOT``.

    ``table`` maps ordered label pairs to results.  It is total on the declared
    labels once built through :meth:`from_entries` or :func:`builtin`; entries
    naming foreign labels are kept so :func:`validate_algebra` can report them.
    """

    alphabet: tuple[str, ...]
    table: Mapping[tuple[str, str], str]
    name: str = "custom"
    _rank: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_rank", {a: i for i, a in enumerate(self.alphabet)})

    @classmethod
    def from_entries(cls, alphabet: Iterable[str], entries: Iterable[tuple[str, str, str]],
                     name: str = "custom") -> "SyncAlgebra":
        """Build a table from explicit ``(x, y, result)`` entries.

        Omitted pairs default to ``BOT``; ``sync(a, IDLE)`` must be given for
        every action.  An entry fixes both orders unless the mirrored pair is
        given separately (a conflicting mirror shows up as a commutativity
        violation).
        """
        alphabet = tuple(alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise AlgebraError("alphabet lists an action twice")
        for a in alphabet:
            if a in RESERVED or not _IDENT.match(a):
                raise AlgebraError(f"invalid action name {a!r}")
        explicit: dict[tuple[str, str], str] = {}
        for x, y, r in entries:
            explicit[(x, y)] = r
        table: dict[tuple[str, str], str] = {}
        labels = (IDLE, BOT) + alphabet
        for x, y in itertools.product(labels, repeat=2):
            table[(x, y)] = BOT
        table[(IDLE, IDLE)] = IDLE
        for (x, y), r in explicit.items():
            table[(x, y)] = r
            if (y, x) not in explicit:
                table[(y, x)] = r
        missing = [a for a in alphabet if (a, IDLE) not in explicit and (IDLE, a) not in explicit]
        if missing:
            raise AlgebraError(f"sync(a, 0) must be explicit; missing for {missing}")
        return cls(alphabet, table, name)

    @property
    def labels(self) -> tuple[str, ...]:
        return (IDLE, BOT) + self.alphabet

    def __contains__(self, label: str) -> bool:
        return label in self._rank or label in (IDLE, BOT)

    def sync(self, x: str, y: str) -> str:
        try:
            return self.table[(x, y)]
        except KeyError:
            bad = x if x not in self else y
            raise UnknownLabelError(f"unknown label {bad!r}") from None

    def can_sync(self, x: str, y: str) -> bool:
        return self.sync(x, y) != BOT

    def asynchronous(self, a: str) -> bool:
        if a not in self._rank:
            raise UnknownLabelError(f"unknown action {a!r}")
        return self.table[(a, IDLE)] == a

    def rank(self, a: str) -> int:
        """Position of action *a* in the declared alphabet."""
        try:
            return self._rank[a]
        except KeyError:
            raise UnknownLabelError(f"unknown action {a!r}") from None

    def restricted_alphabet(self, a: str) -> frozenset[str]:
        """Actions surviving restriction by *a*: neither *a* nor anything syncing with it."""
        self.rank(a)
        return frozenset(b for b in self.alphabet if b != a and self.sync(a, b) == BOT)

    def to_json(self) -> dict:
        entries = []
        labels = sorted(self.labels, key=label_sort_key)
        for i, x in enumerate(labels):
            for y in labels[i:]:
                r = self.table.get((x, y), BOT)
                if x == IDLE and y == IDLE:
                    continue
                if r != BOT or (x == IDLE and y in self._rank):
                    entries.append({"x": x, "y": y, "r": r})
        return {"format": "hda-sem/1", "name": self.name,
                "alphabet": list(self.alphabet), "entries": entries}

    @classmethod
    def from_json(cls, obj: Mapping) -> "SyncAlgebra":
        try:
            alphabet = obj["alphabet"]
            entries = [(e["x"], e["y"], e["r"]) for e in obj.get("entries", [])]
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed algebra JSON: {exc}") from None
        return cls.from_entries(alphabet, entries, name=obj.get("name", "custom"))


def load_algebra(path: str) -> SyncAlgebra:
    with open(path) as fh:
        return SyncAlgebra.from_json(json.load(fh))


def validate_algebra(alg: SyncAlgebra) -> Report:
    """Check the synchronization-algebra axioms exhaustively."""
    rep = Report("algebra")
    labels = alg.labels
    known = set(labels)
    malformed = False
    for (x, y), r in alg.table.items():
        if x not in known or y not in known or r not in known:
            rep.add("malformed-table", (x, y, r), "entry references a label outside the alphabet")
            malformed = True
    for x, y in itertools.product(labels, repeat=2):
        if (x, y) not in alg.table:
            rep.add("malformed-table", (x, y), "table is not total")
            malformed = True
    if malformed:
        return rep

    s = alg.sync
    for x, y in itertools.combinations(labels, 2):
        if s(x, y) != s(y, x):
            rep.add("commutativity", (x, y), f"{s(x, y)} != {s(y, x)}")
    for x in labels:
        if s(x, BOT) != BOT or s(BOT, x) != BOT:
            rep.add("bot-absorbing", (x, BOT))
    for x, y in itertools.product(labels, repeat=2):
        if (s(x, y) == IDLE) != (x == IDLE and y == IDLE):
            rep.add("idle-iff-both-idle", (x, y), f"sync = {s(x, y)}")
    for a in alg.alphabet:
        if s(a, IDLE) not in (a, BOT):
            rep.add("async-or-bot", (a, IDLE), f"sync = {s(a, IDLE)}")
    for x, y, z in itertools.product(labels, repeat=3):
        if s(s(x, y), z) != s(x, s(y, z)):
            rep.add("associativity", (x, y, z))
    return rep


def complement(action: str, alphabet: Iterable[str] = ()) -> str:
    """CCS complement spelled with a ``co`` prefix: ``a`` <-> ``coa``."""
    alphabet = set(alphabet)
    if action.startswith("co") and action[2:] and (not alphabet or action[2:] in alphabet):
        return action[2:]
    return "co" + action


BUILTINS = ("ccs", "tcsp", "trivial")


def builtin(name: str, alphabet: Iterable[str], involution: Mapping[str, str] | None = None) -> SyncAlgebra:
    """One of the three standard algebras: ``trivial``, ``ccs`` or ``tcsp``.

    For ``ccs`` the involution defaults to the ``co`` prefix convention.
    """
    alphabet = tuple(sorted(set(alphabet)))
    entries: list[tuple[str, str, str]] = []
    if name == "trivial":
        entries = [(a, IDLE, a) for a in alphabet]
    elif name == "ccs":
        if TAU not in alphabet:
            raise AlgebraError("ccs alphabet must contain tau")
        visible = [a for a in alphabet if a != TAU]
        inv = dict(involution) if involution else {a: complement(a, visible) for a in visible}
        for a in visible:
            b = inv.get(a)
            if b is None or b == a or b not in visible or inv.get(b) != a:
                raise AlgebraError(f"ccs involution is not well formed at {a!r}")
        entries = [(a, IDLE, a) for a in alphabet]
        entries += [(a, inv[a], TAU) for a in visible]
    elif name == "tcsp":
        if TAU not in alphabet:
            raise AlgebraError("tcsp alphabet must contain tau")
        entries = [(TAU, IDLE, TAU)]
        entries += [(a, IDLE, BOT) for a in alphabet if a != TAU]
        entries += [(a, a, a) for a in alphabet if a != TAU]
    else:
        raise AlgebraError(f"unknown builtin algebra {name!r}")
    return SyncAlgebra.from_entries(alphabet, entries, name=name)


def closed_alphabet(name: str, actions: Iterable[str]) -> tuple[str, ...]:
    """The smallest alphabet the builtin *name* accepts that contains *actions*."""
    acts = set(actions)
    if name == "ccs":
        acts |= {complement(a) for a in acts if a != TAU}
        acts.add(TAU)
    elif name == "tcsp":
        acts.add(TAU)
    if not acts:
        acts = {"a"}
    return tuple(sorted(acts))
