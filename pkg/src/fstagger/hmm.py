"""HMM parameters, supervised estimation, Viterbi decoding and barrier splitting.

All probabilities live in natural-log domain; zero probability is float -inf,
which orders below every finite value. Viterbi ties are broken toward the
lowest tag id at every backpointer decision, and the same rule must be used
by any oracle that wants exact sequence agreement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    EmptyCorpus,
    FormatError,
    LengthMismatch,
    NoPath,
    NoTerminalBarrier,
    TagNotInClass,
)
from .inventory import Inventory, bracket_name

NEG_INF = float("-inf")
UNKNOWN_CLASS = "[UNKNOWN]"


class Mode(Enum):
    WHOLE = "whole"
    INITIAL = "initial"
    MIDDLE = "middle"


@dataclass
class HmmParams:
    """Log-domain pi / a / b matrices over a tag and class inventory.

    a[prev, t] is the transition log-probability, b[c, t] the log-probability
    of emitting class c from tag t (normalized per tag over classes, -inf
    exactly when t is not a member of c).
    """

    inventory: Inventory
    pi: np.ndarray
    a: np.ndarray
    b: np.ndarray
    sentence_end_class: int
    _tables: tuple | None = field(default=None, repr=False, compare=False)

    def validate(self) -> None:
        inv = self.inventory
        T, C = inv.num_tags, inv.num_classes
        if self.pi.shape != (T,) or self.a.shape != (T, T) or self.b.shape != (C, T):
            raise FormatError("parameter matrix shapes do not match the inventory")
        if abs(np.exp(self.pi).sum() - 1.0) > 1e-9:
            raise FormatError("pi does not sum to 1")
        rows = np.exp(self.a).sum(axis=1)
        if np.abs(rows - 1.0).max() > 1e-9:
            raise FormatError("a row does not sum to 1")
        cols = np.exp(self.b).sum(axis=0)
        if np.abs(cols - 1.0).max() > 1e-9:
            raise FormatError("b column does not sum to 1 for some tag")
        for c in range(C):
            members = set(inv.class_members[c])
            for t in range(T):
                if t not in members and self.b[c, t] != NEG_INF:
                    raise FormatError(f"b({inv.class_names[c]}|{inv.tags[t]}) > 0 for a non-member tag")
            if all(self.b[c, t] == NEG_INF for t in members):
                raise FormatError(f"class {inv.class_names[c]} has no member with positive probability")
        if inv.is_ambiguous(self.sentence_end_class):
            raise FormatError("sentence end class must be unambiguous")

    def tables(self):
        """Plain-python copies of the matrices plus sorted class members,
        for the decoding hot path."""
        if self._tables is None:
            members = [sorted(m) for m in self.inventory.class_members]
            self._tables = (
                self.pi.tolist(),
                [row.tolist() for row in self.a],
                [row.tolist() for row in self.b],
                members,
            )
        return self._tables


@dataclass(frozen=True)
class BarrierSplit:
    """A class sequence cut at its unambiguous classes.

    `initial` runs up to and including the first unambiguous class; every
    middle starts at an unambiguous class shared with the preceding piece
    and ends at the next one.
    """

    initial: tuple[int, ...]
    middles: tuple[tuple[int, ...], ...]


def split_at_barriers(params: HmmParams, classes) -> BarrierSplit:
    inv = params.inventory
    if not classes:
        raise NoTerminalBarrier("empty class sequence")
    if inv.is_ambiguous(classes[-1]):
        raise NoTerminalBarrier("sequence does not end with an unambiguous class")
    barriers = [i for i, c in enumerate(classes) if not inv.is_ambiguous(c)]
    first = barriers[0]
    initial = tuple(classes[: first + 1])
    middles = []
    for left, right in zip(barriers, barriers[1:]):
        middles.append(tuple(classes[left : right + 1]))
    return BarrierSplit(initial, tuple(middles))


def joint_prob(params: HmmParams, classes, tags, mode: Mode = Mode.WHOLE) -> float:
    """Log joint probability of a class sequence and a tag sequence.

    WHOLE and INITIAL start with pi(t1) b(c1|t1); MIDDLE starts with b(c1|t1)
    because the first position repeats the barrier class of the previous piece.
    """
    if len(classes) != len(tags):
        raise LengthMismatch(f"{len(classes)} classes vs {len(tags)} tags")
    if not classes:
        raise LengthMismatch("empty sequences")
    inv = params.inventory
    for c, t in zip(classes, tags):
        if t not in inv.class_members[c]:
            raise TagNotInClass(f"{inv.tags[t]} not in {inv.class_names[c]}")
    pi_l, a_l, b_l, _ = params.tables()
    if mode is Mode.MIDDLE:
        total = b_l[classes[0]][tags[0]]
    else:
        total = pi_l[tags[0]] + b_l[classes[0]][tags[0]]
    for j in range(1, len(classes)):
        total += a_l[tags[j - 1]][tags[j]] + b_l[classes[j]][tags[j]]
    return total


def viterbi(params: HmmParams, classes, mode: Mode = Mode.WHOLE) -> list[int]:
    """Most probable tag sequence for the class sequence, in the given mode."""
    if mode is Mode.INITIAL:
        mode = Mode.WHOLE
    if not classes:
        raise NoPath("empty class sequence")
    pi_l, a_l, b_l, members = params.tables()
    cands = members[classes[0]]
    b_row = b_l[classes[0]]
    if mode is Mode.MIDDLE:
        scores = [b_row[t] for t in cands]
    else:
        scores = [pi_l[t] + b_row[t] for t in cands]
    backs: list[list[int]] = []
    for j in range(1, len(classes)):
        prev_cands = cands
        cands = members[classes[j]]
        b_row = b_l[classes[j]]
        new_scores = []
        back = []
        for t in cands:
            best = NEG_INF
            best_i = 0
            for i, p in enumerate(prev_cands):
                s = scores[i] + a_l[p][t]
                if s > best:
                    best = s
                    best_i = i
            new_scores.append(best + b_row[t])
            back.append(best_i)
        scores = new_scores
        backs.append(back)
    best = NEG_INF
    best_i = 0
    for i, s in enumerate(scores):
        if s > best:
            best = s
            best_i = i
    if best == NEG_INF:
        raise NoPath("every tag sequence has probability zero")
    cands_per_pos = [members[c] for c in classes]
    out = [0] * len(classes)
    i = best_i
    for j in range(len(classes) - 1, 0, -1):
        out[j] = cands_per_pos[j][i]
        i = backs[j - 1][i]
    out[0] = cands_per_pos[0][i]
    return out


# -- supervised estimation -----------------------------------------------------


def _derive_inventory(sentences) -> Inventory:
    """Inventory from a class/tag annotated corpus.

    Bracket-form class names ([A,B]) declare their members; any other name
    gets the set of tags observed under it. The unknown class, when present
    or requested, is handled by train_from_tagged.
    """
    tag_names = sorted({tok.tag for sent in sentences for tok in sent})
    tag_ids = {n: i for i, n in enumerate(tag_names)}
    observed: dict[str, set[str]] = {}
    for sent in sentences:
        for tok in sent:
            observed.setdefault(tok.cls, set()).add(tok.tag)
    classes = []
    for name in sorted(observed):
        if name.startswith("[") and name.endswith("]") and name != UNKNOWN_CLASS:
            members = name[1:-1].split(",")
            for m in members:
                if m not in tag_ids:
                    raise FormatError(f"class {name} names unknown tag {m!r}")
        else:
            members = sorted(observed[name])
        classes.append((name, members))
    return Inventory.build(tag_names, classes)


def train_from_tagged(
    sentences,
    smoothing: float = 0.001,
    inventory: Inventory | None = None,
    sentence_end: str | None = None,
) -> HmmParams:
    """Smoothed relative-frequency estimates from a (word, class, tag) corpus.

    Smoothing is added to pi, a and b counts; b stays exactly -inf for tags
    outside a class. Unknown-class emission counts come from hapax tokens
    (word forms occurring exactly once in the corpus, counted on raw forms).
    """
    sentences = [s for s in sentences if s]
    if not sentences or not any(sentences):
        raise EmptyCorpus("no tokens to train on")
    inv = inventory or _derive_inventory(sentences)
    T, C = inv.num_tags, inv.num_classes

    pi_c = np.full(T, smoothing, dtype=float)
    a_c = np.full((T, T), smoothing, dtype=float)
    b_c = np.zeros((C, T), dtype=float)
    member_mask = np.zeros((C, T), dtype=bool)
    for c in range(C):
        for t in inv.class_members[c]:
            member_mask[c, t] = True
            b_c[c, t] = smoothing

    word_count: dict[str, int] = {}
    word_tag: dict[str, int] = {}
    for sent in sentences:
        prev = None
        for tok in sent:
            c = inv.class_id(tok.cls)
            t = inv.tag_id(tok.tag)
            if t not in inv.class_members[c]:
                raise TagNotInClass(f"{tok.tag} not in class {tok.cls}")
            if prev is None:
                pi_c[t] += 1.0
            else:
                a_c[prev, t] += 1.0
            b_c[c, t] += 1.0
            prev = t
            word_count[tok.word] = word_count.get(tok.word, 0) + 1
            word_tag[tok.word] = t

    if UNKNOWN_CLASS in inv._class_ids:
        u = inv.class_id(UNKNOWN_CLASS)
        members = set(inv.class_members[u])
        for word, n in word_count.items():
            if n == 1 and word_tag[word] in members:
                b_c[u, word_tag[word]] += 1.0

    # Rows or columns with no counts and zero smoothing fall back to uniform,
    # so the normalization invariants hold for any corpus.
    with np.errstate(divide="ignore"):
        pi = np.log(pi_c / pi_c.sum())
        a_tot = a_c.sum(axis=1, keepdims=True)
        a_fixed = np.where(a_tot == 0.0, 1.0, a_c)
        a = np.log(a_fixed / a_fixed.sum(axis=1, keepdims=True))
        b_masked = np.where(member_mask, b_c, 0.0)
        b_tot = b_masked.sum(axis=0, keepdims=True)
        b_fixed = np.where((b_tot == 0.0) & member_mask, 1.0, b_masked)
        b = np.where(member_mask, b_fixed, 0.0)
        b = np.log(b / b.sum(axis=0, keepdims=True))
        b[~member_mask] = NEG_INF

    if sentence_end is not None:
        end_cls = inv.class_id(sentence_end)
    else:
        last = {inv.class_id(sent[-1].cls) for sent in sentences}
        if len(last) != 1:
            raise FormatError(f"sentences end in {len(last)} different classes; pass sentence_end")
        end_cls = last.pop()
    if inv.is_ambiguous(end_cls):
        raise NoTerminalBarrier("sentence end class is ambiguous")

    params = HmmParams(inv, pi, a, b, end_cls)
    params.validate()
    return params


# -- parameter file ------------------------------------------------------------


def write_params(params: HmmParams, path) -> None:
    """Line-oriented text dump; probabilities as linear-domain decimals."""
    inv = params.inventory
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("TAGS " + " ".join(inv.tags) + "\n")
        for c in range(inv.num_classes):
            members = ",".join(inv.tags[t] for t in inv.class_members[c])
            fh.write(f"CLASS {inv.class_names[c]} = {members}\n")
        fh.write(f"SENT_END {inv.class_names[params.sentence_end_class]}\n")
        for t in range(inv.num_tags):
            p = math.exp(params.pi[t])
            if p > 0.0:
                fh.write(f"PI {inv.tags[t]} {p!r}\n")
        for p_tag in range(inv.num_tags):
            for t in range(inv.num_tags):
                p = math.exp(params.a[p_tag, t])
                if p > 0.0:
                    fh.write(f"A {inv.tags[p_tag]} {inv.tags[t]} {p!r}\n")
        for c in range(inv.num_classes):
            for t in inv.class_members[c]:
                p = math.exp(params.b[c, t])
                if p > 0.0:
                    fh.write(f"B {inv.class_names[c]} {inv.tags[t]} {p!r}\n")


def read_params(path) -> HmmParams:
    tags: list[str] = []
    classes: list[tuple[str, list[str]]] = []
    sent_end: str | None = None
    pi_entries: list[tuple[str, float]] = []
    a_entries: list[tuple[str, str, float]] = []
    b_entries: list[tuple[str, str, float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if parts[0] == "TAGS":
                    tags = parts[1:]
                elif parts[0] == "CLASS":
                    if parts[2] != "=":
                        raise FormatError("expected CLASS name = t1,t2,...")
                    classes.append((parts[1], parts[3].split(",")))
                elif parts[0] == "SENT_END":
                    sent_end = parts[1]
                elif parts[0] == "PI":
                    pi_entries.append((parts[1], float(parts[2])))
                elif parts[0] == "A":
                    a_entries.append((parts[1], parts[2], float(parts[3])))
                elif parts[0] == "B":
                    b_entries.append((parts[1], parts[2], float(parts[3])))
                else:
                    raise FormatError(f"unknown directive {parts[0]!r}")
            except (IndexError, ValueError) as e:
                raise FormatError(f"{path}:{lineno}: {e}") from None
    if not tags or not classes or sent_end is None:
        raise FormatError("parameter file needs TAGS, CLASS and SENT_END lines")
    inv = Inventory.build(tags, classes)
    T, C = inv.num_tags, inv.num_classes
    pi = np.zeros(T)
    a = np.zeros((T, T))
    b = np.zeros((C, T))
    for name, p in pi_entries:
        pi[inv.tag_id(name)] = p
    for prev, name, p in a_entries:
        a[inv.tag_id(prev), inv.tag_id(name)] = p
    for cname, tname, p in b_entries:
        c, t = inv.class_id(cname), inv.tag_id(tname)
        if t not in inv.class_members[c]:
            raise TagNotInClass(f"B line for {tname} outside class {cname}")
        b[c, t] = p
    with np.errstate(divide="ignore"):
        params = HmmParams(inv, np.log(pi), np.log(a), np.log(b), inv.class_id(sent_end))
    params.validate()
    return params


def make_params(
    inventory: Inventory,
    pi: dict[str, float],
    a: dict[tuple[str, str], float],
    b: dict[tuple[str, str], float],
    sentence_end: str,
) -> HmmParams:
    """Params from name-keyed linear probability dicts (fixtures, tests)."""
    T, C = inventory.num_tags, inventory.num_classes
    pi_m = np.zeros(T)
    a_m = np.zeros((T, T))
    b_m = np.zeros((C, T))
    for name, p in pi.items():
        pi_m[inventory.tag_id(name)] = p
    for (prev, name), p in a.items():
        a_m[inventory.tag_id(prev), inventory.tag_id(name)] = p
    for (cname, tname), p in b.items():
        b_m[inventory.class_id(cname), inventory.tag_id(tname)] = p
    with np.errstate(divide="ignore"):
        params = HmmParams(
            inventory,
            np.log(pi_m),
            np.log(a_m),
            np.log(b_m),
            inventory.class_id(sentence_end),
        )
    params.validate()
    return params
