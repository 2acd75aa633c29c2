"""Unweighted finite-state transducers and the rational operations on them.

An Fst is a set of integer-indexed states with per-state arc lists; each
arc carries an input symbol, an output symbol and a target state. A machine
whose every arc has input == output is an automaton (a language rather than
a relation). Machines never keep epsilon:epsilon arcs: every operation that
can create them splices them away before returning.

Construction mutates; a finished Fst is treated as immutable and may be
shared freely across threads (apply is reentrant).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    Ambiguous,
    LengthMismatch,
    MalformedAlphabet,
    NoPath,
    NotAutomaton,
    NotDeterministic,
)
from .symbols import EPSILON, PairAtom, Symbol


class Side(Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True, slots=True)
class Arc:
    inp: Symbol
    out: Symbol
    dst: int


class Fst:
    __slots__ = ("arcs", "initial", "finals", "alphabet")

    def __init__(self):
        self.arcs: list[list[Arc]] = []
        self.initial: int = 0
        self.finals: set[int] = set()
        self.alphabet: set[Symbol] = set()

    # -- construction ------------------------------------------------------

    def add_state(self) -> int:
        self.arcs.append([])
        return len(self.arcs) - 1

    def set_initial(self, state: int) -> None:
        self.initial = state

    def add_final(self, state: int) -> None:
        self.finals.add(state)

    def add_arc(self, src: int, inp: Symbol, out: Symbol, dst: int) -> None:
        self.arcs[src].append(Arc(inp, out, dst))
        if inp is not EPSILON:
            self.alphabet.add(inp)
        if out is not EPSILON:
            self.alphabet.add(out)

    def declare(self, symbols: Iterable[Symbol]) -> None:
        """Extend the alphabet with symbols that need not occur on arcs."""
        for s in symbols:
            if s is not EPSILON:
                self.alphabet.add(s)

    @classmethod
    def empty_language(cls, alphabet: Iterable[Symbol] = ()) -> "Fst":
        f = cls()
        f.add_state()
        f.declare(alphabet)
        return f

    @classmethod
    def epsilon_language(cls) -> "Fst":
        f = cls()
        f.add_final(f.add_state())
        return f

    @classmethod
    def from_path(cls, labels: Sequence[tuple[Symbol, Symbol]]) -> "Fst":
        """Single-path machine with the given (input, output) arc labels."""
        f = cls()
        cur = f.add_state()
        for inp, out in labels:
            nxt = f.add_state()
            f.add_arc(cur, inp, out, nxt)
            cur = nxt
        f.add_final(cur)
        return f

    @classmethod
    def sigma_star(cls, alphabet: Iterable[Symbol]) -> "Fst":
        """Identity automaton accepting every string over the alphabet."""
        f = cls()
        s = f.add_state()
        f.add_final(s)
        for sym in alphabet:
            f.add_arc(s, sym, sym, s)
        return f

    # -- inspection --------------------------------------------------------

    @property
    def num_states(self) -> int:
        return len(self.arcs)

    @property
    def num_arcs(self) -> int:
        return sum(len(a) for a in self.arcs)

    def is_automaton(self) -> bool:
        return all(a.inp == a.out for arcs in self.arcs for a in arcs)

    def copy(self) -> "Fst":
        f = Fst()
        f.arcs = [list(a) for a in self.arcs]
        f.initial = self.initial
        f.finals = set(self.finals)
        f.alphabet = set(self.alphabet)
        return f

    def __repr__(self):
        return f"Fst(states={self.num_states}, arcs={self.num_arcs}, finals={len(self.finals)})"


# -- internal cleanup --------------------------------------------------------


def _splice_eps_eps(f: Fst) -> Fst:
    """Remove epsilon:epsilon glue arcs by closure splicing."""
    has_glue = any(a.inp is EPSILON and a.out is EPSILON for arcs in f.arcs for a in arcs)
    if not has_glue:
        return f
    closures: list[set[int]] = []
    for s in range(f.num_states):
        seen = {s}
        todo = [s]
        while todo:
            u = todo.pop()
            for a in f.arcs[u]:
                if a.inp is EPSILON and a.out is EPSILON and a.dst not in seen:
                    seen.add(a.dst)
                    todo.append(a.dst)
        closures.append(seen)
    out = Fst()
    for _ in range(f.num_states):
        out.add_state()
    out.initial = f.initial
    out.alphabet = set(f.alphabet)
    for s in range(f.num_states):
        emitted = set()
        for u in closures[s]:
            if u in f.finals:
                out.finals.add(s)
            for a in f.arcs[u]:
                if a.inp is EPSILON and a.out is EPSILON:
                    continue
                key = (a.inp, a.out, a.dst)
                if key not in emitted:
                    emitted.add(key)
                    out.arcs[s].append(Arc(*key))
    return out


def trim(f: Fst, coaccessible: bool = True) -> Fst:
    """Keep states reachable from the initial (and reaching a final)."""
    fwd = {f.initial}
    todo = [f.initial]
    while todo:
        s = todo.pop()
        for a in f.arcs[s]:
            if a.dst not in fwd:
                fwd.add(a.dst)
                todo.append(a.dst)
    keep = fwd
    if coaccessible:
        rev: list[list[int]] = [[] for _ in range(f.num_states)]
        for s in range(f.num_states):
            for a in f.arcs[s]:
                rev[a.dst].append(s)
        bwd = set(f.finals)
        todo = list(f.finals)
        while todo:
            s = todo.pop()
            for p in rev[s]:
                if p not in bwd:
                    bwd.add(p)
                    todo.append(p)
        keep = fwd & bwd
    if f.initial not in keep:
        return Fst.empty_language(f.alphabet)
    remap = {}
    out = Fst()
    for s in sorted(keep):
        remap[s] = out.add_state()
    out.initial = remap[f.initial]
    out.alphabet = set(f.alphabet)
    for s in sorted(keep):
        for a in f.arcs[s]:
            if a.dst in keep:
                out.arcs[remap[s]].append(Arc(a.inp, a.out, remap[a.dst]))
        if s in f.finals:
            out.finals.add(remap[s])
    return out


def _cleanup(f: Fst) -> Fst:
    return trim(_splice_eps_eps(f))


def _copy_into(dst: Fst, src: Fst) -> list[int]:
    base = dst.num_states
    for _ in range(src.num_states):
        dst.add_state()
    for s in range(src.num_states):
        for a in src.arcs[s]:
            dst.arcs[base + s].append(Arc(a.inp, a.out, base + a.dst))
    dst.alphabet |= src.alphabet
    return [base + s for s in range(src.num_states)]


# -- rational operations -----------------------------------------------------


def union(a: Fst, b: Fst) -> Fst:
    f = Fst()
    s0 = f.add_state()
    f.set_initial(s0)
    ma = _copy_into(f, a)
    mb = _copy_into(f, b)
    f.arcs[s0].append(Arc(EPSILON, EPSILON, ma[a.initial]))
    f.arcs[s0].append(Arc(EPSILON, EPSILON, mb[b.initial]))
    f.finals = {ma[s] for s in a.finals} | {mb[s] for s in b.finals}
    return _cleanup(f)


def concat(a: Fst, b: Fst) -> Fst:
    f = Fst()
    ma = _copy_into(f, a)
    mb = _copy_into(f, b)
    f.set_initial(ma[a.initial])
    for s in a.finals:
        f.arcs[ma[s]].append(Arc(EPSILON, EPSILON, mb[b.initial]))
    f.finals = {mb[s] for s in b.finals}
    return _cleanup(f)


def kleene_star(a: Fst) -> Fst:
    f = Fst()
    s0 = f.add_state()
    f.set_initial(s0)
    f.add_final(s0)
    ma = _copy_into(f, a)
    f.arcs[s0].append(Arc(EPSILON, EPSILON, ma[a.initial]))
    for s in a.finals:
        f.arcs[ma[s]].append(Arc(EPSILON, EPSILON, s0))
    return _cleanup(f)


def cross_pair(classes: Sequence[Symbol], tags: Sequence[Symbol]) -> Fst:
    """Single-path cross product of two equal-length symbol sequences."""
    if len(classes) != len(tags):
        raise LengthMismatch(f"{len(classes)} classes vs {len(tags)} tags")
    if not classes:
        raise LengthMismatch("cross product of empty sequences")
    return Fst.from_path(list(zip(classes, tags)))


def compose(r: Fst, q: Fst) -> Fst:
    """Relation composition with an epsilon-sequencing discipline.

    Between two matching moves, all r-alone moves (output epsilon) are taken
    before any q-alone move (input epsilon), which keeps exactly one of the
    equivalent epsilon interleavings.
    """
    q_by_inp: list[dict[Symbol, list[Arc]]] = []
    q_eps: list[list[Arc]] = []
    for s in range(q.num_states):
        d: dict[Symbol, list[Arc]] = {}
        eps = []
        for a in q.arcs[s]:
            if a.inp is EPSILON:
                eps.append(a)
            else:
                d.setdefault(a.inp, []).append(a)
        q_by_inp.append(d)
        q_eps.append(eps)

    f = Fst()
    start = (r.initial, q.initial, 0)
    ids = {start: f.add_state()}
    f.set_initial(0)
    todo = deque([start])
    while todo:
        node = todo.popleft()
        sr, sq, flag = node
        sid = ids[node]

        def target(nxt):
            if nxt not in ids:
                ids[nxt] = f.add_state()
                todo.append(nxt)
            return ids[nxt]

        for a in r.arcs[sr]:
            if a.out is EPSILON:
                if flag == 0:
                    f.add_arc(sid, a.inp, EPSILON, target((a.dst, sq, 0)))
            else:
                for qa in q_by_inp[sq].get(a.out, ()):
                    f.add_arc(sid, a.inp, qa.out, target((a.dst, qa.dst, 0)))
        for qa in q_eps[sq]:
            f.add_arc(sid, EPSILON, qa.out, target((sr, qa.dst, 1)))
        if sr in r.finals and sq in q.finals:
            f.finals.add(sid)
    return _cleanup(f)


def determinize_pairs(a: Fst) -> Fst:
    """Subset construction treating each (input, output) label as atomic."""
    a = _splice_eps_eps(a)
    start = (a.initial,)
    f = Fst()
    ids = {start: f.add_state()}
    f.set_initial(0)
    f.alphabet = set(a.alphabet)
    todo = deque([start])
    while todo:
        subset = todo.popleft()
        sid = ids[subset]
        if any(s in a.finals for s in subset):
            f.finals.add(sid)
        moves: dict[tuple[Symbol, Symbol], set[int]] = {}
        for s in subset:
            for arc in a.arcs[s]:
                moves.setdefault((arc.inp, arc.out), set()).add(arc.dst)
        for (inp, out), targets in moves.items():
            key = tuple(sorted(targets))
            if key not in ids:
                ids[key] = f.add_state()
                todo.append(key)
            f.arcs[sid].append(Arc(inp, out, ids[key]))
    return trim(f)


def _check_pair_deterministic(a: Fst) -> None:
    for s in range(a.num_states):
        seen = set()
        for arc in a.arcs[s]:
            key = (arc.inp, arc.out)
            if key in seen:
                raise NotDeterministic(f"state {s} has two arcs labelled {key}")
            seen.add(key)


def minimize(a: Fst) -> Fst:
    """Merge behaviorally equivalent states of a pair-deterministic machine."""
    _check_pair_deterministic(a)
    a = trim(a)
    if not a.finals:
        return Fst.empty_language(a.alphabet)
    label_ids: dict[tuple[Symbol, Symbol], int] = {}
    for arcs in a.arcs:
        for arc in arcs:
            label_ids.setdefault((arc.inp, arc.out), len(label_ids))
    first = {}
    block = [0] * a.num_states
    for s in range(a.num_states):
        key = s in a.finals
        if key not in first:
            first[key] = len(first)
        block[s] = first[key]
    nblocks = len(first)
    while True:
        sigs = {}
        new_block = [0] * a.num_states
        for s in range(a.num_states):
            sig = (
                block[s],
                tuple(sorted((label_ids[(arc.inp, arc.out)], block[arc.dst]) for arc in a.arcs[s])),
            )
            if sig not in sigs:
                sigs[sig] = len(sigs)
            new_block[s] = sigs[sig]
        if len(sigs) == nblocks:
            break
        block = new_block
        nblocks = len(sigs)
    f = Fst()
    for _ in range(nblocks):
        f.add_state()
    f.alphabet = set(a.alphabet)
    f.set_initial(block[a.initial])
    done = set()
    for s in range(a.num_states):
        bs = block[s]
        if s in a.finals:
            f.finals.add(bs)
        if bs in done:
            continue
        done.add(bs)
        for arc in a.arcs[s]:
            f.arcs[bs].append(Arc(arc.inp, arc.out, block[arc.dst]))
    return f


def project(r: Fst, side: Side) -> Fst:
    f = Fst()
    for _ in range(r.num_states):
        f.add_state()
    f.set_initial(r.initial)
    f.finals = set(r.finals)
    for s in range(r.num_states):
        for a in r.arcs[s]:
            sym = a.inp if side is Side.UPPER else a.out
            f.arcs[s].append(Arc(sym, sym, a.dst))
            if sym is not EPSILON:
                f.alphabet.add(sym)
    return _cleanup(f)


def _assert_automaton(a: Fst, what: str) -> None:
    for arcs in a.arcs:
        for arc in arcs:
            if arc.inp != arc.out:
                raise NotAutomaton(f"{what} has a relation arc {arc.inp!r}:{arc.out!r}")


def _complete_and_flip(dfa: Fst, alphabet: set[Symbol]) -> tuple[list[dict[Symbol, int]], set[int], int]:
    """Total transition table of the complement of a deterministic automaton."""
    sink = dfa.num_states
    table: list[dict[Symbol, int]] = []
    for s in range(dfa.num_states):
        row = {a.inp: a.dst for a in dfa.arcs[s]}
        table.append({sym: row.get(sym, sink) for sym in alphabet})
    table.append({sym: sink for sym in alphabet})
    flipped = {s for s in range(dfa.num_states + 1) if s not in dfa.finals}
    return table, flipped, dfa.num_states + 1


def difference(a: Fst, b: Fst) -> Fst:
    """Strings of automaton a that are not in automaton b."""
    _assert_automaton(a, "first operand")
    _assert_automaton(b, "second operand")
    alphabet = a.alphabet | b.alphabet
    det_b = determinize_pairs(b)
    table, b_finals, _ = _complete_and_flip(det_b, alphabet)
    f = Fst()
    start = (a.initial, det_b.initial)
    ids = {start: f.add_state()}
    f.set_initial(0)
    f.alphabet = set(alphabet)
    todo = deque([start])
    while todo:
        node = todo.popleft()
        sa, sb = node
        sid = ids[node]
        if sa in a.finals and sb in b_finals:
            f.finals.add(sid)
        for arc in a.arcs[sa]:
            nxt = (arc.dst, table[sb][arc.inp])
            if nxt not in ids:
                ids[nxt] = f.add_state()
                todo.append(nxt)
            f.arcs[sid].append(Arc(arc.inp, arc.out, ids[nxt]))
    return trim(f)


def intersect(a: Fst, b: Fst) -> Fst:
    """Strings accepted by both automata."""
    _assert_automaton(a, "first operand")
    _assert_automaton(b, "second operand")
    b_by_inp: list[dict[Symbol, list[int]]] = []
    for s in range(b.num_states):
        d: dict[Symbol, list[int]] = {}
        for arc in b.arcs[s]:
            d.setdefault(arc.inp, []).append(arc.dst)
        b_by_inp.append(d)
    f = Fst()
    start = (a.initial, b.initial)
    ids = {start: f.add_state()}
    f.set_initial(0)
    f.alphabet = a.alphabet | b.alphabet
    todo = deque([start])
    while todo:
        node = todo.popleft()
        sa, sb = node
        sid = ids[node]
        if sa in a.finals and sb in b.finals:
            f.finals.add(sid)
        for arc in a.arcs[sa]:
            for tb in b_by_inp[sb].get(arc.inp, ()):
                nxt = (arc.dst, tb)
                if nxt not in ids:
                    ids[nxt] = f.add_state()
                    todo.append(nxt)
                f.arcs[sid].append(Arc(arc.inp, arc.out, ids[nxt]))
    return trim(f)


FactorElement = Symbol | frozenset


def not_contains_factor(factor: Sequence[FactorElement], alphabet: Iterable[Symbol]) -> Fst:
    """Automaton of strings with no contiguous occurrence of the factor.

    Each factor position is a symbol or a set of symbols (a one-position
    symbol class); the factor occurs where every position matches.
    """
    sigma = {s for s in alphabet if s is not EPSILON}
    if not factor:
        raise LengthMismatch("factor must be nonempty")
    sets: list[frozenset] = []
    for el in factor:
        if isinstance(el, (set, frozenset)):
            sets.append(frozenset(el) & sigma)
        else:
            sets.append(frozenset([el]) & sigma)
    if any(not s for s in sets):
        return Fst.sigma_star(sigma)
    # NFA for sigma* factor sigma*, then complement of its determinization.
    nfa = Fst()
    states = [nfa.add_state() for _ in range(len(sets) + 1)]
    nfa.set_initial(states[0])
    nfa.add_final(states[-1])
    for sym in sigma:
        nfa.add_arc(states[0], sym, sym, states[0])
        nfa.add_arc(states[-1], sym, sym, states[-1])
    for i, allowed in enumerate(sets):
        for sym in allowed:
            nfa.add_arc(states[i], sym, sym, states[i + 1])
    dfa = determinize_pairs(nfa)
    # The subset machine is total (state 0 loops over sigma), so complementing
    # is just flipping finals.
    f = Fst()
    for _ in range(dfa.num_states):
        f.add_state()
    f.set_initial(dfa.initial)
    f.alphabet = set(sigma)
    f.finals = {s for s in range(dfa.num_states) if s not in dfa.finals}
    for s in range(dfa.num_states):
        f.arcs[s] = list(dfa.arcs[s])
    return trim(f)


def delete_marked(r: Fst, side: Side, marked: Iterable[Symbol]) -> Fst:
    """Replace marked symbols on one side by epsilon, leaving the other side."""
    marked_set = set(marked)
    for arcs in r.arcs:
        for a in arcs:
            for sym in (a.inp, a.out):
                if isinstance(sym, PairAtom) and (sym.upper in marked_set or sym.lower in marked_set):
                    raise MalformedAlphabet("marked symbol buried inside a pair atom")
    f = Fst()
    for _ in range(r.num_states):
        f.add_state()
    f.set_initial(r.initial)
    f.finals = set(r.finals)
    for s in range(r.num_states):
        for a in r.arcs[s]:
            inp, out = a.inp, a.out
            if side is Side.UPPER and inp in marked_set:
                inp = EPSILON
            if side is Side.LOWER and out in marked_set:
                out = EPSILON
            f.arcs[s].append(Arc(inp, out, a.dst))
            if inp is not EPSILON:
                f.alphabet.add(inp)
            if out is not EPSILON:
                f.alphabet.add(out)
    f.alphabet |= r.alphabet - marked_set
    return _cleanup(f)


def one_level(r: Fst) -> Fst:
    """Turn each arc x:y into the identity arc over the atom <x,y>."""
    for arcs in r.arcs:
        for a in arcs:
            if isinstance(a.inp, PairAtom) or isinstance(a.out, PairAtom):
                raise MalformedAlphabet("relation already contains pair atoms")
    f = Fst()
    for _ in range(r.num_states):
        f.add_state()
    f.set_initial(r.initial)
    f.finals = set(r.finals)
    for s in range(r.num_states):
        for a in r.arcs[s]:
            atom = PairAtom(a.inp, a.out)
            f.arcs[s].append(Arc(atom, atom, a.dst))
            f.alphabet.add(atom)
    return f


def two_level(a: Fst) -> Fst:
    """Inverse of one_level: atom <x,y> becomes the arc x:y."""
    f = Fst()
    for _ in range(a.num_states):
        f.add_state()
    f.set_initial(a.initial)
    f.finals = set(a.finals)
    for s in range(a.num_states):
        for arc in a.arcs[s]:
            if not isinstance(arc.inp, PairAtom) or arc.inp != arc.out:
                raise MalformedAlphabet(f"not a one-level arc: {arc.inp!r}:{arc.out!r}")
            atom = arc.inp
            f.arcs[s].append(Arc(atom.upper, atom.lower, arc.dst))
            if atom.upper is not EPSILON:
                f.alphabet.add(atom.upper)
            if atom.lower is not EPSILON:
                f.alphabet.add(atom.lower)
    return f


# -- execution ---------------------------------------------------------------


def is_input_deterministic(t: Fst) -> tuple[bool, int | None]:
    """Whether every state consumes input deterministically.

    A state is deterministic when no two arcs share an input symbol and an
    epsilon-input arc, if present, is its only arc.
    """
    for s in range(t.num_states):
        seen = set()
        has_eps = False
        for a in t.arcs[s]:
            if a.inp in seen:
                return False, s
            seen.add(a.inp)
            if a.inp is EPSILON:
                has_eps = True
        if has_eps and len(t.arcs[s]) > 1:
            return False, s
    return True, None


def _apply_deterministic(t: Fst, input_syms: Sequence[Symbol], stats: dict | None) -> list[Symbol]:
    table: list[dict[Symbol, Arc]] = [{a.inp: a for a in arcs} for arcs in t.arcs]
    s = t.initial
    out: list[Symbol] = []
    visited = 1
    i = 0
    n = len(input_syms)
    eps_run = 0
    while True:
        if i == n and s in t.finals:
            break
        row = table[s]
        arc = row.get(EPSILON)
        if arc is not None:
            eps_run += 1
            if eps_run > t.num_states:
                raise NoPath("epsilon cycle never reaches a final state")
        else:
            if i == n:
                raise NoPath(f"input exhausted in non-final state {s}")
            arc = row.get(input_syms[i])
            if arc is None:
                raise NoPath(f"no arc for {input_syms[i]!r} from state {s}")
            i += 1
            eps_run = 0
        if arc.out is not EPSILON:
            out.append(arc.out)
        s = arc.dst
        visited += 1
    if stats is not None:
        stats["visited"] = visited
        stats["deterministic"] = True
    return out


def _apply_search(t: Fst, input_syms: Sequence[Symbol], stats: dict | None) -> list[Symbol]:
    """Backward search for accepting outputs, kept per (state, position).

    At most two distinct output suffixes are retained per node, which is
    enough to decide between NoPath, a unique output and Ambiguous.
    """
    n = len(input_syms)
    nstates = t.num_states
    consuming: list[dict[Symbol, list[Arc]]] = []
    eps_arcs: list[list[Arc]] = []
    for arcs in t.arcs:
        d: dict[Symbol, list[Arc]] = {}
        e = []
        for a in arcs:
            if a.inp is EPSILON:
                e.append(a)
            else:
                d.setdefault(a.inp, []).append(a)
        consuming.append(d)
        eps_arcs.append(e)

    visited = 0
    suffixes: list[list[tuple]] = [[] for _ in range(nstates)]

    def add(bucket: list[tuple], item: tuple) -> bool:
        if len(bucket) >= 2 or item in bucket:
            return False
        bucket.append(item)
        return True

    for i in range(n, -1, -1):
        nxt = suffixes
        cur: list[list[tuple]] = [[] for _ in range(nstates)]
        for s in range(nstates):
            visited += 1
            if i == n and s in t.finals:
                add(cur[s], ())
            if i < n:
                for a in consuming[s].get(input_syms[i], ()):
                    for suf in nxt[a.dst]:
                        add(cur[s], suf if a.out is EPSILON else (a.out,) + suf)
        # epsilon-input arcs stay at the same position: fixpoint
        changed = True
        while changed:
            changed = False
            for s in range(nstates):
                for a in eps_arcs[s]:
                    for suf in cur[a.dst]:
                        if add(cur[s], suf if a.out is EPSILON else (a.out,) + suf):
                            changed = True
        suffixes = cur
    if stats is not None:
        stats["visited"] = visited
        stats["deterministic"] = False
    results = suffixes[t.initial]
    if not results:
        raise NoPath("input not in the upper language")
    if len(results) > 1:
        raise Ambiguous(f"two accepting outputs: {results[0]!r} vs {results[1]!r}")
    return list(results[0])


def apply(t: Fst, input_syms: Sequence[Symbol], stats: dict | None = None) -> list[Symbol]:
    """Output sequence of the unique accepting path whose upper side is the input.

    Uses a no-backtracking walk when the machine is input-deterministic and
    a systematic search otherwise. Raises NoPath when the input is not in
    the upper language and Ambiguous when the relation is not functional on
    this input.
    """
    det, _ = is_input_deterministic(t)
    if det:
        return _apply_deterministic(t, input_syms, stats)
    return _apply_search(t, input_syms, stats)
