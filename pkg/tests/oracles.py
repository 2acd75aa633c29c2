"""Independent brute-force oracles the implementation is checked against.

Everything here works by explicit path or string enumeration and never
calls back into the operations under test.
"""
from __future__ import annotations

import itertools
from collections import deque

from fstagger.fst import Fst
from fstagger.symbols import EPSILON


class OracleBudget(Exception):
    """Enumeration would visit too many nodes to be a useful oracle."""


def enum_pairs(f: Fst, max_len: int, budget: int = 60_000) -> set[tuple[tuple, tuple]]:
    """All accepting (upper, lower) label pairs with both sides <= max_len."""
    pairs = set()
    start = (f.initial, (), ())
    seen = {start}
    todo = deque([start])
    while todo:
        if len(seen) > budget:
            raise OracleBudget
        s, u, v = todo.popleft()
        if s in f.finals:
            pairs.add((u, v))
        for a in f.arcs[s]:
            nu = u if a.inp is EPSILON else u + (a.inp,)
            nv = v if a.out is EPSILON else v + (a.out,)
            if len(nu) > max_len or len(nv) > max_len:
                continue
            node = (a.dst, nu, nv)
            if node not in seen:
                seen.add(node)
                todo.append(node)
    return pairs


def enum_side(f: Fst, side: str, max_len: int, budget: int = 60_000) -> set[tuple]:
    """All strings of one side (projected language) up to max_len."""
    out = set()
    start = (f.initial, ())
    seen = {start}
    todo = deque([start])
    while todo:
        if len(seen) > budget:
            raise OracleBudget
        s, u = todo.popleft()
        if s in f.finals:
            out.add(u)
        for a in f.arcs[s]:
            sym = a.inp if side == "upper" else a.out
            nu = u if sym is EPSILON else u + (sym,)
            if len(nu) > max_len:
                continue
            node = (a.dst, nu)
            if node not in seen:
                seen.add(node)
                todo.append(node)
    return out


def naive_compose_pairs(r: Fst, q: Fst, max_len: int, budget: int = 60_000) -> set[tuple[tuple, tuple]]:
    """Pairs of the composed relation by direct product search (no filter)."""
    pairs = set()
    start = (r.initial, q.initial, (), ())
    seen = {start}
    todo = deque([start])
    while todo:
        if len(seen) > budget:
            raise OracleBudget
        sr, sq, u, w = todo.popleft()
        if sr in r.finals and sq in q.finals:
            pairs.add((u, w))
        moves = []
        for a in r.arcs[sr]:
            if a.out is EPSILON:
                moves.append((a.inp, EPSILON, a.dst, sq))
            else:
                for b in q.arcs[sq]:
                    if b.inp == a.out:
                        moves.append((a.inp, b.out, a.dst, b.dst))
        for b in q.arcs[sq]:
            if b.inp is EPSILON:
                moves.append((EPSILON, b.out, sr, b.dst))
        for inp, out, nr, nq in moves:
            nu = u if inp is EPSILON else u + (inp,)
            nw = w if out is EPSILON else w + (out,)
            if len(nu) > max_len or len(nw) > max_len:
                continue
            node = (nr, nq, nu, nw)
            if node not in seen:
                seen.add(node)
                todo.append(node)
    return pairs


def strings_over(alphabet, max_len: int):
    syms = sorted(alphabet, key=repr)
    for n in range(max_len + 1):
        yield from itertools.product(syms, repeat=n)


def accepts(automaton: Fst, string: tuple) -> bool:
    """Membership in an epsilon-free automaton by subset simulation."""
    frontier = {automaton.initial}
    for sym in string:
        frontier = {a.dst for s in frontier for a in automaton.arcs[s] if a.inp == sym}
        if not frontier:
            return False
    return any(s in automaton.finals for s in frontier)


def contains_factor(string: tuple, factor_sets: list[frozenset]) -> bool:
    m = len(factor_sets)
    for i in range(len(string) - m + 1):
        if all(string[i + j] in factor_sets[j] for j in range(m)):
            return True
    return False


def star_closure(pairs: set, max_len: int, budget: int = 60_000) -> set:
    """Bounded Kleene closure of a set of label pairs."""
    result = {((), ())}
    frontier = {((), ())}
    work = 0
    while frontier:
        work += len(frontier) * max(len(pairs), 1)
        if len(result) > budget or work > 40 * budget:
            raise OracleBudget
        new = set()
        for u, v in frontier:
            for pu, pv in pairs:
                cu, cv = u + pu, v + pv
                if len(cu) <= max_len and len(cv) <= max_len and (cu, cv) not in result:
                    new.add((cu, cv))
        result |= new
        frontier = new
    return result


def concat_pairs(pa: set, pb: set, max_len: int, budget: int = 60_000) -> set:
    if len(pa) * len(pb) > 40 * budget:
        raise OracleBudget
    out = set()
    for u1, v1 in pa:
        for u2, v2 in pb:
            u, v = u1 + u2, v1 + v2
            if len(u) <= max_len and len(v) <= max_len:
                out.add((u, v))
    return out


# -- HMM oracles ---------------------------------------------------------------


def score_tags(params, classes, tags, middle: bool) -> float:
    """Log joint probability computed straight off the matrices."""
    b = params.b
    total = float(b[classes[0], tags[0]])
    if not middle:
        total += float(params.pi[tags[0]])
    for j in range(1, len(classes)):
        total += float(params.a[tags[j - 1], tags[j]]) + float(b[classes[j], tags[j]])
    return total


def all_tag_sequences(params, classes):
    import itertools

    members = [sorted(params.inventory.class_members[c]) for c in classes]
    return itertools.product(*members)


def best_score(params, classes, middle: bool) -> float:
    return max(score_tags(params, classes, tags, middle) for tags in all_tag_sequences(params, classes))


def replica_viterbi(params, classes, middle: bool) -> list[int]:
    """Forward DP over dictionaries with the documented tie rule (lowest tag
    id at each decision), structured independently of the implementation."""
    inv = params.inventory
    cands = sorted(inv.class_members[classes[0]])
    if middle:
        col = {t: (float(params.b[classes[0], t]), (t,)) for t in cands}
    else:
        col = {t: (float(params.pi[t]) + float(params.b[classes[0], t]), (t,)) for t in cands}
    for c in classes[1:]:
        nxt = {}
        for t in sorted(inv.class_members[c]):
            best = None
            for p in sorted(col):
                s = col[p][0] + float(params.a[p, t])
                if best is None or s > best[0]:
                    best = (s, col[p][1] + (t,))
            nxt[t] = (best[0] + float(params.b[c, t]), best[1])
        col = nxt
    winner = None
    for t in sorted(col):
        if winner is None or col[t][0] > winner[0]:
            winner = col[t]
    return list(winner[1])
