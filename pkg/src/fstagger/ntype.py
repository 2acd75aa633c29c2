"""Greedy per-step transducers built from the HMM matrices.

The order-1 build keeps one state per (class, tag) pair plus an initial
state; every state gets exactly one arc per class, pointing at the most
probable pair of that class given the current context. Decisions are
irreversible: once a tag is chosen it conditions the next step but is never
revised. The order-0 build scores pairs by class probability alone, which
minimizes to a single state.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NoFiniteScore, Unsupported
from .fst import Fst, determinize_pairs, minimize
from .hmm import NEG_INF, HmmParams
from .symbols import ClassSym, TagSym


@dataclass(frozen=True)
class PairChoice:
    cls: int
    tag: int
    score: float


def _argmax_pair(params: HmmParams, c: int, weight) -> PairChoice:
    best_t, best = -1, NEG_INF
    for t in sorted(params.inventory.class_members[c]):
        s = weight(t) + float(params.b[c, t])
        if s > best:
            best, best_t = s, t
    if best == NEG_INF:
        raise NoFiniteScore(f"no finite-probability tag for class {params.inventory.class_names[c]}")
    return PairChoice(c, best_t, best)


def best_pair_initial(params: HmmParams, c: int) -> PairChoice:
    """Most probable (class, tag) pair when coming from the initial state."""
    return _argmax_pair(params, c, lambda t: float(params.pi[t]))


def best_pair_transition(params: HmmParams, c: int, prev: int) -> PairChoice:
    """Most probable pair of class c after a decided tag prev."""
    return _argmax_pair(params, c, lambda t: float(params.a[prev, t]))


def _build(params: HmmParams, order: int) -> Fst:
    inv = params.inventory
    f = Fst()
    init = f.add_state()
    f.set_initial(init)
    f.add_final(init)
    pair_state = {}
    for c in range(inv.num_classes):
        for t in sorted(inv.class_members[c]):
            s = f.add_state()
            f.add_final(s)
            pair_state[(c, t)] = s
    for c in range(inv.num_classes):
        if order == 0:
            choice = _argmax_pair(params, c, lambda t: 0.0)
        else:
            choice = best_pair_initial(params, c)
        f.add_arc(init, ClassSym(c), TagSym(choice.tag), pair_state[(c, choice.tag)])
    for (pc, pt), src in pair_state.items():
        for c in range(inv.num_classes):
            if order == 0:
                choice = _argmax_pair(params, c, lambda t: 0.0)
            else:
                choice = best_pair_transition(params, c, pt)
            f.add_arc(src, ClassSym(c), TagSym(choice.tag), pair_state[(c, choice.tag)])
    return f


def build_n1(params: HmmParams) -> Fst:
    """Order-1 greedy transducer, determinized over pairs and minimized."""
    return minimize(determinize_pairs(_build(params, 1)))


def build_n0(params: HmmParams) -> Fst:
    """Order-0 (class probabilities only) transducer; minimizes to one state."""
    return minimize(determinize_pairs(_build(params, 0)))


def build_ntype(params: HmmParams, order: int) -> Fst:
    """Greedy transducer of the given order; only orders 0 and 1 exist."""
    if order == 0:
        return build_n0(params)
    if order == 1:
        return build_n1(params)
    raise Unsupported(f"order-{order} approximation is not implemented")


def raw_build(params: HmmParams, order: int) -> Fst:
    """The pre-minimization machine, exposed for structural inspection."""
    if order not in (0, 1):
        raise Unsupported(f"order-{order} approximation is not implemented")
    return _build(params, order)
