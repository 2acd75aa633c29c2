import itertools
import math
import random

import pytest

from fstagger.errors import Unsupported
from fstagger.fst import apply, is_input_deterministic
from fstagger.hmm import make_params
from fstagger.inventory import Inventory
from fstagger.ntype import (
    best_pair_initial,
    best_pair_transition,
    build_n0,
    build_n1,
    build_ntype,
    raw_build,
)
from fstagger.symbols import ClassSym, TagSym
from fstagger.synth import desk_inventory, make_random_params, scaled_inventory


def greedy_chain(params, classes):
    """Iterated argmax oracle: initial rule for the first class, transition
    rule afterwards."""
    tags = []
    prev = None
    for c in classes:
        if prev is None:
            choice = best_pair_initial(params, c)
        else:
            choice = best_pair_transition(params, c, prev)
        tags.append(choice.tag)
        prev = choice.tag
    return tags


def n0_choice(params, c):
    members = sorted(params.inventory.class_members[c])
    return max(members, key=lambda t: (params.b[c, t], -t))


# -- best pair rules ------------------------------------------------------------


def test_best_pair_unambiguous_class(toy3_params):
    inv = toy3_params.inventory
    c = inv.class_id("[DET]")
    assert best_pair_initial(toy3_params, c).tag == inv.tag_id("DET")
    assert best_pair_transition(toy3_params, c, inv.tag_id("NOUN")).tag == inv.tag_id("DET")


def test_best_pair_initial_two_term_comparison(toy3_params):
    inv = toy3_params.inventory
    c = inv.class_id("[ADJ,NOUN]")
    scores = {
        t: float(toy3_params.pi[t]) + float(toy3_params.b[c, t])
        for t in inv.class_members[c]
    }
    assert best_pair_initial(toy3_params, c).tag == max(sorted(scores), key=lambda t: (scores[t], -t))
    assert best_pair_initial(toy3_params, c).tag == inv.tag_id("ADJ")


def test_best_pair_transition_two_term_comparison(toy3_params):
    inv = toy3_params.inventory
    c = inv.class_id("[ADJ,NOUN]")
    det = inv.tag_id("DET")
    scores = {t: float(toy3_params.a[det, t]) + float(toy3_params.b[c, t]) for t in inv.class_members[c]}
    assert best_pair_transition(toy3_params, c, det).tag == max(
        sorted(scores), key=lambda t: (scores[t], -t)
    )


# -- figure-style structural laws --------------------------------------------------


@pytest.fixture(scope="module")
def fig_params():
    # three classes: two tags, three tags, one tag; six distinct tags
    inv = Inventory.build(
        ["t11", "t12", "t21", "t22", "t23", "t31"],
        [
            ("[c1]", ["t11", "t12"]),
            ("[c2]", ["t21", "t22", "t23"]),
            ("[c3]", ["t31"]),
        ],
    )
    return make_params(
        inv,
        pi={"t11": 0.1, "t12": 0.3, "t21": 0.1, "t22": 0.1, "t23": 0.3, "t31": 0.1},
        a={
            (p, t): w
            for p in inv.tags
            for t, w in zip(inv.tags, [0.1, 0.3, 0.1, 0.1, 0.3, 0.1])
        },
        b={
            ("[c1]", "t11"): 1.0,
            ("[c1]", "t12"): 1.0,
            ("[c2]", "t21"): 1.0,
            ("[c2]", "t22"): 1.0,
            ("[c2]", "t23"): 1.0,
            ("[c3]", "t31"): 1.0,
        },
        sentence_end="[c3]",
    )


def test_raw_n1_has_one_state_per_pair_plus_initial(fig_params):
    raw = raw_build(fig_params, 1)
    assert raw.num_states == 7  # 6 pairs + initial
    assert raw.num_arcs == 21  # 3 classes out of every state
    assert len(raw.finals) == 7  # all states final


def test_minimized_n1_every_state_has_one_arc_per_class(fig_params):
    n1 = build_n1(fig_params)
    k = fig_params.inventory.num_classes
    for s in range(n1.num_states):
        assert len(n1.arcs[s]) == k
        assert len({a.inp for a in n1.arcs[s]}) == k
    ok, _ = is_input_deterministic(n1)
    assert ok


def test_n1_structure_law_desk_scale():
    inv = desk_inventory()
    params = make_random_params(inv, seed=7)
    n1 = build_n1(params)
    assert n1.num_states <= 1 + inv.num_tags
    assert n1.num_arcs == n1.num_states * inv.num_classes
    assert is_input_deterministic(n1)[0]


def test_n0_minimizes_to_single_state():
    inv = desk_inventory()
    params = make_random_params(inv, seed=3)
    n0 = build_n0(params)
    assert n0.num_states == 1
    assert n0.num_arcs == inv.num_classes


def test_n0_unambiguous_classes_map_to_their_tag(toy3_params):
    inv = toy3_params.inventory
    n0 = build_n0(toy3_params)
    out = apply(n0, [ClassSym(inv.class_id("[DET]"))])
    assert out == [TagSym(inv.tag_id("DET"))]


def test_n0_picks_class_probability_argmax(toy3_params):
    inv = toy3_params.inventory
    c = inv.class_id("[ADJ,NOUN]")
    out = apply(build_n0(toy3_params), [ClassSym(c)])
    assert out == [TagSym(n0_choice(toy3_params, c))]


def test_ntype_mode_flag_rejects_second_order(toy3_params):
    with pytest.raises(Unsupported):
        build_ntype(toy3_params, 2)
    with pytest.raises(Unsupported):
        raw_build(toy3_params, 2)


# -- behavior vs the greedy chain ---------------------------------------------------


def test_n1_toy3_greedy_path(toy3_params):
    inv = toy3_params.inventory
    n1 = build_n1(toy3_params)
    C = [inv.class_id("[DET]"), inv.class_id("[ADJ,NOUN]"), inv.class_id("[NOUN]")]
    got = apply(n1, [ClassSym(c) for c in C])
    assert [s.tag for s in got] == greedy_chain(toy3_params, C)


def test_n1_exhaustive_toy_sequences(toy3_params):
    inv = toy3_params.inventory
    n1 = build_n1(toy3_params)
    for n in range(1, 5):
        for C in itertools.product(range(inv.num_classes), repeat=n):
            got = apply(n1, [ClassSym(c) for c in C])
            assert [s.tag for s in got] == greedy_chain(toy3_params, list(C))


@pytest.mark.parametrize("seed", range(6))
def test_n_types_total_on_random_sequences(seed):
    inv = desk_inventory()
    params = make_random_params(inv, seed=seed)
    machines = [build_n0(params), build_n1(params)]
    rng = random.Random(seed)
    for _ in range(60):
        C = [rng.randrange(inv.num_classes) for _ in range(rng.randint(1, 12))]
        for m in machines:
            out = apply(m, [ClassSym(c) for c in C])
            assert len(out) == len(C)
            for c, sym in zip(C, out):
                assert sym.tag in inv.class_members[c]


@pytest.mark.parametrize("seed", range(6))
def test_n1_matches_greedy_chain_random_worlds(seed):
    inv = desk_inventory()
    params = make_random_params(inv, seed=seed + 50)
    n1 = build_n1(params)
    rng = random.Random(seed)
    for _ in range(40):
        C = [rng.randrange(inv.num_classes) for _ in range(rng.randint(1, 10))]
        got = apply(n1, [ClassSym(c) for c in C])
        assert [s.tag for s in got] == greedy_chain(params, C)


def test_n1_structure_at_bench_scale():
    inv = scaled_inventory(num_tags=20, num_classes=60, seed=1)
    params = make_random_params(inv, seed=11)
    n1 = build_n1(params)
    assert n1.num_states <= 1 + 20
    assert n1.num_arcs == n1.num_states * 60
