"""Synthetic worlds: random parameters, lexica and sampled corpora.

The shipped corpora of the original experiments are not available, so
evaluation runs on corpora sampled from a known model. Sampling follows the
tag chain itself: a sentence ends when the sentence-end tag is emitted
(forced at a length cap that is practically never hit).
"""
from __future__ import annotations

import random
from bisect import bisect_right
from itertools import accumulate

import numpy as np

from .corpus import Sentence, Token
from .errors import FormatError
from .hmm import HmmParams
from .inventory import Inventory, bracket_name


def make_random_params(
    inventory: Inventory,
    seed: int,
    sentence_end: str = "[END]",
    end_boost: float = 0.12,
) -> HmmParams:
    """Dirichlet-random parameters with a boosted transition into the
    sentence-end tag so sampled sentences stay short."""
    rng = np.random.default_rng(seed)
    T, C = inventory.num_tags, inventory.num_classes
    end_cls = inventory.class_id(sentence_end)
    end_tag = inventory.single_tag(end_cls)

    pi = rng.dirichlet(np.ones(T))
    pi[end_tag] = 0.002
    pi /= pi.sum()

    a = rng.dirichlet(np.ones(T), size=T)
    for t in range(T):
        rest = a[t].sum() - a[t, end_tag]
        a[t] *= (1.0 - end_boost) / rest
        a[t, end_tag] = end_boost

    b = np.zeros((C, T))
    for t in range(T):
        holders = [c for c in range(C) if t in inventory.class_members[c]]
        if not holders:
            raise FormatError(f"tag {inventory.tags[t]} is in no class")
        weights = rng.dirichlet(np.ones(len(holders)))
        for c, w in zip(holders, weights):
            b[c, t] = w

    with np.errstate(divide="ignore"):
        params = HmmParams(inventory, np.log(pi), np.log(a), np.log(b), end_cls)
    params.validate()
    return params


def desk_inventory() -> Inventory:
    """A small but structured inventory: one singleton class per tag plus a
    band of two- and three-way ambiguity classes."""
    tags = [
        "END", "ADJ", "ADV", "AUX", "CONJ", "DET", "NOUN",
        "NUM", "PART", "PREP", "PRON", "PROPN", "VERB",
    ]
    ambiguous = [
        ["ADJ", "NOUN"],
        ["NOUN", "VERB"],
        ["DET", "PRON"],
        ["AUX", "VERB"],
        ["ADV", "PART"],
        ["NOUN", "PROPN"],
        ["CONJ", "PREP"],
        ["NUM", "PRON"],
        ["ADJ", "ADV", "VERB"],
    ]
    classes = [(bracket_name([t]), [t]) for t in tags]
    classes += [(bracket_name(m), m) for m in ambiguous]
    return Inventory.build(tags, classes)


def scaled_inventory(num_tags: int, num_classes: int, seed: int = 0) -> Inventory:
    """Inventory with a singleton class per tag and random 2-4 tag classes
    filling up to num_classes."""
    if num_classes < num_tags:
        raise FormatError("need at least one singleton class per tag")
    rng = random.Random(seed)
    tags = [f"T{i:02d}" for i in range(num_tags)]
    tags[0] = "END"
    classes = [(bracket_name([t]), [t]) for t in tags]
    seen = {tuple([t]) for t in tags}
    while len(classes) < num_classes:
        k = rng.choice([2, 2, 3, 3, 4])
        members = tuple(sorted(rng.sample(tags[1:], k)))
        if members in seen:
            continue
        seen.add(members)
        classes.append((bracket_name(list(members)), list(members)))
    return Inventory.build(tags, classes)


def desk_lexicon(inventory: Inventory, words_per_class: int = 5) -> dict[str, str]:
    """Synthetic word -> class-name mapping with a few forms per class."""
    lex = {}
    for c in range(inventory.num_classes):
        for i in range(words_per_class):
            lex[f"w{c}q{i}"] = inventory.class_names[c]
    return lex


def gen_synthetic(
    params: HmmParams,
    lexicon: dict[str, str],
    sentences: int,
    seed: int,
    max_len: int = 1000,
) -> list[Sentence]:
    """Sample a class-annotated, gold-tagged corpus from the model.

    Tags follow pi and a until the sentence-end tag appears; each tag picks
    a word uniformly among lexicon entries whose class contains it, and the
    emitted class is the word's lexicon class. Reproducible per seed.
    """
    if sentences < 1:
        raise FormatError("need at least one sentence")
    inv = params.inventory
    end_tag = inv.single_tag(params.sentence_end_class)

    words_for_tag: list[list[str]] = [[] for _ in range(inv.num_tags)]
    for word in sorted(lexicon):
        cls = inv.class_id(lexicon[word])
        for t in inv.class_members[cls]:
            words_for_tag[t].append(word)
    for t, words in enumerate(words_for_tag):
        if not words:
            raise FormatError(f"lexicon has no word for tag {inv.tags[t]}")

    pi_cum = list(accumulate(np.exp(params.pi).tolist()))
    a_cum = [list(accumulate(row)) for row in np.exp(params.a).tolist()]

    rng = random.Random(seed)

    def draw(cum) -> int:
        return min(bisect_right(cum, rng.random() * cum[-1]), len(cum) - 1)

    out: list[Sentence] = []
    for _ in range(sentences):
        sent: Sentence = []
        t = draw(pi_cum)
        while True:
            if len(sent) >= max_len:
                t = end_tag
            word = words_for_tag[t][rng.randrange(len(words_for_tag[t]))]
            sent.append(Token(word, lexicon[word], inv.tags[t]))
            if t == end_tag:
                break
            t = draw(a_cum[t])
        out.append(sent)
    return out


def stationary_token_distribution(params: HmmParams) -> np.ndarray:
    """Stationary tag distribution of the token chain (restart at pi after
    the sentence-end tag)."""
    T = params.inventory.num_tags
    end_tag = params.inventory.single_tag(params.sentence_end_class)
    M = np.exp(params.a).copy()
    M[end_tag, :] = np.exp(params.pi)
    dist = np.full(T, 1.0 / T)
    for _ in range(2000):
        dist = dist @ M
        dist /= dist.sum()
    return dist
