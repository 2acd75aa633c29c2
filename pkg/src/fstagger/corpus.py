"""Sentence-segmented corpus files.

One token per line, tab-separated columns, blank line between sentences
(optional on input). Column layouts:

    word                       plain text to be tagged
    word  tag                  tagged output
    word  class  tag           class-annotated gold corpus (training, eval)
    word  class                class-annotated, untagged
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError


@dataclass(frozen=True)
class Token:
    word: str
    cls: str | None = None
    tag: str | None = None


Sentence = list[Token]


def _parse_line(line: str, lineno: int) -> Token:
    parts = line.split("\t")
    if len(parts) == 1:
        return Token(parts[0])
    if len(parts) == 2:
        return Token(parts[0], tag=parts[1])
    if len(parts) == 3:
        return Token(parts[0], cls=parts[1], tag=parts[2])
    raise FormatError(f"line {lineno}: expected 1-3 tab-separated columns")


def read_corpus(path) -> list[Sentence]:
    """Read a corpus file; 2-column lines are word+tag, 3-column word+class+tag."""
    sentences: list[Sentence] = []
    current: Sentence = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                if current:
                    sentences.append(current)
                    current = []
                continue
            current.append(_parse_line(line, lineno))
    if current:
        sentences.append(current)
    return sentences


def read_annotated(path) -> list[Sentence]:
    """Read a corpus and require the class column on every token."""
    sentences = read_corpus(path)
    for sent in sentences:
        for tok in sent:
            if tok.cls is None:
                raise FormatError(f"token {tok.word!r} lacks a class column")
    return sentences


def write_corpus(sentences, path, show_classes: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, sent in enumerate(sentences):
            if i:
                fh.write("\n")
            for tok in sent:
                fields = [tok.word]
                if show_classes and tok.cls is not None:
                    fields.append(tok.cls)
                if tok.tag is not None:
                    fields.append(tok.tag)
                fh.write("\t".join(fields) + "\n")


def class_sequences(sentences, inventory) -> list[list[int]]:
    return [[inventory.class_id(tok.cls) for tok in sent] for sent in sentences]


def tag_sequences(sentences, inventory) -> list[list[int]]:
    return [[inventory.tag_id(tok.tag) for tok in sent] for sent in sentences]
