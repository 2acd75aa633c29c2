"""Tag and ambiguity-class inventories.

A TagId / ClassId is an index into the inventory, dense and stable in the
declared order. A class is an ordered set of distinct tags; a class with
exactly one tag is unambiguous. Different classes may share tags; textual
dumps identify a class by its (conventionally bracket-form) name.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import FormatError

_NAME_RE = re.compile(r"^[^\s|]+$")


def bracket_name(tag_names: list[str] | tuple[str, ...]) -> str:
    """Canonical class name listing its member tags: ``[DET,PRO]``."""
    return "[" + ",".join(tag_names) + "]"


@dataclass(frozen=True)
class Inventory:
    tags: tuple[str, ...]
    class_names: tuple[str, ...]
    class_members: tuple[tuple[int, ...], ...]
    # caches, filled in __post_init__
    _tag_ids: dict = field(default_factory=dict, repr=False, compare=False)
    _class_ids: dict = field(default_factory=dict, repr=False, compare=False)
    _member_ids: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.tags)) != len(self.tags):
            raise FormatError("duplicate tag names")
        if len(set(self.class_names)) != len(self.class_names):
            raise FormatError("duplicate class names")
        for name in self.tags + self.class_names:
            if not _NAME_RE.match(name):
                raise FormatError(f"bad name {name!r}: whitespace and '|' are reserved")
        if len(self.class_names) != len(self.class_members):
            raise FormatError("class names and member lists differ in length")
        for cid, members in enumerate(self.class_members):
            if not members:
                raise FormatError(f"class {self.class_names[cid]} has no tags")
            if len(set(members)) != len(members):
                raise FormatError(f"class {self.class_names[cid]} repeats a tag")
            for t in members:
                if not 0 <= t < len(self.tags):
                    raise FormatError(f"class {self.class_names[cid]} has bad tag id {t}")
        self._tag_ids.update({n: i for i, n in enumerate(self.tags)})
        self._class_ids.update({n: i for i, n in enumerate(self.class_names)})
        for i, m in enumerate(self.class_members):
            self._member_ids.setdefault(m, i)

    @classmethod
    def build(cls, tags: list[str], classes: list[tuple[str, list[str]]]) -> "Inventory":
        """Construct from tag names and (class name, member tag names) pairs."""
        tag_ids = {n: i for i, n in enumerate(tags)}
        names, members = [], []
        for cname, mtags in classes:
            names.append(cname)
            try:
                members.append(tuple(tag_ids[t] for t in mtags))
            except KeyError as e:
                raise FormatError(f"class {cname} uses unknown tag {e.args[0]!r}") from None
        return cls(tuple(tags), tuple(names), tuple(members))

    @property
    def num_tags(self) -> int:
        return len(self.tags)

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def tag_id(self, name: str) -> int:
        try:
            return self._tag_ids[name]
        except KeyError:
            raise FormatError(f"unknown tag {name!r}") from None

    def class_id(self, name: str) -> int:
        try:
            return self._class_ids[name]
        except KeyError:
            raise FormatError(f"unknown class {name!r}") from None

    def class_of_members(self, member_ids: tuple[int, ...]) -> int:
        try:
            return self._member_ids[member_ids]
        except KeyError:
            raise FormatError(f"no class with members {member_ids}") from None

    def is_ambiguous(self, cls: int) -> bool:
        return len(self.class_members[cls]) > 1

    def single_tag(self, cls: int) -> int:
        members = self.class_members[cls]
        if len(members) != 1:
            raise ValueError(f"class {self.class_names[cls]} is ambiguous")
        return members[0]

    def unambiguous_classes(self) -> list[int]:
        return [c for c in range(self.num_classes) if not self.is_ambiguous(c)]

    def ambiguous_classes(self) -> list[int]:
        return [c for c in range(self.num_classes) if self.is_ambiguous(c)]
