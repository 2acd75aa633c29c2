"""Exception types shared across the toolkit."""


class FstaggerError(Exception):
    """Base class for every error raised by this package."""


class LengthMismatch(FstaggerError):
    """Two sequences that must be equally long are not."""


class NotAutomaton(FstaggerError):
    """A relation was passed where a language (input==output arcs) is required."""


class NotDeterministic(FstaggerError):
    """An operation requiring a pair-deterministic machine got a nondeterministic one."""


class MalformedAlphabet(FstaggerError):
    """A symbol violates the alphabet discipline of the requested operation."""


class NoPath(FstaggerError):
    """No accepting path exists for the given input."""


class Ambiguous(FstaggerError):
    """Two accepting paths produce different outputs; the machine is not functional."""


class EmptyCorpus(FstaggerError):
    """A corpus that must contain at least one token is empty."""


class TagNotInClass(FstaggerError):
    """A tag was used with a class that does not contain it."""


class NoTerminalBarrier(FstaggerError):
    """A class sequence does not end with an unambiguous class."""


class NoFiniteScore(FstaggerError):
    """Every candidate of an argmax has probability zero."""


class WrongKind(FstaggerError):
    """A subsequence of the wrong kind or marking state was passed."""


class EmptyUnion(FstaggerError):
    """A subsequence union that must be nonempty is empty."""


class Unsupported(FstaggerError):
    """A reserved mode (e.g. 2nd-order approximation) is not implemented."""


class AlignmentMismatch(FstaggerError):
    """Two corpora being compared do not share the same tokenization."""


class OutputMismatch(FstaggerError):
    """A tagger produced different outputs on repeated runs of the same input."""


class FormatError(FstaggerError):
    """A text file does not follow its declared format."""
