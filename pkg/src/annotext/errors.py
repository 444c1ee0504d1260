"""Exception types raised across the annotation engine."""


class AnnotextError(Exception):
    """Base class for all errors raised by this package."""


class OversizeInput(AnnotextError):
    def __init__(self, size, limit):
        super().__init__(f"input is {size} bytes, limit is {limit}")
        self.size = size
        self.limit = limit


class MissingFile(AnnotextError):
    pass


class FormatError(AnnotextError):
    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.line = line


class InvariantViolation(FormatError):
    pass


class UnknownLanguage(AnnotextError):
    pass


class UnknownTopic(AnnotextError):
    pass


class EmptyCorpus(AnnotextError):
    def __init__(self, language):
        super().__init__(f"no training text for language {language!r}")
        self.language = language


class EmptyText(AnnotextError):
    pass


class NoProfiles(AnnotextError):
    pass


class DegenerateData(AnnotextError):
    """Training data contains a single label."""


class NoCandidates(AnnotextError):
    pass


class AlignmentError(AnnotextError):
    def __init__(self, spans):
        shown = ", ".join(str(s) for s in spans[:10])
        more = f" (+{len(spans) - 10} more)" if len(spans) > 10 else ""
        super().__init__(f"misaligned spans: {shown}{more}")
        self.spans = spans
