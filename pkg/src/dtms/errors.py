"""Exception hierarchy shared by every module."""


class DTMSError(Exception):
    """Base class for all errors raised by this package."""


class NotInvertibleError(DTMSError, ZeroDivisionError):
    pass


class ParameterGenerationError(DTMSError):
    pass


class FixtureMissError(DTMSError, LookupError):
    def __init__(self, tag):
        super().__init__(f"hash fixture has no entry for call tag {tag!r}")
        self.tag = tag


class ShareError(DTMSError, ValueError):
    """Duplicate, zero or otherwise unusable member identities."""


class DealerError(DTMSError, ValueError):
    pass


class BoardInconsistencyError(DTMSError):
    """A recovered share does not match the public board."""


class UnknownMemberError(DTMSError, LookupError):
    def __init__(self, uid):
        super().__init__(f"uid {uid} is not on the board")
        self.uid = uid


class NonceReuseError(DTMSError):
    pass


class ProtocolError(DTMSError):
    """Participants disagree on session state (subset, challenge, ...)."""


class PartialRejected(DTMSError):
    """One or more partial signatures failed the combiner's congruence check."""

    def __init__(self, uids):
        self.uids = tuple(sorted(uids))
        names = ", ".join(str(u) for u in self.uids)
        super().__init__(f"partial signature rejected for uid {names}")


class FileFormatError(DTMSError, ValueError):
    pass


class ConfigError(DTMSError, ValueError):
    pass
