"""Exception types shared across the package."""


class DcsignError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedFormatError(DcsignError):
    """A JPEG stream uses a feature outside the baseline subset we handle.

    The message names the offending marker or parameter (e.g. "SOF2").
    """


class CorruptStreamError(DcsignError):
    """A JPEG stream is malformed or truncated.

    ``offset`` is the byte position at which the problem was detected.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class PnmError(DcsignError):
    """A PPM/PGM file is malformed or uses an unsupported variant."""


class CorruptRecordError(DcsignError):
    """A serialized feature record failed validation.

    ``reason`` is a short machine-checkable tag: "truncated", "bad-magic",
    "bad-version", "bad-flags", "length-mismatch", "reserved-code",
    "bad-padding", "bad-crc", "bad-geometry", "duplicate-id".
    """

    def __init__(self, message: str, reason: str):
        super().__init__(message)
        self.reason = reason


class IncompatibleStoreError(DcsignError):
    """A store file has the wrong magic or an unsupported version."""


class DuplicateImageIdError(DcsignError):
    """An image id is already enrolled in the store."""
