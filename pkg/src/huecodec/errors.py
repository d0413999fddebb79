"""Exception types shared across the package."""


class HueCodecError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(HueCodecError):
    """A file or stream does not conform to its declared format."""


class TruncatedDataError(FormatError):
    """A stream ended before the declared amount of data was read."""


class UnsupportedFeatureError(FormatError):
    """The input uses a format feature this package deliberately rejects."""


class ParameterError(HueCodecError, ValueError):
    """An argument is out of range, inconsistent, or otherwise invalid."""


class DecodeError(HueCodecError):
    """A codestream cannot be decoded.

    ``byte_offset`` locates the failure inside the payload when known.
    """

    def __init__(self, message, byte_offset=None):
        if byte_offset is not None:
            message = f"{message} (byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset
