"""Exception types shared across the package."""


class JglError(Exception):
    """Base class for all package errors."""


class RingError(JglError):
    """Unsupported ring, bad scalar, or a required inverse does not exist."""


class ShapeError(JglError):
    """Dimension or shape mismatch between operands."""


class MethodError(JglError):
    """A verification method is incompatible with the ring or the identity."""


class EnumerationBound(JglError):
    """An exhaustive enumeration would exceed the configured cap."""


class OutOfScopeError(JglError):
    """Requested construction is deliberately unsupported."""


class SchemaError(JglError):
    """Malformed serialized input; message carries the offending path."""
