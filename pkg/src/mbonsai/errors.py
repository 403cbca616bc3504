"""Exception types shared by the package."""


class CapacityError(Exception):
    """A table is full, or a requested size does not fit the arithmetic."""


class NotFoundError(KeyError):
    """The key or child asked for is not stored."""


class InvalidNodeError(ValueError):
    """A node id does not name a live node (checked in debug mode)."""


class FormatError(ValueError):
    """Malformed encoded data or input file."""

    def __init__(self, message, *, line=None, record=None):
        where = [f"line {line}"] if line is not None else []
        if record is not None:
            where.append(f"record {record}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.record = record
