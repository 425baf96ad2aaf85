"""Exception types shared across the package."""


class BasisNetError(Exception):
    """Base class for all errors raised by this package."""


class NetDefinitionError(BasisNetError, ValueError):
    """A net, marking, constraint, or plant is structurally invalid."""


class DimensionMismatch(NetDefinitionError):
    """A vector's length does not match the net it is used with."""


class FiringError(BasisNetError, ValueError):
    """A transition was fired at a marking where it is disabled."""


class PartitionError(BasisNetError, ValueError):
    """A transition partition is malformed or lacks a required flag."""


class CapExceeded(BasisNetError, RuntimeError):
    """An exploration exceeded its configured cap.

    ``kind`` names the capped quantity (e.g. ``"rg_states"``,
    ``"saturation"``); hitting a cap usually means the net is larger than
    expected or the implicit subnet is effectively unbounded.
    """

    def __init__(self, kind: str, cap: int, detail: str = ""):
        self.kind = kind
        self.cap = cap
        msg = f"{kind} cap of {cap} exceeded"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PnetSyntaxError(BasisNetError, ValueError):
    """A ``.pnet`` file failed to parse; carries the 1-based line number."""

    def __init__(self, line: int, msg: str):
        self.line = line
        super().__init__(f"line {line}: {msg}")
