"""spininv: geometry of rotationally invariant two-spin states."""

__version__ = "0.1.0"
