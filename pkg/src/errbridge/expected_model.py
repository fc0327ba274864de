"""Executable model of the generated Optional and Expected containers.

The C++ side stores a fallible call's result in one buffer: either the
returned value or the owned error, never both, beside a one-byte
discriminator. This model reproduces that contract in Python so its
behavior can be pinned by tests and compared against the runtime:

  * construction from an error ADOPTS the caller's one reference;
  * destroy() releases that reference (values release nothing);
  * queries are refcount-neutral, and error() only borrows;
  * reading the wrong side, or anything after destroy(), is a trap.

ExpectedModel works as a context manager so tests cannot forget the
release. OptionalModel is the value-only little sibling used for cast
results; it owns nothing.
"""

from __future__ import annotations

from typing import Any

from .runtime.abi import NULL_HANDLE, Runtime

__all__ = [
    "ModelTrap",
    "OptionalModel",
    "ExpectedModel",
    "STORAGE_SLOT_BYTES",
    "STORAGE_DISCRIMINANT_BYTES",
]

# The widest scalar payload and an error handle are both 8 bytes, so
# one 8-byte slot plus a discriminator byte holds either alternative.
STORAGE_SLOT_BYTES = 8
STORAGE_DISCRIMINANT_BYTES = 1


class ModelTrap(Exception):
    """Contract violation: the modeled program would abort here."""


class OptionalModel:
    """Value-or-nothing container. get() on none is a trap."""

    __slots__ = ("_slot", "_some")

    def __init__(self, slot: Any, some: bool) -> None:
        self._slot = slot
        self._some = some

    @classmethod
    def some(cls, value: Any) -> OptionalModel:
        return cls(value, True)

    @classmethod
    def none(cls) -> OptionalModel:
        return cls(None, False)

    def is_some(self) -> bool:
        return self._some

    def get(self) -> Any:
        if not self._some:
            raise ModelTrap("get() on an empty optional")
        return self._slot


class ExpectedModel:
    """Value-or-owned-error container with explicit destruction."""

    __slots__ = ("_slot", "_has_value", "_alive", "_runtime")

    def __init__(self, slot: Any, has_value: bool, runtime: Runtime | None) -> None:
        self._slot = slot
        self._has_value = has_value
        self._alive = True
        self._runtime = runtime

    @classmethod
    def from_value(cls, value: Any) -> ExpectedModel:
        """Hold a returned value. Owns no error reference."""
        return cls(value, True, None)

    @classmethod
    def from_error(cls, handle: int, runtime: Runtime) -> ExpectedModel:
        """Adopt ownership of one reference to a live error box.

        The caller's release obligation transfers here; destroy() is
        the release. Adopting the null handle is a trap.
        """
        if handle == NULL_HANDLE:
            raise ModelTrap("cannot hold the null error handle")
        return cls(handle, False, runtime)

    @property
    def alive(self) -> bool:
        return self._alive

    def _check_alive(self) -> None:
        if not self._alive:
            raise ModelTrap("use after destroy()")

    def has_value(self) -> bool:
        self._check_alive()
        return self._has_value

    def value(self) -> Any:
        self._check_alive()
        if not self._has_value:
            raise ModelTrap("value() read in the error state")
        return self._slot

    def error(self) -> int:
        """Borrow the held error handle; ownership stays here."""
        self._check_alive()
        if self._has_value:
            raise ModelTrap("error() read in the value state")
        return self._slot

    def destroy(self) -> None:
        """End the container's life, releasing an owned error."""
        self._check_alive()
        self._alive = False
        if not self._has_value:
            assert self._runtime is not None
            self._runtime.eb_error_release(self._slot)
        self._slot = None

    def __enter__(self) -> ExpectedModel:
        return self

    def __exit__(self, *exc_info: object) -> None:
        if self._alive:
            self.destroy()

    @staticmethod
    def storage_footprint() -> int:
        """Bytes the modeled container needs: one slot, one tag."""
        return STORAGE_SLOT_BYTES + STORAGE_DISCRIMINANT_BYTES

    def slot_contents(self) -> tuple[str, Any]:
        """Expose the single slot for structural assertions in tests."""
        self._check_alive()
        return ("value" if self._has_value else "error"), self._slot
