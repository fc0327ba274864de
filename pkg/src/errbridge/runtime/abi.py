"""Dispatch and error-handle surface of the simulated foreign runtime.

This is the boundary compiled consumers would link against, expressed
in Python. A Runtime owns loaded modules and a table of live error
boxes; handles are opaque integers into that table, with 0 reserved as
the null handle. The call surface mirrors the C symbol set one to one:

    eb_load_module   register a serialized module, get a module id
    eb_invoke        call a function, get a status + value or error
    eb_error_retain  add one reference to an error box
    eb_error_release drop one reference; the box dies at zero
    eb_error_dyncast case index if the box matches a target enum
    eb_error_message copy the error message into a caller buffer
    eb_live_errors   number of live boxes (the leak detector)

Ownership rule: eb_invoke returns a fresh box with one reference that
the caller owns; every retain must be paired with a release. Misusing
a dead or unknown handle is a trap (raised here as RuntimeTrap), never
a silent no-op, so lifetime bugs surface at the first bad call.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Sequence

from ..idl.serialize import SerializationError, deserialize_module
from ..idl.validate import ValidatedModule
from .boxes import ErrorBox, TypeId
from .interpreter import EvalTrap, Outcome, ThrownError, eval_function
from .values import Value

__all__ = [
    "STATUS_RETURNED",
    "STATUS_THREW",
    "STATUS_TRAP",
    "NULL_HANDLE",
    "RuntimeTrap",
    "ModuleLoadError",
    "InvokeResult",
    "Runtime",
    "default_runtime",
    "eb_load_module",
    "eb_invoke",
    "eb_error_retain",
    "eb_error_release",
    "eb_error_dyncast",
    "eb_error_message",
    "eb_live_errors",
]

STATUS_RETURNED = 0
STATUS_THREW = 1
STATUS_TRAP = 2

NULL_HANDLE = 0


class RuntimeTrap(Exception):
    """Misuse of the runtime surface: the simulated process aborts."""


class ModuleLoadError(Exception):
    """The registry bytes were rejected."""


@dataclass(frozen=True, slots=True)
class InvokeResult:
    """What a dispatched call produced.

    status 0: value holds the returned Value, error is null.
    status 1: error holds a fresh handle the caller must release.
    status 2: trap_message says what faulted; nothing is live.
    """

    status: int
    value: Value | None = None
    error: int = NULL_HANDLE
    trap_message: str | None = None


class Runtime:
    """One isolated runtime: loaded modules plus live error boxes."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._modules: dict[int, ValidatedModule] = {}
        self._module_bytes: dict[str, bytes] = {}
        self._module_ids: dict[str, int] = {}
        self._next_module_id = 1
        self._boxes: dict[int, ErrorBox] = {}
        self._next_handle = 1
        self._total_allocated = 0

    # -- modules ---------------------------------------------------------

    def eb_load_module(self, data: bytes) -> int:
        """Register a serialized module; returns its module id.

        Loading the same name with identical bytes is idempotent and
        returns the existing id. The same name with different content
        is rejected.
        """
        try:
            validated = deserialize_module(data)
        except SerializationError as exc:
            raise ModuleLoadError(str(exc)) from exc
        with self._lock:
            name = validated.name
            if name in self._module_ids:
                if self._module_bytes[name] == data:
                    return self._module_ids[name]
                raise ModuleLoadError(
                    f"module {name!r} is already loaded with different content"
                )
            module_id = self._next_module_id
            self._next_module_id += 1
            self._modules[module_id] = validated
            self._module_bytes[name] = bytes(data)
            self._module_ids[name] = module_id
            return module_id

    def module(self, module_id: int) -> ValidatedModule | None:
        with self._lock:
            return self._modules.get(module_id)

    # -- dispatch ----------------------------------------------------------

    def eb_invoke(self, module_id: int, fn_index: int, args: Sequence[Value]) -> InvokeResult:
        """Call function fn_index of a loaded module.

        On a throw the returned handle carries one reference owned by
        the caller. Traps are reported in the result, not raised: the
        real boundary has no exception channel.
        """
        module = self.module(module_id)
        if module is None:
            return InvokeResult(STATUS_TRAP, trap_message=f"unknown module id {module_id}")
        if not 0 <= fn_index < len(module.functions):
            return InvokeResult(
                STATUS_TRAP,
                trap_message=f"module {module.name!r} has no function index {fn_index}",
            )
        function = module.functions[fn_index]
        try:
            outcome = eval_function(module, function, args)
        except EvalTrap as exc:
            return InvokeResult(STATUS_TRAP, trap_message=str(exc))
        if outcome.returned:
            return InvokeResult(STATUS_RETURNED, value=outcome.value)
        thrown = outcome.error
        assert thrown is not None
        handle = self._allocate_box(
            TypeId(module.name, thrown.enum_name),
            thrown.case_index,
            thrown.case_name,
        )
        return InvokeResult(STATUS_THREW, error=handle)

    def resolve_outcome(self, result: InvokeResult) -> Outcome:
        """Project an InvokeResult back onto the evaluator's Outcome.

        Borrows the error handle; the caller still owns its release.
        Traps have no Outcome and are rejected.
        """
        if result.status == STATUS_RETURNED:
            assert result.value is not None
            return Outcome(value=result.value)
        if result.status == STATUS_THREW:
            box = self._live_box(result.error)
            return Outcome(
                error=ThrownError(box.type_id.enum_name, box.message, box.case_index)
            )
        raise ValueError(f"trap has no outcome: {result.trap_message}")

    # -- error boxes -------------------------------------------------------

    def _allocate_box(self, type_id: TypeId, case_index: int, message: str) -> int:
        with self._lock:
            handle = self._next_handle
            self._next_handle += 1
            self._boxes[handle] = ErrorBox(type_id, case_index, message)
            self._total_allocated += 1
            return handle

    def _live_box(self, handle: int) -> ErrorBox:
        box = self._boxes.get(handle)
        if box is None:
            raise RuntimeTrap(f"handle {handle} is not a live error box")
        return box

    def eb_error_retain(self, handle: int) -> int:
        """Add one reference. Null is a no-op; returns the handle."""
        if handle == NULL_HANDLE:
            return NULL_HANDLE
        with self._lock:
            self._live_box(handle).refcount += 1
            return handle

    def eb_error_release(self, handle: int) -> None:
        """Drop one reference, freeing the box at zero. Null is a no-op."""
        if handle == NULL_HANDLE:
            return
        with self._lock:
            box = self._live_box(handle)
            box.refcount -= 1
            if box.refcount == 0:
                del self._boxes[handle]

    def eb_error_dyncast(self, handle: int, type_hash: int, qualified_name: str) -> int:
        """Case index if the box's enum matches the target, else -1.

        A borrowing query: never changes the refcount. The null handle
        matches nothing. Both the hash and the qualified name must
        agree, so a hash collision cannot produce a false match.
        """
        if handle == NULL_HANDLE:
            return -1
        with self._lock:
            box = self._live_box(handle)
            if box.type_id.matches(type_hash, qualified_name):
                return box.case_index
            return -1

    def eb_error_message(self, handle: int, buffer: bytearray) -> int:
        """Copy the UTF-8 message into buffer, truncating to fit.

        Returns the full message length in bytes regardless of how much
        fit, so callers can size a second call.
        """
        with self._lock:
            message = self._live_box(handle).message.encode("utf-8")
        writable = min(len(message), len(buffer))
        buffer[:writable] = message[:writable]
        return len(message)

    def eb_live_errors(self) -> int:
        """Live box count; zero means no leaked references."""
        with self._lock:
            return len(self._boxes)

    # -- accounting (test and tooling introspection) ------------------------

    def refcount(self, handle: int) -> int:
        with self._lock:
            return self._live_box(handle).refcount

    def error_type(self, handle: int) -> TypeId:
        with self._lock:
            return self._live_box(handle).type_id

    def error_case_index(self, handle: int) -> int:
        with self._lock:
            return self._live_box(handle).case_index

    def error_message_text(self, handle: int) -> str:
        with self._lock:
            return self._live_box(handle).message

    @property
    def total_allocations(self) -> int:
        with self._lock:
            return self._total_allocated


_DEFAULT = Runtime()


def default_runtime() -> Runtime:
    """The process-wide runtime behind the module-level call surface."""
    return _DEFAULT


def eb_load_module(data: bytes) -> int:
    return _DEFAULT.eb_load_module(data)


def eb_invoke(module_id: int, fn_index: int, args: Sequence[Value]) -> InvokeResult:
    return _DEFAULT.eb_invoke(module_id, fn_index, args)


def eb_error_retain(handle: int) -> int:
    return _DEFAULT.eb_error_retain(handle)


def eb_error_release(handle: int) -> None:
    _DEFAULT.eb_error_release(handle)


def eb_error_dyncast(handle: int, type_hash: int, qualified_name: str) -> int:
    return _DEFAULT.eb_error_dyncast(handle, type_hash, qualified_name)


def eb_error_message(handle: int, buffer: bytearray) -> int:
    return _DEFAULT.eb_error_message(handle, buffer)


def eb_live_errors() -> int:
    return _DEFAULT.eb_live_errors()
