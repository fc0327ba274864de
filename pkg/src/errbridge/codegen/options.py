"""Options controlling header generation."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["GenOptions"]


@dataclass(frozen=True, slots=True)
class GenOptions:
    """Knobs for the emitted artifacts.

    namespace: C++ namespace for the module header; the module's own
    name when None.
    support_header_name: filename of the shared support header, as
    written both on disk and in #include lines.
    macro_prefix: prefix of the return-thunk macros (PREFIX_RETURN_THUNK
    and PREFIX_RETURN_VOID_THUNK).
    emit_line_comments: when False, standalone comment lines are
    stripped from the emitted headers (the banner stays).
    """

    namespace: str | None = None
    support_header_name: str = "errbridge_support.h"
    macro_prefix: str = "EB"
    emit_line_comments: bool = True
