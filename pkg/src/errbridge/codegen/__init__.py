"""C++ header and registry generation for validated modules."""

from __future__ import annotations

from .generate import Artifact, generate_artifacts, manifest_lines
from .module_header import emit_module_header, registry_filename
from .options import GenOptions
from .support_header import emit_support_header

__all__ = [
    "GenOptions",
    "Artifact",
    "generate_artifacts",
    "manifest_lines",
    "emit_support_header",
    "emit_module_header",
    "registry_filename",
]
