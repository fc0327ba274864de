"""Artifact assembly: everything `gen` writes, produced in memory.

A generation run yields exactly three artifacts per module:

  * the shared support header,
  * the module's bridging header (<ModuleName>.h),
  * the serialized module registry (<modulename>.ebm).

Artifacts are byte-deterministic: the same module and options always
produce the same bytes, so manifests can be compared across runs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from ..idl.serialize import serialize_module
from ..idl.validate import ValidatedModule
from .module_header import emit_module_header, registry_filename
from .options import GenOptions
from .support_header import emit_support_header

__all__ = ["Artifact", "generate_artifacts", "manifest_lines"]


@dataclass(frozen=True, slots=True)
class Artifact:
    """One output file: its name and exact bytes."""

    filename: str
    data: bytes

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.data).hexdigest()


def generate_artifacts(
    module: ValidatedModule,
    options: GenOptions | None = None,
) -> list[Artifact]:
    """Produce all artifacts for one module, in manifest order."""
    options = options or GenOptions()
    return [
        Artifact(
            options.support_header_name,
            emit_support_header(options).encode("utf-8"),
        ),
        Artifact(
            f"{module.name}.h",
            emit_module_header(module, options).encode("utf-8"),
        ),
        Artifact(registry_filename(module.name), serialize_module(module)),
    ]


def manifest_lines(artifacts: list[Artifact]) -> list[str]:
    """One 'sha256  filename' line per artifact, in artifact order."""
    return [f"{artifact.sha256}  {artifact.filename}" for artifact in artifacts]
