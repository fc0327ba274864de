"""errbridge: bridge a throwing interface language to dual-mode C++.

The pieces, in data-flow order:

  idl            source text -> validated module -> canonical bytes
  runtime        loads module bytes, dispatches calls, boxes thrown
                 errors behind refcounted opaque handles
  expected_model executable contract of the generated value-or-error
                 containers
  codegen        emits the C++ support header, per-module bridging
                 header, and module registry
  cli            check / gen / run / test commands
"""

from __future__ import annotations

__version__ = "0.1.0"
