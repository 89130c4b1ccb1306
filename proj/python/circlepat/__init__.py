"""Circle patterns on closed surfaces."""

from ._core import (
    CirclepatError,
    Pattern,
    __version__,
    example,
    run_cli,
    solve,
    trace_pair_identity,
)

__all__ = [
    "CirclepatError",
    "Pattern",
    "__version__",
    "example",
    "run_cli",
    "solve",
    "trace_pair_identity",
]
