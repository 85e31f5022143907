"""Multi-agent code review engine with a QA-gated conversation pipeline."""

__version__ = "0.1.0"

from .core import (
    DEFAULT_TASKS,
    ReviewReport,
    ReviewRequest,
    SourceFile,
    TaskKind,
    Verdict,
    validate_request,
)

__all__ = [
    "DEFAULT_TASKS",
    "ReviewReport",
    "ReviewRequest",
    "SourceFile",
    "TaskKind",
    "Verdict",
    "validate_request",
    "__version__",
]
