import traceback
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import structlog


@dataclass
class ErrorContext:
    component: str
    operation: str
    input_data: Optional[Dict[str, Any]] = None
    stack_trace: str = ""


@dataclass
class TrackedError:
    error_type: str
    error_message: str
    context: ErrorContext


@dataclass
class ErrorTracker:
    """Collects failures of a run so they can be logged and reported together."""

    errors: List[TrackedError] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.logger = structlog.get_logger(__name__)

    def track_error(self, error: BaseException, context: ErrorContext) -> TrackedError:
        """Track an error with full context."""
        if not context.stack_trace:
            context.stack_trace = "".join(
                traceback.format_exception(type(error), error, error.__traceback__)
            )
        tracked = TrackedError(type(error).__name__, str(error), context)
        self.errors.append(tracked)
        self.logger.error(
            "Error occurred",
            error_type=tracked.error_type,
            error_message=tracked.error_message,
            component=context.component,
            operation=context.operation,
        )
        return tracked

    def track_failure(self, message: str, context: ErrorContext) -> TrackedError:
        """Track a failed check that raised no exception."""
        tracked = TrackedError("CheckFailed", message, context)
        self.errors.append(tracked)
        self.logger.warning(
            "Check failed",
            message=message,
            component=context.component,
            operation=context.operation,
        )
        return tracked

    @property
    def has_errors(self) -> bool:
        return bool(self.errors)

    def summary(self) -> List[Dict[str, Any]]:
        return [
            {
                "error_type": e.error_type,
                "error_message": e.error_message,
                "component": e.context.component,
                "operation": e.context.operation,
                "input_data": e.context.input_data,
            }
            for e in self.errors
        ]

    def as_dicts(self) -> List[Dict[str, Any]]:
        return [asdict(e) for e in self.errors]
