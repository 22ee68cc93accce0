"""
Exception hierarchy for DG Labeler.

Every error carries a machine-readable category and the process exit code
the command line reports for it.
"""


class LabelerError(Exception):
    """Base class for all labeler errors"""
    category = "error"
    exit_code = 1

    def to_record(self):
        return {"error": self.category, "message": str(self)}


# ==================== USAGE (exit 2) ====================

class UsageError(LabelerError):
    category = "usage"
    exit_code = 2


class UnknownClassError(UsageError, ValueError):
    pass


class SpecValidationError(UsageError, ValueError):
    pass


# ==================== INPUT FORMAT (exit 3) ====================

class InputFormatError(LabelerError):
    category = "input-format"
    exit_code = 3


class MalformedCountsError(InputFormatError, ValueError):
    pass


class ParseError(InputFormatError, ValueError):
    """A text line that does not follow the expected layout"""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class SchemaError(InputFormatError, ValueError):
    pass


class InconsistentDimensionsError(InputFormatError, ValueError):
    pass


class FileFormatError(InputFormatError, ValueError):
    pass


# ==================== INVARIANT VIOLATIONS (exit 4) ====================

class InvariantViolation(LabelerError):
    category = "invariant-violation"
    exit_code = 4


class ShapeMismatchError(InvariantViolation, ValueError):
    pass


class EmptyRoiError(InvariantViolation, ValueError):
    pass


class UndefinedGeometryError(InvariantViolation, ValueError):
    pass


class InvalidDistributionError(InvariantViolation, ValueError):
    pass


class NonFiniteError(InvariantViolation, ValueError):
    pass


class EmptyInputError(InvariantViolation, ValueError):
    pass


class InconsistentEmbeddingError(InvariantViolation, ValueError):
    pass


class FrameRangeMismatchError(InvariantViolation, ValueError):
    pass


class TemporalRangeError(InvariantViolation, ValueError):
    pass


class OverlapViolationError(InvariantViolation, ValueError):
    """Two masks of one frame claim the same pixel"""

    def __init__(self, frame, first_id, second_id, source=""):
        where = f" in {source}" if source else ""
        super().__init__(
            f"masks of ids {first_id} and {second_id} overlap at frame {frame}{where}"
        )
        self.frame = frame
        self.ids = (first_id, second_id)


class ValueRangeError(InvariantViolation, ValueError):
    pass
