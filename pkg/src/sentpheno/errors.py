"""Exception hierarchy shared across the toolkit.

DataError covers malformed or inconsistent inputs (CLI exit code 2),
NumericalError covers failures of the fitting machinery (exit code 3).
"""


class SentphenoError(Exception):
    pass


class DataError(SentphenoError):
    pass


class NumericalError(SentphenoError):
    pass


class EmptyCorpusError(DataError):
    """Corpus contains no sentences."""


class UnknownSentenceError(DataError):
    """Sentence id not present in the index."""


class PatientMismatchError(DataError):
    """Two matrices do not share the same patient ordering."""


class InvalidPValueError(DataError):
    """A p-value outside (0, 1] was passed to the FDR correction."""


class InvalidSyntheticSpecError(DataError):
    """Synthetic corpus specification is internally inconsistent."""


class FormatError(DataError):
    """An interchange file does not match its expected schema."""


class ConstantOutcomeError(NumericalError):
    """Outcome vector is constant; the logistic model is undefined."""


class SingularDesignError(NumericalError):
    """Design matrix is rank deficient (collinear or all-zero column)."""


class PipelineStageError(SentphenoError):
    """A pipeline stage failed; carries the stage name."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
