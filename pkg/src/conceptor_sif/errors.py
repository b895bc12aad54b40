class ConceptorSifError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(ConceptorSifError, ValueError):
    pass


class EmptyDataError(ConceptorSifError, ValueError):
    pass


class NumericalError(ConceptorSifError, ArithmeticError):
    pass


class ParameterError(ConceptorSifError, ValueError):
    pass


class IngestionError(ConceptorSifError, ValueError):
    pass


class ParseError(ConceptorSifError, ValueError):
    """A malformed input line.  ``lineno`` is 1-based."""

    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}: "
        elif where:
            where += " "
        super().__init__(f"{where}{message}")


class UndefinedCorrelationError(ConceptorSifError, ValueError):
    pass
