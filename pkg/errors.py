"""Exception hierarchy. The CLI maps the two branches to exit codes 3 and 1."""


class ThickLinksError(Exception):
    exit_code = 1


class InputError(ThickLinksError):
    exit_code = 3


class DegenerateInputError(InputError):
    pass


class CurveFormatError(InputError):
    def __init__(self, message, line=None, field=None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        if location:
            message = f"{', '.join(location)}: {message}"
        super().__init__(message)
        self.line = line
        self.field = field


class ConfigurationError(InputError):
    pass


class NumericalError(ThickLinksError):
    exit_code = 1


class OverlapError(NumericalError):
    pass


class InconsistencyError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, message, best_bound=None):
        if best_bound is not None:
            message = f"{message} (best bound {best_bound:.12g})"
        super().__init__(message)
        self.best_bound = best_bound


class UncertifiedPackingError(NumericalError):
    def __init__(self, message="packing is not certified; run verify_nonoverlap first"):
        super().__init__(message)
