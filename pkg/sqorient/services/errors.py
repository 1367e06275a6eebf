from __future__ import annotations


class InvalidInput(ValueError):
    """
    Malformed or inconsistent input. The CLI exits with status 2.
    """


class ComputationLimit(RuntimeError):
    """
    Well-formed input the engine refuses to finish (missing table entries,
    degenerate duality, torsion). The CLI exits with status 3.
    """


# ---------- invalid input ----------

class ExpressionSyntaxError(InvalidInput):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class UnknownIdentifier(ExpressionSyntaxError):
    def __init__(self, name: str, position: int, text: str = ""):
        super().__init__(f"unknown identifier {name!r}", position, text)
        self.name = name


class NegativeExponent(ExpressionSyntaxError):
    def __init__(self, position: int, text: str = ""):
        super().__init__("negative exponent", position, text)


class DomainMismatch(InvalidInput):
    pass


class InhomogeneousRelation(InvalidInput):
    pass


class InhomogeneousInput(InvalidInput):
    pass


class DimensionOverflow(InvalidInput):
    pass


class DegreeOverflow(InvalidInput):
    pass


class UnknownName(InvalidInput):
    pass


class InvalidAssignment(InvalidInput):
    pass


class ManifestError(InvalidInput):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line
        self.column = column


# ---------- computation limits ----------

class NotPoincare(ComputationLimit):
    pass


class DegeneratePairing(ComputationLimit):
    pass


class TableIncomplete(ComputationLimit):
    def __init__(self, entry: str):
        super().__init__(f"Steenrod table has no value for {entry}")
        self.entry = entry


class MissingEntry(TableIncomplete):
    pass


class UnderdeterminedEntry(ComputationLimit):
    pass


class TorsionPresent(ComputationLimit):
    pass


class OddMiddleTorsion(ComputationLimit):
    pass


class NotApplicable(ComputationLimit):
    pass
