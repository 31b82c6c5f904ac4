"""Exception hierarchy shared by every probmine module."""


class ProbmineError(Exception):
    pass


class FormulaSyntaxError(ProbmineError):
    def __init__(self, position, expected, text=""):
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        self.text = text
        shown = ", ".join(self.expected) or "end of input"
        super().__init__(f"syntax error at position {position}: expected {shown}")


class UnknownSort(ProbmineError):
    pass


class UnboundVariable(ProbmineError):
    pass


class TypeMismatch(ProbmineError):
    def __init__(self, expected, found, location=""):
        self.expected = expected
        self.found = found
        self.location = location
        where = f" at {location}" if location else ""
        super().__init__(f"type mismatch{where}: expected {expected}, found {found}")


class ArityError(ProbmineError):
    pass


class UnsupportedNode(ProbmineError):
    pass


class SampleVarMissing(ProbmineError):
    pass


class ShapeOther(ProbmineError):
    pass


class SideConditionUnmet(ProbmineError):
    def __init__(self, which, detail=""):
        self.which = which
        msg = f"side condition unmet: {which}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class RuleMismatch(ProbmineError):
    pass


class NotPure(ProbmineError):
    pass


class BadAlphaShape(ProbmineError):
    pass


class FormulaClassViolation(ProbmineError):
    pass


class DomainExceeded(ProbmineError):
    pass


class NotAnAlgebra(ProbmineError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"not an algebra: {witness}")


class NotAdditive(ProbmineError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"content not additive: {witness}")


class BadRational(ProbmineError):
    pass


class UnsupportedQuantifierType(ProbmineError):
    pass


class BoundsExceeded(ProbmineError):
    pass


class UnsupportedType(ProbmineError):
    pass


class HorizonExceeded(ProbmineError):
    pass


class NoOrderAtType(ProbmineError):
    pass
