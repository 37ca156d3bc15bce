"""Exception hierarchy shared by all prover layers."""

from __future__ import annotations


class ProverError(Exception):
    """Base class for every error the prover reports to the user."""


# --- kernel ---------------------------------------------------------------

class KernelError(ProverError):
    pass


class UnboundVariable(KernelError):
    pass


class NotAFunction(KernelError):
    def __init__(self, term, typ):
        super().__init__(f"term is applied but has non-functional type: {typ}")
        self.term = term
        self.typ = typ


class TypeMismatch(KernelError):
    def __init__(self, expected, actual, where=""):
        msg = "type mismatch"
        if where:
            msg += f" at {where}"
        super().__init__(msg)
        self.expected = expected
        self.actual = actual
        self.where = where


class NotASort(KernelError):
    pass


class ArityMismatch(KernelError):
    pass


class UniverseOverflow(KernelError):
    pass


class NameClash(KernelError):
    pass


class NegativeOccurrence(KernelError):
    def __init__(self, constructor, position):
        super().__init__(f"non strictly positive occurrence in constructor {constructor} ({position})")
        self.constructor = constructor
        self.position = position


class BadConstructorConclusion(KernelError):
    pass


class NonStructuralRecursion(KernelError):
    pass


class KernelRejection(KernelError):
    pass


# --- surface --------------------------------------------------------------

class SurfaceError(ProverError):
    pass


class SyntaxError_(SurfaceError):
    def __init__(self, message, line=0, col=0):
        super().__init__(message)
        self.line = line
        self.col = col


class ElaborationError(SurfaceError):
    pass


class UnificationMismatch(ElaborationError):
    pass


class CannotInferBinder(ElaborationError):
    pass


class UnknownIdentifier(SurfaceError):
    pass


# --- proof engine ---------------------------------------------------------

class EngineError(ProverError):
    pass


class TacticFailure(EngineError):
    def __init__(self, tactic, reason):
        super().__init__(f"{tactic}: {reason}")
        self.tactic = tactic
        self.reason = reason


class NoSuchHypothesis(EngineError):
    pass


class UnificationFailure(EngineError):
    pass


class IllTypedStatement(EngineError):
    pass


class OpenGoalsRemain(EngineError):
    def __init__(self, count):
        super().__init__(f"cannot close proof: {count} open goal(s) remain")
        self.count = count


class NothingToUndo(EngineError):
    pass


class NoProofInProgress(EngineError):
    pass


class ProofInProgress(EngineError):
    pass


# --- decision procedures ---------------------------------------------------

class DecisionError(ProverError):
    pass


class NotAConstructorClash(DecisionError):
    pass


class NotSameConstructor(DecisionError):
    pass


class NotAnEquality(DecisionError):
    pass


class NotAnInductiveHypothesis(DecisionError):
    pass


class UnsupportedIndexShape(DecisionError):
    pass


class NotPropositional(DecisionError):
    pass


class SearchExhausted(DecisionError):
    pass


class NonLinearTerm(DecisionError):
    pass


class ContainsSubtraction(DecisionError):
    pass


class NotProvable(DecisionError):
    def __init__(self, message, model=None):
        super().__init__(message)
        self.model = model


class NormalFormsDiffer(DecisionError):
    pass


class UnsupportedOperator(DecisionError):
    pass


# --- stdlib / session -------------------------------------------------------

class UnknownPackage(ProverError):
    pass


class LoadCycle(ProverError):
    pass


class OutOfRange(ProverError):
    pass
