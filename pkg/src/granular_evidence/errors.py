"""Exception hierarchy.

Input and validation problems derive from :class:`GranularError` (a
``ValueError``); configured size limits derive from :class:`LimitExceeded`.
The CLI maps these families onto distinct exit codes.
"""


class GranularError(ValueError):
    """Invalid input or violated invariant."""


class InvalidFrame(GranularError):
    pass


class EmptyGranule(GranularError):
    pass


class UnknownElement(GranularError):
    pass


class NonPositiveMass(GranularError):
    pass


class MassNotOne(GranularError):
    pass


class InvalidMass(GranularError):
    """Mass text that is neither ``p/q`` nor a finite decimal."""


class FrameMismatch(GranularError):
    pass


class UnknownColumn(GranularError):
    pass


class InvalidRelation(GranularError):
    pass


class ConflictingRelation(GranularError):
    def __init__(self, offending):
        self.offending = tuple(offending)
        super().__init__(
            "relation is not conflict-free; offending rows: " + ", ".join(map(str, self.offending))
        )


class EmptyInput(GranularError):
    pass


class TotalConflict(ArithmeticError):
    """Conflict mass is 1, so the normalized combination does not exist.

    ``conflict`` and ``unnormalized`` carry the partial result; ``step`` is the
    index of the distribution whose incorporation drove the conflict to 1
    (``None`` for a binary combination).
    """

    def __init__(self, conflict, unnormalized=(), step=None):
        self.conflict = conflict
        self.unnormalized = tuple(unnormalized)
        self.step = step
        where = "" if step is None else f" at step {step}"
        super().__init__(f"total conflict{where}: K = {conflict}")


class LimitExceeded(RuntimeError):
    """A configured size cap (frame size, oracle focal count, witness rows) was hit."""


class TooLarge(LimitExceeded):
    pass


class WitnessTooLarge(LimitExceeded):
    pass
