"""Exceptions shared across modules."""


class BudgetExceeded(Exception):
    """An exhaustive enumeration hit its work budget; no partial result is returned."""


class NotIdempotent(Exception):
    """The given morphism is not idempotent."""


class NotCauchyComplete(Exception):
    """An operation requiring split idempotents met one that does not split."""

    def __init__(self, witness: str) -> None:
        super().__init__(f"idempotent {witness!r} does not split")
        self.witness = witness


class TooManyObjects(Exception):
    """Subset enumeration refused: the object count exceeds the hard guard."""
