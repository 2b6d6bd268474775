"""Schur rings over small groups, difference sets and schurity checks."""

__version__ = "0.1.0"


class BudgetExceeded(RuntimeError):
    """A search ran past its node/element budget before finishing."""

    def __init__(self, what: str, budget: int):
        super().__init__(f"{what}: budget of {budget} exceeded")
        self.what = what
        self.budget = budget
