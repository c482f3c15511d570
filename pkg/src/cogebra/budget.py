"""Enumeration budget handling.

All brute-force enumerations check their workload against a budget before
running.  The default can be overridden per call or via the COGEBRA_BUDGET
environment variable; exceeding it is a hard error, never silent truncation.
"""

import os

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    def __init__(self, required, budget, what="enumeration"):
        super().__init__(
            f"{what} requires about {required} steps, over the budget of {budget}"
        )
        self.required = required
        self.budget = budget


def resolve(budget=None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("COGEBRA_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


def check(required, budget=None, what="enumeration") -> int:
    limit = resolve(budget)
    if required > limit:
        raise BudgetExceeded(required, limit, what)
    return limit
