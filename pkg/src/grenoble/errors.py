"""Exception types shared by every module."""

from __future__ import annotations

from typing import Any


class InputError(ValueError):
    """A caller passed arguments that violate an operation's precondition."""


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration explored more states than its budget allows."""

    def __init__(self, what: str, budget: int):
        super().__init__(f"{what}: enumeration budget of {budget} steps exceeded")
        self.what = what
        self.budget = budget


class LemmaViolation(RuntimeError):
    """A structural fact that must hold for the graph class was found false.

    Either the input is outside the class (and slipped past the detectors) or
    there is a bug. ``details`` carries whatever the caller needs to reproduce
    the failure: vertex sets, paths, hyperprism dumps.
    """

    def __init__(self, lemma: str, message: str, **details: Any):
        super().__init__(f"[{lemma}] {message}")
        self.lemma = lemma
        self.details = details


class NotInClass(Exception):
    """The input graph is not a square-free Grenoble graph."""

    def __init__(self, witness):
        super().__init__(f"graph is not a square-free Grenoble graph ({witness.kind})")
        self.witness = witness
