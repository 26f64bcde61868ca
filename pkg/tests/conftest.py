"""Shared fixtures: the worked four-clause example used across the suite.

Variable ids: y1=1, y2=2, x3=3, x4=4.  The formula is
C1=(-3 4), C2=(1 3), C3=(1 -4), C4=(2 4); X={3,4}; the target is C1.
"""

import pytest

from pqeverify.formulas import CnfFormula, PqeProblem, Solution

EX1_CLAUSES = [(-3, 4), (1, 3), (1, -4), (2, 4)]


@pytest.fixture
def ex1() -> PqeProblem:
    return PqeProblem(CnfFormula(EX1_CLAUSES), x_vars={3, 4}, target_indices=[0])


@pytest.fixture
def ex1_h_y1(ex1) -> Solution:
    return Solution([(1,)], ex1)


@pytest.fixture
def ex1_h_true(ex1) -> Solution:
    return Solution([], ex1)
