"""Shared builders for small reference algebras used across the test modules."""

import random
from fractions import Fraction

from loopalg import LieAlgebra, PuiseuxScalar


def so3():
    # [X0,X1]=X2, [X1,X2]=X0, [X2,X0]=X1
    return LieAlgebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}})


def so21():
    # one sign flipped relative to so3
    return LieAlgebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: 1}})


def e2():
    # rotation acting on two commuting translations, Killing rank 1 negative
    return LieAlgebra(3, {(0, 1): {2: 1}, (0, 2): {1: -1}}, names=["L", "A1", "A2"])


def e11():
    # boost variant: Killing rank 1 positive
    return LieAlgebra(3, {(0, 1): {2: 1}, (0, 2): {1: 1}})


def heisenberg():
    return LieAlgebra(3, {(0, 1): {2: 1}})


def abelian3():
    return LieAlgebra(3, {})


def solvable_other():
    # [X0,X1]=X1 plus a central X2: derived dim 1 but Killing nonzero
    return LieAlgebra(3, {(0, 1): {1: 1}})


CLASSIFIED = {
    "so3": so3,
    "so21": so21,
    "e2": e2,
    "e11": e11,
    "heisenberg": heisenberg,
    "abelian3": abelian3,
    "other": solvable_other,
}


def random_invertible(rng: random.Random, n: int):
    """Random invertible rational n x n matrix with small entries."""
    from loopalg.linalg import invert_matrix

    while True:
        t = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        if invert_matrix(t) is not None:
            return t


def eps_monomial(c, q):
    return PuiseuxScalar.monomial(c, q)
