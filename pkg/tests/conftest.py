import random

import pytest

from sforge import IdempotentFamily, MatrixAlgebra, Zmod


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def m2f2():
    return IdempotentFamily.matrix_units(MatrixAlgebra(Zmod(2), 2))


@pytest.fixture
def m3z4():
    return IdempotentFamily.matrix_units(MatrixAlgebra(Zmod(4), 3))


@pytest.fixture
def m4f2():
    return IdempotentFamily.matrix_units(MatrixAlgebra(Zmod(2), 4))


@pytest.fixture
def m4f3():
    return IdempotentFamily.matrix_units(MatrixAlgebra(Zmod(3), 4))
