from __future__ import annotations

import pytest

from forcette.corpus import c2, default_names, p3
from forcette.ro import canonical_morphism, ro_algebra


@pytest.fixture
def P3():
    return p3()


@pytest.fixture
def C2():
    return c2()


@pytest.fixture
def B4(P3):
    return ro_algebra(P3)


@pytest.fixture
def names(P3):
    return default_names(P3)


@pytest.fixture
def i3(P3, B4):
    return canonical_morphism(P3, B4)
