from __future__ import annotations

import numpy as np
import pytest

from forcette.batch import RankTwoRetraction, retraction_identity_sweep
from forcette.corpus import c2, p3
from forcette.formula import Const, Eq
from forcette.names import NameUniverse, enumerate_names, retract
from forcette.ro import ro_algebra
from forcette.semantics import SemanticsContext


@pytest.fixture(scope="module")
def sweeper():
    return RankTwoRetraction(ro_algebra(p3()))


def test_shape(sweeper):
    assert sweeper.width == 24 and sweeper.count == 1 << 24
    assert len(sweeper.rank_one) == 8


def test_codes_decode(sweeper):
    assert sweeper.name(0).rank == 0
    x = sweeper.name((1 << 24) - 1)
    assert len(x) == 24 and x.rank == 2


def test_matches_scalar_engine(sweeper):
    B = sweeper.algebra
    rng = np.random.default_rng(3)
    codes = np.concatenate([np.arange(64), rng.integers(0, 1 << 24, 400)])
    fast = sweeper.forcers(codes)
    for code, mask in zip(codes, fast):
        x = sweeper.name(int(code))
        r = retract(B, x)
        ctx = SemanticsContext(sweeper.poset, NameUniverse.closure(sweeper.poset, [x, r]))
        assert int(mask) == ctx.forcers_mask(Eq(Const(x), Const(r)))


def test_top_forces_retraction_on_sample(sweeper):
    top = 1 << sweeper.poset.top_index
    codes = np.arange(0, 1 << 24, 4099, dtype=np.int64)
    assert np.all(sweeper.forcers(codes) & top)


def test_broken_join_table_is_caught():
    broken = RankTwoRetraction(ro_algebra(p3()))
    broken.joined_down = np.zeros_like(broken.joined_down)
    top = 1 << broken.poset.top_index
    codes = np.arange(0, 1 << 24, 4099, dtype=np.int64)
    assert not np.all(broken.forcers(codes) & top)


def test_full_sweep_c2():
    B = ro_algebra(c2())
    result = retraction_identity_sweep(B)
    assert result.total == 1 << len(enumerate_names(B.as_poset(), 1))
    assert result.failures == 0
