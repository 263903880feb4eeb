"""Vectorized check of ``1 forces x = r(x)`` over every rank-two name.

Over ``Q = B minus 0`` a name of rank at most two is a subset of the pairs
``(w, c)`` with ``w`` a name of rank at most one and ``c`` in ``Q``, so it is
encoded as a bitmask over those pairs. Every quantity the forcing clauses
need for ``x = r(x)`` is either an OR over the set bits of the code (which
splits into two table lookups on the low and high halves) or a lookup on
a small mask. The rank-one equality table comes from the scalar engine, so
this module only reorganizes its clauses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .names import Name, enumerate_names, retract
from .poset import bits
from .ro import RegularOpenAlgebra
from .semantics import SemanticsContext


def _or_table(contrib: np.ndarray) -> np.ndarray:
    """``T[m]`` = OR of ``contrib[j]`` over the set bits ``j`` of ``m``."""
    table = np.zeros(1, dtype=contrib.dtype)
    for value in contrib:
        table = np.concatenate([table, table | value])
    return table


@dataclass
class RetractionSweep:
    total: int
    failures: int
    first_failures: list[int]


class RankTwoRetraction:
    def __init__(self, B: RegularOpenAlgebra):
        self.algebra = B
        Q = self.poset = B.as_poset(include_zero=False)
        self.rank_one = enumerate_names(Q, 1).names
        W = self.rank_one
        index_of = {w: k for k, w in enumerate(W)}
        self.ctx = SemanticsContext(Q, enumerate_names(Q, 1))
        self.pairs = [(w, c) for w in range(len(W)) for c in range(len(Q))]
        n = self.width = len(self.pairs)
        self.low_bits = n // 2
        dtype = np.uint16 if len(Q) > 8 else np.uint8
        E = [[self.ctx.eq_mask(z, w) for w in W] for z in W]
        self.retracted = [index_of[retract(B, w)] for w in W]
        classes = sorted(set(self.retracted))
        down = [Q.down_mask(c) for c in range(len(Q))]

        def split(contrib):
            arr = np.array(contrib, dtype=dtype)
            return _or_table(arr[: self.low_bits]), _or_table(arr[self.low_bits :])

        # S_x(z): witnesses for ``z in x``
        self.mem_tables = [split([down[c] & E[z][w] for w, c in self.pairs]) for z in range(len(W))]
        # which rank-one names occur in dom(x)
        self.dom_tables = [split([1 if w == z else 0 for w, _ in self.pairs]) for z in range(len(W))]
        # conditions occurring with each class of r-identified constituents
        self.classes = classes
        self.class_tables = [
            split([1 << c if self.retracted[w] == k else 0 for w, c in self.pairs]) for k in classes
        ]
        joined_down = np.zeros(1 << len(Q), dtype=dtype)
        for m in range(1, 1 << len(Q)):
            j = B.join_all(B.index(Q.elements[c]) for c in bits(m))
            joined_down[m] = Q.down_mask(Q.index(B.labels[j]))
        self.joined_down = joined_down
        self.E = np.array(E, dtype=dtype)
        self.dense_below = np.array(
            [Q.dense_below_mask(m) for m in range(1 << len(Q))], dtype=dtype
        )
        self.avoiding = np.array(
            [Q.interior_mask(Q.full & ~m) for m in range(1 << len(Q))], dtype=dtype
        )

    @property
    def count(self) -> int:
        return 1 << self.width

    def name(self, code: int) -> Name:
        W, Q = self.rank_one, self.poset
        return Name((W[w], Q.elements[c]) for k, (w, c) in enumerate(self.pairs) if code >> k & 1)

    def forcers(self, codes: np.ndarray) -> np.ndarray:
        """Masks of the conditions forcing ``x = r(x)``, one per code."""
        codes = np.asarray(codes, dtype=np.int64)
        lo = codes & ((1 << self.low_bits) - 1)
        hi = codes >> self.low_bits

        def look(tables):
            return tables[0][lo] | tables[1][hi]

        present = [look(t) for t in self.class_tables]
        separated = np.zeros(codes.shape, dtype=self.dense_below.dtype)
        for z in range(len(self.rank_one)):
            mem_x = self.dense_below[look(self.mem_tables[z])]
            witnesses = np.zeros_like(separated)
            for k, v in enumerate(self.classes):
                witnesses |= self.joined_down[present[k]] & self.E[z, v]
            mem_r = self.dense_below[witnesses]
            in_domain = look(self.dom_tables[z]).astype(bool)
            if z in self.classes:
                in_domain |= present[self.classes.index(z)] != 0
            separated |= np.where(in_domain, mem_x ^ mem_r, 0).astype(separated.dtype)
        return self.avoiding[separated]

    def sweep(self, chunk: int = 1 << 20) -> RetractionSweep:
        top = 1 << self.poset.top_index
        failures, first = 0, []
        for start in range(0, self.count, chunk):
            codes = np.arange(start, min(start + chunk, self.count), dtype=np.int64)
            bad = (self.forcers(codes) & top) == 0
            n_bad = int(bad.sum())
            if n_bad:
                failures += n_bad
                first.extend(int(c) for c in codes[bad][: 10 - len(first)])
        return RetractionSweep(self.count, failures, first)


def retraction_identity_sweep(B: RegularOpenAlgebra) -> RetractionSweep:
    """Check that the top condition forces ``x = r(x)`` for every rank-two name."""
    return RankTwoRetraction(B).sweep()
