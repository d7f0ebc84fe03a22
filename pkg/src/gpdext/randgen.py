"""Seeded random instances for verification runs.

All drawing goes through a caller-supplied random.Random so batch runs are
reproducible; the library modules themselves stay deterministic and pure.
Instance pools are sized so that validating and decomposing the cyclic
extension mu_k x G stays cheap even at k = 6.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .cocycle import OneCochain, TwoCocycle, bicharacter_cocycle, pauli_cocycle
from .groupoid import (
    FiniteGroupoid,
    abelian_group_groupoid,
    cover_groupoid,
    cyclic_group_groupoid,
    disjoint_union,
    pair_groupoid,
    symmetric_group_groupoid,
)


def _klein_with_pauli(k: int):
    g = abelian_group_groupoid((2, 2))
    return g, (pauli_cocycle(g) if k % 2 == 0 else None)


def _abelian_with_bicharacter(orders):
    def build(k: int):
        g = abelian_group_groupoid(orders)
        return g, bicharacter_cocycle(g, orders, k)

    return build


def _plain(builder):
    return lambda k: (builder(), None)


# families keyed by the arrow-count they produce; drawn per k so that
# k^3 * |composable triples| stays bounded
_FAMILIES = [
    (2, _plain(lambda: cyclic_group_groupoid(2))),
    (3, _plain(lambda: cyclic_group_groupoid(3))),
    (4, _plain(lambda: cyclic_group_groupoid(4))),
    (4, _klein_with_pauli),
    (4, _abelian_with_bicharacter((2, 2))),
    (4, _plain(lambda: pair_groupoid(2))),
    (5, _plain(lambda: disjoint_union(pair_groupoid(2), pair_groupoid(1)))),
    (6, _plain(lambda: cyclic_group_groupoid(6))),
    (6, _plain(lambda: symmetric_group_groupoid(3))),
    (8, _plain(lambda: disjoint_union(pair_groupoid(2), pair_groupoid(2)))),
    (8, _abelian_with_bicharacter((2, 4))),
    (9, _plain(lambda: pair_groupoid(3))),
    (9, _abelian_with_bicharacter((3, 3))),
    (8, _plain(lambda: cover_groupoid([1, 2], [{1, 2}, {1}, {2}]))),
    (12, _plain(lambda: cyclic_group_groupoid(12))),
    (12, _abelian_with_bicharacter((2, 6))),
]

_MAX_ARROWS_BY_K = {2: 12, 3: 12, 4: 9, 6: 6}


def draw_oracle_instance(rng: random.Random, k: int):
    """A groupoid (at most 12 arrows) together with a normalized mu_k-valued
    cocycle: a random coboundary times, when the family carries one, a
    bilinear seed cocycle that is not a coboundary."""
    cap = _MAX_ARROWS_BY_K.get(k, 6)
    pool = [f for size, f in _FAMILIES if size <= cap]
    g, seed = rng.choice(pool)(k)
    w = random_mu_k_coboundary(rng, g, k)
    if seed is not None and rng.random() < 0.7:
        w = w.mul(seed)
    rep = w.check_identity()
    assert rep.ok
    assert w.normalized
    return g, w


def random_mu_k_coboundary(rng: random.Random, g: FiniteGroupoid, k: int) -> TwoCocycle:
    b = random_unit_cochain(rng, g, k)
    w = b.coboundary()
    return w


def random_unit_cochain(rng: random.Random, g: FiniteGroupoid, k: int) -> OneCochain:
    """Random mu_k-valued cochain equal to 1 on unit arrows, so its
    coboundary is normalized."""
    units = set(g.unit_to_arrow)
    return OneCochain(
        g,
        {a: Fraction(rng.randrange(k), k) for a in g.arrows() if a not in units},
    )


def random_exact_cochain(rng: random.Random, g: FiniteGroupoid, max_den: int = 12) -> OneCochain:
    units = set(g.unit_to_arrow)
    vals = {}
    for a in g.arrows():
        if a in units:
            continue
        q = rng.randrange(1, max_den + 1)
        vals[a] = Fraction(rng.randrange(q), q)
    return OneCochain(g, vals)


def random_principal_groupoid(rng: random.Random) -> FiniteGroupoid:
    builders = [
        lambda: pair_groupoid(2),
        lambda: pair_groupoid(3),
        lambda: disjoint_union(pair_groupoid(2), pair_groupoid(1)),
        lambda: disjoint_union(pair_groupoid(2), pair_groupoid(2)),
        lambda: cover_groupoid(["x"], [{"x"}, {"x"}, {"x"}]),
        lambda: cover_groupoid([1, 2], [{1, 2}, {1}]),
        lambda: cover_groupoid([1, 2, 3], [{1, 2}, {2, 3}, {3}]),
    ]
    return rng.choice(builders)()


def random_groupoid(rng: random.Random) -> FiniteGroupoid:
    builders = [
        lambda: pair_groupoid(rng.randrange(1, 4)),
        lambda: cyclic_group_groupoid(rng.randrange(2, 7)),
        lambda: abelian_group_groupoid((2, 2)),
        lambda: symmetric_group_groupoid(3),
        lambda: disjoint_union(pair_groupoid(2), cyclic_group_groupoid(2)),
        lambda: random_principal_groupoid(rng),
    ]
    return rng.choice(builders)()


def random_element(rng: random.Random, algebra, scale: float = 1.0):
    return algebra.element(
        {
            a: complex(rng.gauss(0, scale), rng.gauss(0, scale))
            for a in algebra.groupoid.arrows()
        }
    )


def random_laurent(rng: random.Random, ext_algebra, window: tuple[int, int], density: float = 1.0):
    modes = {}
    for n in range(window[0], window[1] + 1):
        if rng.random() <= density:
            modes[n] = {
                a: complex(rng.gauss(0, 1), rng.gauss(0, 1))
                for a in ext_algebra.groupoid.arrows()
            }
    return ext_algebra.element(modes)


def random_bimodule(rng: random.Random, g: FiniteGroupoid):
    from .morita import BimoduleElement

    return BimoduleElement(
        g, {u: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for u in g.units()}
    )
