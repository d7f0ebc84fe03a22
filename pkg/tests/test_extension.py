import itertools
from fractions import Fraction

import numpy as np
import pytest

from gpdext import cyclic_oracle as oracle
from gpdext.algebra import AlgebraError
from gpdext.cocycle import TwoCocycle
from gpdext.extension import (
    ExtensionAlgebra,
    ModeUnitary,
    WindowError,
    check_reduced_decomposition,
    cyclic_decompose,
    cyclic_extension,
    decompose,
    embed_mode,
    extension_fiber_inner,
    intertwine_check,
    mode_component,
    mode_projection,
    oracle_norm_deviation,
)
from gpdext.groupoid import (
    cyclic_group_groupoid,
    empty_groupoid,
    pair_groupoid,
    validate,
)
from gpdext.randgen import random_laurent, random_mu_k_coboundary


@pytest.fixture
def pair_ext(pair2, pair2_trivial):
    return ExtensionAlgebra(pair2, pair2_trivial)


@pytest.fixture
def pauli_ext(klein, pauli):
    return ExtensionAlgebra(klein, pauli)


class TestGradedProduct:
    def test_mode_zero_is_plain_convolution(self, pair_ext):
        F = pair_ext.delta(0, 1)
        G = pair_ext.delta(0, 2)
        assert (F * G).mode(0).equals(pair_ext.twisted(0).delta(0))

    def test_cross_mode_products_vanish(self, pair_ext, rng):
        f = {a: complex(rng.gauss(0, 1)) for a in range(4)}
        F = pair_ext.element({-1: f})
        G = pair_ext.element({0: dict(f)})
        assert (F * G).is_zero
        assert (G * F).is_zero

    def test_pauli_mode_one_square(self, pauli_ext):
        F = pauli_ext.delta(1, 1)
        sq = F * F
        assert sq.support() == (1,)
        assert sq.mode(1).equals(pauli_ext.twisted(1).delta(0))

    def test_grading_exhaustive_on_delta_basis(self, pauli_ext):
        arrows = range(4)
        for m, n in itertools.product(range(-2, 3), repeat=2):
            for a, b in itertools.product(arrows, repeat=2):
                P = pauli_ext.delta(m, a) * pauli_ext.delta(n, b)
                if m != n:
                    assert P.is_zero
                else:
                    tw = pauli_ext.twisted(n)
                    assert P.mode(n).equals(tw.delta(a) * tw.delta(b))

    def test_mixing_extensions_rejected(self, pair_ext, pauli_ext):
        with pytest.raises(AlgebraError):
            pair_ext.delta(0, 0) * pauli_ext.delta(0, 0)


class TestModeCalculus:
    def test_projection_picks_modes(self, pauli_ext):
        F = pauli_ext.delta(1, 1) + pauli_ext.delta(0, 0)
        assert mode_projection(F, 1).equals(pauli_ext.delta(1, 1))
        assert mode_projection(F, 0).equals(pauli_ext.delta(0, 0))
        assert mode_projection(F, 2).is_zero

    def test_projection_idempotent(self, pauli_ext, rng):
        F = random_laurent(rng, pauli_ext, (-2, 2))
        for n in range(-3, 4):
            P = mode_projection(F, n)
            assert mode_projection(P, n).equals(P)

    def test_projections_resolve_identity(self, pauli_ext, rng):
        F = random_laurent(rng, pauli_ext, (-2, 2))
        total = pauli_ext.zero()
        for n in range(-2, 3):
            total = total + mode_projection(F, n)
        assert total.equals(F)

    def test_projection_star_homomorphism(self, pauli_ext, rng):
        for _ in range(25):
            F = random_laurent(rng, pauli_ext, (-1, 1))
            G = random_laurent(rng, pauli_ext, (-1, 1))
            for n in (-1, 0, 1):
                assert mode_projection(F * G, n).isclose(
                    mode_projection(F, n) * mode_projection(G, n), 1e-10
                )
                assert mode_projection(F.star(), n).equals(mode_projection(F, n).star())

    def test_component_homomorphism_exhaustive(self, pair_ext):
        # delta-basis structure constants for every window mode
        for n in range(-2, 3):
            tw = pair_ext.twisted(n)
            for a, b in itertools.product(range(4), repeat=2):
                F = pair_ext.delta(n, a)
                G = pair_ext.delta(n, b)
                assert mode_component(F * G, n).equals(tw.delta(a) * tw.delta(b))

    def test_component_star_random(self, pauli_ext, rng):
        for _ in range(25):
            F = random_laurent(rng, pauli_ext, (-2, 2))
            for n in range(-2, 3):
                assert mode_component(F.star(), n).isclose(mode_component(F, n).star())

    def test_embed_inverts_component(self, pauli_ext, rng):
        F = random_laurent(rng, pauli_ext, (-1, 1))
        for n in (-1, 0, 1):
            f = mode_component(F, n)
            assert mode_component(embed_mode(pauli_ext, n, f), n).equals(f)
            assert embed_mode(pauli_ext, n, f).equals(mode_projection(F, n))


class TestDecompose:
    def test_identity(self, pair_ext):
        comps, rep = decompose(pair_ext.identity())
        assert list(comps) == [0]
        assert rep.extension_norm == pytest.approx(1.0)

    def test_two_mode_element(self, pauli_ext):
        F = pauli_ext.delta(1, 1) + pauli_ext.delta(0, 0)
        _, rep = decompose(F, with_centers=True)
        assert rep.mode_norms == {0: pytest.approx(1.0), 1: pytest.approx(1.0)}
        assert rep.extension_norm == pytest.approx(1.0)
        assert rep.center_dimensions == {0: 4, 1: 1}
        assert rep.faithful_modes == {0: True, 1: True}

    def test_zero_element(self, pair_ext):
        comps, rep = decompose(pair_ext.zero())
        assert comps == {} and rep.extension_norm == 0.0

    def test_empty_groupoid(self):
        g = empty_groupoid()
        ea = ExtensionAlgebra(g, TwoCocycle.trivial(g))
        comps, rep = decompose(ea.zero())
        assert rep.extension_norm == 0.0


class TestIntertwining:
    def test_single_mode_unit(self, pair_ext):
        res = intertwine_check(pair_ext.delta(0, 1), 0, (0, 0))
        assert res.residual == 0.0

    def test_random_windowed(self, pauli_ext, rng):
        for _ in range(30):
            F = random_laurent(rng, pauli_ext, (-1, 1))
            res = intertwine_check(F, 0, (-1, 1))
            assert res.residual <= 1e-12

    def test_all_units_of_pair_groupoid(self, pair_ext, rng):
        for _ in range(10):
            F = random_laurent(rng, pair_ext, (-2, 2))
            for u in (0, 1):
                assert intertwine_check(F, u, (-2, 2)).residual <= 1e-12

    def test_window_error_lists_modes(self, pauli_ext):
        with pytest.raises(WindowError) as exc:
            intertwine_check(pauli_ext.delta(2, 0) + pauli_ext.delta(-3, 0), 0, (0, 1))
        assert exc.value.missing == (-3, 2)

    def test_mode_unitaries_are_orthogonal_isometries(self, pauli_ext):
        fiber = pauli_ext.groupoid.source_fiber(0)
        modes = (0, 1, 2)
        Vs = {n: ModeUnitary(0, n, fiber).embedding_matrix(modes) for n in modes}
        for m in modes:
            for n in modes:
                prod = Vs[m].T @ Vs[n]
                expected = np.eye(len(fiber)) if m == n else np.zeros((len(fiber),) * 2)
                assert np.array_equal(prod, expected)

    def test_fiber_inner_product_matches_mode_delta(self):
        x = {(0, 1): 1.0, (1, 1): 2.0}
        y = {(0, 1): 1.0, (2, 1): 5.0}
        assert extension_fiber_inner(x, y) == pytest.approx(1.0)


class TestReducedDecomposition:
    def test_identity_norms_agree(self, pair_ext):
        cert = check_reduced_decomposition([pair_ext.identity()])
        assert cert.ok and cert.max_norm_deviation == 0.0

    def test_random_elements(self, pauli_ext, pair_ext, rng):
        elements = [random_laurent(rng, pauli_ext, (-1, 2)) for _ in range(15)]
        elements += [random_laurent(rng, pair_ext, (-2, 1)) for _ in range(15)]
        cert = check_reduced_decomposition(elements)
        assert cert.ok, cert


class TestCyclicExtension:
    def test_trivial_cocycle_on_z2_splits(self):
        z2 = cyclic_group_groupoid(2)
        ext = cyclic_extension(z2, TwoCocycle.trivial(z2), 2)
        G = ext.groupoid
        assert G.n_arrows == 4
        # abelian with exponent 2: the Klein group, a split extension
        assert all(G.compose(a, b) == G.compose(b, a) for a in G.arrows() for b in G.arrows())
        assert all(G.compose(a, a) == G.unit_arrow(0) for a in G.arrows())

    def test_pauli_extension_is_nonabelian_of_order_eight(self, klein, pauli):
        ext = cyclic_extension(klein, pauli, 2)
        G = ext.groupoid
        assert G.n_arrows == 8 and validate(G).ok
        assert any(
            G.compose(a, b) != G.compose(b, a) for a in G.arrows() for b in G.arrows()
        )
        # central extension: the circle fiber commutes with everything
        center = ext.arrow(1, klein.unit_arrow(0))
        assert all(
            G.compose(center, a) == G.compose(a, center) for a in G.arrows()
        )

    def test_random_mu3_cocycles_validate(self, rng):
        g = pair_groupoid(2)
        for _ in range(10):
            w = random_mu_k_coboundary(rng, g, 3)
            ext = cyclic_extension(g, w, 3)
            assert ext.validation.ok
            assert ext.groupoid.n_arrows == 3 * g.n_arrows

    def test_fiber_size(self, klein, pauli):
        ext = cyclic_extension(klein, pauli, 2)
        for a in klein.arrows():
            fiber = [x for x in ext.groupoid.arrows() if ext.parts(x)[1] == a]
            assert len(fiber) == 2

    def test_value_outside_mu_k_rejected(self, klein, pauli):
        with pytest.raises(oracle.OracleError) as exc:
            cyclic_extension(klein, pauli, 3)
        assert "mu_3" in str(exc.value)

    def test_non_normalized_rejected(self, klein):
        w = TwoCocycle.from_function(klein, lambda a, b: Fraction(1, 2))
        w.check_identity()
        with pytest.raises(oracle.OracleError):
            cyclic_extension(klein, w, 2)


class TestCyclicDecompose:
    def test_trivial_cocycle_two_copies(self):
        z2 = cyclic_group_groupoid(2)
        ext = cyclic_extension(z2, TwoCocycle.trivial(z2), 2)
        cd = cyclic_decompose(ext)
        assert cd.ok and cd.exact and cd.max_residual == 0.0
        assert [s.dimension for s in cd.summands] == [2, 2]
        # both summands are the commutative algebra of Z2
        assert [s.center_dimension for s in cd.summands] == [2, 2]

    def test_pauli_summands(self, klein, pauli):
        ext = cyclic_extension(klein, pauli, 2)
        cd = cyclic_decompose(ext)
        assert cd.ok and cd.exact
        assert [s.dimension for s in cd.summands] == [4, 4]
        assert [s.center_dimension for s in cd.summands] == [4, 1]

    def test_mu4_coboundary(self, rng):
        g = pair_groupoid(2)
        w = random_mu_k_coboundary(rng, g, 4)
        cd = cyclic_decompose(cyclic_extension(g, w, 4), skip_centers=True)
        assert cd.ok and cd.exact and cd.max_residual == 0.0
        assert cd.products_checked == (4 * 4) ** 2

    def test_float_mode(self, klein, pauli):
        vals = {p: pauli.value(*p).to_complex() for p in klein.compose_table}
        w = TwoCocycle.from_function(klein, lambda a, b: vals[(a, b)])
        w.check_identity()
        ext = cyclic_extension(klein, w, 2)
        cd = cyclic_decompose(ext)
        assert cd.ok and not cd.exact
        assert cd.max_residual <= 1e-10


class TestOracleNormAgreement:
    def test_pauli(self, klein, pauli, pauli_ext, rng):
        ext = cyclic_extension(klein, pauli, 2)
        for _ in range(20):
            F = random_laurent(rng, pauli_ext, (0, 1))
            assert oracle_norm_deviation(F, ext) <= 1e-9

    def test_identity_norm(self, pair_ext, pair2, pair2_trivial):
        ext = cyclic_extension(pair2, pair2_trivial, 2)
        assert oracle_norm_deviation(pair_ext.identity(), ext) <= 1e-12

    def test_modes_outside_oracle_range_rejected(self, pauli_ext, klein, pauli):
        ext = cyclic_extension(klein, pauli, 2)
        with pytest.raises(WindowError):
            oracle_norm_deviation(pauli_ext.delta(-1, 0), ext)


class TestQuotientOfExtension:
    def test_trivial_extension_of_pair_groupoid(self, pair2, pair2_trivial):
        ext = cyclic_extension(pair2, pair2_trivial, 2)
        assert oracle.quotient_matches_base(ext) == []

    def test_twisted_extension_of_pair_groupoid(self, rng):
        g = pair_groupoid(3)
        w = random_mu_k_coboundary(rng, g, 4)
        ext = cyclic_extension(g, w, 4)
        assert oracle.quotient_matches_base(ext) == []

    def test_group_base_reports_defect(self, klein, pauli):
        ext = cyclic_extension(klein, pauli, 2)
        assert oracle.quotient_matches_base(ext) != []


class TestOracleFaithfulness:
    def test_pauli_extension(self, klein, pauli):
        ext = cyclic_extension(klein, pauli, 2)
        rank, dim = oracle.faithfulness_rank(ext)
        assert rank == dim == 8
