"""Containers, marginalization/conditioning algebra, and file round-trips."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphainfo import (
    Channel,
    InvalidDistributionError,
    Joint2,
    Joint3,
    Pmf,
    UndefinedConditionalError,
    compose,
    conditional_slice,
    load_distribution,
    marginal,
    save_distribution,
)
from conftest import random_channel, random_joint2, random_joint3, random_pmf


class TestConstructors:
    def test_rejects_negative(self):
        with pytest.raises(InvalidDistributionError):
            Pmf([0.5, 0.6, -0.1])

    def test_rejects_bad_mass(self):
        with pytest.raises(InvalidDistributionError):
            Pmf([0.5, 0.5 + 1e-6])

    def test_accepts_mass_within_tolerance(self):
        Pmf([0.5, 0.5 + 1e-10])

    def test_rejects_wrong_arity(self):
        with pytest.raises(InvalidDistributionError):
            Joint2([0.5, 0.5])
        with pytest.raises(InvalidDistributionError):
            Joint3(np.full((2, 2), 0.25))

    def test_channel_rows_checked(self):
        with pytest.raises(InvalidDistributionError):
            Channel([[0.5, 0.5], [0.7, 0.2]])

    def test_immutable(self):
        p = Pmf([0.25, 0.75])
        with pytest.raises(ValueError):
            p.probs[0] = 1.0

    @given(st.lists(st.floats(0.01, 10.0), min_size=1, max_size=8))
    @settings(max_examples=50, deadline=None)
    def test_any_normalized_vector_is_valid(self, weights):
        arr = np.array(weights) / np.sum(weights)
        p = Pmf(arr)
        assert p.alphabet_size == len(weights)

    @given(st.lists(st.floats(0.01, 10.0), min_size=2, max_size=8),
           st.data())
    @settings(max_examples=50, deadline=None)
    def test_negative_entry_always_rejected(self, weights, data):
        arr = np.array(weights) / np.sum(weights)
        i = data.draw(st.integers(0, len(weights) - 1))
        arr[i] = -arr[i]
        with pytest.raises(InvalidDistributionError):
            Pmf(arr)


class TestMarginal:
    def test_uniform_drop_y(self):
        j = Joint2(np.full((2, 2), 0.25))
        np.testing.assert_allclose(marginal(j, 1).probs, [0.5, 0.5])

    def test_diagonal_drop_x(self):
        j = Joint2([[0.5, 0.0], [0.0, 0.5]])
        np.testing.assert_allclose(marginal(j, 0).probs, [0.5, 0.5])

    def test_point_mass_drop_z(self):
        arr = np.zeros((2, 2, 2))
        arr[0, 0, 0] = 1.0
        out = marginal(Joint3(arr), 2)
        assert isinstance(out, Joint2)
        assert out.probs[0, 0] == 1.0

    def test_drop_two_axes(self):
        j = Joint3(np.full((2, 3, 2), 1 / 12))
        out = marginal(j, (0, 2))
        assert isinstance(out, Pmf)
        np.testing.assert_allclose(out.probs, np.full(3, 1 / 3))

    def test_invalid_axis(self):
        j = Joint2(np.full((2, 2), 0.25))
        with pytest.raises(ValueError):
            marginal(j, 2)

    def test_mass_preserved(self, rng):
        for _ in range(20):
            j = random_joint2(rng, 3, 4, zeros=0.3)
            assert abs(marginal(j, 0).probs.sum() - 1.0) < 1e-12


class TestConditionalSlice:
    def test_deterministic_coupling(self):
        j = Joint2([[0.5, 0.0], [0.0, 0.5]])
        np.testing.assert_allclose(conditional_slice(j, 1, 0).probs, [1.0, 0.0])

    def test_independent_uniform(self):
        j = Joint2(np.full((2, 2), 0.25))
        np.testing.assert_allclose(conditional_slice(j, 1, 1).probs, [0.5, 0.5])

    def test_column_normalization(self):
        j = Joint2([[0.3, 0.1], [0.2, 0.4]])
        np.testing.assert_allclose(conditional_slice(j, 1, 0).probs, [0.6, 0.4])

    def test_zero_mass_slice(self):
        j = Joint2([[0.5, 0.0], [0.5, 0.0]])
        with pytest.raises(UndefinedConditionalError, match="undefined conditional"):
            conditional_slice(j, 1, 1)

    def test_joint3_pair_conditioning(self):
        arr = np.zeros((2, 2, 2))
        arr[1, 0, 1] = 0.6
        arr[0, 0, 1] = 0.2
        arr[0, 1, 0] = 0.2
        out = conditional_slice(Joint3(arr), (1, 2), (0, 1))
        np.testing.assert_allclose(out.probs, [0.25, 0.75])

    def test_joint3_single_axis_gives_joint2(self, rng):
        j = random_joint3(rng, 2, 3, 2)
        out = conditional_slice(j, 2, 1)
        assert isinstance(out, Joint2)
        np.testing.assert_allclose(
            out.probs, j.probs[:, :, 1] / j.probs[:, :, 1].sum(), atol=1e-15)

    def test_mixture_reconstruction(self, rng):
        for _ in range(20):
            j = random_joint2(rng, 4, 3)
            py = marginal(j, 0).probs
            rebuilt = np.stack(
                [py[y] * conditional_slice(j, 1, y).probs for y in range(3)],
                axis=1)
            np.testing.assert_allclose(rebuilt, j.probs, atol=1e-12)


class TestCompose:
    def test_identity_channel(self):
        j = compose(Pmf.uniform(3), Channel(np.eye(3)))
        np.testing.assert_allclose(j.probs, np.eye(3) / 3)

    def test_constant_output(self):
        ch = Channel([[0.0, 1.0], [0.0, 1.0]])
        j = compose(Pmf([0.3, 0.7]), ch)
        np.testing.assert_allclose(j.probs, [[0.0, 0.3], [0.0, 0.7]])

    def test_binary_symmetric(self):
        ch = Channel([[0.9, 0.1], [0.1, 0.9]])
        j = compose(Pmf([0.25, 0.75]), ch)
        np.testing.assert_allclose(j.probs, [[0.225, 0.025], [0.075, 0.675]])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            compose(Pmf.uniform(3), Channel(np.eye(2)))

    def test_marginal_recovers_input(self, rng):
        for _ in range(30):
            p = random_pmf(rng, 4, zeros=0.25)
            ch = random_channel(rng, 4, 3)
            np.testing.assert_allclose(marginal(compose(p, ch), 1).probs,
                                       p.probs, atol=1e-12)


class TestFileRoundTrip:
    @pytest.mark.parametrize("maker", [
        lambda rng: random_pmf(rng, 5, zeros=0.3),
        lambda rng: random_joint2(rng, 3, 4, zeros=0.3),
        lambda rng: random_joint3(rng, 2, 3, 2, zeros=0.2),
    ])
    def test_round_trip(self, tmp_path, rng, maker):
        # The format stores nonzero atoms only, so the alphabet extent is
        # carried by the largest massive index: keep the far corner massive
        # (interior zeros still exercise sparsity).
        dist = maker(rng)
        arr = dist.probs.copy()
        arr[tuple(s - 1 for s in arr.shape)] += 0.1
        dist = type(dist)(arr / arr.sum())
        path = tmp_path / "dist.csv"
        save_distribution(dist, path)
        back = load_distribution(path)
        assert type(back) is type(dist)
        np.testing.assert_allclose(back.probs, dist.probs, atol=1e-12)

    def test_malformed_row_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,p\n0,0.5\n1,zzz\n")
        with pytest.raises(InvalidDistributionError, match="line 3"):
            load_distribution(path)

    def test_negative_mass_rejected(self, tmp_path):
        path = tmp_path / "neg.csv"
        path.write_text("x,p\n0,1.2\n1,-0.2\n")
        with pytest.raises(InvalidDistributionError, match="negative"):
            load_distribution(path)

    def test_mass_deviation_rejected(self, tmp_path):
        path = tmp_path / "off.csv"
        path.write_text("x,p\n0,0.6\n1,0.5\n")
        with pytest.raises(InvalidDistributionError, match="mass"):
            load_distribution(path)

    def test_small_deviation_renormalized(self, tmp_path):
        path = tmp_path / "near.csv"
        path.write_text("x,p\n0,0.5\n1,0.4999997\n")
        p = load_distribution(path)
        assert abs(p.probs.sum() - 1.0) < 1e-15

    def test_omitted_atoms_are_zero(self, tmp_path):
        path = tmp_path / "sparse.csv"
        path.write_text("x,y,p\n0,0,0.5\n2,1,0.5\n")
        j = load_distribution(path)
        assert j.probs.shape == (3, 2)
        assert j.probs[1, 1] == 0.0

    def test_duplicate_atom_rejected(self, tmp_path):
        path = tmp_path / "dup.csv"
        path.write_text("x,p\n0,0.5\n0,0.5\n")
        with pytest.raises(InvalidDistributionError, match="duplicate"):
            load_distribution(path)
