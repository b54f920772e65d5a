import numpy as np
import pytest
from hypothesis import given, strategies as st

from bohrgroups.fourier import (FourierCoefficients, GroupFunction, GroupMismatchError, conj_transform,
                                fourier_transform, function_from_json, function_to_json, inverse_transform,
                                parseval)
from bohrgroups.groups import build_group, dual

from conftest import GROUP_LABELS


def random_function(rng, g, vd=None):
    shape = (g.order,) if vd is None else (g.order, vd, vd)
    return GroupFunction(g, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@pytest.mark.parametrize("label", GROUP_LABELS)
def test_constant_one_has_only_trivial_coefficient(label, duals):
    du = duals[label]
    F = fourier_transform(GroupFunction(du.group, np.ones(du.group.order)), du)
    assert F[0][0, 0] == pytest.approx(1.0)
    for n in du.nontrivial:
        assert np.max(np.abs(F[n])) <= 1e-12


def test_character_picks_out_its_own_coefficient():
    du = dual(build_group("cyclic:4"))
    F = fourier_transform(GroupFunction(du.group, du[1].matrices[:, 0, 0]), du)
    np.testing.assert_allclose([F[n][0, 0] for n in range(4)], [0, 1, 0, 0], atol=1e-15)


def test_two_dim_coefficient_follows_schur_orthogonality():
    # f = pi(x)_{01} on the 2-dim irrep: the transform is E_{10} / d
    du = dual(build_group("symmetric:3"))
    F = fourier_transform(GroupFunction(du.group, du[2].matrices[:, 0, 1]), du)
    expected = np.zeros((2, 2))
    expected[1, 0] = 0.5
    np.testing.assert_allclose(F[2], expected, atol=1e-15)
    assert np.max(np.abs(F[0])) + np.max(np.abs(F[1])) <= 1e-15


@pytest.mark.parametrize("label", GROUP_LABELS)
@pytest.mark.parametrize("vd", [None, 1, 2, 3])
def test_round_trip(label, vd, duals, rng):
    du = duals[label]
    f = random_function(rng, du.group, vd)
    back = inverse_transform(fourier_transform(f, du))
    assert np.max(np.abs(back - f.values)) <= 1e-10


def test_round_trip_at_single_element(duals, rng):
    du = duals["quaternion:8"]
    for _ in range(100):
        f = random_function(rng, du.group)
        F = fourier_transform(f, du)
        x = int(rng.integers(8))
        assert abs(inverse_transform(F, x) - f.values[x]) <= 1e-10


def test_constant_and_zero_inversion(duals):
    du = duals["symmetric:3"]
    F = fourier_transform(GroupFunction(du.group, np.full(6, 2 - 1j)), du)
    np.testing.assert_allclose(inverse_transform(F), 2 - 1j, atol=1e-14)
    zero = FourierCoefficients(du, tuple(np.zeros((d, d)) for d in du.dims))
    assert np.all(inverse_transform(zero) == 0)


def test_malformed_coefficients_rejected(duals):
    du = duals["symmetric:3"]
    with pytest.raises(ValueError):
        inverse_transform(FourierCoefficients(du, (np.zeros((1, 1)),) * 3))
    with pytest.raises(ValueError):
        inverse_transform(FourierCoefficients(du, (np.zeros((1, 1)),) * 2))


def test_matrix_transform_on_abelian_group_is_plain_average(rng):
    du = dual(build_group("cyclic:8"))
    f = random_function(rng, du.group, 3)
    F = fourier_transform(f, du)
    for n in range(8):
        expected = np.mean(f.values * np.conj(du[n].matrices[:, 0, 0])[:, None, None], axis=0)
        np.testing.assert_allclose(F[n], expected, atol=1e-14)


@pytest.mark.parametrize("label", GROUP_LABELS)
def test_parseval(label, duals, rng):
    du = duals[label]
    for _ in range(20):
        lhs, rhs = parseval(random_function(rng, du.group), du)
        assert abs(lhs - rhs) <= 1e-10


def test_parseval_examples(duals):
    du = duals["cyclic:8"]
    assert parseval(GroupFunction(du.group, np.ones(8)), du) == pytest.approx((1.0, 1.0), abs=1e-15)
    assert parseval(GroupFunction(du.group, du[1].matrices[:, 0, 0]), du) == pytest.approx((1.0, 1.0), abs=1e-15)
    with pytest.raises(ValueError):
        parseval(GroupFunction(du.group, np.ones((8, 2, 2))), du)


@pytest.mark.parametrize("label", GROUP_LABELS)
def test_nontrivial_irreps_average_to_zero(label, duals):
    for n in duals[label].nontrivial:
        assert np.max(np.abs(duals[label][n].matrices.conj().mean(axis=0))) <= 1e-10


@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2 ** 32 - 1))
def test_linearity(alpha, beta, seed):
    du = dual(build_group("symmetric:3"))
    rng = np.random.default_rng(seed)
    f, g = random_function(rng, du.group), random_function(rng, du.group)
    lhs = fourier_transform(alpha * f + g * beta, du)
    a, b = fourier_transform(f, du), fourier_transform(g, du)
    for n in range(len(du)):
        np.testing.assert_allclose(lhs[n], alpha * a[n] + beta * b[n], atol=1e-12, rtol=0)


def test_group_mismatch(duals, rng):
    f = random_function(rng, build_group("cyclic:6"))
    with pytest.raises(GroupMismatchError):
        fourier_transform(f, duals["symmetric:3"])


def test_conj_transform_paths(duals, rng):
    du = duals["symmetric:3"]
    for _ in range(50):
        f = random_function(rng, du.group)
        got = conj_transform(f, du[2])
        expected = fourier_transform(f.conj(), du)[2]
        np.testing.assert_allclose(got, expected, atol=1e-12)


def test_conj_transform_examples(duals, rng):
    du = duals["symmetric:3"]
    real_f = GroupFunction(du.group, rng.standard_normal(6))
    np.testing.assert_allclose(conj_transform(real_f, du[2]), fourier_transform(real_f, du)[2], atol=1e-15)
    ones = GroupFunction(du.group, np.ones(6))
    for n in du.nontrivial:
        assert np.max(np.abs(conj_transform(ones, du[n]))) <= 1e-15


def test_conj_transform_rejects_matrix_values(duals):
    du = duals["cyclic:8"]
    with pytest.raises(ValueError):
        conj_transform(GroupFunction(du.group, np.ones((8, 2, 2))), du[1])


@pytest.mark.parametrize("vd", [None, 2])
def test_json_round_trip(vd, rng):
    g = build_group("quaternion:8")
    f = random_function(rng, g, vd)
    back = function_from_json(function_to_json(f), g)
    np.testing.assert_array_equal(back.values, f.values)


def test_values_shape_checked():
    g = build_group("cyclic:4")
    with pytest.raises(ValueError):
        GroupFunction(g, np.ones(5))
    with pytest.raises(ValueError):
        GroupFunction(g, np.ones((4, 2, 3)))
