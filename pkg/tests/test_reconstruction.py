import numpy as np
import pytest

from rados import (UnderdeterminedError, ambiguity_witness, build_gm, compute_rados, hausdorff,
                   recover_edges, sample_uniform_signatures, signatures_to_selection)
from rados.reconstruction import (edge_matrix, enclosing_radius, load_matrix, one_hot_u,
                                  save_matrix, selection_to_gm_index)

from oracles import random_dataset


def test_gm_small_cases():
    assert build_gm(1).tolist() == [[0, 1]]
    assert build_gm(2).tolist() == [[0, 0, 1, 1], [0, 1, 0, 1]]
    g3 = build_gm(3)
    assert g3.shape == (3, 8)
    assert len({tuple(c) for c in g3.T}) == 8
    with pytest.raises(ValueError):
        build_gm(0)


def test_selection_extremes():
    y = np.array([1, -1, 1])
    S = signatures_to_selection([y, -y], y)
    assert S[:, 0].tolist() == [1, 1, 1]
    assert S[:, 1].tolist() == [0, 0, 0]


def test_selection_times_edges_gives_rados():
    rng = np.random.default_rng(0)
    for m in (3, 7, 10):
        ds = random_dataset(rng, m, 4)
        sigmas = sample_uniform_signatures(m, 12, int(rng.integers(1 << 30)))
        S = signatures_to_selection(sigmas, ds.y)
        np.testing.assert_allclose(edge_matrix(ds) @ S, compute_rados(ds, sigmas).values.T,
                                   rtol=1e-12, atol=1e-12)


def test_gm_times_u_is_selection():
    rng = np.random.default_rng(1)
    ds = random_dataset(rng, 5, 2)
    sigmas = sample_uniform_signatures(5, 9, 2)
    S = signatures_to_selection(sigmas, ds.y)
    assert np.array_equal(build_gm(5) @ one_hot_u(S), S)
    assert selection_to_gm_index(np.array([[1], [0], [1]])).tolist() == [5]


def test_identity_selection():
    rng = np.random.default_rng(2)
    Pi = rng.normal(size=(3, 4))
    rec = recover_edges(Pi, np.eye(4))
    np.testing.assert_allclose(rec.E, Pi, rtol=0, atol=1e-14)
    assert rec.rank == 4 and rec.status == "recovered"


def test_round_trip():
    rng = np.random.default_rng(3)
    ds = random_dataset(rng, 6, 3)
    while True:
        sigmas = sample_uniform_signatures(6, 10, int(rng.integers(1 << 30)))
        S = signatures_to_selection(sigmas, ds.y)
        if np.linalg.matrix_rank(S) == 6:
            break
    Pi = compute_rados(ds, sigmas).values.T
    rec = recover_edges(Pi, S)
    E = edge_matrix(ds)
    assert np.linalg.norm(rec.E - E) / np.linalg.norm(E) <= 1e-8
    assert rec.residual <= 1e-10
    assert '"status": "recovered"' in rec.to_json()


def test_too_few_rados():
    rng = np.random.default_rng(4)
    ds = random_dataset(rng, 6, 3)
    sigmas = sample_uniform_signatures(6, 5, 0)
    S = signatures_to_selection(sigmas, ds.y)
    with pytest.raises(UnderdeterminedError) as info:
        recover_edges(compute_rados(ds, sigmas).values.T, S)
    assert info.value.rank <= 5


def test_rank_deficient_with_many_rados():
    S = np.array([[1, 1, 1, 1], [1, 1, 1, 1], [0, 1, 0, 1]], dtype=float)
    with pytest.raises(UnderdeterminedError):
        recover_edges(np.ones((2, 4)), S)


def test_hausdorff_cases():
    assert hausdorff(np.array([[0.0], [0.0]]), np.array([[3.0], [4.0]])) == 5.0
    rng = np.random.default_rng(5)
    A, B = rng.normal(size=(3, 4)), rng.normal(size=(3, 6))
    assert hausdorff(A, A) == 0.0
    assert hausdorff(A, B) == hausdorff(B, A)
    # one-sided distances differ, the symmetric one is the larger
    A = np.array([[0.0, 10.0]])
    B = np.array([[0.0]])
    assert hausdorff(A, B) == 10.0


def _witness_rados(ds, sigmas, index, e_star):
    new, new_sigmas = ambiguity_witness(ds, sigmas, index, e_star)
    return new, compute_rados(new, new_sigmas).values


def test_witness_degenerate_splits():
    rng = np.random.default_rng(6)
    ds = random_dataset(rng, 5, 2)
    sigmas = sample_uniform_signatures(5, 8, 1)
    base = compute_rados(ds, sigmas).values
    for index in (0, 4):
        edge = ds.edges[index]
        new, values = _witness_rados(ds, sigmas, index, edge)
        np.testing.assert_allclose(values, base, rtol=0, atol=1e-12)
        assert np.all(new.edges[index + 1] == 0)
        new, values = _witness_rados(ds, sigmas, index, edge / 2)
        np.testing.assert_allclose(values, base, rtol=0, atol=1e-12)
        np.testing.assert_allclose(new.edges[index], new.edges[index + 1])


def test_witness_random_split_is_ambiguous():
    rng = np.random.default_rng(7)
    ds = random_dataset(rng, 6, 3)
    sigmas = sample_uniform_signatures(6, 10, 2)
    base = compute_rados(ds, sigmas).values
    radius = enclosing_radius(edge_matrix(ds))
    e_star = rng.normal(size=3)
    e_star *= 0.5 * radius / np.linalg.norm(e_star)
    new, values = _witness_rados(ds, sigmas, 2, e_star)
    np.testing.assert_allclose(values, base, rtol=0, atol=1e-12)
    assert new.m == 7
    assert hausdorff(edge_matrix(ds), edge_matrix(new)) > 0


def test_matrix_csv_round_trip(tmp_path):
    rng = np.random.default_rng(8)
    M = rng.normal(size=(3, 5))
    save_matrix(tmp_path / "m.csv", M)
    assert np.array_equal(load_matrix(tmp_path / "m.csv"), M)


def test_witness_children_stay_in_enclosing_ball():
    rng = np.random.default_rng(9)
    for _ in range(20):
        ds = random_dataset(rng, 8, 3)
        E = edge_matrix(ds)
        R = enclosing_radius(E)
        i = int(rng.integers(0, 8))
        e = ds.edges[i]
        # any e_star within R - |e|/2 of e/2 keeps both e_star and e - e_star in B(0, R)
        step = rng.normal(size=3)
        step *= rng.uniform(0, R - np.linalg.norm(e) / 2) / np.linalg.norm(step)
        new, _ = ambiguity_witness(ds, sample_uniform_signatures(8, 4, 0), i, e / 2 + step)
        assert new.m == 9
        assert enclosing_radius(edge_matrix(new)) <= R + 1e-12
