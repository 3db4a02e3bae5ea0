import numpy as np
import pytest

from taulsd import catalog, clustercheck as cc, hoeffding as h
from taulsd.model import sample_matrix


def test_labels_validation():
    with pytest.raises(ValueError):
        cc.ClusterLabels(np.array([[0, 2]]))
    lab = cc.ClusterLabels(np.array([[0, 1, 1]]))
    assert lab.num_clusters == 2 and lab.sizes.tolist() == [1, 2]


def test_symmetry_examples():
    X = np.array([[1.0, 2.0, 3.0, 4.0]])
    rep = cc.symmetry_stats(X, cc.ClusterLabels(np.array([[0, 0, 1, 1]])))
    assert rep.A[0, 1] == 1 and rep.A[1, 0] == -1
    X = np.array([[1.0, 5.0, 5.0, 1.0]])
    rep = cc.symmetry_stats(X, cc.ClusterLabels(np.array([[0, 0, 1, 1]])))
    assert rep.A[0, 1] == rep.A[1, 0]
    rep = cc.symmetry_stats(np.array([[1.0, 2.0, 3.0]]), cc.ClusterLabels(np.array([[0, 1, 1]])))
    assert rep.singletons == [0]
    with pytest.raises(ValueError):
        cc.symmetry_stats(X, cc.ClusterLabels(np.zeros((1, 4), dtype=int)))


def test_own_cluster_diagonal_bound(rng):
    X = rng.integers(0, 4, size=(5, 30)).astype(float)
    lab = cc.ClusterLabels(rng.integers(0, 3, size=(5, 30)))
    rep = cc.symmetry_stats(X, lab)
    E = cc.ClusterECDF(X, lab)
    for u in range(3):
        assert abs(rep.A[u, u]) <= E.max_tie(u) / lab.sizes[u]


def test_example1_symmetry_with_true_labels():
    m = catalog.example1(30, 4000)
    X = sample_matrix(m, 1)
    rep = cc.symmetry_stats(X, cc.ClusterLabels(m.class_grid()))
    assert rep.max_asymmetry <= 0.02


def test_ghat_basic_properties(rng):
    X = np.full((3, 6), 2.0)
    assert not cc.ghat_ki(X, cc.ClusterLabels(np.zeros((3, 6), dtype=int)), 0, 0).any()
    X = rng.integers(0, 5, size=(4, 12)).astype(float)
    lab = cc.ClusterLabels(np.tile([0, 1, 2], (4, 4)))
    G = cc.ghat_ki(X, lab, 1, 2)
    assert np.array_equal(G, G.T) and np.all(np.abs(G) <= 1)


def test_ghat_continuous_iid():
    m = catalog.continuous_iid(50, 400)
    X = sample_matrix(m, 2)
    G = cc.ghat_ki(X, cc.ClusterLabels(m.class_grid()), 3, 7)
    assert np.all(np.abs(G - 1 / 3) < 0.05)


def test_ghat_example1_true_labels():
    m = catalog.example1(20, 2000)
    X = sample_matrix(m, 3)
    lab = cc.ClusterLabels(m.class_grid())
    for i in (0, 1):  # 0-based: i = 1 (odd, coin flip) and i = 2 (even, power law)
        exact = h.gki_matrix(m, 1, i + 1).expand()
        est = cc.ghat_ki(X, lab, 0, i)
        assert np.max(np.abs(est - exact)) < 0.03


def test_ghat_centered_variant_differs_only_by_means():
    m = catalog.example1(10, 400)
    X = sample_matrix(m, 4)
    lab = cc.ClusterLabels(m.class_grid())
    a, b = cc.ghat_ki(X, lab, 0, 1), cc.ghat_ki(X, lab, 0, 1, centered=True)
    assert np.max(np.abs(a - b)) < 0.01


def test_ghat_convergence_rate():
    sizes, errs = [], []
    for n in (100, 400, 1600, 6400):
        m = catalog.example1(10, n)
        exact = h.gki_matrix(m, 1, 2).expand()[0, 1]
        e = []
        for seed in range(12):
            X = sample_matrix(m, seed)
            e.append(cc.ghat_ki(X, cc.ClusterLabels(m.class_grid()), 0, 1)[0, 1] - exact)
        sizes.append(10 * n / 2)
        errs.append(np.sqrt(np.mean(np.square(e))))
    slope = np.polyfit(np.log(sizes), np.log(errs), 1)[0]
    assert abs(slope + 0.5) <= 0.2


def _two_law_data(p, n, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(p, n))
    X[:, 1::2] += 3.0
    return X


def test_cluster_columns_parity():
    X = _two_law_data(200, 20, 0)
    lab = cc.cluster_columns(X)
    cols = lab.labels[0]
    assert lab.num_clusters == 2
    assert len(set(cols[::2])) == 1 and len(set(cols[1::2])) == 1 and cols[0] != cols[1]
    assert (lab.labels == cols).all()


def test_cluster_columns_trivial_cases():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(200, 15))
    assert cc.cluster_columns(X).num_clusters == 1
    assert cc.cluster_columns(X, 0.0).num_clusters == 15


def test_null_quantile_reasonable():
    q = cc.null_ks_quantile(200)
    assert 0.1 < q < 0.2  # asymptotic 1.36 * sqrt(2 / 200) = 0.136
