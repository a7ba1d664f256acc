from __future__ import annotations

import numpy as np
import pytest

from aggrospeech.classifier import (ConfusionMatrix, GridPoint, SplitSpec, SvmParams, build_grid,
                                    classification_report, grid_search, load_model, save_model, split,
                                    standardize, train_model, train_pair_smo)
from aggrospeech.classifier.data import Scaler, largest_remainder
from aggrospeech.classifier.metrics import confusion_matrix, evaluate
from aggrospeech.classifier.multiclass import vote
from aggrospeech.classifier.pipeline import evaluate_split, fit_matrix
from aggrospeech.classifier.smo import dual_objective, kernel_matrix
from aggrospeech.errors import ClassTooSmallWarning, EmptyGrid, RegistryMismatch, SingleLabel
from aggrospeech.testing.synthetic import blobs

HINDI = [[67, 0, 155], [5, 0, 30], [22, 0, 517]]
ENGLISH = [[252, 0, 123], [15, 0, 43], [121, 1, 345]]


def r2(x):
    return round(x, 2)


# --- metrics ---------------------------------------------------------------

def test_hindi_report():
    rep = classification_report(ConfusionMatrix(np.array(HINDI)))
    oag, cag, nag = rep.per_class["OAG"], rep.per_class["CAG"], rep.per_class["NAG"]
    assert (r2(oag.precision), r2(oag.recall), r2(oag.f1)) == (0.71, 0.30, 0.42)
    assert (r2(nag.precision), r2(nag.recall), r2(nag.f1)) == (0.74, 0.96, 0.83)
    assert (cag.precision, cag.recall, cag.f1) == (0.0, 0.0, 0.0)
    w = rep.weighted
    assert (r2(w.precision), r2(w.recall), r2(w.f1)) == (0.70, 0.73, 0.68)
    assert round(rep.accuracy, 4) == 0.7337
    assert rep.accuracy == 584 / 796


def test_english_report():
    rep = classification_report(ConfusionMatrix(np.array(ENGLISH)))
    oag, cag, nag = rep.per_class["OAG"], rep.per_class["CAG"], rep.per_class["NAG"]
    assert (r2(oag.precision), r2(oag.recall), r2(oag.f1)) == (0.65, 0.67, 0.66)
    assert (r2(nag.precision), r2(nag.recall), r2(nag.f1)) == (0.68, 0.74, 0.71)
    assert (cag.precision, cag.recall, cag.f1) == (0.0, 0.0, 0.0)
    assert (r2(rep.weighted.precision), r2(rep.weighted.f1)) == (0.62, 0.64)
    assert round(rep.accuracy, 4) == 0.6633


def test_perfect_diagonal():
    rep = classification_report(ConfusionMatrix(np.diag([5, 7, 9])))
    assert rep.accuracy == 1.0
    assert all(m.precision == m.recall == m.f1 == 1.0 for m in rep.per_class.values())
    assert rep.weighted.f1 == 1.0


def test_weighted_recall_is_accuracy(rng):
    for _ in range(50):
        cm = ConfusionMatrix(rng.integers(0, 40, (3, 3)))
        rep = classification_report(cm)
        assert rep.weighted.recall == rep.accuracy
        for m in (*rep.per_class.values(), rep.weighted, rep.macro):
            assert 0.0 <= m.precision <= 1.0 and 0.0 <= m.recall <= 1.0 and 0.0 <= m.f1 <= 1.0


def test_confusion_rows_are_class_counts():
    y = ["OAG", "OAG", "CAG", "NAG", "NAG", "NAG"]
    p = ["NAG", "OAG", "CAG", "NAG", "OAG", "NAG"]
    cm = confusion_matrix(y, p)
    assert cm.counts.tolist() == [[1, 0, 1], [0, 1, 0], [1, 0, 2]]
    assert cm.counts.sum(axis=1).tolist() == [2, 1, 3]


# --- split and standardize -------------------------------------------------

def test_split_sizes_60_30_10():
    labels = np.array(["NAG"] * 60 + ["OAG"] * 30 + ["CAG"] * 10)
    sp = split(labels, SplitSpec(seed=4))
    assert (len(sp.train), len(sp.validate), len(sp.test)) == (80, 10, 10)
    for cls, n in (("NAG", 60), ("OAG", 30), ("CAG", 10)):
        for part, frac in ((sp.train, 0.8), (sp.validate, 0.1), (sp.test, 0.1)):
            assert abs(int((labels[part] == cls).sum()) - n * frac) <= 1
    everything = np.concatenate([sp.train, sp.validate, sp.test])
    assert sorted(everything.tolist()) == list(range(100))


def test_split_deterministic():
    labels = np.array(["NAG"] * 40 + ["OAG"] * 25 + ["CAG"] * 7)
    a, b = split(labels, SplitSpec(seed=9)), split(labels, SplitSpec(seed=9))
    for x, y in zip((a.train, a.validate, a.test), (b.train, b.validate, b.test)):
        assert np.array_equal(x, y)
    c = split(labels, SplitSpec(seed=10))
    assert not np.array_equal(a.test, c.test)


def test_small_class_goes_to_train():
    labels = np.array(["NAG"] * 30 + ["OAG"] * 30 + ["CAG"] * 2)
    with pytest.warns(ClassTooSmallWarning):
        sp = split(labels, SplitSpec(seed=1))
    cag = np.flatnonzero(labels == "CAG")
    assert set(cag.tolist()) <= set(sp.train.tolist())


def test_largest_remainder():
    assert largest_remainder(10, (0.8, 0.1, 0.1)) == [8, 1, 1]
    assert sum(largest_remainder(7, (0.8, 0.1, 0.1))) == 7


def test_standardize_examples():
    train = np.array([[2.0, 5.0], [4.0, 5.0]])
    test = np.array([[3.0, 5.0]])
    z_train, z_test, scaler = standardize(train, test)
    np.testing.assert_array_equal(z_train[:, 0], [-1.0, 1.0])
    np.testing.assert_array_equal(z_train[:, 1], [0.0, 0.0])
    assert z_test[0, 0] == 0.0
    assert scaler.constant.tolist() == [False, True]


# --- SMO -------------------------------------------------------------------

def test_two_point_analytic():
    m = train_pair_smo(np.array([[1.0], [-1.0]]), np.array([1.0, -1.0]), SvmParams("linear", C=10.0))
    np.testing.assert_allclose(m.alpha, [0.5, 0.5], atol=1e-6)
    assert m.bias == pytest.approx(0.0, abs=1e-6)
    np.testing.assert_allclose(m.decision_function(np.array([[0.3], [-2.0]])), [0.3, -2.0], atol=1e-6)


def test_contradictory_points_hit_the_bound():
    X = np.array([[0.5], [0.5]])
    m = train_pair_smo(X, np.array([1.0, -1.0]), SvmParams("linear", C=0.1))
    np.testing.assert_allclose(m.alpha, [0.1, 0.1], atol=1e-12)


def test_single_label_rejected():
    with pytest.raises(SingleLabel):
        train_pair_smo(np.zeros((3, 2)), np.ones(3))


def _instance(seed, n=None):
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(6, 21))
    d = int(rng.integers(1, 5))
    X = rng.standard_normal((n, d))
    y = np.where(X[:, 0] + 0.8 * rng.standard_normal(n) > 0, 1.0, -1.0)
    if abs(y.sum()) == n:
        y[0] = -y[0]
    return X, y


def _qp_dual(X, y, C, kernel, gamma):
    import cvxpy as cp
    K = kernel_matrix(X, X, kernel, gamma)
    L = np.linalg.cholesky(K + 1e-9 * np.eye(len(y)))
    a = cp.Variable(len(y))
    obj = cp.Maximize(cp.sum(a) - 0.5 * cp.sum_squares(L.T @ cp.multiply(a, y)))
    prob = cp.Problem(obj, [a >= 0, a <= C, y @ a == 0])
    prob.solve(solver=cp.CLARABEL)
    return prob.value


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("kernel,C,gamma", [("linear", 1.0, None), ("rbf", 10.0, 0.5)])
def test_dual_objective_matches_dense_qp(seed, kernel, C, gamma):
    X, y = _instance(seed)
    m = train_pair_smo(X, y, SvmParams(kernel, C=C, gamma=gamma))
    ours = dual_objective(m.alpha, X, y, kernel, gamma)
    ref = _qp_dual(X, y, C, kernel, gamma)
    assert abs(ours - ref) <= 1e-3 * max(abs(ref), 1e-12)


def _check_kkt(m, X, y, C, tol):
    f = m.decision_function(X)
    margin = y * f
    a = m.alpha
    assert np.all(a >= 0) and np.all(a <= C)
    assert abs(float(a @ y)) <= 1e-6
    free = (a > 0) & (a < C)
    assert np.all(margin[a == 0] >= 1 - tol)
    assert np.all(np.abs(margin[free] - 1) <= tol)
    assert np.all(margin[a == C] <= 1 + tol)


@pytest.mark.parametrize("seed", range(6))
def test_kkt_conditions(seed):
    X, y = _instance(100 + seed, n=60)
    for params in (SvmParams("linear", C=1.0), SvmParams("rbf", C=5.0, gamma=0.3)):
        m = train_pair_smo(X, y, params)
        assert m.converged
        _check_kkt(m, X, y, params.C, params.smo_tolerance)


def test_support_vectors_only_positive_alpha():
    X, y = _instance(3, n=40)
    m = train_pair_smo(X, y, SvmParams("linear", C=1.0))
    assert len(m.dual_coef) == int((m.alpha > 1e-8).sum())


# --- multiclass ------------------------------------------------------------

SUBS = [("OAG", "CAG", None), ("OAG", "NAG", None), ("CAG", "NAG", None)]
CLASSES = ("OAG", "CAG", "NAG")


def test_unanimous_vote():
    # positive favours the first class of the pair
    assert vote(np.array([[0.5, -2.0, -1.0]]), SUBS, CLASSES).tolist() == ["NAG"]


def test_circular_vote_goes_to_largest_margin():
    # OAG beats CAG, NAG beats OAG, CAG beats NAG: one vote each
    d = np.array([[0.2, -0.5, 1.5]])
    # margins: OAG 0.2-0.5=-0.3, CAG -0.2+1.5=1.3, NAG 0.5-1.5=-1.0
    assert vote(d, SUBS, CLASSES).tolist() == ["CAG"]


def test_exact_tie_goes_to_class_order():
    assert vote(np.array([[1.0, -1.0, 1.0]]), SUBS, CLASSES).tolist() == ["OAG"]


def test_registry_mismatch_on_width():
    m = blobs(n_per_class=(20, 20, 20))
    model = train_model(m.X, m.labels, SvmParams("linear", C=1.0))
    with pytest.raises(RegistryMismatch):
        model.predict(np.zeros((1, m.X.shape[1] + 1)))


def test_predict_is_pure():
    m = blobs(n_per_class=(20, 20, 20), seed=2)
    model = train_model(m.X, m.labels, SvmParams("rbf", C=1.0, gamma=0.2))
    assert model.predict(m.X).tolist() == model.predict(m.X.copy()).tolist()


def test_linear_scale_invariance():
    m = blobs(n_per_class=(40, 40, 40), seed=5, spread=2.0, separation=3.0)
    base = train_model(m.X, m.labels, SvmParams("linear", C=1.0))
    g = np.array([1000.0, 0.01, 7.0, 1.0])
    scaled = train_model(m.X * g, m.labels, SvmParams("linear", C=1.0))
    probe = np.random.default_rng(1).normal(0, 4, (200, 4))
    assert base.predict(probe).tolist() == scaled.predict(probe * g).tolist()


def test_class_weighting_helps_minority():
    m = blobs(n_per_class=(150, 12, 150), seed=3, spread=1.6, separation=3.0)
    sp = split(np.asarray(m.labels), SplitSpec(seed=0))
    plain = train_model(m.X[sp.train], np.asarray(m.labels)[sp.train], SvmParams("linear", C=1.0))
    weighted = train_model(m.X[sp.train], np.asarray(m.labels)[sp.train], SvmParams("linear", C=1.0),
                           class_weighting=True)
    labels = np.asarray(m.labels)

    def cag_recall(model):
        pred = model.predict(m.X)
        return float(np.mean(pred[labels == "CAG"] == "CAG"))
    assert cag_recall(weighted) >= cag_recall(plain)


# --- grid search and pipeline ---------------------------------------------

def test_default_grid():
    grid = build_grid(8)
    assert len(grid) == 4 + 4 * 3
    assert {p.gamma for p in grid if p.kernel == "rbf"} == {1 / 8, 0.01, 0.1}
    assert all(p.gamma is None for p in grid if p.kernel == "linear")


def test_empty_grid():
    m = blobs(n_per_class=(10, 10, 10))
    with pytest.raises(EmptyGrid):
        grid_search(m.X, m.labels, m.X, m.labels, [])


def test_single_point_grid():
    m = blobs(n_per_class=(20, 20, 20))
    res = grid_search(m.X, m.labels, m.X, m.labels, [GridPoint("rbf", 3.0, 0.2)])
    assert res.best == GridPoint("rbf", 3.0, 0.2)


def test_tie_prefers_smaller_c():
    m = blobs(n_per_class=(30, 30, 30), separation=10.0)
    grid = [GridPoint("linear", 10.0, None), GridPoint("linear", 1.0, None), GridPoint("linear", 100.0, None)]
    res = grid_search(m.X, m.labels, m.X, m.labels, grid)
    assert all(acc == 1.0 for _, acc in res.scores)
    assert res.best.C == 1.0


def test_validation_never_trains():
    m = blobs(n_per_class=(30, 30, 30))
    labels = np.asarray(m.labels)
    res = grid_search(m.X[:60], labels[:60], m.X[60:], labels[60:], [GridPoint("linear", 1.0, None)])
    direct = train_model(m.X[:60], labels[:60], SvmParams("linear", C=1.0))
    assert np.array_equal(res.model.decision_values(m.X), direct.decision_values(m.X))


def test_blobs_full_path():
    m = blobs(n_per_class=(100, 100, 100), seed=11)
    outcome = fit_matrix(m, SplitSpec(seed=11), build_grid(m.X.shape[1], Cs=(0.1, 1.0, 10.0)))
    assert outcome.search.best_accuracy >= 0.95
    cm, rep = evaluate_split(outcome.model, m, outcome.split.test)
    assert rep.accuracy >= 0.95
    assert cm.counts.sum() == len(outcome.split.test)


def test_grid_jobs_independent():
    m = blobs(n_per_class=(40, 40, 40), seed=6, spread=2.0, separation=3.0)
    grid = build_grid(m.X.shape[1], Cs=(0.1, 1.0))
    a = fit_matrix(m, SplitSpec(seed=1), grid, jobs=1)
    b = fit_matrix(m, SplitSpec(seed=1), grid, jobs=2)
    assert a.search.scores == b.search.scores
    assert np.array_equal(a.model.decision_values(m.X), b.model.decision_values(m.X))


# --- model file ------------------------------------------------------------

def test_model_round_trip(tmp_path):
    m = blobs(n_per_class=(30, 30, 30), seed=8)
    model = train_model(m.X, m.labels, SvmParams("rbf", C=2.0, gamma=0.37), registry_manifest="reg v1")
    path = tmp_path / "model.json"
    save_model(model, path)
    back = load_model(path)
    assert back.classes == model.classes and back.registry_manifest == "reg v1"
    np.testing.assert_allclose(back.scaler.mean, model.scaler.mean, rtol=0, atol=1e-12)
    for (_, _, a), (_, _, b) in zip(model.submodels, back.submodels):
        np.testing.assert_allclose(a.support_vectors, b.support_vectors, rtol=0, atol=1e-12)
        np.testing.assert_allclose(a.dual_coef, b.dual_coef, rtol=0, atol=1e-12)
        assert abs(a.bias - b.bias) <= 1e-12
    np.testing.assert_allclose(back.decision_values(m.X), model.decision_values(m.X), rtol=0, atol=1e-12)


def test_bad_magic(tmp_path):
    from aggrospeech.errors import DataError
    p = tmp_path / "x.json"
    p.write_text('{"magic": "nope"}')
    with pytest.raises(DataError):
        load_model(p)


def test_no_convergence_warns_and_returns_iterate():
    from aggrospeech.errors import NoConvergenceWarning
    X, y = _instance(2, n=30)
    with pytest.warns(NoConvergenceWarning):
        m = train_pair_smo(X, y, SvmParams("linear", C=100.0, max_passes=1))
    assert not m.converged
    assert m.iterations == 30
    assert abs(float(m.alpha @ y)) <= 1e-6
