"""End-to-end smoke checks for the python bindings."""

import numpy as np
import pytest

import setlabel as sl


@pytest.fixture(scope="module")
def sim():
    return sl.simulate(scenario=1, n=600, seed=7)


def test_simulate_shapes(sim):
    X = np.asarray(sim["X"])
    assert X.shape == (600, 15)
    assert set(sim["labels"]) <= {1, 2, 3}
    assert len(sim["time"]) == 600
    assert all(e in (0, 1) for e in sim["event"])
    assert max(sim["time"]) <= 365.0


def test_simulate_deterministic():
    a = sl.simulate(scenario=2, n=100, seed=5)
    b = sl.simulate(scenario=2, n=100, seed=5)
    assert np.array_equal(np.asarray(a["X"]), np.asarray(b["X"]))
    assert a["labels"] == b["labels"]


def test_scenario_masks():
    assert sl.scenario_mask(2) == [1, 2, 3, 4, 5, 6, 13]
    assert len(sl.scenario_mask(3)) == 12


def test_fit_predict_thresholds_sets(sim):
    X = np.asarray(sim["X"])[:, [c - 1 for c in sl.scenario_mask(1)]]
    y = sim["labels"]
    half = len(y) // 2
    model = sl.fit(X[:half], y[:half])
    assert model.converged
    probs = model.predict_proba(X[half:])
    assert probs.shape == (len(y) - half, 3)
    assert np.allclose(probs.sum(axis=1), 1.0)

    tv = sl.estimate_thresholds(probs, y[half:], [0.1, 0.1, 0.1])
    assert len(tv.t) == 3
    assert all(0.0 <= t <= 1.0 for t in tv.t)

    sets = np.asarray(sl.label_sets(probs, tv))
    assert sets.shape == probs.shape
    cov = sl.class_coverage(probs, tv, y[half:])
    # Calibration-half coverage is guaranteed >= 1 - alpha by construction.
    own = sl.class_coverage(probs, tv, y[half:])
    assert all(0.0 <= c <= 1.0 for c in own)
    assert cov == own


def test_calibration_coverage_guarantee(sim):
    X = np.asarray(sim["X"])[:, [c - 1 for c in sl.scenario_mask(1)]]
    y = sim["labels"]
    half = len(y) // 2
    model = sl.fit(X[:half], y[:half])
    probs = model.predict_proba(X[half:])
    tv = sl.estimate_thresholds(probs, y[half:], [0.1, 0.1, 0.1])
    cov = sl.class_coverage(probs, tv, y[half:])
    assert all(c >= 0.9 - 1e-12 for c in cov)


def test_kaplan_meier(sim):
    km = sl.kaplan_meier(sim["time"], sim["event"])
    s = np.asarray(km["survival"])
    assert np.all(np.diff(s) <= 1e-12)
    assert km["s90"] is not None
    assert 0.0 <= km["s90"] <= 1.0


def test_run_pipeline(tmp_path):
    out = sl.run_pipeline(
        scenario=1, n=400, n_boot=16, n_reps=2, seed=11,
        methods=["naive", "weighted_boot"], out_dir=str(tmp_path), threads=1,
    )
    assert len(out["thresholds"]) == 3
    assert set(out["coverage"]) == {"naive", "weighted_boot"}
    for name in ("config.txt", "coverage.csv", "thresholds.csv", "metrics.csv",
                 "ambiguity.csv", "survival.csv", "report.json"):
        assert (tmp_path / name).exists(), name


def test_model_round_trip(tmp_path, sim):
    X = np.asarray(sim["X"])[:, :4]
    model = sl.fit(X[:300], sim["labels"][:300])
    path = tmp_path / "model.json"
    model.save(str(path))
    loaded = sl.load_model(str(path))
    assert np.allclose(np.asarray(loaded.coef), np.asarray(model.coef))
