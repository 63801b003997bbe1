import math
import pathlib

import pytest

import sizelaw

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures"


def test_foo_number_extraction():
    facts = sizelaw.extract_project(FIXTURES / "corpus" / "foo", "foo")
    kinds = {(e.fqn, e.kind) for e in facts.entities}
    assert ("foo.FooNumber.<init>", "CONSTRUCTOR") in kinds
    assert len(facts.entities) == 6
    assert facts.sloc == 11
    metrics = sizelaw.compute_metrics(facts)
    assert metrics["classes"] == 1
    assert metrics["methods"] == 2
    assert metrics["constructors"] == 1


def test_count_sloc():
    assert sizelaw.count_sloc("") == 0
    assert sizelaw.count_sloc("\n\n\n// a\n// b\n") == 0
    assert sizelaw.count_sloc('int a; /* x */\nString s = "//";\n') == 2


def test_predict_published_parameters():
    fit = sizelaw.make_fit(3.5549, 1.0939)
    assert sizelaw.predict(fit, 10) == pytest.approx(434, rel=5e-3)
    log2 = sizelaw.make_fit(0.14, 0.083, k=2)
    assert sizelaw.predict(log2, 1000) == pytest.approx(60.4, rel=2e-2)


def test_fit_recovers_exact_line():
    xs = [1.0, 2.0, 5.0, 10.0, 50.0]
    ys = [math.exp(2.0) * x for x in xs]
    fit = sizelaw.fit_log_power(xs, ys)
    assert fit.alpha == pytest.approx(2.0)
    assert fit.beta == pytest.approx(1.0)
    assert fit.r_squared == pytest.approx(1.0)
    robust = sizelaw.fit_log_power(xs, ys, robust=True)
    assert robust.r_squared is None
    assert robust.space == "log-log (RLM)"


def test_fit_rejects_too_few_points():
    with pytest.raises(sizelaw.Error):
        sizelaw.fit_log_power([1.0, 2.0], [1.0, 2.0])


def test_welch_example():
    r = sizelaw.welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert r.t == pytest.approx(-1.0)
    assert r.df == pytest.approx(8.0)
    assert r.p == pytest.approx(0.3466, abs=1e-4)
    assert sizelaw.inverse_normal_cdf(0.975) == pytest.approx(1.959964, abs=1e-6)
    assert sizelaw.student_t_cdf(0.0, 7.0) == pytest.approx(0.5)


def test_normalization_and_wmc():
    assert sizelaw.beta_normalize(486, 100, 1.0) == pytest.approx(4.86)
    assert sizelaw.beta_normalize(486, 100, 1.1055) == pytest.approx(2.99, abs=5e-3)
    w = sizelaw.wmc_summary([2.0, 8.0])
    assert w.linear_of_mean_log == pytest.approx(4.0)
    assert w.mean_linear == pytest.approx(5.0)


def test_synth_decorrelation():
    xs, ys = sizelaw.synth(5000, 1.095, 1.1055, sigma=0.5, seed=42)
    again = sizelaw.synth(5000, 1.095, 1.1055, sigma=0.5, seed=42)
    assert (xs, ys) == again
    fit = sizelaw.fit_log_power(xs, ys)
    assert abs(fit.beta - 1.1055) < 0.02
    report = sizelaw.decorrelation_report(ys, xs, 1.1055)
    assert abs(report.pearson_log) < 0.05


def test_pipeline_on_fixtures(tmp_path):
    files = sizelaw.run_pipeline(FIXTURES / "run.cfg", tmp_path / "run")
    assert "MANIFEST" in files
    assert "metrics.csv" in files
    rows = sizelaw.read_metrics_table(tmp_path / "run" / "metrics.csv")
    assert [r["project_id"] for r in rows] == sorted(r["project_id"] for r in rows)
    assert "Fits" in sizelaw.render_report(tmp_path / "run")
