import json
import math

import numpy as np
import pytest

from subordlab.config import Config
from subordlab.dominants import DominantSpec
from subordlab.errors import GeneratorStarved, IoFailure, UnknownCase
from subordlab.harness import (
    TrialReport,
    converse_of,
    falsify,
    get_case,
    load_report,
    persist_report,
    registry,
    run_case,
)
from subordlab.harness.cases import tuneski_ratio
from subordlab.power_series import TaylorSeries, ValuedSeries, evaluate

THEOREM_IDS = {
    "thm-2.1", "cor-kcor", "cor-6M", "cor-corF", "cor-sector-F", "cor-gstar", "cor-ez", "cor-sqrt",
    "cor-ss", "thm-janowski", "cor-phi-list", "thm-slit-a", "thm-odl", "cor-fz-over-z",
    "thm-existence", "cor-bernardi-star", "thm-two-fn", "lem-1", "thm-ratio", "thm-theta",
    "cor-tuneski", "thm-fz", "cor-fprime", "lem-2", "thm-ratio-2", "thm-theta-2", "thm-fz-2",
    "cor-last",
}


class TestRegistry:
    def test_contents(self):
        ids = [c.id for c in registry(include_controls=False)]
        assert len(ids) >= 28 and set(ids) == THEOREM_IDS
        assert len(set(ids)) == len(ids)

    def test_controls(self):
        controls = {c.id for c in registry() if c.converse}
        assert "converse-of(cor-ez)" in controls and "planted-defect" in controls
        assert converse_of("cor-ez").id == "converse-of(cor-ez)"

    def test_stable_order(self):
        assert [c.id for c in registry()] == [c.id for c in registry()]

    def test_unknown(self):
        with pytest.raises(UnknownCase):
            get_case("thm-none")
        with pytest.raises(UnknownCase):
            run_case("thm-none", 1)

    def test_generators_deterministic(self):
        cfg = Config()
        u = np.random.default_rng(0).random(32)
        for case in registry():
            a, b = case.build(u, cfg), case.build(u, cfg)
            assert a.keys() == b.keys()


class TestRunCase:
    def test_cor_ez(self):
        r = run_case("cor-ez", 100, seed=7)
        assert r.failures == 0 and r.passes + r.inconclusive + r.failures == r.trials == 100

    def test_thm_odl(self):
        r = run_case("thm-odl", 100, seed=1)
        assert r.failures == 0 and r.worst_margin > 0

    def test_deterministic(self):
        a = run_case("cor-ez", 20, seed=3)
        b = run_case("cor-ez", 20, seed=3)
        assert a == b and a.witness == b.witness

    def test_workers_do_not_change_report(self):
        a = run_case("cor-sqrt", 12, seed=5)
        b = run_case("cor-sqrt", 12, seed=5, workers=3)
        assert a == b

    def test_seed_changes_witness(self):
        a = run_case("cor-ez", 10, seed=1)
        b = run_case("cor-ez", 10, seed=2)
        assert a.failures == b.failures == 0 and a.witness["u"] != b.witness["u"]

    def test_starvation(self):
        r = run_case("thm-slit-a", 3, seed=0)
        assert r.starved and r.skipped == 3 and r.inconclusive == 3
        with pytest.raises(GeneratorStarved):
            run_case("thm-slit-a", 3, seed=0, strict_starvation=True)

    def test_summary(self):
        s = run_case("cor-ez", 5, seed=0).summary()
        assert s.startswith("cor-ez: ") and "0 fail" in s


class TestPersist:
    def test_round_trip(self, tmp_path):
        r = run_case("cor-sqrt", 5, seed=4)
        path = tmp_path / "report.json"
        persist_report(r, path)
        back = load_report(path)
        assert back == r and back.witness == json.loads(json.dumps(r.witness))

    def test_infinite_margin(self, tmp_path):
        r = TrialReport("x", 0, 0)
        persist_report(r, tmp_path / "r.json")
        assert math.isinf(load_report(tmp_path / "r.json").worst_margin)

    def test_io_errors(self, tmp_path):
        with pytest.raises(IoFailure):
            persist_report(TrialReport("x", 0, 0), tmp_path / "missing" / "r.json")
        with pytest.raises(IoFailure):
            load_report(tmp_path / "nothing.json")
        (tmp_path / "bad.json").write_text("{not json")
        with pytest.raises(IoFailure):
            load_report(tmp_path / "bad.json")


class TestTuneski:
    A = 0.9

    def instance(self, cfg):
        f = ValuedSeries(1, TaylorSeries.geometric(self.A, cfg.order))
        return {"f": f, "p": f.log_derivative()}

    def test_ratio(self):
        f = self.instance(Config())["f"]
        assert tuneski_ratio(f).allclose(TaylorSeries([0, 2 * self.A], 64), atol=1e-12)

    def test_single_trial(self):
        cfg = Config()
        case = get_case("cor-tuneski")
        inst = self.instance(cfg)
        hyp = case.hypothesis(inst, cfg)
        assert hyp.holds and hyp.detail["sup"] == pytest.approx(1.8 * 0.999, rel=1e-9)
        assert case.conclusion(inst, cfg).holds is True


class TestFalsify:
    def test_converse_found(self):
        r = falsify("converse-of(cor-ez)", budget=10_000, seed=0, stop_after=1)
        assert r.failures >= 1 and r.witness is not None and r.worst_margin < 0

    def test_planted_defect(self):
        r = falsify("planted-defect", budget=50, seed=0, stop_after=1)
        assert r.failures >= 1

    def test_refinement_counts_trial(self):
        r = falsify("cor-ez", budget=30, seed=0)
        assert r.failures == 0 and r.passes + r.inconclusive + r.failures == r.trials

    @pytest.mark.slow
    def test_cor_ez_survives(self):
        r = falsify("cor-ez", budget=10_000, seed=0, refine=5)
        assert r.failures == 0
