from __future__ import annotations

import json
from fractions import Fraction

import pytest

from epsmult.analysis import (
    AnalysisParams,
    analyze_semigroup,
    build_report,
    decimal_str,
    extrapolate,
    params_from_mapping,
    sequence_csv,
    trace_csv,
    verify_semigroup_limit,
)
from epsmult.cache import SequenceCache
from epsmult.errors import IngestionError
from epsmult.instances import (
    load_document,
    parse_ideal_document,
    parse_module_document,
    parse_pair_document,
)

F = Fraction


class TestDecimalRendering:
    def test_exact_integer(self):
        assert decimal_str(F(1)) == "1.000000000000"

    def test_rounding_matches_rational(self):
        assert decimal_str(F(1, 3)) == "0.333333333333"
        assert decimal_str(F(2, 3)) == "0.666666666667"

    def test_negative(self):
        assert decimal_str(F(-5, 4)) == "-1.250000000000"

    def test_tie_rounds_away(self):
        assert decimal_str(F(1, 2 * 10**12)) == "0.000000000001"


class TestExtrapolate:
    def test_exact_hyperbola(self):
        ns = list(range(1, 21))
        values = [F(1) + F(1, n) for n in ns]
        fit = extrapolate(ns, values, 10)
        assert fit.estimate == 1
        assert fit.residual_sse == 0

    def test_constant_sequence(self):
        ns = list(range(1, 15))
        fit = extrapolate(ns, [F(7, 2)] * 14, 8)
        assert fit.estimate == F(7, 2)
        assert fit.residual_sse == 0
        assert fit.max_successive_difference == 0

    def test_too_few_terms(self):
        with pytest.raises(IngestionError):
            extrapolate([1, 2, 3], [F(1)] * 3, 4)

    def test_reports_nonzero_residual(self):
        ns = list(range(1, 25))
        values = [F(6) + F(6, n) + F(1, n * n) for n in ns]
        fit = extrapolate(ns, values, 12)
        assert fit.residual_sse > 0
        assert abs(fit.estimate - 6) < F(1, 100)


class TestCache:
    def test_roundtrip(self, tmp_path):
        cache = SequenceCache(tmp_path)
        material = {"instance": "abc", "operation": "x", "params": {}}
        assert cache.lookup(material, 3) is None
        cache.store(material, [0, 1, 2, 3, 4])
        assert cache.lookup(material, 3) == [0, 1, 2, 3]
        assert cache.lookup(material, 4) == [0, 1, 2, 3, 4]

    def test_prefix_miss_on_longer_request(self, tmp_path):
        cache = SequenceCache(tmp_path)
        material = {"instance": "abc", "operation": "x", "params": {}}
        cache.store(material, [0, 1])
        assert cache.lookup(material, 5) is None

    def test_longer_entry_kept(self, tmp_path):
        cache = SequenceCache(tmp_path)
        material = {"instance": "abc", "operation": "x", "params": {}}
        cache.store(material, [0, 1, 2, 3])
        cache.store(material, [0, 1])
        assert cache.lookup(material, 3) == [0, 1, 2, 3]

    def test_distinct_keys(self, tmp_path):
        cache = SequenceCache(tmp_path)
        a = {"instance": "abc", "operation": "x", "params": {}}
        b = {"instance": "abd", "operation": "x", "params": {}}
        cache.store(a, [0, 1])
        assert cache.lookup(b, 1) is None

    def test_corrupt_entry_discarded(self, tmp_path):
        cache = SequenceCache(tmp_path)
        material = {"instance": "abc", "operation": "x", "params": {}}
        cache.store(material, [0, 1, 2])
        path = next(tmp_path.glob("*.json"))
        path.write_text("{not json", encoding="utf-8")
        assert cache.lookup(material, 2) is None
        assert not path.exists()

    def test_disabled_cache(self):
        cache = SequenceCache(None)
        material = {"instance": "abc", "operation": "x", "params": {}}
        cache.store(material, [0, 1])
        assert cache.lookup(material, 1) is None


class TestIngestion:
    def test_json_and_toml_agree(self, tmp_path):
        j = tmp_path / "i.json"
        t = tmp_path / "i.toml"
        j.write_text(
            json.dumps(
                {
                    "base_variables": ["x", "y"],
                    "fiber_variables": ["t"],
                    "delta": [],
                    "subalgebra_generators": ["x^2*t", "x*y*t"],
                }
            ),
            encoding="utf-8",
        )
        t.write_text(
            'base_variables = ["x", "y"]\n'
            'fiber_variables = ["t"]\n'
            "delta = []\n"
            'subalgebra_generators = ["x^2*t", "x*y*t"]\n',
            encoding="utf-8",
        )
        pj = parse_pair_document(load_document(j))
        pt = parse_pair_document(load_document(t))
        assert pj == pt

    def test_ideal_document_encoding(self):
        pair = parse_ideal_document(
            {"variables": ["x", "y"], "generators": ["x^2", "x*y"]}
        )
        assert pair.fiber_vars == ("t",)
        assert set(pair.a_gens) == {(2, 0, 1), (1, 1, 1)}

    def test_ideal_fiber_name_collision_avoided(self):
        pair = parse_ideal_document({"variables": ["t", "x"], "generators": ["t*x"]})
        assert pair.fiber_vars == ("t0",)

    def test_module_document_encoding(self):
        pair = parse_module_document(
            {
                "variables": ["x", "y"],
                "rank": 2,
                "generators": [["x", 1], ["y", 2]],
            }
        )
        assert pair.fiber_vars == ("e1", "e2")
        assert set(pair.a_gens) == {(1, 0, 1, 0), (0, 1, 0, 1)}

    def test_module_bad_component(self):
        with pytest.raises(IngestionError):
            parse_module_document(
                {"variables": ["x"], "rank": 1, "generators": [["x", 2]]}
            )

    def test_missing_field(self):
        with pytest.raises(IngestionError, match="missing"):
            parse_pair_document({"base_variables": ["x"]})

    def test_params_validation(self):
        with pytest.raises(IngestionError):
            params_from_mapping({"tol": "3/2"})
        with pytest.raises(IngestionError):
            params_from_mapping({"n_max": -2})
        p = params_from_mapping({"tol": "0.01", "n_max": 12})
        assert p.tol == F(1, 100) and p.n_max == 12


class TestReports:
    def _report(self, params=None, cache=None):
        pair = parse_ideal_document(
            {"variables": ["x", "y"], "generators": ["x^2", "x*y"]}
        )
        return build_report(
            pair,
            "ideal",
            params or AnalysisParams(n_max=12),
            cache or SequenceCache(None),
        )

    def test_report_shape(self):
        report = self._report()
        assert report["format_version"] == "1"
        assert report["dims"] == {"dim_b": 3, "dim_a": 3}
        assert report["stabilization"]["c0"] == 2
        assert report["sequence"]["values"][4] == 10
        assert report["extrapolation"]["estimate"]["rational"] == "1/1"

    def test_deterministic_bytes(self):
        a = json.dumps(self._report(), sort_keys=True)
        b = json.dumps(self._report(), sort_keys=True)
        assert a == b

    def test_cache_hit_is_identical(self, tmp_path):
        cache = SequenceCache(tmp_path)
        first = self._report(cache=cache)
        second = self._report(cache=cache)
        assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)

    def test_shorter_rerun_reuses_prefix(self, tmp_path):
        cache = SequenceCache(tmp_path)
        full = self._report(AnalysisParams(n_max=14), cache)
        short = self._report(AnalysisParams(n_max=10), cache)
        assert short["sequence"]["values"] == full["sequence"]["values"][:11]

    def test_every_estimate_carries_diagnostics(self):
        report = self._report()
        extra = report["extrapolation"]
        assert "residual_sse" in extra and "max_successive_difference" in extra

    def test_decimal_agrees_with_rational(self):
        report = self._report()
        for row in report["sequence"]["normalized"]:
            num, den = map(int, row["rational"].split("/"))
            assert decimal_str(F(num, den)) == row["decimal"]

    def test_csv_rendering(self):
        report = self._report()
        text = sequence_csv(report)
        lines = text.strip().splitlines()
        assert lines[0] == "n,length,normalized,normalized_decimal"
        assert lines[1] == "1,1,2/1,2.000000000000"

    def test_semigroup_blocks(self):
        analysis = analyze_semigroup([(0, 1), (1, 1)], 10)
        assert analysis["predicted_limit"]["rational"] == "1/1"
        verification = verify_semigroup_limit([(1, 1), (3, 1)], 50, F(1, 50))
        assert verification["passed"]
        text = trace_csv(verification)
        assert text.startswith("n,count,normalized,predicted")
