"""Limit extrapolation, report assembly and the four analysis pipelines.

The engine emits exact integer sequences; this layer normalizes them, fits the
trailing window against a + b/n, attaches stabilization and bound data plus
optional cross-checks, and renders everything as a deterministic report
(rationals carried as num/den strings alongside 12-place decimals).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .cache import SequenceCache
from .engine import (
    LengthSequence,
    bound_checks,
    epsilon_length_sequence,
    eq1_decomposition_check,
    field_case_sequence,
    newton_multiplicity,
    normalized_values,
    stabilization_search,
    truncated_sequence,
    value_count_identity_checks,
)
from .errors import IngestionError, InternalInvariantError
from .instances import pair_digest, pair_digest_material
from .monomials import MonomialIdeal
from .pairs import GradedPair, check_hypotheses, krull_dims
from .semigroups import AffineSemigroup, level_counts, okounkov_data, verify_volume_limit
from .valuation import comparison_alpha, gamma_points, make_valuation, trivial_valuation

FORMAT_VERSION = "1"


def decimal_str(value: Fraction, places: int = 12) -> str:
    """Correctly rounded fixed-point rendering (ties away from zero)."""
    sign = "-" if value < 0 else ""
    num, den = abs(value.numerator), value.denominator
    scaled, rem = divmod(num * 10**places, den)
    if 2 * rem >= den:
        scaled += 1
    digits = str(scaled).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}" if places else f"{sign}{digits}"


def rational_payload(value: Fraction) -> dict[str, str]:
    return {
        "rational": f"{value.numerator}/{value.denominator}",
        "decimal": decimal_str(value),
    }


# -- extrapolation ---------------------------------------------------------------


@dataclass(frozen=True)
class Extrapolation:
    estimate: Fraction
    slope: Fraction
    window: int
    residual_sse: Fraction
    max_successive_difference: Fraction


def extrapolate(ns: list[int], values: list[Fraction], window: int) -> Extrapolation:
    """Exact least-squares fit of values ≈ a + b/n over the trailing window.

    Reports the intercept as the estimate together with the fit residual and
    the largest successive difference; consistency diagnostics, never a
    convergence claim.
    """
    if len(values) != len(ns):
        raise IngestionError("extrapolation inputs of different lengths")
    if len(values) < window + 2:
        raise IngestionError(
            f"extrapolation needs at least window+2 = {window + 2} terms, got {len(values)}"
        )
    if window < 2:
        raise IngestionError("extrapolation window must hold at least 2 points")
    xs = [Fraction(1, n) for n in ns[-window:]]
    ys = [Fraction(v) for v in values[-window:]]
    w = Fraction(len(xs))
    s1 = sum(xs, start=Fraction(0))
    s2 = sum((x * x for x in xs), start=Fraction(0))
    t0 = sum(ys, start=Fraction(0))
    t1 = sum((x * y for x, y in zip(xs, ys)), start=Fraction(0))
    denom = w * s2 - s1 * s1
    if denom == 0:
        raise InternalInvariantError("singular normal equations in extrapolation")
    a = (s2 * t0 - s1 * t1) / denom
    b = (w * t1 - s1 * t0) / denom
    sse = sum(((y - a - b * x) ** 2 for x, y in zip(xs, ys)), start=Fraction(0))
    diffs = [abs(ys[i] - ys[i - 1]) for i in range(1, len(ys))]
    return Extrapolation(
        estimate=a,
        slope=b,
        window=window,
        residual_sse=sse,
        max_successive_difference=max(diffs) if diffs else Fraction(0),
    )


# -- parameters -------------------------------------------------------------------


@dataclass
class AnalysisParams:
    n_max: int | None = None
    c: int | None = None
    c_max: int = 8
    window: int | None = None
    tol: Fraction = Fraction(1, 50)
    check_gamma: bool = False
    weights: list[str] | None = None
    beta: str | None = None
    cap: int | None = None

    def resolved_n_max(self, case: str) -> int:
        if self.n_max is not None:
            if self.n_max < 4:
                raise IngestionError("n_max must be at least 4")
            return self.n_max
        return 40 if case in ("ideal", "field") else 25

    def resolved_window(self, n_max: int) -> int:
        if self.window is not None:
            if not 2 <= self.window <= n_max - 2:
                raise IngestionError("window must sit inside the computed range")
            return self.window
        return max(2, min(20, n_max // 2))


def params_from_mapping(data: dict[str, Any]) -> AnalysisParams:
    params = AnalysisParams()
    for key in ("n_max", "c", "c_max", "window", "cap"):
        if data.get(key) is not None:
            value = data[key]
            if not isinstance(value, int) or value < 0:
                raise IngestionError(f"parameter {key!r} must be a nonnegative integer")
            setattr(params, key, value)
    if data.get("tol") is not None:
        try:
            tol = Fraction(str(data["tol"]))
        except (ValueError, ZeroDivisionError) as exc:
            raise IngestionError(f"unparseable tolerance {data['tol']!r}") from exc
        if not 0 < tol < 1:
            raise IngestionError("tolerance must lie strictly between 0 and 1")
        params.tol = tol
    params.check_gamma = bool(data.get("check_gamma", False))
    if data.get("weights") is not None:
        params.weights = [str(w) for w in data["weights"]]
    if data.get("beta") is not None:
        params.beta = str(data["beta"])
    return params


# -- report assembly ---------------------------------------------------------------


def _cached_sequence(
    cache: SequenceCache,
    pair: GradedPair,
    operation: str,
    n_max: int,
    compute,
    **key_params: Any,
) -> tuple[int, ...]:
    material = {
        "instance": pair_digest(pair),
        "operation": operation,
        "params": dict(sorted(key_params.items())),
    }
    hit = cache.lookup(material, n_max)
    if hit is not None:
        return tuple(hit)
    values = compute()
    cache.store(material, list(values))
    return tuple(values)


def _normalized_block(values: tuple[int, ...], dims) -> list[dict[str, Any]]:
    out = []
    for n, norm in enumerate(normalized_values(values, dims)):
        if norm is None:
            continue
        out.append({"n": n, **rational_payload(norm)})
    return out


def _ideal_case_x_ideal(pair: GradedPair) -> MonomialIdeal | None:
    """For single-fiber pairs with no relations: the generating x-ideal."""
    if pair.e != 1 or not pair.delta.is_zero or not pair.a_gens:
        return None
    return MonomialIdeal.generated_by(
        [pair.xpart(g) for g in pair.a_gens], pair.d
    )


def build_report(
    pair: GradedPair,
    case: str,
    params: AnalysisParams,
    cache: SequenceCache,
) -> dict[str, Any]:
    hyp = check_hypotheses(pair)
    hyp.require()
    dims = krull_dims(pair)
    n_max = params.resolved_n_max(case)
    window = params.resolved_window(n_max)

    if case == "field":
        if pair.d != 0:
            raise IngestionError("field case requires an empty base variable list")
        values = _cached_sequence(
            cache, pair, "field-case", n_max,
            lambda: field_case_sequence(pair, n_max).values,
        )
    else:
        if pair.d == 0:
            raise IngestionError("base is a field; run the field pipeline")
        values = _cached_sequence(
            cache, pair, "saturation-quotient", n_max,
            lambda: epsilon_length_sequence(pair, n_max, cap=params.cap).values,
        )

    norm = normalized_values(values, dims)
    fit = extrapolate(
        list(range(1, n_max + 1)),
        [x for x in norm if x is not None],
        window,
    )

    report: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "kind": "epsilon-report",
        "case": case,
        "instance": {"digest": pair_digest(pair), **pair_digest_material(pair)},
        "dims": {"dim_b": dims.dim_b, "dim_a": dims.dim_a},
        "hypotheses": {
            "holds": hyp.holds,
            "field_base": hyp.field_base,
            "facet_checks": [
                {"facet": list(names), "ok": ok} for names, ok in hyp.prime_checks
            ],
        },
        "parameters": {
            "n_max": n_max,
            "window": window,
            "c_max": params.c_max,
            "tol": rational_payload(params.tol),
            "check_gamma": params.check_gamma,
            "weights": params.weights,
            "beta": params.beta,
        },
        "sequence": {
            "kind": "field-case" if case == "field" else "saturation-quotient",
            "values": list(values),
            "normalized": _normalized_block(values, dims),
        },
        "extrapolation": {
            "method": "least-squares a + b/n on the trailing window",
            "estimate": rational_payload(fit.estimate),
            "slope": rational_payload(fit.slope),
            "window": fit.window,
            "residual_sse": rational_payload(fit.residual_sse),
            "max_successive_difference": rational_payload(
                fit.max_successive_difference
            ),
        },
    }

    verdicts: dict[str, str] = {}

    if case == "field":
        report["stabilization"] = {"applicable": False}
        bounds = bound_checks(pair, LengthSequence("field-case", values), [])
    else:
        stab = stabilization_search(pair, params.c_max, n_max)
        report["stabilization"] = {
            "applicable": True,
            "c0": stab.c0,
            "certified_n_max": stab.certified_n_max,
            "searched_c_max": stab.searched_c_max,
            "witnesses": {
                str(c): [{"n": n, "monomial": m} for n, m in ws]
                for c, ws in sorted(stab.witnesses.items())
            },
        }
        verdicts["stabilization"] = "found" if stab.holds() else "not-found"
        c_trunc = stab.c0 if stab.c0 is not None else params.c_max
        trunc_values = _cached_sequence(
            cache, pair, "truncated", n_max,
            lambda: truncated_sequence(pair, c_trunc, n_max).values,
            c=c_trunc,
        )
        bounds = bound_checks(
            pair,
            LengthSequence("saturation-quotient", values),
            [LengthSequence("truncated", trunc_values, c=c_trunc)],
        )

    report["bounds"] = [
        {
            "kind": b.kind,
            "exponent": b.exponent,
            "gamma": rational_payload(b.gamma),
            "max_ratio_at_n": b.at_n,
            "n_max": b.n_max,
        }
        for b in bounds
    ]
    verdicts["bounds"] = "pass"

    report["cross_checks"] = {}
    x_ideal = _ideal_case_x_ideal(pair) if case != "field" else None
    newton_block: dict[str, Any] = {"applicable": False}
    if x_ideal is not None:
        try:
            value = newton_multiplicity(x_ideal)
        except IngestionError:
            value = None
        if value is not None:
            gap = (
                abs(fit.estimate - value) / value if value != 0 else abs(fit.estimate)
            )
            newton_block = {
                "applicable": True,
                "value": rational_payload(value),
                "relative_gap": rational_payload(gap),
                "pass": gap <= params.tol,
            }
            verdicts["newton-cross-check"] = "pass" if gap <= params.tol else "fail"
    report["cross_checks"]["newton"] = newton_block

    if params.check_gamma and case != "field":
        report["cross_checks"]["value_semigroup"] = _gamma_cross_check(
            pair, params, report["stabilization"], n_max
        )
        verdicts["value-semigroup"] = (
            "pass" if report["cross_checks"]["value_semigroup"]["pass"] else "fail"
        )
    else:
        report["cross_checks"]["value_semigroup"] = {"applicable": False}

    report["verdicts"] = verdicts
    return report


def _gamma_cross_check(
    pair: GradedPair,
    params: AnalysisParams,
    stab_block: dict[str, Any],
    n_max: int,
) -> dict[str, Any]:
    """Value-filtration identities plus the volume-limit trend on the extracted
    point semigroup; run at a stabilized truncation rate so the cut is nontrivial."""
    weights = params.weights or ["1"] * pair.nvars
    if len(weights) == pair.d:
        weights = list(weights) + ["1"] * pair.e  # fiber variables default to 1
    v = make_valuation(weights, pair.nvars)
    c0 = stab_block.get("c0")
    c = params.c if params.c is not None else (c0 or 1) + 1
    beta = Fraction(params.beta) if params.beta is not None else None
    ident_n = min(n_max, 12)
    eq1 = eq1_decomposition_check(pair, v, c, beta, ident_n)
    eq_a, eq_t = value_count_identity_checks(pair, v, c, ident_n, beta)
    sg_a, _ = gamma_points(pair, v, c, n_max, beta)
    points_n_max = min(n_max, 16)
    block: dict[str, Any] = {
        "applicable": True,
        "c": c,
        "beta": str(sg_a.slope_bound),
        "identities": {
            "truncation": eq1.ok,
            "algebra_counts": eq_a.ok,
            "truncated_counts": eq_t.ok,
            "checked_n_max": ident_n,
        },
        "points_n_max": points_n_max,
        "points": [
            list(row)
            for row in sg_a.as_rows()
            if row[-1] <= points_n_max
        ],
        "variables": list(pair.all_vars),
    }
    if not (eq1.ok and eq_a.ok and eq_t.ok):
        bad = eq1.counterexample() or eq_a.counterexample() or eq_t.counterexample()
        raise InternalInvariantError(
            f"value-filtration identity failed at n={bad.n}: {bad.lhs} != {bad.rhs}"
        )
    counts = sg_a.counts()
    if not any(counts[1:]):
        block["limit_trend"] = {"applicable": False, "reason": "empty point set"}
        block["pass"] = True
        return block
    # Body from a capped level range (hulls in dimension >= 3 get expensive);
    # counts still use the full range.
    body_cap = min(n_max, 15)
    data = okounkov_data(
        AffineSemigroup.from_level_points(sg_a.levels[: body_cap + 1])
    )
    predicted = data.predicted_limit
    trace = [
        (n, Fraction(counts[data.m * n], n**data.q))
        for n in range(1, n_max // max(data.m, 1) + 1)
    ]
    observed = trace[-1][1]
    rel = abs(observed - predicted) / predicted if predicted else None
    # The body built from attained points undershoots the true cross-section
    # (the value cut is strict), so the honest criterion is: the gap to the
    # predicted limit shrinks along the tail, or the endpoint is already close.
    tail = trace[-min(10, max(2, len(trace) // 2)):]
    gaps = [abs(norm - predicted) for _, norm in tail]
    shrinking = all(a >= b for a, b in zip(gaps, gaps[1:]))
    passed = (rel is not None and rel <= Fraction(1, 20)) or shrinking
    block["limit_trend"] = {
        "applicable": True,
        "body_level_cap": body_cap,
        "predicted": rational_payload(predicted),
        "observed": rational_payload(observed),
        "relative_error": rational_payload(rel) if rel is not None else None,
        "gap_shrinking_on_tail": shrinking,
        "pass": passed,
    }
    block["pass"] = passed
    return block


# -- pipelines -----------------------------------------------------------------------


def run_pair(pair: GradedPair, params: AnalysisParams, cache: SequenceCache) -> dict[str, Any]:
    case = "field" if pair.d == 0 else "pair"
    return build_report(pair, case, params, cache)


def run_ideal(pair: GradedPair, params: AnalysisParams, cache: SequenceCache) -> dict[str, Any]:
    return build_report(pair, "ideal", params, cache)


def run_module(pair: GradedPair, params: AnalysisParams, cache: SequenceCache) -> dict[str, Any]:
    return build_report(pair, "module", params, cache)


def run_field(pair: GradedPair, params: AnalysisParams, cache: SequenceCache) -> dict[str, Any]:
    return build_report(pair, "field", params, cache)


def analyze_semigroup(generators: list[tuple[int, ...]], n_max: int) -> dict[str, Any]:
    from .semigroups import level_counts

    s = AffineSemigroup.from_generators(generators)
    data = okounkov_data(s)
    counts = level_counts(s, data.m * n_max)
    return {
        "format_version": FORMAT_VERSION,
        "kind": "semigroup-analysis",
        "generators": [list(g) for g in s.generators or ()],
        "m": data.m,
        "q": data.q,
        "index": data.index,
        "volume": rational_payload(data.volume),
        "predicted_limit": rational_payload(data.predicted_limit),
        "body_vertices": [
            [f"{x.numerator}/{x.denominator}" for x in vert]
            for vert in data.body_vertices
        ],
        "group_basis": [list(b) for b in data.group_basis],
        "counts": counts,
    }


def verify_semigroup_limit(
    generators: list[tuple[int, ...]], n_max: int, tol: Fraction
) -> dict[str, Any]:
    s = AffineSemigroup.from_generators(generators)
    verdict = verify_volume_limit(s, n_max, tol)
    return {
        "format_version": FORMAT_VERSION,
        "kind": "volume-limit-verification",
        "passed": verdict.passed,
        "relative_error": rational_payload(verdict.relative_error)
        if verdict.relative_error is not None
        else None,
        "tolerance": rational_payload(Fraction(tol)),
        "m": verdict.data.m,
        "q": verdict.data.q,
        "index": verdict.data.index,
        "volume": rational_payload(verdict.data.volume),
        "predicted_limit": rational_payload(verdict.data.predicted_limit),
        "trace": [
            {
                "n": row.n,
                "count": row.count,
                "normalized": rational_payload(row.normalized),
                "predicted": rational_payload(row.predicted),
            }
            for row in verdict.trace
        ],
    }


# -- rendering ------------------------------------------------------------------------


def sequence_csv(report: dict[str, Any]) -> str:
    """`n,length,normalized,normalized_decimal` with exact rationals."""
    values = report["sequence"]["values"]
    normalized = {row["n"]: row for row in report["sequence"]["normalized"]}
    lines = ["n,length,normalized,normalized_decimal"]
    for n, v in enumerate(values):
        if n == 0:
            continue
        row = normalized[n]
        lines.append(f"{n},{v},{row['rational']},{row['decimal']}")
    return "\n".join(lines) + "\n"


def trace_csv(verification: dict[str, Any]) -> str:
    """`n,count,normalized,predicted` rows of a volume-limit verification."""
    lines = ["n,count,normalized,predicted"]
    for row in verification["trace"]:
        lines.append(
            f"{row['n']},{row['count']},{row['normalized']['decimal']},{row['predicted']['decimal']}"
        )
    return "\n".join(lines) + "\n"


def gamma_csv(points_rows: list[tuple[int, ...]], var_names: list[str]) -> str:
    header = ",".join(list(var_names) + ["n"])
    lines = [header]
    for row in points_rows:
        lines.append(",".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def render_text(report: dict[str, Any]) -> str:
    """Aligned plain-text rendering of an epsilon report."""
    lines: list[str] = []

    def field(label: str, value: Any) -> None:
        lines.append(f"{label:<28}{value}")

    field("case", report["case"])
    field("instance digest", report["instance"]["digest"][:16])
    field("base variables", ", ".join(report["instance"]["base_variables"]) or "(field)")
    field("fiber variables", ", ".join(report["instance"]["fiber_variables"]))
    field("relations", ", ".join(report["instance"]["delta"]) or "(none)")
    field("generators", ", ".join(report["instance"]["subalgebra_generators"]) or "(none)")
    field("dim B / dim A", f"{report['dims']['dim_b']} / {report['dims']['dim_a']}")
    field("hypotheses", "hold" if report["hypotheses"]["holds"] else "FAIL")
    stab = report["stabilization"]
    if stab.get("applicable", True):
        field(
            "stabilization constant",
            f"{stab['c0']} (certified to n = {stab['certified_n_max']})"
            if stab["c0"] is not None
            else f"not found up to c = {stab['searched_c_max']}",
        )
    extra = report["extrapolation"]
    field(
        "limit estimate",
        f"{extra['estimate']['decimal']}  (= {extra['estimate']['rational']})",
    )
    field("fit residual (sse)", extra["residual_sse"]["decimal"])
    field("max successive diff", extra["max_successive_difference"]["decimal"])
    newton = report["cross_checks"]["newton"]
    if newton.get("applicable"):
        status = "ok" if newton["pass"] else "MISMATCH"
        field(
            "staircase multiplicity",
            f"{newton['value']['decimal']} ({status}, gap {newton['relative_gap']['decimal']})",
        )
    gamma = report["cross_checks"]["value_semigroup"]
    if gamma.get("applicable"):
        field("value-semigroup checks", "ok" if gamma["pass"] else "FAIL")
    for bound in report["bounds"]:
        field(
            f"bound {bound['kind']}",
            f"l_n <= {bound['gamma']['rational']} * n^{bound['exponent']}",
        )
    field("verdicts", ", ".join(f"{k}={v}" for k, v in sorted(report["verdicts"].items())))
    lines.append("")
    lines.append(f"{'n':>4}  {'length':>14}  {'normalized':>18}  {'decimal':>16}")
    normalized = {row["n"]: row for row in report["sequence"]["normalized"]}
    for n, value in enumerate(report["sequence"]["values"]):
        if n == 0:
            continue
        row = normalized[n]
        lines.append(
            f"{n:>4}  {value:>14}  {row['rational']:>18}  {row['decimal']:>16}"
        )
    return "\n".join(lines) + "\n"
