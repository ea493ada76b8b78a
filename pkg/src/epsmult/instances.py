"""Instance ingestion: JSON/TOML documents into graded pairs and semigroups.

The pair schema is the canonical one (`base_variables`, `fiber_variables`,
`delta`, `subalgebra_generators`); ideal and module documents are convenience
encodings that expand into it. Digests are taken over the normalized pair
data so that equivalent JSON/TOML inputs share cache entries.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - environment dependent
    import tomli as tomllib

from .errors import IngestionError
from .monomials import format_monomial, parse_monomial
from .pairs import GradedPair, make_pair


def load_document(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IngestionError(f"cannot read instance file {path}: {exc}") from exc
    if path.suffix.lower() == ".toml":
        try:
            return tomllib.loads(raw.decode("utf-8"))
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
            raise IngestionError(f"invalid TOML in {path}: {exc}") from exc
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError):
        try:
            return tomllib.loads(raw.decode("utf-8"))
        except Exception as exc:
            raise IngestionError(f"{path} is neither valid JSON nor TOML") from exc
    if not isinstance(doc, dict):
        raise IngestionError(f"instance document in {path} must be a table/object")
    return doc


def _require(doc: dict[str, Any], key: str, kind: type, what: str) -> Any:
    if key not in doc:
        raise IngestionError(f"{what} document is missing the field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise IngestionError(f"field {key!r} must be of type {kind.__name__}")
    return value


def _name_list(doc: dict[str, Any], key: str, what: str) -> list[str]:
    names = _require(doc, key, list, what)
    for n in names:
        if not isinstance(n, str) or not n or not n[0].isalpha():
            raise IngestionError(f"bad variable name {n!r} in {key!r}")
    return list(names)


def parse_pair_document(doc: dict[str, Any]) -> GradedPair:
    base = _name_list(doc, "base_variables", "pair")
    fiber = _name_list(doc, "fiber_variables", "pair")
    all_vars = base + fiber
    delta = [
        parse_monomial(t, all_vars)
        for t in _require(doc, "delta", list, "pair")
    ]
    gens = [
        parse_monomial(t, all_vars)
        for t in _require(doc, "subalgebra_generators", list, "pair")
    ]
    return make_pair(base, fiber, delta, gens)


def _fresh_names(stems: list[str], taken: list[str]) -> list[str]:
    out = []
    used = set(taken)
    for stem in stems:
        name = stem
        k = 0
        while name in used:
            name = f"{stem}{k}"
            k += 1
        used.add(name)
        out.append(name)
    return out


def parse_ideal_document(doc: dict[str, Any]) -> GradedPair:
    """Encode an ideal I ⊆ R as the pair R[I·t] ⊂ R[t]."""
    variables = _name_list(doc, "variables", "ideal")
    gens_text = _require(doc, "generators", list, "ideal")
    (t_name,) = _fresh_names(["t"], variables)
    all_vars = variables + [t_name]
    a_gens = []
    for text in gens_text:
        exps = parse_monomial(text, variables)
        a_gens.append(tuple(exps) + (1,))
    return make_pair(variables, [t_name], [], a_gens)


def parse_module_document(doc: dict[str, Any]) -> GradedPair:
    """Encode a submodule of a free module as a subalgebra of a polynomial
    extension: generator (monomial, component j) becomes monomial·e_j."""
    variables = _name_list(doc, "variables", "module")
    rank = _require(doc, "rank", int, "module")
    if rank < 1:
        raise IngestionError("module rank must be at least 1")
    gens_raw = _require(doc, "generators", list, "module")
    fiber = _fresh_names([f"e{j}" for j in range(1, rank + 1)], variables)
    a_gens = []
    for item in gens_raw:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise IngestionError(
                "module generators must be [monomial, component] pairs"
            )
        text, comp = item
        if not isinstance(comp, int) or not 1 <= comp <= rank:
            raise IngestionError(f"component index {comp!r} outside 1..{rank}")
        exps = parse_monomial(text, variables)
        tail = [0] * rank
        tail[comp - 1] = 1
        a_gens.append(tuple(exps) + tuple(tail))
    return make_pair(variables, fiber, [], a_gens)


def parse_field_document(doc: dict[str, Any]) -> GradedPair:
    pair = parse_pair_document(doc)
    if pair.d != 0:
        raise IngestionError(
            "field-case documents must have an empty base_variables list"
        )
    return pair


def parse_semigroup_document(doc: dict[str, Any]) -> list[tuple[int, ...]]:
    gens_raw = _require(doc, "generators", list, "semigroup")
    gens = []
    for item in gens_raw:
        if not isinstance(item, (list, tuple)) or not item:
            raise IngestionError("semigroup generators must be nonempty integer vectors")
        if not all(isinstance(x, int) for x in item):
            raise IngestionError(f"non-integer entry in generator {item!r}")
        gens.append(tuple(item))
    return gens


def instance_weights(doc: dict[str, Any]) -> list[str] | None:
    w = doc.get("weights")
    if w is None:
        return None
    if not isinstance(w, list) or not all(isinstance(x, (str, int)) for x in w):
        raise IngestionError("weights must be a list of rational strings like \"3/2\"")
    return [str(x) for x in w]


def pair_digest_material(pair: GradedPair) -> dict[str, Any]:
    return {
        "base_variables": list(pair.base_vars),
        "fiber_variables": list(pair.fiber_vars),
        "delta": [format_monomial(g, pair.all_vars) for g in pair.delta.gens],
        "subalgebra_generators": [
            format_monomial(g, pair.all_vars) for g in pair.a_gens
        ],
    }


def pair_digest(pair: GradedPair) -> str:
    blob = json.dumps(pair_digest_material(pair), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
