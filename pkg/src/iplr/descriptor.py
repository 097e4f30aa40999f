"""Versioned JSON descriptor of a constructed rule."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .criteria import CriterionKind
from .gfpoly import is_irreducible, poly_from_int, poly_to_int
from .interlace import InterlacedRule
from .lattice import PolyLatticeRule
from .walsh import Weights

SCHEMA_VERSION = "1"
_FIELDS = {"schema_version", "b", "m", "s", "d", "p", "q", "criterion", "weights", "provenance"}
_PROVENANCE = {"algorithm", "elapsed", "version", "criterion_value"}


class DescriptorError(ValueError):
    pass


@dataclass
class RuleDescriptor:
    rule: InterlacedRule
    criterion: CriterionKind
    weights: Weights
    provenance: dict = field(default_factory=dict)

    @classmethod
    def from_result(cls, result) -> "RuleDescriptor":
        from . import __version__

        cfg = result.config
        prov = {
            "algorithm": result.algorithm,
            "elapsed": result.elapsed,
            "version": __version__,
            "criterion_value": result.value.value,
        }
        return cls(result.rule, cfg.criterion, cfg.weights, prov)

    def to_json(self) -> dict:
        r = self.rule
        return {
            "schema_version": SCHEMA_VERSION,
            "b": r.b,
            "m": r.m,
            "s": r.s,
            "d": r.d,
            "p": poly_to_int(r.base.p),
            "q": [poly_to_int(qj) for qj in r.base.q],
            "criterion": self.criterion.to_json(),
            "weights": self.weights.to_json(),
            "provenance": dict(self.provenance),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: Mapping) -> "RuleDescriptor":
        if not isinstance(obj, Mapping):
            raise DescriptorError("descriptor must be a JSON object")
        unknown = set(obj) - _FIELDS
        if unknown:
            raise DescriptorError(f"unknown descriptor fields: {sorted(unknown)}")
        missing = _FIELDS - {"provenance"} - set(obj)
        if missing:
            raise DescriptorError(f"missing descriptor fields: {sorted(missing)}")
        if obj["schema_version"] != SCHEMA_VERSION:
            raise DescriptorError(f"unsupported schema_version {obj['schema_version']!r}")
        prov = dict(obj.get("provenance", {}))
        if set(prov) - _PROVENANCE:
            raise DescriptorError(f"unknown provenance fields: {sorted(set(prov) - _PROVENANCE)}")
        try:
            b, m, s, d = (_int(obj[k], k) for k in ("b", "m", "s", "d"))
            p = poly_from_int(_int(obj["p"], "p"), b)
            if p.degree != m or not is_irreducible(p):
                raise DescriptorError("p must be irreducible of degree m")
            q = obj["q"]
            if not isinstance(q, list) or len(q) != d * s:
                raise DescriptorError(f"q must list d*s = {d * s} encodings")
            if any(not 0 < _int(c, "q") < b**m for c in q):
                raise DescriptorError("q encodings must lie in 1..b**m - 1")
            base = PolyLatticeRule(b, m, p, tuple(poly_from_int(int(c), b) for c in q))
            rule = InterlacedRule(d, s, base)
            crit = CriterionKind.from_json(obj["criterion"])
            crit.validate(d)
            weights = Weights.from_json(obj["weights"])
        except (KeyError, TypeError) as exc:
            raise DescriptorError(f"malformed descriptor: {exc}") from exc
        except DescriptorError:
            raise
        except ValueError as exc:
            raise DescriptorError(str(exc)) from exc
        if weights.s != s:
            raise DescriptorError("weights dimension does not match s")
        return cls(rule, crit, weights, prov)

    @classmethod
    def loads(cls, text: str) -> "RuleDescriptor":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DescriptorError(f"invalid JSON: {exc}") from exc
        return cls.from_json(obj)


def _int(v, name: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise DescriptorError(f"{name} must be an integer")
    return v
