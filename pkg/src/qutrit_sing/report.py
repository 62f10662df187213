"""Serializable reports: per-state classification and the dual-variety onion.

JSON output is canonical: fixed key order, points sorted by home chart and
coordinates, no wall-clock data unless timings are requested explicitly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .classify import SectionClassification
from .segre import StateTensor

__all__ = [
    "ClassificationReport",
    "OnionLayer",
    "OnionReport",
    "onion_for",
    "canonical_json",
]


_INNER_ARRAY = re.compile(r"\[\n\s*([^\[\]{}]*?)\n\s*\]")


def canonical_json(obj) -> str:
    """Indented JSON with innermost arrays kept on one line."""
    text = json.dumps(obj, indent=2, ensure_ascii=True)
    # JSON strings never hold raw newlines, so ",\n" only separates items
    text = _INNER_ARRAY.sub(
        lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",\n")) + "]", text)
    return text + "\n"


@dataclass
class ClassificationReport:
    state: StateTensor
    result: SectionClassification
    seed: int | None = None
    include_timings: bool = False

    def to_json_obj(self):
        r = self.result
        obj = {
            "input": self.state.to_json_obj(),
            "verdict": r.verdict,
            "summary": r.summary,
            "stratum": r.stratum_label,
            "milnor_sum": r.milnor_sum,
            "points": [p.to_json_obj() for p in r.points],
            "charts": [c.to_json_obj() for c in r.charts],
            "non_isolated_witness": None if r.witness_chart is None else {
                "chart": str(r.witness_chart), "dimension": r.witness_dimension},
            "onion": onion_for(r).to_json_obj(),
            "tolerances": r.tolerances.as_dict(),
            "seed": self.seed,
            "warnings": list(r.warnings),
        }
        if self.include_timings:
            obj["timings"] = {k: round(v, 6) for k, v in sorted(r.timings.items())}
        return obj

    def to_json(self) -> str:
        return canonical_json(self.to_json_obj())

    def to_text(self) -> str:
        r = self.result
        lines = [f"verdict : {r.verdict}",
                 f"summary : {r.summary}",
                 f"stratum : {r.stratum_label}"]
        if r.milnor_sum is not None:
            lines.append(f"milnor  : {r.milnor_sum}")
        if r.witness_chart is not None:
            lines.append(f"witness : chart {r.witness_chart}, dimension {r.witness_dimension}")
        for p in r.points:
            label = p.location.basis_label()
            where = f"|{label}>" if label else repr(p.location)
            kind = p.local_type.label if p.local_type else "?"
            lines.append(f"  {kind:<6} at {where}  chart {p.home_chart}  hessian rank {p.hessian_rank}")
        lines.append("")
        lines.append(onion_for(r).to_text())
        for w in r.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class OnionLayer:
    name: str
    milnor: int | None

    @property
    def label(self):
        return self.name if self.name in ("NotOnDual", "DualSmooth", "NonIsolated") \
            else f"{self.name}{{{self.milnor}}}"


@dataclass
class OnionReport:
    """Strata ordered from the open complement of the dual variety inwards."""

    layers: list
    position: int | None

    def to_json_obj(self):
        return {"layers": [{"stratum": l.label, "milnor": l.milnor,
                            "current": i == self.position}
                           for i, l in enumerate(self.layers)],
                "position": None if self.position is None else self.layers[self.position].label}

    def to_text(self):
        out = ["onion (outermost first; one line per Milnor sum):"]
        levels = {}
        for i, layer in enumerate(self.layers):
            levels.setdefault(layer.milnor, []).append(
                layer.label + ("  <== state" if i == self.position else ""))
        for depth, (mu, names) in enumerate(levels.items()):
            tag = "inf" if mu is None else str(mu)
            out.append(f"  {'  ' * min(depth, 8)}[{tag}] " + "   ".join(names))
        return "\n".join(out)


def onion_for(result: SectionClassification, depth: int = 6) -> OnionReport:
    """Build the nested strata around the classified state.

    Node and cusp layers are listed for every Milnor sum from 2 up to
    ``depth`` (or the state's own sum if larger); non-isolated sections sit
    innermost.
    """
    name, mult = result.stratum
    top = max(depth, mult or 0)
    layers = [OnionLayer("NotOnDual", 0), OnionLayer("DualSmooth", 1)]
    for m in range(2, top + 1):
        layers.append(OnionLayer("Node", m))
        layers.append(OnionLayer("Cusp", m))
    layers.append(OnionLayer("NonIsolated", None))
    position = next((i for i, l in enumerate(layers)
                     if l.name == name and (l.milnor == mult or mult is None)), None)
    return OnionReport(layers, position)
