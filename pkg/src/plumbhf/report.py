"""Deterministic JSON reports (schema version 1).

Rationals serialize as reduced strings ``"p/q"`` (``q > 0``) or ``"p"``;
sectors are ordered torsion first, then by absolute label with the
positive one leading; byte-identical output for identical inputs.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from . import __version__
from .assembly import FullReport, SectorResult, Summand, SummandKind
from .charvec import lattice_context
from .config import max_states
from .graphs import PlumbingGraph, classify_form

SCHEMA_VERSION = 1


def frac_str(x) -> Optional[str]:
    if x is None:
        return None
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


def summand_obj(s: Summand) -> dict:
    obj: dict = {"type": s.kind.value}
    if s.kind is SummandKind.CYCLIC:
        obj["length"] = s.length
    obj["bottom"] = frac_str(s.bottom)
    obj["parity"] = s.parity
    return obj


def sector_obj(g: PlumbingGraph, res: SectorResult) -> dict:
    return {
        "label": res.sector.label,
        "torsion": res.sector.torsion,
        "representative": g.pairing_map(res.sector.representative),
        "summands": [summand_obj(s) for s in res.summands],
        "d_half": frac_str(res.d_half),
        "d_minus_half": frac_str(res.even_bottom),
        "d_minus_half_provenance": res.even_provenance if res.sector.torsion else None,
        "notes": list(res.notes),
    }


def classification_obj(g: PlumbingGraph) -> dict:
    form = classify_form(g)
    ctx = None
    kernel = None
    if form.kind.value == "negative-semidefinite-corank-1":
        ctx = lattice_context(g)
        kernel = g.pairing_map(ctx.kernel)
    return {
        "kind": form.kind.value,
        "inertia": list(form.inertia),
        "bad_vertices": list(form.bad_vertices),
        "kernel": kernel,
    }


def report_obj(g: PlumbingGraph, rep: FullReport) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "tool": {"name": "plumbhf", "version": __version__},
        "graph": {
            "name": g.name,
            "vertices": len(g.vertices),
            "classification": classification_obj(g),
        },
        "parameters": {
            "depth": rep.depth,
            "expansion": rep.expansion,
            "max_states": max_states(),
        },
        "sectors": [sector_obj(g, r) for r in rep.sectors],
        "notes": list(rep.notes),
    }


def render(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_report(text: str) -> dict:
    """Parse a rendered report and sanity-check the schema tag."""
    obj = json.loads(text)
    if obj.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema: {obj.get('schema')!r}")
    return obj


# -- human-readable rendering ------------------------------------------------

def format_summand(s: Summand) -> str:
    if s.kind is SummandKind.TOWER:
        return f"T^+({frac_str(s.bottom)})"
    if s.kind is SummandKind.EVEN_TOWER:
        bottom = frac_str(s.bottom) if s.bottom is not None else "?"
        return f"T^+({bottom}) even"
    bottom = f" @ {frac_str(s.bottom)}" if s.bottom is not None else ""
    return f"Z[U]/U^{s.length}{bottom}"


def format_decomposition(summands) -> str:
    if not summands:
        return "0"
    return " + ".join(format_summand(s) for s in summands)
