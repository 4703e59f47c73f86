"""Serialization of driver results.

Two formats are produced by :func:`emit_report`:

* ``text`` -- aligned tables for a terminal (the ODE table, page charts,
  per-page candidate traces);
* ``json`` -- a schema-stable document.  Keys are sorted, levels appear in
  increasing order and polynomials are printed in descending graded-lex
  order, so identical inputs give byte-identical output.  Every polynomial
  string parses back (with the variable table of the problem) to the same
  polynomial.

Witness objects are encoded as::

    {"leading_level": 0,
     "components": [{"level": 0, "polynomial": "..."}, ...],
     "residual": [{"level": 11, "polynomial": "..."}, ...],
     "exact": true,
     "trace": [{"page": 0, "target_level": 0, "action": "survived", ...}]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra.polynomial import Polynomial
from .drivers.ham import HamResult
from .drivers.matrix import MatrixResult
from .drivers.ode import OdeResult
from .drivers.vf import VfResult
from .linalg import ExactMatrix
from .spectral import PageReport, Witness

__all__ = ["VerifyResult", "PagesResult", "emit_report", "to_json_data", "factor_text"]


@dataclass
class VerifyResult:
    ok: bool
    certificate: object  # the bracket (Polynomial or vector field)
    kind: str = "ham"
    subject: str = ""


@dataclass
class PagesResult:
    """Page charts of one graded map."""

    name: str
    reports: list  # PageReport per requested page
    graded_map: object = None
    problem: str = ""


# ---------------------------------------------------------------------------
# small converters
# ---------------------------------------------------------------------------


def _s(x) -> str:
    return str(x)


def factor_text(P: Polynomial) -> str:
    """``P`` factored over the rationals (sympy), or its plain form."""
    import sympy

    if P.is_zero():
        return "0"
    names = list(P.table.state) + list(P.table.params)
    syms = {n: sympy.Symbol(n) for n in names}
    syms["i"] = sympy.I
    try:
        expr = sympy.sympify(str(P).replace("^", "**"), locals=syms)
    except (sympy.SympifyError, SyntaxError, TypeError):
        return str(P)
    return str(sympy.factor(expr)).replace("**", "^")


def _component(f, level, vec, codomain=False):
    dec = f.decode_codomain if codomain else f.decode_domain
    return {"level": level, "polynomial": _obj_text(dec(level, vec))}


def _obj_text(obj):
    if isinstance(obj, ExactMatrix):
        return [[_s(x) for x in row] for row in obj.to_lists()]
    return _s(obj)


def _nonzero(vec):
    return any(x for x in vec)


def _trace_json(trace):
    out = []
    for t in trace:
        d = {k: v for k, v in t.items() if k in ("page", "target_level", "action", "levels")}
        out.append(d)
    return out


def witness_json(f, w: Witness):
    comps = [_component(f, j, v) for j, v in sorted(w.element.items()) if _nonzero(v)]
    res = [_component(f, j, v, codomain=True) for j, v in sorted(w.residual.items()) if _nonzero(v)]
    return {
        "leading_level": w.leading_level,
        "components": comps,
        "residual": res,
        "exact": bool(w.exact),
        "trace": _trace_json(w.trace),
    }


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------


def _ode_json(r: OdeResult):
    f = r.graded_map
    rows = [
        {
            "line": row["line"],
            "monomial": _s(row["monomial"]),
            "grade_level": row["grade_level"],
            "image": _s(row["image"]),
            "filtration_level": row["filtration_level"],
        }
        for row in r.table
    ]
    outcomes = []
    for o in r.outcomes:
        d = {"leading": _s(o["leading"]), "status": o["status"]}
        if o["status"] == "witness":
            d["solution"] = _s(o["solution"])
        else:
            d["page"] = o["page"]
            d["target_level"] = o["target_level"]
        outcomes.append(d)
    return {
        "kind": "ode",
        "shift": r.shift,
        "max_degree": r.max_degree,
        "indicial_roots": r.indicial,
        "basis": [_s(b) for b in r.basis],
        "witnesses": [witness_json(f, w) for w in r.witnesses] if f is not None else [],
        "table": rows,
        "outcomes": outcomes,
    }


def _matrix_json(r: MatrixResult):
    f = r.graded_map
    doc = {
        "kind": "matrix",
        "centralizer": _obj_text(r.centralizer) if r.centralizer is not None else None,
        "unique": r.unique,
        "kernel_dim": r.kernel_dim,
        "witness": witness_json(f, r.witness) if r.witness is not None else None,
        "obstruction": None,
    }
    if r.obstruction is not None:
        ob = r.obstruction
        doc["obstruction"] = {"page": ob.page, "target_level": ob.target_level, "value": [_s(x) for x in ob.value]}
    return doc


def _vf_json(r: VfResult):
    f = r.graded_map
    doc = {
        "kind": "vf",
        "mode": r.mode.value,
        "centralizers": [[_s(c) for c in G] for G in r.centralizers],
        "witnesses": [witness_json(f, w) for w in r.witnesses] if f is not None else [],
    }
    if r.level_of_top is not None:
        doc["top_level"] = r.level_of_top
    if r.page_dims:
        doc["page_dims"] = {str(k): v for k, v in sorted(r.page_dims.items())}
    if r.kernel_L0:
        doc["kernel_level0"] = [[_s(c) for c in G] for G in r.kernel_L0]
    return doc


def _run_json(run):
    steps = []
    for st in run.steps:
        d = {"page": st["page"], "target_level": st["target_level"], "status": st["status"]}
        d["differential"] = _s(st["differential"]) if st.get("differential") is not None else "0"
        if "representative" in st:
            d["representative"] = _s(st["representative"])
        if "reduced" in st:
            d["reduced"] = _s(st["reduced"])
        steps.append(d)
    doc = {"K0": _s(run.K0), "steps": steps, "integral": _s(run.integral) if run.integral is not None else None}
    ob = run.obstruction
    if ob is None:
        doc["obstruction"] = None
    else:
        doc["obstruction"] = {
            "page": ob["page"],
            "target_level": ob["target_level"],
            "value": _s(ob["value"]),
            "factored": factor_text(ob["value"]),
            "reduced": _s(ob["reduced"]),
            "denominator": [_s(d) for d in ob["denominator"]],
            "representative": _s(ob["representative"]),
        }
    doc["conditions"] = {
        k: [{"value": _s(c["value"]), "confirmed": bool(c["confirmed"])} for c in vals] for k, vals in sorted(run.conditions.items())
    }
    return doc


def _ham_json(r: HamResult):
    f = r.graded_map
    H = r.problem.hamiltonian
    sp = H.table.space
    return {
        "kind": "ham",
        "hamiltonian": _s(H),
        "variables": list(H.table.state),
        "parameters": [p for p in sp.params if not sp.is_bound(p)],
        "max_degree": r.problem.max_degree,
        "E1_00_dim": r.e1_dim,
        "page_dims": list(r.page_dims),
        "integrals": [_s(K) for K in r.integrals],
        "witnesses": [witness_json(f, w) for w in r.witnesses] if f is not None else [],
        "policy_markers": [_s(m) for m in r.policy_markers],
        "candidates": [_run_json(run) for run in r.candidates],
        "complex_chart": r.chart_ok,
        "zero_weight_quartic": [_s(m) for m in r.zero_weight_quartic],
    }


def _page_json(f, rep: PageReport):
    entries = []
    for e in rep.entries:
        d = {"level": e["level"], "q": e["q"], "dim": e["dim"]}
        if e["q"] == 0:
            d["basis"] = [_obj_text(f.decode_domain(e["level"], v)) for v in e["basis"]]
        entries.append(d)
    return {"page": rep.page, "entries": entries}


def _pages_json(r: PagesResult):
    return {"kind": "pages", "map": r.name, "problem": r.problem, "pages": [_page_json(r.graded_map, rep) for rep in r.reports]}


def _verify_json(r: VerifyResult):
    cert = r.certificate
    if isinstance(cert, Polynomial):
        cert = _s(cert)
    elif cert is not None:
        cert = [_s(c) for c in cert]
    return {"kind": "verify", "subject": r.kind, "ok": bool(r.ok), "certificate": cert, "integral": r.subject}


def to_json_data(result):
    if result is None:
        return {}
    for typ, fn in (
        (OdeResult, _ode_json),
        (MatrixResult, _matrix_json),
        (VfResult, _vf_json),
        (HamResult, _ham_json),
        (PagesResult, _pages_json),
        (VerifyResult, _verify_json),
    ):
        if isinstance(result, typ):
            return fn(result)
    if isinstance(result, dict):
        return result
    raise TypeError(f"no report format for {type(result).__name__}")


# ---------------------------------------------------------------------------
# text
# ---------------------------------------------------------------------------


def _table(header, rows):
    cols = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cols) for k in range(len(header))]
    lines = [" | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cols]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines)


def _ode_text(r: OdeResult):
    d = _ode_json(r)
    out = [f"shift: {d['shift']}", f"degree bound: {d['max_degree']}"]
    if d["indicial_roots"] is not None:
        out.append("indicial roots: " + (", ".join(map(str, d["indicial_roots"])) or "none"))
    out.append("")
    rows = [(t["line"], t["monomial"], t["grade_level"], t["image"], t["filtration_level"]) for t in d["table"]]
    out.append(_table(["line", "monomial", "grade level", "f of monomial", "filtration level"], rows))
    out.append("")
    out.append(f"polynomial solutions ({len(d['basis'])}):")
    out.extend(f"  {b}" for b in d["basis"] or ["none"])
    out.append("")
    out.append("leading terms:")
    for o in d["outcomes"]:
        if o["status"] == "witness":
            out.append(f"  {o['leading']}: extends to {o['solution']}")
        else:
            out.append(f"  {o['leading']}: obstruction on page {o['page']} at level {o['target_level']}")
    return "\n".join(out)


def _matrix_text(r: MatrixResult):
    d = _matrix_json(r)
    out = []
    if d["centralizer"] is None:
        ob = d["obstruction"]
        out.append(f"no centralizer: obstruction on page {ob['page']} at level {ob['target_level']}")
    else:
        rows = d["centralizer"]
        w = max(len(x) for row in rows for x in row)
        out.append("centralizer:")
        out.extend("  [ " + "  ".join(x.rjust(w) for x in row) + " ]" for row in rows)
    out.append(f"kernel dimension: {d['kernel_dim']}")
    out.append(f"unique for the prescribed diagonal: {d['unique']}")
    return "\n".join(out)


def _vf_text(r: VfResult):
    d = _vf_json(r)
    out = [f"mode: {d['mode']}"]
    if "top_level" in d:
        out.append(f"top level p: {d['top_level']}")
    out.append(f"centralizers ({len(d['centralizers'])}):")
    for G, w in zip(d["centralizers"], d["witnesses"]):
        line = "  [" + ", ".join(G) + "]"
        if w["residual"]:
            line += f"  (residual from level {w['residual'][0]['level']})"
        out.append(line)
    if not d["centralizers"]:
        out.append("  none")
    return "\n".join(out)


def _ham_text(r: HamResult):
    d = _ham_json(r)
    out = [f"H = {d['hamiltonian']}", f"degree bound: {d['max_degree']}", f"dim E_1^(0,0): {d['E1_00_dim']}"]
    out.append("dims of E_r^(0,0): " + ", ".join(f"r={k}: {v}" for k, v in enumerate(d["page_dims"])))
    out.append(f"integrals ({len(d['integrals'])}):")
    out.extend(f"  {K}" for K in d["integrals"])
    if d["policy_markers"]:
        out.append("cokernel markers: " + ", ".join(d["policy_markers"]))
    for c in d["candidates"]:
        out.append("")
        out.append(f"candidate K0 = {c['K0']}")
        for st in c["steps"]:
            out.append(f"  page {st['page']} -> level {st['target_level']}: d = {st['differential']} [{st['status']}]")
        if c["obstruction"] is None:
            out.append(f"  integral: {c['integral']}")
        else:
            ob = c["obstruction"]
            out.append(f"  obstruction on page {ob['page']}: {ob['factored']}")
            for k, vals in c["conditions"].items():
                for v in vals:
                    tag = "confirmed" if v["confirmed"] else "not confirmed"
                    out.append(f"  vanishes at {k} = {v['value']} ({tag})")
    if d["zero_weight_quartic"]:
        out.append("")
        out.append("zero-weight quartic monomials: " + ", ".join(d["zero_weight_quartic"]))
    return "\n".join(out)


def _pages_text(r: PagesResult):
    d = _pages_json(r)
    out = [f"map: {d['map']}"]
    for pg in d["pages"]:
        out.append("")
        out.append(f"page {pg['page']}")
        q0 = {e["level"]: e for e in pg["entries"] if e["q"] == 0}
        q1 = {e["level"]: e for e in pg["entries"] if e["q"] == 1}
        rows = [(p, q0[p]["dim"], q1[p]["dim"]) for p in sorted(q0)]
        out.append(_table(["level", "q=0", "q=1"], rows))
    return "\n".join(out)


def _verify_text(r: VerifyResult):
    d = _verify_json(r)
    cert = d["certificate"]
    if isinstance(cert, list):
        cert = "[" + ", ".join(cert) + "]"
    return f"bracket vanishes: {str(d['ok']).lower()}\ncertificate: {cert}"


def emit_report(result, format: str = "text") -> str:
    """Serialize a driver result as ``text`` or ``json``."""
    if format == "json":
        return json.dumps(to_json_data(result), indent=2, sort_keys=True) + "\n"
    if format != "text":
        raise ValueError(f"unknown format {format!r}")
    if result is None:
        return "no result\n"
    for typ, fn in (
        (OdeResult, _ode_text),
        (MatrixResult, _matrix_text),
        (VfResult, _vf_text),
        (HamResult, _ham_text),
        (PagesResult, _pages_text),
        (VerifyResult, _verify_text),
    ):
        if isinstance(result, typ):
            return fn(result) + "\n"
    raise TypeError(f"no report format for {type(result).__name__}")
