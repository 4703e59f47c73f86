"""``specseq`` command line.

Subcommands ``vf``, ``ham``, ``ode``, ``matrix``, ``pages`` and ``verify``
read a JSON problem file (``--input``) or, for ``ham``/``pages``/``verify``,
build the Henon-Heiles problem from ``--A/--B/--L``.  Results go to stdout
or ``--output`` as text or JSON.

Exit status: 0 when a witness was produced, 2 when the computation finished
but no kernel element exists (only obstructions, or a failed verification),
1 on errors and usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra.parsing import parse_polynomial
from .drivers import ham_parameters, problem_from_dict
from .drivers.ham import HamProblem, ham_map, ham_search, ham_verify, henon_heiles_problem
from .drivers.matrix import MatrixProblem, matrix_centralizer, matrix_map
from .drivers.ode import OdeProblem, ode_map, ode_poly_solutions
from .drivers.vf import VfMode, VfProblem, vf_bottom_map, vf_centralizers, vf_top_map
from .errors import SpecSeqError
from .report import PagesResult, VerifyResult, emit_report
from .spectral import page_report
from .vectorfield import PolyVectorField, lie_bracket

EXIT_OK, EXIT_ERROR, EXIT_NO_WITNESS = 0, 1, 2

GRAMMAR = """\
polynomial grammar:
  expr   := ['+'|'-'] term (('+'|'-') term)*
  term   := factor (('*'|'/') factor)*      division only by state-free factors
  factor := atom ('^' INT)?
  atom   := INT | INT '/' INT | NAME | '(' expr ')'
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n{GRAMMAR}")
        raise SystemExit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="JSON problem file")
    common.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-degree", type=int, metavar="N")
    common.add_argument("--order", type=int, metavar="N")

    params = argparse.ArgumentParser(add_help=False)
    for name in ("A", "B", "L"):
        params.add_argument(f"--{name}", metavar="RATIONAL|indeterminate", help=f"value of {name}")
    params.add_argument("--equal-frequencies", action="store_true", help="impose B = A with one symbol")

    p = _Parser(prog="specseq", description="Exact kernels of filtered graded maps by a spectral sequence.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("vf", parents=[common], help="centralizers of a polynomial vector field")
    s.add_argument("--mode", choices=("bottom", "top"))
    s.add_argument("--rescale", action="store_true", help="normalize the top part in TOP mode")

    s = sub.add_parser("ham", parents=[common, params], help="first integrals of a Hamiltonian")
    s.add_argument("--candidate", action="append", default=[], metavar="EXPR", help="leading quadratic to extend")
    s.add_argument("--no-candidates", action="store_true", help="skip the per-candidate traces")

    sub.add_parser("ode", parents=[common], help="polynomial solutions of a linear ODE")

    s = sub.add_parser("matrix", parents=[common], help="centralizer of an upper-triangular matrix")
    s.add_argument("--diagonal", metavar="D1,D2,...", help="prescribed diagonal")

    s = sub.add_parser("pages", parents=[common, params], help="dump page charts E_r^(p,q)")
    s.add_argument("--page", type=int, action="append", metavar="R", help="page to dump (repeatable)")
    s.add_argument("--mode", choices=("bottom", "top"))

    s = sub.add_parser("verify", parents=[common, params], help="exact bracket check of a candidate integral")
    s.add_argument("--hamiltonian", metavar="EXPR", help="Hamiltonian (defaults to Henon-Heiles)")
    s.add_argument("--integral", metavar="EXPR", help="candidate integral")
    return p


# ---------------------------------------------------------------------------
# problem assembly
# ---------------------------------------------------------------------------


def _read_input(args):
    if not args.input:
        return None
    try:
        return json.loads(Path(args.input).read_text())
    except json.JSONDecodeError as e:
        raise UsageError(f"{args.input}: not valid JSON ({e})") from e


def _param_overrides(args):
    return {k: getattr(args, k) for k in ("A", "B", "L") if getattr(args, k, None) is not None}


def _ham_data(args, data):
    data = dict(data or {"kind": "ham"})
    if data.get("kind") != "ham":
        raise UsageError(f"expected a ham problem, got kind {data.get('kind')!r}")
    params = ham_parameters(data)
    data.pop("params", None)
    over = _param_overrides(args)
    if "hamiltonian" in data:
        unknown = [k for k in over if k not in params]
        if unknown:
            raise UsageError(f"parameters {unknown} are not declared by the problem file")
    params.update(over)
    data["parameters"] = params
    if args.max_degree is not None:
        data["max_degree"] = args.max_degree
    if getattr(args, "equal_frequencies", False):
        data["equal_frequencies"] = True
    cands = getattr(args, "candidate", None)
    if cands:
        data["candidates"] = cands
    return data


def _checked_bound(name, value):
    if value is not None and value < 0:
        raise UsageError(f"{name} must be non-negative")
    return value


def _problem(args, kind, data):
    if data is None:
        raise UsageError(f"{kind} needs --input")
    if data.get("kind") != kind:
        raise UsageError(f"expected a {kind} problem, got kind {data.get('kind')!r}")
    over = {"max_degree": _checked_bound("--max-degree", args.max_degree)}
    if kind == "vf":
        over["order"] = _checked_bound("--order", args.order)
        over["mode"] = args.mode
        if getattr(args, "rescale", False):
            over["rescale"] = True
    if kind == "matrix" and getattr(args, "diagonal", None):
        over["diagonal"] = [v.strip() for v in args.diagonal.split(",")]
    return problem_from_dict(data, over)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_ode(args):
    prob: OdeProblem = _problem(args, "ode", _read_input(args))
    res = ode_poly_solutions(prob)
    return res, EXIT_OK if res.basis else EXIT_NO_WITNESS


def cmd_matrix(args):
    prob: MatrixProblem = _problem(args, "matrix", _read_input(args))
    res = matrix_centralizer(prob)
    return res, EXIT_OK if res.centralizer is not None else EXIT_NO_WITNESS


def cmd_vf(args):
    prob: VfProblem = _problem(args, "vf", _read_input(args))
    res = vf_centralizers(prob)
    return res, EXIT_OK if res.centralizers else EXIT_NO_WITNESS


def cmd_ham(args):
    prob: HamProblem = problem_from_dict(_ham_data(args, _read_input(args)))
    res = ham_search(prob, with_candidates=not args.no_candidates)
    return res, EXIT_OK if res.integrals else EXIT_NO_WITNESS


def _pages_map(args, data):
    kind = (data or {"kind": "ham"}).get("kind")
    if kind == "ham":
        prob = problem_from_dict(_ham_data(args, data))
        f, _, _ = ham_map(prob)
        return f, str(prob.hamiltonian)
    over = {"max_degree": args.max_degree}
    if kind == "vf":
        over.update(order=args.order, mode=args.mode)
    prob = problem_from_dict(data, over)
    if kind == "ode":
        return ode_map(prob)[0], "ode"
    if kind == "matrix":
        return matrix_map(prob), "matrix"
    if prob.mode is VfMode.TOP:
        return vf_top_map(prob.field, prob.degree)[0], str(prob.field)
    return vf_bottom_map(prob.field, prob.order), str(prob.field)


def cmd_pages(args):
    f, desc = _pages_map(args, _read_input(args))
    pages = args.page or [1]
    if any(r < 0 for r in pages):
        raise UsageError("--page must be non-negative")
    reports = [page_report(f, r) for r in pages]
    return PagesResult(f.name, reports, f, desc), EXIT_OK


def cmd_verify(args):
    data = _read_input(args)
    if data is not None and data.get("kind") == "vf":
        prob = problem_from_dict(data)
        if "centralizer" not in data:
            raise UsageError("a vf verification needs a 'centralizer' entry")
        G = PolyVectorField.parse(data["centralizer"], prob.field.table)
        E = lie_bracket(prob.field, G)
        res = VerifyResult(E.is_zero(), list(E), "vf", str(G))
        return res, EXIT_OK if res.ok else EXIT_NO_WITNESS
    data = dict(data or {"kind": "ham"})
    if args.hamiltonian:
        data["hamiltonian"] = args.hamiltonian
        data.setdefault("parameters", {}).update(_param_overrides(args))
    integral = args.integral or data.get("integral")
    if not integral:
        raise UsageError("verify needs --integral or an 'integral' entry")
    data.pop("candidates", None)
    prob = problem_from_dict(_ham_data(args, data) if "hamiltonian" not in data else data)
    K = parse_polynomial(integral, prob.table)
    ok, bracket = ham_verify(prob.hamiltonian, K)
    return VerifyResult(ok, bracket, "ham", str(K)), EXIT_OK if ok else EXIT_NO_WITNESS


COMMANDS = {
    "vf": cmd_vf,
    "ham": cmd_ham,
    "ode": cmd_ode,
    "matrix": cmd_matrix,
    "pages": cmd_pages,
    "verify": cmd_verify,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        result, code = COMMANDS[args.command](args)
        text = emit_report(result, args.format)
    except UsageError as e:
        sys.stderr.write(f"specseq {args.command}: {e}\n{GRAMMAR}")
        return EXIT_ERROR
    except (SpecSeqError, ValueError, KeyError, TypeError, OSError) as e:
        sys.stderr.write(f"specseq {args.command}: {type(e).__name__}: {e}\n")
        return EXIT_ERROR
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
