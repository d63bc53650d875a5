"""Command-line front end: ``jwgadget {jw,compile,cost,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from jwgadget.circuit import census, to_text
from jwgadget.cost import (
    CostReport,
    SynthesisParams,
    compare,
    cost_report,
    format_ratio,
    per_rotation_epsilon,
    synthesis_formula_cost,
)
from jwgadget.errors import JWGadgetError
from jwgadget.fermion import parse_hamiltonian, parse_term_spec
from jwgadget.gadget import DEFAULT_DIRTY_BUDGET, compile_term
from jwgadget.jordan_wigner import jw_pauli_expansion, jw_projector_form
from jwgadget.verifier import random_trials, run_trial

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# placeholder evolution angle for cost-only compilation; counts do not depend on it
_COST_GAMMA = 1.0


class UsageError(Exception):
    pass


def _load_terms(args):
    if getattr(args, "term", None):
        if args.file:
            raise UsageError("give either a Hamiltonian file or --term, not both")
        term = parse_term_spec(args.term, args.orbitals)
        return [term], term.num_orbitals
    if not args.file:
        raise UsageError("a Hamiltonian file or --term is required")
    with open(args.file, encoding="utf-8") as fh:
        return parse_hamiltonian(fh)


def _term_label(term) -> str:
    idx = ",".join(map(str, term.indices))
    coeff = term.text if term.text is not None else repr(term.coefficient)
    return f"{term.family.value}({idx}) coeff={coeff} sign={term.sign:+d}"


def cmd_jw(args, out) -> int:
    terms, m = _load_terms(args)
    if args.json:
        docs = []
        for t in terms:
            form = jw_projector_form(t)
            docs.append({
                "term": _term_label(t),
                "pauli": [
                    {"re": s.coefficient.real, "im": s.coefficient.imag, "letters": s.label}
                    for s in jw_pauli_expansion(t)
                ],
                "projector": {
                    "swap_qubits": list(form.swap_qubits),
                    "pattern_a": form.pattern_a,
                    "pattern_b": form.pattern_b,
                    "z_string": sorted(form.z_string),
                    "scale": form.scale,
                    "diagonal": form.diagonal,
                },
            })
        out.write(json.dumps({"orbitals": m, "terms": docs}, indent=2) + "\n")
        return EXIT_OK
    for t in terms:
        out.write(f"# {_term_label(t)}\n")
        out.write(jw_pauli_expansion(t).to_text())
        out.write(f"projector {jw_projector_form(t).to_text()}\n")
    return EXIT_OK


def cmd_compile(args, out) -> int:
    terms, _ = _load_terms(args)
    docs = []
    for t in terms:
        circ = compile_term(t, args.gamma, args.mode, args.controlled, args.dirty)
        text = to_text(circ, lower=args.lower)
        if args.json:
            docs.append({"term": _term_label(t), "circuit": text,
                         "census": census(circ).as_dict()})
        else:
            out.write(f"# {_term_label(t)}\n{text}")
    if args.json:
        out.write(json.dumps(docs, indent=2) + "\n")
    return EXIT_OK


def _params(args) -> SynthesisParams:
    return SynthesisParams(
        eps_total=args.eps_s,
        n_rot=args.n_rot,
        per_rotation_cost_override=args.synth_cost,
        toffoli_t_cost=args.toffoli_cost,
    )


def cmd_cost(args, out) -> int:
    terms, _ = _load_terms(args)
    params = _params(args)
    controlled = not args.uncontrolled
    rows = []
    naive_total, gadget_total = CostReport(), CostReport()
    for t in terms:
        naive = cost_report(compile_term(t, _COST_GAMMA, "naive", controlled), params)
        gadget = cost_report(
            compile_term(t, _COST_GAMMA, "gadget", controlled, args.dirty), params
        )
        rows.append((t, naive, gadget))
        naive_total += naive
        gadget_total += gadget
    ratio = None
    if naive_total.t_total and gadget_total.t_total:
        ratio = compare(naive_total, gadget_total)

    if args.json:
        doc = {
            "params": {
                "eps_s": params.eps_total,
                "n_rot": params.n_rot,
                "epsilon": params.eps_total / params.n_rot,
                "per_rotation_t_formula": naive_total.per_rotation_t_formula,
                "per_rotation_t_override": params.per_rotation_cost_override,
                "toffoli_t_cost": params.toffoli_t_cost,
                "controlled": controlled,
            },
            "terms": [
                {"term": _term_label(t), "naive": n.as_dict(), "gadget": g.as_dict()}
                for t, n, g in rows
            ],
            "total": {"naive": naive_total.as_dict(), "gadget": gadget_total.as_dict()},
            "ratio": ratio,
            "ratio_display": format_ratio(ratio) if ratio is not None else None,
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK

    eps = per_rotation_epsilon(params)
    override = params.per_rotation_cost_override
    out.write(f"epsilon per rotation: {eps:.6g} (eps_s={params.eps_total:g}, n_rot={params.n_rot})\n")
    out.write(f"per-rotation T (formula ceil(3 log2(1/eps))): {synthesis_formula_cost(eps)}\n")
    out.write(f"per-rotation T (override): {override if override is not None else 'none'}\n")
    out.write(f"toffoli T cost: {params.toffoli_t_cost}\n")
    for t, n, g in rows:
        out.write(
            f"term {_term_label(t)}: naive ppr={n.ppr_count} toffoli={n.toffoli_count} "
            f"T={n.t_total} | gadget ppr={g.ppr_count} toffoli={g.toffoli_count} "
            f"T={g.t_total}\n"
        )
    out.write(f"total naive T: {naive_total.t_total}\n")
    out.write(f"total gadget T: {gadget_total.t_total}\n")
    if ratio is None:
        out.write("ratio naive/gadget: n/a\n")
    else:
        out.write(f"ratio naive/gadget: {format_ratio(ratio)} ({ratio:.8g})\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    trials = random_trials(args.trials, args.max_orbitals, args.seed)
    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            results = list(pool.map(lambda t: run_trial(t, args.tol), trials))
    else:
        results = [run_trial(t, args.tol) for t in trials]
    failed = sum(not r.passed for r in results)
    worst = max((r.deviation for r in results), default=0.0)
    if args.json:
        doc = {
            "trials": [
                {
                    "family": r.trial.term.family.value,
                    "indices": list(r.trial.term.indices),
                    "sign": r.trial.term.sign,
                    "M": r.trial.term.num_orbitals,
                    "gamma": r.trial.gamma,
                    "mode": r.trial.mode,
                    "controlled": r.trial.controlled,
                    "lowered": r.trial.lowered,
                    "deviation": r.deviation,
                    "passed": r.passed,
                }
                for r in results
            ],
            "summary": {"trials": len(results), "passed": len(results) - failed,
                        "failed": failed, "max_deviation": worst, "tol": args.tol},
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for r in results:
            out.write(r.line() + "\n")
        out.write(
            f"summary: trials={len(results)} passed={len(results) - failed} "
            f"failed={failed} max_deviation={worst:.3e} tol={args.tol:g}\n"
        )
    return EXIT_FAIL if failed else EXIT_OK


def _add_input(p):
    p.add_argument("file", nargs="?", help="Hamiltonian file")
    p.add_argument("--term", help='single record, e.g. "four 0 1 2 3 0.5"')
    p.add_argument("--orbitals", type=int, help="register size for --term")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jwgadget", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jw", help="dump Pauli expansions and projector forms")
    _add_input(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_jw)

    p = sub.add_parser("compile", help="emit circuits")
    _add_input(p)
    p.add_argument("--mode", choices=["naive", "gadget"], default="gadget")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--controlled", action="store_true")
    p.add_argument("--lower", action="store_true",
                   help="expand multi-controlled Z gates to Toffoli level")
    p.add_argument("--dirty", type=int, default=DEFAULT_DIRTY_BUDGET,
                   help="dirty-ancilla budget (default %(default)s)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("cost", help="T-count report, naive vs gadget")
    _add_input(p)
    p.add_argument("--eps-s", type=float, default=1e-5, help="total synthesis error budget")
    p.add_argument("--n-rot", type=int, default=10_000_000, help="rotations sharing the budget")
    p.add_argument("--synth-cost", type=int, default=None,
                   help="fixed T count per rotation, bypassing the formula")
    p.add_argument("--toffoli-cost", type=int, default=4)
    p.add_argument("--uncontrolled", action="store_true")
    p.add_argument("--dirty", type=int, default=DEFAULT_DIRTY_BUDGET)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("verify", help="random oracle equivalence trials")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-orbitals", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify" and not 1 <= args.max_orbitals <= 11:
            raise UsageError("--max-orbitals must lie in 1..11")
        if args.command == "verify" and args.trials < 0:
            raise UsageError("--trials must be non-negative")
        return args.func(args, out)
    except (UsageError, JWGadgetError, OSError) as exc:
        print(f"jwgadget {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
