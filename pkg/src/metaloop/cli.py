"""Command line entry point: ``metaloop <command> ...`` (also ``python -m metaloop``).

Exit codes: 0 all checks passed, 1 a check failed, 2 bad input, 3 size bound.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import numpy as np

from . import fileformat as ff
from .catalog import CATALOG, catalog
from .cosets import (
    check_nested_transversals, check_transversal, check_translation_commutes, coset_equality_criterion, quotient,
    quotient_structure, transversal,
)
from .errors import InputError, MetaloopError, Report, _jsonable
from .magma import LEVELS, associativity_witness, classify, satisfies
from .products import (
    compose_smashed, direct_product, embeddings_and_invariance, smashed_twisted_product, validate_factors,
)
from .search import PREDICATES, random_loops, search_small
from .structure import (
    associator_table, center, commutant, is_central_metagroup, is_metagroup, minimal_t_subgroup, nuclei,
)
from .topology import check_continuity, topology_from_base, verify_base_axioms, verify_function_space_identities
from .wreath import DEFAULT_MAX_FUNCTIONS, theta_isomorphism, wreath_product

LEVEL_ALIASES = {"central": "central-metagroup"}


class Output:
    """Collects sections and reports; prints them as text or one JSON object."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.sections: dict[str, Any] = {}
        self.ok = True

    def put(self, key: str, value: Any) -> None:
        self.sections[key] = value

    def report(self, key: str, rep: Report) -> None:
        self.sections[key] = rep
        self.ok &= rep.ok

    def check(self, key: str, ok: bool, witness: Any = None) -> None:
        self.sections[key] = {"ok": bool(ok), "witness": witness}
        self.ok &= bool(ok)

    def emit(self, stream=None) -> None:
        stream = stream or sys.stdout
        if self.fmt == "json":
            data = {k: (v.to_dict() if isinstance(v, Report) else _jsonable(v)) for k, v in self.sections.items()}
            data["ok"] = self.ok
            stream.write(json.dumps(data, sort_keys=True) + "\n")
            return
        for k, v in self.sections.items():
            if isinstance(v, Report):
                stream.write("\n".join(v.lines()) + "\n")
            elif isinstance(v, dict) and set(v) == {"ok", "witness"}:
                line = f"{k}: {'PASS' if v['ok'] else 'FAIL'}"
                if not v["ok"] and v["witness"] is not None:
                    line += f"  witness={json.dumps(_jsonable(v['witness']))}"
                stream.write(line + "\n")
            else:
                stream.write(f"{k}: {json.dumps(_jsonable(v))}\n")


def _subset(path, T):
    return ff.load_subset(path, T)


# commands -----------------------------------------------------------------------

def cmd_verify(args, out: Output) -> None:
    T = ff.load_table(args.table)
    out.put("order", T.order)
    out.put("class", classify(T))
    if T.is_latin and not T.is_associative:
        out.put("nonassociative_triple", associativity_witness(T))
    if args.level:
        level = LEVEL_ALIASES.get(args.level, args.level)
        witness = None
        if level == "metagroup":
            witness = is_metagroup(T).witness
        elif level == "central-metagroup":
            witness = is_central_metagroup(T).witness
        elif level == "group" and T.is_latin:
            witness = associativity_witness(T)
        out.check(f"is_{level}", satisfies(T, level), witness)


def cmd_analyze(args, out: Output) -> None:
    T = ff.load_table(args.table)
    out.put("order", T.order)
    out.put("class", classify(T))
    out.put("commutant", list(commutant(T).members))
    nl, nm, nr = nuclei(T)
    out.put("nucleus_left", list(nl.members))
    out.put("nucleus_middle", list(nm.members))
    out.put("nucleus_right", list(nr.members))
    out.put("center", list(center(T).members))
    if T.is_loop:
        at = associator_table(T)
        vals, counts = np.unique(at, return_counts=True)
        out.put("associator_values", {int(v): int(c) for v, c in zip(vals, counts)})
        out.put("nonassociative_triples", int((at != T.identity).sum()))
        out.put("minimal_t_subgroup", list(minimal_t_subgroup(T).members))


def cmd_coset(args, out: Output) -> None:
    T = ff.load_table(args.table)
    H = _subset(args.sub, T)
    Q = quotient(T, H)
    out.put("cosets", [list(c.members) for c in Q.cosets])
    out.check("equivalence_relation", bool(coset_equality_criterion(Q)), coset_equality_criterion(Q).witness)
    out.check("translation_commutes", bool(check_translation_commutes(Q)), check_translation_commutes(Q).witness)
    if args.quotient_table:
        S = quotient_structure(Q)
        ff.save_table(args.quotient_table, S)
        out.put("quotient_class", classify(S))


def cmd_transversal(args, out: Output) -> None:
    T = ff.load_table(args.table)
    H = _subset(args.sub, T)
    Tr = transversal(T, H)
    out.put("representatives", list(Tr.reps))
    out.report("transversal", check_transversal(Tr))
    if args.check_nested:
        if not args.c1:
            raise InputError("--check-nested needs --c1")
        out.report("nested", check_nested_transversals(T, H, _subset(args.c1, T)))


def cmd_product(args, out: Output) -> None:
    A = ff.load_table(args.a)
    B = ff.load_table(args.b)
    if args.mode == "direct":
        G = direct_product(A, B)
    else:
        F = ff.load_factors(args.factors, A, B) if args.factors else ff.factors_from_obj({}, A, B)
        if args.validate:
            out.report("factors", validate_factors(F))
        G = smashed_twisted_product(F)
        if args.validate:
            out.report("embeddings", embeddings_and_invariance(G, F))
    out.put("order", G.order)
    out.put("class", classify(G))
    if args.output:
        ff.save_table(args.output, G)


def cmd_compose(args, out: Output) -> None:
    spec = ff.load_compose_spec(args.spec)
    comp = compose_smashed(spec["f1"], spec["f2"], phi3=spec["phi3"], eta3=spec["eta3"],
                           kappa3=spec["kappa3"], xi3=spec["xi3"])
    out.put("order", comp.D.order)
    out.put("class", classify(comp.D))
    out.report("composition", comp.report)
    if args.output:
        ff.save_table(args.output, comp.D)


def cmd_wreath(args, out: Output) -> None:
    spec = ff.load_wreath_spec(args.spec)
    W = wreath_product(spec, max_functions=args.max_size)
    out.put("order", W.product.order)
    out.put("class", classify(W.product))
    out.put("V", list(W.V))
    if args.theta:
        if not (args.i and args.j):
            raise InputError("--theta needs --i and --j")
        i = ff.load_permutation(args.i, W.D.order)
        j = ff.load_permutation(args.j, W.B.order)
        out.report("theta", theta_isomorphism(W, i, j).report)
    if args.output:
        ff.save_table(args.output, W.product)


def cmd_topology(args, out: Output) -> None:
    did = False
    if args.table and args.top:
        G = ff.load_table(args.table)
        T = ff.load_topology(args.top)
        out.report("continuity", check_continuity(G, T))
        did = True
    if args.check_base:
        if not args.table:
            raise InputError("--check-base needs --table")
        G = ff.load_table(args.table)
        B = ff.load_base(args.check_base)
        rep = verify_base_axioms(G, B)
        out.report("base", rep)
        if all(rep[k] for k in rep.items if k != "base_8_t1"):
            out.put("generated_opens", topology_from_base(B).as_lists())
        did = True
    if args.function_identities:
        if args.v is None or not args.b:
            raise InputError("--function-identities needs --v and --b")
        out.report("function_identities", verify_function_space_identities(args.v, ff.load_table(args.b), max_functions=args.max_size))
        did = True
    if not did:
        raise InputError("nothing to do: give --table with --top, --check-base, or --function-identities")


def cmd_catalog(args, out: Output) -> None:
    T = catalog(args.name, *args.params)
    if args.output:
        ff.save_table(args.output, T)
        out.put("written", args.output)
        out.put("order", T.order)
    else:
        sys.stdout.write(ff.dumps(ff.table_to_obj(T)))
        out.sections.clear()


def cmd_search(args, out: Output) -> None:
    if args.random:
        res = random_loops(args.order, args.random, args.seed, args.predicate)
    else:
        res = search_small(args.order, args.predicate, jobs=args.jobs)
    for k, v in res.to_dict().items():
        out.put(k, v)


# parser ----------------------------------------------------------------------------

def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--max-size", type=int, default=d(DEFAULT_MAX_FUNCTIONS),
                   help="bound on |B|^|V| for wreath and W(S,Q) function spaces")
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes for search")
    p.add_argument("--format", choices=("text", "json"), default=d("text"))
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized search")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="metaloop", description="Finite quasigroups, loops and metagroups.")
    _add_globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_, aliases=()):
        sp = sub.add_parser(name, help=help_, aliases=list(aliases))
        _add_globals(sp, suppress=True)
        sp.set_defaults(func=fn)
        return sp

    sp = cmd("verify", cmd_verify, "classify a table, optionally require a level")
    sp.add_argument("table")
    sp.add_argument("--level", choices=[lv for lv in LEVELS if lv != "central-metagroup"] + ["central", "central-metagroup"])

    sp = cmd("analyze", cmd_analyze, "commutant, nuclei, center, associator statistics")
    sp.add_argument("table")

    sp = cmd("coset", cmd_coset, "right cosets of a subset, optional quotient table")
    sp.add_argument("table")
    sp.add_argument("--sub", required=True)
    sp.add_argument("--quotient-table")

    sp = cmd("transversal", cmd_transversal, "transversal and factorisation checks")
    sp.add_argument("table")
    sp.add_argument("--sub", required=True)
    sp.add_argument("--check-nested", "--check-remark26", dest="check_nested", action="store_true",
                    help="check nested transversals through A C1")
    sp.add_argument("--c1")

    sp = cmd("product", cmd_product, "direct or smashed twisted product")
    sp.add_argument("--mode", choices=("direct", "smashed"), default="direct")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--factors")
    sp.add_argument("--validate", action="store_true")
    sp.add_argument("-o", "--output")

    sp = cmd("compose322", cmd_compose, "iterated smashed product (A1*B1)*(A2*B2)", aliases=("compose",))
    sp.add_argument("--spec", required=True)
    sp.add_argument("-o", "--output")

    sp = cmd("wreath", cmd_wreath, "smashed twisted wreath product")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--theta", action="store_true")
    sp.add_argument("--i")
    sp.add_argument("--j")
    sp.add_argument("-o", "--output")

    sp = cmd("topology", cmd_topology, "continuity, base axioms, W(S,Q) identities")
    sp.add_argument("--table")
    sp.add_argument("--top")
    sp.add_argument("--check-base")
    sp.add_argument("--function-identities", "--lemma28", dest="function_identities", action="store_true",
                    help="W(S,Q) identities on B^V")
    sp.add_argument("--v", type=int)
    sp.add_argument("--b")

    sp = cmd("catalog", cmd_catalog, f"write a catalog table ({', '.join(sorted(CATALOG))})")
    sp.add_argument("name")
    sp.add_argument("params", nargs="*", type=int)
    sp.add_argument("-o", "--output")

    sp = cmd("search", cmd_search, "enumerate small loops")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--predicate", choices=sorted(PREDICATES), default="loop")
    sp.add_argument("--random", type=int, metavar="N", help="sample N random tables instead")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    try:
        args.func(args, out)
    except MetaloopError as exc:
        if args.format == "json":
            sys.stdout.write(json.dumps({"ok": False, "error": str(exc), "kind": type(exc).__name__,
                                         "witness": _jsonable(exc.witness)}) + "\n")
        else:
            msg = f"error: {exc}"
            if exc.witness is not None:
                msg += f"  witness={json.dumps(_jsonable(exc.witness))}"
            sys.stderr.write(msg + "\n")
        return exc.exit_code
    if out.sections:
        out.emit()
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
