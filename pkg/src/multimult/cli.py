"""Command-line front end.

Every command reads and writes the canonical JSON table format.  The result
goes to stdout as a single JSON line and a short summary goes to stderr.
Exit codes: 0 success / valid, 1 negative verdict, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import catalog, deformation, mms, serialize
from .errors import FormatError, MultiMultError, NotAssociative, NotFinitary, UnknownElement
from .semiring import Cardinal, check_semiring_axioms, get_instance, parse_bound

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def _read_mms(path: str) -> mms.MultiMultisemigroup:
    return serialize.mms_from_json(_read_json(path))


def _bound_arg(text: str):
    try:
        return parse_bound(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(obj):
    sys.stdout.write(serialize.dumps(obj) + "\n")


def _note(message: str):
    print(message, file=sys.stderr)


def cmd_verify(args) -> int:
    m = _read_mms(args.file)
    cex = mms.verify_associativity(m)
    if cex is None:
        _emit({"outcome": "valid"})
        _note(f"valid: associativity holds on all {m.size ** 3} triples")
        return EXIT_OK
    _emit({
        "outcome": "counterexample",
        "triple": [cex.r, cex.s, cex.t],
        "element": cex.element,
        "lhs": cex.lhs.to_json(),
        "rhs": cex.rhs.to_json(),
    })
    _note(str(cex))
    return EXIT_NEGATIVE


def cmd_word(args) -> int:
    m = _read_mms(args.file)
    prefix = mms.evaluate_word_prefix(m, args.letters)
    suffix = mms.evaluate_word_suffix(m, args.letters)
    agree = prefix == suffix
    _emit({"word": args.letters, "prefix": prefix.as_dict(), "suffix": suffix.as_dict(), "agree": agree})
    _note("prefix and suffix evaluations agree" if agree else "prefix and suffix evaluations DIFFER")
    return EXIT_OK if agree else EXIT_NEGATIVE


def cmd_reduce(args) -> int:
    m = _read_mms(args.file)
    _emit(serialize.mms_to_json(mms.reduce(m, args.to)))
    return EXIT_OK


def cmd_lift(args) -> int:
    ms = serialize.multisemigroup_from_json(_read_json(args.file))
    try:
        lifted = mms.lift_multisemigroup(ms, args.to)
    except NotAssociative as exc:
        _emit({"outcome": "not_associative"})
        _note(str(exc))
        return EXIT_NEGATIVE
    _emit(serialize.mms_to_json(lifted))
    return EXIT_OK


def cmd_deform(args) -> int:
    obj = _read_json(args.file)
    max_m = args.max
    if isinstance(obj, dict) and "base" in obj:
        max_m = max_m if max_m is not None else obj.get("max_multiplicity")
        obj = obj["base"]
    if max_m is None:
        raise InputError("no maximum multiplicity: pass --max or use a problem file with 'max_multiplicity'")
    base = serialize.multisemigroup_from_json(obj)
    problem = deformation.DeformationProblem(
        base,
        max_m,
        check_obstruction=not args.no_obstruction_check,
        multiplicity_cap=args.max_cap,
    )
    try:
        result = deformation.search_deformation(problem, workers=args.parallel)
    except NotAssociative as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    witness = None
    if result.deformation is not None:
        witness = serialize.mms_to_json(result.deformation)
    elif result.witness is not None:
        witness = list(result.witness)
    _emit({
        "outcome": result.outcome,
        "witness": witness,
        "nodes": result.nodes,
        "max_multiplicity": result.max_multiplicity,
        "status": "proof" if result.is_proof else "bounded_evidence",
    })
    if result.outcome == deformation.OBSTRUCTED:
        a, b = result.witness
        _note(f"obstructed by ({a}, {b}): no deformation exists at any multiplicity")
    elif result.outcome == deformation.FOUND:
        _note(f"found a deformation with multiplicities <= {max_m} after {result.nodes} nodes")
    else:
        _note(
            f"no deformation with multiplicities <= {max_m} ({result.nodes} nodes); "
            "larger multiplicities are not ruled out"
        )
    return EXIT_OK if result.outcome == deformation.FOUND else EXIT_NEGATIVE


def _generate(args):
    family = args.family
    if family == "dihedral":
        return catalog.dihedral_kl_mms(args.n if args.n is not None else 3)
    if family == "s3-kl":
        return catalog.s3_kl_fixture()
    if family == "catalan":
        return catalog.catalan_monoid_mms(args.m if args.m is not None else 3)
    if family == "projective":
        if args.dims is None:
            raise InputError("projective needs --dims, e.g. --dims '[[2,1],[0,1]]'")
        try:
            dims = json.loads(args.dims)
        except json.JSONDecodeError as exc:
            raise InputError(f"--dims:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
        return catalog.projective_functor_mms(dims)
    if family == "singleton":
        value = "omega" if args.value == "omega" else int(args.value)
        return catalog.singleton(value, args.bound)
    if family == "s3-multisemigroup":
        return catalog.s3_multisemigroup_fixture()
    if family == "undeformable-pair":
        return catalog.undeformable_pair_fixture()
    raise InputError(f"unknown family {family!r}")


def cmd_generate(args) -> int:
    obj = _generate(args)
    if isinstance(obj, mms.Multisemigroup):
        _emit(serialize.multisemigroup_to_json(obj))
    else:
        _emit(serialize.mms_to_json(obj))
    return EXIT_OK


def cmd_export_algebra(args) -> int:
    m = _read_mms(args.file)
    try:
        alg = mms.structure_constants(m)
    except NotFinitary as exc:
        _emit({"outcome": "not_finitary"})
        _note(str(exc))
        return EXIT_NEGATIVE
    _emit(serialize.algebra_to_json(alg))
    return EXIT_OK


def _witness_json(x):
    if isinstance(x, Cardinal):
        return x.to_json()
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def cmd_axioms(args) -> int:
    try:
        instance = get_instance(args.semiring)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc)) from None
    report = check_semiring_axioms(instance, samples=args.samples, seed=args.seed)
    _emit({
        "instance": report.instance,
        "exhaustive": report.exhaustive,
        "checked": report.checked,
        "ok": report.ok,
        "failures": [{"axiom": f.axiom, "witness": [_witness_json(w) for w in f.witness]} for f in report.failures],
    })
    mode = "exhaustively" if report.exhaustive else "on random samples"
    _note(f"{report.instance}: {report.checked} triples checked {mode}, {len(report.failures)} failing axiom(s)")
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multimult", description="Multisemigroups with multiplicities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check the associativity law")
    p.add_argument("file", help="table file, or - for stdin")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("word", help="evaluate a word from the left and from the right")
    p.add_argument("file")
    p.add_argument("letters", nargs="+", help="element names forming the word")
    p.set_defaults(func=cmd_word)

    p = sub.add_parser("reduce", help="reduce multiplicities to a smaller bound")
    p.add_argument("file")
    p.add_argument("--to", type=_bound_arg, required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lift", help="lift a multisemigroup to a larger bound")
    p.add_argument("file")
    p.add_argument("--to", type=_bound_arg, required=True)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("deform", help="search for a finitary deformation")
    p.add_argument("file", help="multisemigroup or problem file")
    p.add_argument("--max", type=int, help="largest multiplicity to try")
    p.add_argument("--no-obstruction-check", action="store_true")
    p.add_argument("--parallel", type=int, default=1, metavar="N")
    p.add_argument("--max-cap", type=int, default=deformation.DEFAULT_MAX_MULTIPLICITY,
                   help="refuse --max above this (default %(default)s)")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("generate", help="emit a catalog example")
    p.add_argument("family", choices=["dihedral", "s3-kl", "catalan", "projective", "singleton",
                                      "s3-multisemigroup", "undeformable-pair"])
    p.add_argument("--n", type=int, help="dihedral group parameter")
    p.add_argument("--m", type=int, help="Catalan chain size")
    p.add_argument("--dims", help="projective functors: dimension matrix as JSON")
    p.add_argument("--value", default="1", help="singleton multiplicity")
    p.add_argument("--bound", type=_bound_arg, default="omega", help="singleton bound")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("export-algebra", help="structure constants of a finitary table")
    p.add_argument("file")
    p.set_defaults(func=cmd_export_algebra)

    p = sub.add_parser("axioms", help="check semiring axioms")
    p.add_argument("semiring", help="boolean, dual_boolean, tropical_min, tropical_max_plus, card:<n|omega>")
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_axioms)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, FormatError, UnknownElement, MultiMultError, ValueError) as exc:
        _note(f"error: {exc}")
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
