"""Command line front end.

Every verb loads its inputs, runs exactly one engine operation and prints a
JSON report (or writes it to ``--out``). Logs go to stderr. Exit codes: 0 when
the operation succeeded and every checked property holds, 1 when a checked
property fails (the report carries the witness), 2 for input and usage
errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from opmodel import __version__
from opmodel.bialgebras.algebras import check_algebra, free_algebra
from opmodel.bialgebras.bialgebra import check_bialgebra, check_mixed_law, default_law_probes
from opmodel.bialgebras.classify import classify_algebra_morphism
from opmodel.bialgebras.laws import validate_law
from opmodel.bialgebras.model import classify_bialgebra_morphism, factorize_bialgebra
from opmodel.coalgebras.closure import finite_subcoalgebra
from opmodel.coalgebras.cofree import cofree
from opmodel.coalgebras.colimits import pushout
from opmodel.coalgebras.limits import equalizer, product
from opmodel.coalgebras.structure import check_coalgebra, check_morphism
from opmodel.core.complexes import classify_chain_map, homology
from opmodel.core.config import DEFAULT_CONFIG, FamilyBounds
from opmodel.core.errors import (
    ComparisonFailed,
    LawInconsistent,
    NoLiftFound,
    OpmodelError,
    StageBudgetExhausted,
)
from opmodel.core.logging import get_logger
from opmodel.envelope.enveloping import check_structure_maps, enveloping_evaluate
from opmodel.envelope.homotopy import check_acyclic_projection, compare_with_product
from opmodel.export.reports import Report
from opmodel.export.tables import dims_table, flags_table, write_table_csv
from opmodel.loaders.complexes import load_chain_map, load_complex
from opmodel.loaders.laws import load_bialgebra, load_bialgebra_morphism, load_law
from opmodel.loaders.operads import load_operad, parse_operad
from opmodel.loaders.reader import Node, read_document
from opmodel.loaders.structures import (
    algebra_to_dict,
    coalgebra_to_dict,
    load_algebra,
    load_algebra_morphism,
    load_coalgebra,
    load_coalgebra_morphism,
    parse_coalgebra_morphism,
)
from opmodel.model.classify import classify_coalgebra_morphism
from opmodel.model.factorization import factorize_cof_trivfib, factorize_smallobject
from opmodel.model.families import sample_generating_family
from opmodel.model.lifting import LiftingProblem, solve_lifting
from opmodel.operads.operad import check_operad_axioms

logger = get_logger("opmodel.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# raised when a checked statement fails on the given instance
PROPERTY_ERRORS = (ComparisonFailed, NoLiftFound, StageBudgetExhausted, LawInconsistent)


@dataclass
class Outcome:
    result: dict
    ok: bool = True
    table: pd.DataFrame | None = None
    inputs: list[str] = field(default_factory=list)


def _operad(ref: str):
    """A built-in name or a path to an operad document."""
    return parse_operad(Node(ref, "<command line>", "--operad", Path.cwd()))


def _family(args, operad, max_degree: int, required: bool = False):
    if not (required or getattr(args, "family", False)):
        return None
    bounds = FamilyBounds(
        max_dim=args.family_dim,
        max_degree=min(args.family_degree, max_degree),
        size=args.family_size,
    )
    return sample_generating_family(operad, bounds, acyclic=args.acyclic, seed=args.seed, max_degree=max_degree)


def _report_outcome(report) -> Outcome:
    return Outcome(report.to_dict(), bool(report))


# --- verbs ---


def cmd_homology(args) -> Outcome:
    c = load_complex(args.complex, args.max_degree)
    h = homology(c)
    table = h.table()
    return Outcome(
        {
            "complex": c.name,
            "dims": list(c.dims),
            "betti": list(h.betti),
            "acyclic": h.is_acyclic(),
            "top_degree": c.max_degree,
            "table": table.to_dict(orient="records"),
        },
        table=table,
        inputs=[args.complex],
    )


def cmd_classify(args) -> Outcome:
    kind = args.kind
    if kind == "chain":
        flags = classify_chain_map(load_chain_map(args.path, args.max_degree)).to_dict()
    elif kind == "coalgebra":
        f = load_coalgebra_morphism(args.path, args.max_degree)
        family = _family(args, f.source.operad, f.source.max_degree)
        flags = classify_coalgebra_morphism(f, family, args.probes, args.seed).to_dict()
    elif kind == "algebra":
        f = load_algebra_morphism(args.path, args.max_degree)
        flags = classify_algebra_morphism(f, seed=args.seed).to_dict()
    else:
        f = load_bialgebra_morphism(args.path, args.max_degree)
        family = _family(args, f.source.law.Q, f.source.max_degree)
        flags = classify_bialgebra_morphism(f, family, args.probes, args.seed).to_dict()
    return Outcome({"kind": kind, "flags": flags}, table=flags_table(flags), inputs=[args.path])


def cmd_check(args) -> Outcome:
    kind = args.kind
    if kind == "operad":
        outcome = _report_outcome(check_operad_axioms(load_operad(args.path, validate=False)))
    elif kind == "coalgebra":
        outcome = _report_outcome(check_coalgebra(load_coalgebra(args.path, args.max_degree)))
    elif kind == "algebra":
        outcome = _report_outcome(check_algebra(load_algebra(args.path, args.max_degree)))
    elif kind == "bialgebra":
        outcome = _report_outcome(check_bialgebra(load_bialgebra(args.path, args.max_degree)))
    else:
        law = load_law(args.path)
        report = validate_law(law)
        if report:
            report.extend(check_mixed_law(law, default_law_probes(args.max_degree or 3)))
        outcome = _report_outcome(report)
    outcome.inputs = [args.path]
    return outcome


def cmd_cofree(args) -> Outcome:
    v = load_complex(args.complex, args.max_degree)
    c, _ = cofree(_operad(args.operad), v)
    return Outcome(
        {"dims": list(c.complex.dims), "coalgebra": coalgebra_to_dict(c, args.operad)},
        table=dims_table({v.name: v.dims, c.name: c.complex.dims}),
        inputs=[args.complex],
    )


def cmd_free(args) -> Outcome:
    v = load_complex(args.complex, args.max_degree)
    a = free_algebra(_operad(args.operad), v)
    return Outcome(
        {"dims": list(a.complex.dims), "algebra": algebra_to_dict(a, args.operad)},
        table=dims_table({v.name: v.dims, a.name: a.complex.dims}),
        inputs=[args.complex],
    )


def cmd_product(args) -> Outcome:
    r = load_coalgebra(args.left, args.max_degree)
    s = load_coalgebra(args.right, args.max_degree)
    result = product(r, s)
    checks = [check_morphism(p) for p in result.projections]
    dims = result.coalgebra.complex.dims
    return Outcome(
        {
            "dims": list(dims),
            "projections": [c.to_dict() for c in checks],
        },
        ok=all(checks),
        table=dims_table({"left": r.complex.dims, "right": s.complex.dims, "product": dims}),
        inputs=[args.left, args.right],
    )


def cmd_equalizer(args) -> Outcome:
    d0 = load_coalgebra_morphism(args.d0, args.max_degree)
    d1 = load_coalgebra_morphism(args.d1, args.max_degree)
    s0 = load_chain_map(args.section, args.max_degree)
    inclusion = equalizer(d0, d1, s0)
    report = check_morphism(inclusion)
    return Outcome(
        {"dims": list(inclusion.source.complex.dims), "inclusion": report.to_dict()},
        ok=bool(report),
        table=dims_table({"equalizer": inclusion.source.complex.dims}),
        inputs=[args.d0, args.d1, args.section],
    )


def cmd_pushout(args) -> Outcome:
    f = load_coalgebra_morphism(args.f, args.max_degree)
    g = load_coalgebra_morphism(args.g, args.max_degree)
    result = pushout(f, g)
    report = check_coalgebra(result.coalgebra)
    return Outcome(
        {
            "dims": list(result.coalgebra.complex.dims),
            "cobase_injective": result.cobase_injective,
            "coalgebra": report.to_dict(),
        },
        ok=bool(report),
        table=dims_table({"pushout": result.coalgebra.complex.dims}),
        inputs=[args.f, args.g],
    )


def cmd_subcoalgebra(args) -> Outcome:
    c = load_coalgebra(args.coalgebra, args.max_degree)
    raw = json.loads(args.vector)
    vector = Node(raw, "<command line>", "--vector").as_vector(c.complex.dim(args.degree))
    inclusion = finite_subcoalgebra(c, args.degree, dict(enumerate(vector)))
    report = check_coalgebra(inclusion.source)
    return Outcome(
        {"dims": list(inclusion.source.complex.dims), "coalgebra": report.to_dict()},
        ok=bool(report),
        table=dims_table({c.name: c.complex.dims, inclusion.source.name: inclusion.source.complex.dims}),
        inputs=[args.coalgebra],
    )


def cmd_envelope(args) -> Outcome:
    a = load_coalgebra(args.coalgebra, args.max_degree)
    c = load_complex(args.complex, a.max_degree)
    evaluation = enveloping_evaluate(a, c)
    structure = check_structure_maps(evaluation.structure)
    return Outcome(
        {"dims": list(evaluation.dims), "structure_maps": structure},
        ok=all(structure.values()),
        table=dims_table({evaluation.coalgebra.name: evaluation.dims}),
        inputs=[args.coalgebra, args.complex],
    )


def cmd_compare(args) -> Outcome:
    a = load_coalgebra(args.coalgebra, args.max_degree)
    c = load_complex(args.complex, a.max_degree)
    certificate = compare_with_product(a, c)
    return Outcome(
        certificate.to_dict(),
        table=dims_table({"envelope": certificate.dims, "product": certificate.product.coalgebra.complex.dims}),
        inputs=[args.coalgebra, args.complex],
    )


def cmd_acyclic_projection(args) -> Outcome:
    a = load_coalgebra(args.coalgebra, args.max_degree)
    c = load_complex(args.complex, a.max_degree)
    verdict = check_acyclic_projection(a, c)
    return Outcome(
        verdict.to_dict(),
        ok=verdict.weak_equivalence,
        table=flags_table(verdict.flags.to_dict()),
        inputs=[args.coalgebra, args.complex],
    )


def cmd_lift(args) -> Outcome:
    doc = read_document(args.problem)
    i, p, a, b = (parse_coalgebra_morphism(doc.get(k), args.max_degree) for k in ("i", "p", "a", "b"))
    certificate = solve_lifting(LiftingProblem(i, p, a, b))
    return Outcome(certificate.to_dict(), ok=certificate.report.ok, inputs=[args.problem])


def cmd_factorize(args) -> Outcome:
    if args.method == "bialgebra":
        f = load_bialgebra_morphism(args.morphism, args.max_degree)
        family = _family(args, f.source.law.Q, f.source.max_degree)
        result = factorize_bialgebra(f, family, args.max_stages, probes=args.probes, seed=args.seed)
    else:
        f = load_coalgebra_morphism(args.morphism, args.max_degree)
        family = _family(args, f.source.operad, f.source.max_degree)
        if args.method == "cof-trivfib":
            result = factorize_cof_trivfib(f, family, args.probes, args.seed)
        else:
            family = family or _family(args, f.source.operad, f.source.max_degree, required=True)
            result = factorize_smallobject(f, family, args.max_stages, probes=args.probes, seed=args.seed)
    out = result.to_dict()
    if family is not None:
        out["family"] = family.to_dict()
    certificates = result.certificates
    ok = result.composite_ok() and all(v for v in certificates.values() if isinstance(v, bool))
    if isinstance(certificates.get("right_rlp"), dict):
        ok = ok and certificates["right_rlp"]["holds"]
    return Outcome(out, ok=ok, table=result.stages, inputs=[args.morphism])


def cmd_sample_family(args) -> Outcome:
    operad = _operad(args.operad)
    D = args.max_degree or DEFAULT_CONFIG.truncation.max_degree
    bounds = FamilyBounds(max_dim=args.family_dim, max_degree=min(args.family_degree, D), size=args.family_size)
    family = sample_generating_family(operad, bounds, acyclic=args.acyclic, seed=args.seed, max_degree=D)
    manifest = family.to_dict()
    return Outcome(manifest, table=pd.DataFrame(manifest["members"]))


VERBS = {
    "homology": cmd_homology,
    "classify": cmd_classify,
    "check": cmd_check,
    "cofree": cmd_cofree,
    "free": cmd_free,
    "product": cmd_product,
    "equalizer": cmd_equalizer,
    "pushout": cmd_pushout,
    "subcoalgebra": cmd_subcoalgebra,
    "envelope": cmd_envelope,
    "compare": cmd_compare,
    "prop28": cmd_compare,
    "acyclic-projection": cmd_acyclic_projection,
    "cor210": cmd_acyclic_projection,
    "lift": cmd_lift,
    "factorize": cmd_factorize,
    "sample-family": cmd_sample_family,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--max-degree",
        type=int,
        default=None,
        help="Truncation degree D (default: the inputs' own; 4 for generated objects)",
    )
    common.add_argument("--seed", type=int, default=DEFAULT_CONFIG.sampling.seed, help="Seed for sampled families and probes")
    common.add_argument("--out", default=None, help="Write the JSON report here instead of stdout")
    common.add_argument("--csv", default=None, help="Also write the main table of the report as CSV")
    common.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", action="store_true", help="Sample a generating family (seeded) for relative flags")
    family.add_argument("--acyclic", action="store_true", help="Keep only acyclic family members")
    family.add_argument("--family-size", type=int, default=DEFAULT_CONFIG.family.size)
    family.add_argument("--family-dim", type=int, default=DEFAULT_CONFIG.family.max_dim)
    family.add_argument("--family-degree", type=int, default=DEFAULT_CONFIG.family.max_degree)
    family.add_argument("--probes", type=int, default=DEFAULT_CONFIG.sampling.probes)

    parser = argparse.ArgumentParser(
        prog="opmodel",
        description="opmodel – exact computations with operadic (co)algebras and their model structures",
    )
    parser.add_argument("--version", action="version", version=f"opmodel {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("homology", parents=[common], help="Betti numbers of a complex")
    p.add_argument("complex")

    p = sub.add_parser("classify", parents=[common, family], help="Model-structure flags of a morphism")
    p.add_argument("kind", choices=["chain", "coalgebra", "algebra", "bialgebra"])
    p.add_argument("path")

    p = sub.add_parser("check", parents=[common], help="Check the axioms of a structure")
    p.add_argument("kind", choices=["operad", "coalgebra", "algebra", "bialgebra", "law"])
    p.add_argument("path")

    for verb, text in (("cofree", "Cofree coalgebra on a complex"), ("free", "Free algebra on a complex")):
        p = sub.add_parser(verb, parents=[common], help=text)
        p.add_argument("complex")
        p.add_argument("--operad", default="As", help="Built-in name (As, Com, Lie3) or operad file")

    p = sub.add_parser("product", parents=[common], help="Product of two coalgebras")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("equalizer", parents=[common], help="Equalizer of a coreflexive pair")
    p.add_argument("d0")
    p.add_argument("d1")
    p.add_argument("section", help="Chain map file of the common section")

    p = sub.add_parser("pushout", parents=[common], help="Pushout of two coalgebra morphisms")
    p.add_argument("f")
    p.add_argument("g")

    p = sub.add_parser("subcoalgebra", parents=[common], help="Sub-coalgebra generated by one element")
    p.add_argument("coalgebra")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--vector", required=True, help='Coordinates in that degree, e.g. \'["1", "0"]\'')

    for verb, text in (
        ("envelope", "Evaluate the enveloping cooperad of A at C"),
        ("compare", "Compare U(A)(C) with A x P*(C)"),
        ("prop28", "Same as compare"),
        ("acyclic-projection", "Projection A x P*(C) -> A for acyclic C"),
        ("cor210", "Same as acyclic-projection"),
    ):
        p = sub.add_parser(verb, parents=[common], help=text)
        p.add_argument("coalgebra")
        p.add_argument("complex")

    p = sub.add_parser("lift", parents=[common], help="Solve a lifting problem given as {i, p, a, b}")
    p.add_argument("problem")

    p = sub.add_parser("factorize", parents=[common, family], help="Factor a morphism")
    p.add_argument("method", choices=["cof-trivfib", "smallobject", "bialgebra"])
    p.add_argument("morphism")
    p.add_argument("--max-stages", type=int, default=DEFAULT_CONFIG.small_object.max_stages)

    p = sub.add_parser("sample-family", parents=[common, family], help="Sample a generating family")
    p.add_argument("--operad", default="As", help="Built-in name (As, Com, Lie3) or operad file")

    return parser


def _flags(args) -> dict:
    skip = {"verb", "out", "csv", "log_level"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.getLogger("opmodel").setLevel(args.log_level)
    logger.info(f"opmodel {__version__}: {args.verb}")

    try:
        outcome = VERBS[args.verb](args)
    except PROPERTY_ERRORS as exc:
        logger.error(str(exc))
        witness = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("degree", "stages"):
            if hasattr(exc, attr):
                witness[attr] = getattr(exc, attr)
        outcome = Outcome(witness, ok=False)
    except (OpmodelError, FileNotFoundError) as exc:
        logger.error(str(exc))
        return EXIT_USAGE

    report = Report(args.verb, __version__, _flags(args), list(outcome.inputs), outcome.result, outcome.ok)
    if args.out:
        path = report.write(args.out)
        logger.info(f"Report: {path}")
    else:
        sys.stdout.write(report.dumps())
    if args.csv and outcome.table is not None:
        path = write_table_csv(Path(args.csv), outcome.table)
        logger.info(f"Table: {path}")

    if not outcome.ok:
        logger.warning("A checked property fails; see the report for the witness")
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
