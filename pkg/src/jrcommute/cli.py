"""Command-line front end.

Exit status: 0 when every check passes, 2 when a check fails, 3 on bad input.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import serialization as ser
from .act_core import find_violation, is_einstein
from .ansatz import build_model, verify_ansatz
from .classify import (
    classify_simple, commutes_jacobi_sampled, commutes_skew_sampled, commutes_slotwise,
)
from .decompose import decompose_model
from .equiv import transform_seed_expansion, transform_seed_pullback, verify_witness
from .errors import CurvatureError, InvalidTensor, ParseError
from .report import Report
from .scalar_linalg import signature, to_scalar

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 2, 3


def _emit(data, out=None):
    text = ser.dumps(data)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _point(text: str):
    try:
        return [to_scalar(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad point {text!r}") from exc


def _scalar_arg(text: str):
    try:
        return to_scalar(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad scalar {text!r}") from exc


def cmd_check(args) -> int:
    model = ser.model_from_json(ser.load(args.model))
    report = Report(subject=args.model)
    report.add("curvature_symmetries", find_violation(model.tensor, model.tol) is None,
               "antisymmetry, pair symmetry, first Bianchi")
    slotwise = commutes_slotwise(model)
    jac = commutes_jacobi_sampled(model, args.samples, args.rng_seed)
    skew = commutes_skew_sampled(model, args.samples, args.rng_seed)
    report.add("commuting_tests_agree", slotwise == jac == skew,
               f"slotwise={slotwise} jacobi={jac} skew={skew}")
    cls = classify_simple(model)
    report.add("classification", True, cls.variant.value)
    sig = signature(model.inner)
    report.add("signature", True, f"({sig[0]},{sig[1]})")
    report.scalars.update({"classification": cls.to_json(), "signature": list(sig),
                           "jacobi_ricci_commuting": slotwise})
    _emit(report.to_json(), args.output)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_construct(args) -> int:
    seed = ser.seed_from_json(ser.load(args.seed))
    model = build_model(seed)
    _emit(ser.model_to_json(model), args.output)
    if args.verify:
        report = verify_ansatz(seed)
        sys.stderr.write(report.format() + "\n")
        return EXIT_OK if report.ok else EXIT_FAIL
    return EXIT_OK


def cmd_decompose(args) -> int:
    model = ser.model_from_json(ser.load(args.model))
    result = decompose_model(model, args.tol)
    _emit(ser.seed_to_json(result.seed), args.output)
    if args.output:
        _emit({"residuals": {k: float(v) for k, v in result.residuals.items()},
               "adapted_basis": ser.matrix_to_json(result.basis.vectors),
               "thetas": result.basis.thetas, "flipped": result.flipped})
    return EXIT_OK


def _load_T(path):
    data = ser.load(path)
    return ser.matrix_from_json(data["T"] if isinstance(data, dict) else data)


def cmd_equiv_apply(args) -> int:
    seed = ser.seed_from_json(ser.load(args.seed))
    T = _load_T(args.T)
    route = transform_seed_pullback if args.route == "pullback" else transform_seed_expansion
    _emit(ser.seed_to_json(route(seed, T)), args.output)
    return EXIT_OK


def cmd_equiv_verify(args) -> int:
    seed = ser.seed_from_json(ser.load(args.seed))
    seed_tilde = ser.seed_from_json(ser.load(args.seed_tilde))
    witness = ser.witness_from_json(ser.load(args.witness))
    ok = verify_witness(seed, seed_tilde, witness, args.tol)
    _emit({"isomorphic_via_witness": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_example22(args) -> int:
    from .geometry import example_report, neutral_example_metric, riemann_model_at
    points = [_point(p) for p in (args.point or ["0,0,0,0"])]
    report = example_report(args.s, points)
    model = riemann_model_at(neutral_example_metric(args.s), points[0])
    _emit({"model": ser.model_to_json(model), "report": report.to_json()}, args.output)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_curvature(args) -> int:
    from .geometry import is_locally_symmetric, riemann_model_at
    metric = ser.metric_from_json(ser.load(args.metric))
    point = _point(args.point)
    model = riemann_model_at(metric, point)
    out = {"model": ser.model_to_json(model)}
    if args.symmetric:
        out["locally_symmetric"] = is_locally_symmetric(metric)
    _emit(out, args.output)
    return EXIT_OK


def cmd_random_einstein(args) -> int:
    from .act_core import Model
    from .generators import random_einstein, random_frame
    rng = np.random.default_rng(args.rng_seed)
    if args.identity:
        from .scalar_linalg import BilinearForm, identity
        g, frame = BilinearForm.identity(args.dim), identity(args.dim)
    else:
        g, frame = random_frame(args.dim, rng)
    tensor = random_einstein(args.dim, args.kind, args.constant, g=g, frame=frame)
    model = Model(g, tensor)
    data = ser.model_to_json(model)
    data["einstein_constant"] = ser.scalar_to_json(is_einstein(model))
    _emit(data, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jrcommute", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate and classify a model")
    p.add_argument("model")
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct", help="complexify a seed into a model")
    p.add_argument("seed")
    p.add_argument("-o", "--output")
    p.add_argument("--verify", action="store_true", help="also run the exact verification report")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("decompose", help="extract a seed from a simple non-Einstein model")
    p.add_argument("model")
    p.add_argument("-o", "--output")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("equiv-apply", help="reparametrize a seed by a skew contraction T")
    p.add_argument("seed")
    p.add_argument("--T", required=True, help="JSON file with a matrix or {\"T\": matrix}")
    p.add_argument("--route", choices=("pullback", "expansion"), default="expansion")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_equiv_apply)

    p = sub.add_parser("equiv-verify", help="check an isomorphism witness between two seeds")
    p.add_argument("seed")
    p.add_argument("seed_tilde")
    p.add_argument("--witness", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_equiv_verify)

    p = sub.add_parser("example22", help="signature (2,2) polynomial metric example")
    p.add_argument("--s", type=_scalar_arg, default=Fraction(1))
    p.add_argument("--point", action="append", help="comma-separated rational coordinates; repeatable")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_example22)

    p = sub.add_parser("curvature", help="curvature model of a polynomial metric at a point")
    p.add_argument("metric")
    p.add_argument("--point", required=True)
    p.add_argument("--symmetric", action="store_true", help="also test nabla A = 0")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("random-einstein", help="random rational Einstein model")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--kind", choices=("constant", "kaehler"), default="constant")
    p.add_argument("--constant", type=_scalar_arg, default=Fraction(1))
    p.add_argument("--rng-seed", type=int, required=True)
    p.add_argument("--identity", action="store_true", help="use the identity form instead of a random one")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_random_einstein)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    source = next((getattr(args, a) for a in ("model", "seed", "metric") if getattr(args, a, None)), None)
    where = f"{source}: " if source else ""
    try:
        return args.func(args)
    except (OSError, ParseError, InvalidTensor) as exc:
        sys.stderr.write(f"error: {where}{type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    except CurvatureError as exc:
        sys.stderr.write(f"error: {where}{type(exc).__name__}: {exc}\n")
        return EXIT_INPUT if isinstance(exc, ValueError) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
