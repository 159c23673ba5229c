"""Command line interface: build | classify | sweep | witness | decompose | selftest.

Exit codes: 0 success, 2 invalid arguments, 3 precondition failure,
4 selftest failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import matrix_core
from .classify import (
    EvidenceKind,
    NotSeparableError,
    Verdict,
    classify_fam,
    classify_famg,
    separable_decomposition,
)
from .estimators import BellDiagonalClassifier
from .matrix_core import hermitian_eigenvalues
from .selftest import SelftestConfig, run_selftest
from .serialize import ClassifyRecord, csv_text, dumps, matrix_to_json, vector_to_json
from .states import (
    FamGWeights,
    FamWeights,
    check_symmetry,
    epsilon_family,
    fam_g_state,
    fam_state,
    horodecki_family,
    isotropic_state,
    isotropic_weights,
    random_phase_vectors,
)
from .witnesses import WitnessSpec, evaluate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_SELFTEST = 4

FAMILY_NAMES = ("fam", "famg", "horodecki", "epsilon", "isotropic")
SWEEP_PARAM = {"horodecki": "alpha", "epsilon": "epsilon", "isotropic": "lambda_d", "fam": "t", "famg": "t"}


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _family_weights(family: str, d: int, args) -> tuple[FamWeights | FamGWeights, dict]:
    """Weights and the parameter dict echoed into the output."""

    def need(name, flag):
        value = getattr(args, name, None)
        if value is None:
            raise UsageError(f"family {family!r} requires {flag}")
        return value

    if family == "fam":
        lams = need("lambdas", "--lambdas")
        if len(lams) != d:
            raise UsageError(f"fam needs {d} weights lambda_1..lambda_d, got {len(lams)}")
        return FamWeights(lams), {"lambdas": lams}
    if family == "famg":
        lams = need("lambdas", "--lambdas")
        if len(lams) != d + 1:
            raise UsageError(f"famg needs {d + 1} weights lambda_0..lambda_d, got {len(lams)}")
        return FamGWeights(lams), {"lambdas": lams}
    if family == "horodecki":
        alpha = need("alpha", "--alpha")
        return horodecki_family(d, alpha), {"alpha": alpha}
    if family == "epsilon":
        eps = need("epsilon", "--epsilon")
        return epsilon_family(d, eps), {"epsilon": eps}
    if family == "isotropic":
        lam = need("lambda_d", "--lambda-d")
        return isotropic_weights(d, lam), {"lambda_d": lam}
    raise UsageError(f"unknown family {family!r}")


def _state(w) -> np.ndarray:
    return fam_state(w) if isinstance(w, FamWeights) else fam_g_state(w)


def _classify(w, tol_eig: float) -> Verdict:
    if isinstance(w, FamWeights):
        return classify_fam(w, tol_eig=tol_eig)
    return classify_famg(w, tol_eig=tol_eig)


def _record(family, w, params, verdict: Verdict) -> ClassifyRecord:
    det = verdict.best_witness
    witness = None
    if det is not None:
        spec = det.best_spec
        witness = {"d": spec.d, "k": spec.k, "pi": list(spec.pi), "value": det.best_value}
    dec = verdict.find(EvidenceKind.DECOMPOSITION)
    return ClassifyRecord(
        family=family,
        d=w.d,
        params=params,
        weights=list(w.lambdas),
        verdict=verdict.kind.value,
        min_pt_eig=verdict.min_pt_eig,
        witness=witness,
        decomposition_terms=dec.data["terms"] if dec else None,
        evidence=[e.to_dict() for e in verdict.evidence],
    )


def cmd_build(args) -> tuple[str, int]:
    w, params = _family_weights(args.family, args.d, args)
    if args.family == "isotropic":
        rho = isotropic_state(args.d, args.lambda_d)
    else:
        rho = _state(w)
    residual = max(check_symmetry(rho, x) for x in random_phase_vectors(args.d, 5, args.seed))
    out = {
        "family": args.family,
        "d": args.d,
        "params": params,
        "weights": list(w.lambdas),
        "trace": float(np.trace(rho).real),
        "min_eigenvalue": float(hermitian_eigenvalues(rho)[0]),
        "symmetry_residual": residual,
        "matrix": matrix_to_json(rho),
    }
    return _render(args, out), EXIT_OK


def cmd_classify(args) -> tuple[str, int]:
    w, params = _family_weights(args.family, args.d, args)
    rec = _record(args.family, w, params, _classify(w, args.tol_eig))
    if args.format == "csv":
        header = ["verdict", "min_pt_eig", "best_witness_value", "decomposition_terms"]
        row = [
            rec.verdict,
            rec.min_pt_eig,
            rec.witness["value"] if rec.witness else "",
            "" if rec.decomposition_terms is None else rec.decomposition_terms,
        ]
        return csv_text(header, [row]), EXIT_OK
    return dumps(rec.to_dict()) + "\n", EXIT_OK


def _grid(args) -> list[float]:
    if args.values is not None:
        if not args.values:
            raise UsageError("--values is empty")
        return list(args.values)
    if args.start is None or args.stop is None or args.step is None:
        raise UsageError("sweep needs --start, --stop and --step (or --values)")
    if not args.step > 0:
        raise UsageError("--step must be positive")
    if args.start > args.stop:
        raise UsageError("--start must not exceed --stop")
    n = int(np.floor((args.stop - args.start) / args.step + 1e-9)) + 1
    return [round(args.start + i * args.step, 12) for i in range(n)]


def _sweep_weights(family: str, d: int, value: float, base):
    if family == "horodecki":
        return horodecki_family(d, value)
    if family == "epsilon":
        return epsilon_family(d, value)
    if family == "isotropic":
        return isotropic_weights(d, value)
    # fam / famg: mix the base weights with P+ by the fraction t
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"mixing fraction t={value!r} must lie in [0, 1]")
    lams = (1.0 - value) * np.asarray(base.lambdas)
    lams[-1] += value
    return type(base)(lams)


def cmd_sweep(args) -> tuple[str, int]:
    family = args.family
    base = None
    if family in ("fam", "famg"):
        base, _ = _family_weights(family, args.d, args)
    values = _grid(args)
    weights = [_sweep_weights(family, args.d, v, base) for v in values]
    clf = BellDiagonalClassifier(
        family="fam" if isinstance(weights[0], FamWeights) else "famg", tol_eig=args.tol_eig
    )
    X = np.array([w.lambdas for w in weights])
    verdicts = clf.fit(X).verdicts(X)
    rows = [
        [v, verdict.kind.value, verdict.min_pt_eig, verdict.best_witness.best_value]
        for v, verdict in zip(values, verdicts)
    ]
    header = ["param", "verdict", "min_pt_eig", "best_witness_value"]
    if args.format == "csv":
        return csv_text(header, rows), EXIT_OK
    out = {
        "family": family,
        "d": args.d,
        "parameter": SWEEP_PARAM[family],
        "rows": [dict(zip(header, r)) for r in rows],
    }
    return _render(args, out), EXIT_OK


def cmd_witness(args) -> tuple[str, int]:
    w, params = _family_weights(args.family, args.d, args)
    spec = WitnessSpec(args.d, args.k, tuple(args.pi) if args.pi else None)
    value = evaluate(_state(w), spec)
    out = {
        "family": args.family,
        "params": params,
        "spec": {"d": spec.d, "k": spec.k, "pi": list(spec.pi)},
        "trace_value": value,
        "detected": value < -1e-12,
    }
    return _render(args, out), EXIT_OK


def cmd_decompose(args) -> tuple[str, int]:
    w, params = _family_weights(args.family, args.d, args)
    ens = separable_decomposition(w)
    err = ens.reconstruction_error(_state(w))
    out = {
        "family": args.family,
        "d": args.d,
        "params": params,
        "term_count": len(ens),
        "reconstruction_error": err,
        "terms": [
            {"w": float(wt), "ketA": vector_to_json(a), "ketB": vector_to_json(b)}
            for wt, a, b in ens.terms()
        ],
    }
    return _render(args, out), EXIT_OK


def cmd_selftest(args) -> tuple[str, int]:
    cfg = SelftestConfig(
        d_max=args.d_max, seed=args.seed, product_samples=args.samples, jacobi_tol=args.jacobi_tol
    )
    results = run_selftest(cfg)
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results]
    ok = all(r.passed for r in results)
    lines.append("selftest passed" if ok else "selftest FAILED")
    return "\n".join(lines) + "\n", EXIT_OK if ok else EXIT_SELFTEST


def _render(args, obj) -> str:
    if args.format == "csv":
        raise UsageError(f"{args.command} does not support --format csv")
    return dumps(obj) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=3, help="local dimension (2..8)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol-eig", type=float, default=1e-10, dest="tol_eig")
    common.add_argument("--output", type=Path, default=None, help="write to a file instead of stdout")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("family", choices=FAMILY_NAMES)
    fam.add_argument("--lambdas", type=_float_list, help="comma-separated weights")
    fam.add_argument("--alpha", type=float)
    fam.add_argument("--epsilon", type=float)
    fam.add_argument("--lambda-d", type=float, dest="lambda_d")

    parser = argparse.ArgumentParser(
        prog="bellqudit", description="Bell-diagonal qudit states with abelian symmetry"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common, fam], help="print a density matrix").set_defaults(
        func=cmd_build
    )
    sub.add_parser("classify", parents=[common, fam], help="separability verdict").set_defaults(
        func=cmd_classify
    )
    sweep = sub.add_parser("sweep", parents=[common, fam], help="verdicts over a parameter grid")
    sweep.add_argument("--start", type=float)
    sweep.add_argument("--stop", type=float)
    sweep.add_argument("--step", type=float)
    sweep.add_argument("--values", type=_float_list, help="explicit grid, overrides start/stop/step")
    sweep.set_defaults(func=cmd_sweep)
    wit = sub.add_parser("witness", parents=[common, fam], help="evaluate Tr(rho W)")
    wit.add_argument("--k", type=int, required=True)
    wit.add_argument("--pi", type=_int_list, help="images pi(1),...,pi(d-1); identity if omitted")
    wit.set_defaults(func=cmd_witness)
    sub.add_parser("decompose", parents=[common, fam], help="explicit separable ensemble").set_defaults(
        func=cmd_decompose
    )
    st = sub.add_parser("selftest", parents=[common], help="run the invariant suites")
    st.add_argument("--d-max", type=int, default=5, dest="d_max")
    st.add_argument("--samples", type=int, default=2000, help="product vectors per witness")
    st.add_argument("--jacobi-tol", type=float, default=matrix_core.JACOBI_TOL, help=argparse.SUPPRESS)
    st.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except NotSeparableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output is not None:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
