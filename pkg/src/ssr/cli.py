"""Command-line front end: construct, verify, and probe the structures
with JSON input/output.

Exit codes: 0 success, 1 invalid input, 2 invariant failure (a
counterexample payload is printed to stderr).  All output is
deterministic given the same inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import charts, constructions, decompose, faulkner
from .constructions import CONSTRUCTION_NAMES, construct, zero_set_oracle
from .core import (
    SSRData,
    bigQ,
    classical_eisenstein,
    coisotropy_check,
    covariant_identities,
    covariant_report,
    eisenstein_syzygy,
    minimal_polynomial_mu,
    mu,
    q_vanishing_test,
    verify_ssr,
)
from .errors import DisagreementError, SSRError
from .fields import FieldElement, parse_field

SCHEMA = "ssr-cli/1"

# errors that mean "bad input", not "broken invariant"
_VALIDATION_ERRORS = (ValueError, KeyError, TypeError, OSError)
_INVARIANT_ERRORS = (AssertionError,)  # DisagreementError, CalibrationFailure


def _emit(obj, out_path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _fail(payload, code):
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def _load_ssr(path: str) -> SSRData:
    obj = json.loads(Path(path).read_text())
    return SSRData.from_json(obj)


def _parse_scalar(field, text: str):
    """A field element from a JSON literal, accepting plain ints and
    fraction strings as well as the field's own encoding."""
    from fractions import Fraction

    obj = json.loads(text)
    try:
        return field.from_json(obj)
    except (ValueError, TypeError):
        if isinstance(obj, str):
            return field.coerce(Fraction(obj))
        return field.coerce(obj)


def _parse_vector(ssr: SSRData, text: str):
    vals = json.loads(text)
    if len(vals) != ssr.dim_v:
        raise ValueError(
            f"vector length {len(vals)} != dim V = {ssr.dim_v}"
        )
    return [ssr.field.from_json(x) for x in vals]


def _canonical_name(name: str) -> str:
    key = name.lower().replace("_", "").replace("-", "")
    for known in CONSTRUCTION_NAMES:
        if known.replace("_", "") == key:
            return known
    raise ValueError(
        f"unknown construction {name!r}; choose from {CONSTRUCTION_NAMES}"
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_construct(args) -> int:
    field = parse_field(args.field)
    params = {}
    if args.n is not None:
        params["n"] = args.n
    if args.lam is not None:
        params["lam_j"] = _parse_scalar(field, args.lam)
    ssr = construct(_canonical_name(args.name), field, **params)
    _emit(ssr.to_json(), args.out)
    return 0


def cmd_verify(args) -> int:
    ssr = _load_ssr(args.ssr)
    rep = verify_ssr(ssr)
    _emit({"schema": SCHEMA, "report": rep.to_json()}, args.out)
    if not rep.passed:
        return _fail({"error": "verification failed", "report": rep.to_json()}, 2)
    return 0


def cmd_covariants(args) -> int:
    ssr = _load_ssr(args.ssr)
    v = _parse_vector(ssr, args.vector)
    rep = covariant_report(ssr, v)
    _emit({"schema": SCHEMA, "covariants": rep.to_json()}, args.out)
    return 0


def cmd_decompose(args) -> int:
    from .errors import NotASquare

    ssr = _load_ssr(args.ssr)
    v = _parse_vector(ssr, args.vector)
    try:
        d = decompose.lagrangian_decompose(ssr, v)
    except NotASquare:
        if args.lam is None:
            raise
        lam = _parse_scalar(ssr.field, args.lam)
        d = decompose.quad_ext_decompose(ssr, v, lam)
    _emit({"schema": SCHEMA, "decomposition": d.to_json()}, args.out)
    return 0


def cmd_fiber(args) -> int:
    ssr = _load_ssr(args.ssr)
    f = ssr.field
    v = _parse_vector(ssr, args.vector)
    fib = decompose.mu_fiber(ssr, v)
    pts = []
    for i, p in enumerate(fib.sample(args.samples)):
        if i >= args.samples:
            break
        pts.append([f.to_json(x) for x in p])
    _emit(
        {
            "schema": SCHEMA,
            "q": f.to_json(fib.q.raw),
            "points": pts,
        },
        args.out,
    )
    return 0


def cmd_syzygy(args) -> int:
    ssr = _load_ssr(args.ssr)
    f = ssr.field
    rng = random.Random(args.seed)
    checked = 0
    for _ in range(args.samples):
        v = [f.random(rng) for _ in range(ssr.dim_v)]
        if not eisenstein_syzygy(ssr, v):
            return _fail(
                {
                    "error": "matrix syzygy failed",
                    "seed": args.seed,
                    "vector": [f.to_json(x) for x in v],
                },
                2,
            )
        checked += 1
    classical = 0
    if ssr.name == "binary_cubics":
        for _ in range(args.samples):
            p = [f.random(rng) for _ in range(4)]
            pt = [f.random(rng) for _ in range(2)]
            classical_eisenstein(ssr, p, pt)  # raises on failure
            classical += 1
    _emit(
        {
            "schema": SCHEMA,
            "seed": args.seed,
            "matrix_syzygy_checked": checked,
            "scalar_syzygy_checked": classical,
        },
        args.out,
    )
    return 0


def cmd_lie_build(args) -> int:
    ssr = _load_ssr(args.ssr)
    g = faulkner.build_lie_algebra(ssr)
    bad = faulkner.verify_jacobi(g)
    rep = faulkner.grading_report(g)
    payload = {
        "schema": SCHEMA,
        "lie": g.to_json(),
        "heisenberg": rep["heisenberg"],
        "jacobi_counterexample": list(bad) if bad else None,
    }
    _emit(payload, args.out)
    if bad is not None or not rep["heisenberg"]:
        return _fail({"error": "Lie structure invalid", "payload": payload}, 2)
    return 0


def cmd_chart(args) -> int:
    ssr = _load_ssr(args.ssr)
    f = ssr.field
    lam = _parse_scalar(f, args.lam)
    point = json.loads(args.point)
    if args.map == "alpha":
        hp = charts.hat_point(
            ssr, lam, [f.from_json(x) for x in point["p"]],
            f.from_json(point["z"]),
        )
        v = charts.alpha(ssr, lam, hp)
        from .fields import quadratic_algebra

        ext = quadratic_algebra(f, charts.canonical_lambda(f, lam).raw)
        _emit(
            {
                "schema": SCHEMA,
                "v": [ext.to_json(x) for x in v.v],
                "h": f.to_json(v.h),
            },
            args.out,
        )
        return 0
    if args.map == "beta":
        from .fields import quadratic_algebra

        lam_raw = charts.canonical_lambda(f, lam).raw
        ext = quadratic_algebra(f, lam_raw)
        v = [ext.from_json(x) for x in point["v"]]
        zp = charts.z_gen_point(ssr, lam_raw, v)
        hp = charts.beta(ssr, lam_raw, zp)
        _emit(
            {
                "schema": SCHEMA,
                "p": [f.to_json(x) for x in hp.p],
                "z": f.to_json(hp.z),
            },
            args.out,
        )
        return 0
    # act
    a, b = json.loads(args.scalar)
    hp = charts.hat_point(
        ssr, lam, [f.from_json(x) for x in point["p"]], f.from_json(point["z"])
    )
    moved = charts.torus_act(ssr, lam, (f.from_json(a), f.from_json(b)), hp)
    _emit(
        {
            "schema": SCHEMA,
            "p": [f.to_json(x) for x in moved.p],
            "z": f.to_json(moved.z),
        },
        args.out,
    )
    return 0


def _selftest_construction(ssr, rng, samples):
    """Per-construction invariant batch; returns (results, counterexample)."""
    f = ssr.field
    n = ssr.dim_v
    results = {}

    rep = verify_ssr(ssr)
    results["axioms"] = rep.passed

    def rand_vec():
        return [f.random(rng) for _ in range(n)]

    def rand_nonzero():
        while True:
            v = rand_vec()
            if any(not f.is_zero(x) for x in v):
                return v

    ok = True
    for _ in range(samples):
        good, witness = coisotropy_check(ssr, rand_nonzero())
        if not good:
            return results, {"invariant": "coisotropy", "witness": witness}
    results["coisotropy"] = ok

    for _ in range(samples):
        v = rand_vec()
        q_vanishing_test(ssr, v)  # raises on disagreement
        if any(not f.is_zero(x) for x in v):
            oracle = zero_set_oracle(ssr, v)
            null = all(f.is_zero(x) for x in mu(ssr, v))
            if oracle != null:
                return results, {
                    "invariant": "zero_set_oracle",
                    "vector": [f.to_json(x) for x in v],
                }
    results["q_vanishing"] = True
    results["zero_set_oracle"] = True

    for _ in range(samples):
        ids = covariant_identities(ssr, rand_vec(), f.random(rng), f.random(rng))
        if not all(ids.values()):
            return results, {"invariant": "covariant_identities", "detail": ids}
    results["covariant_identities"] = True

    for _ in range(samples):
        if not eisenstein_syzygy(ssr, rand_vec()):
            return results, {"invariant": "matrix_syzygy"}
    results["matrix_syzygy"] = True

    hits = 0
    for _ in range(samples * 4):
        if hits >= samples:
            break
        v = rand_vec()
        q = bigQ(ssr, v).raw
        if f.is_zero(q) or f.sqrt(q) is None:
            continue
        d = decompose.lagrangian_decompose(ssr, v)  # postconditions assert
        minimal_polynomial_mu(ssr, v)
        hits += 1
    results["decomposition"] = True
    return results, None


def cmd_selftest(args) -> int:
    field = parse_field(args.field)
    rng = random.Random(args.seed)
    report = {"schema": SCHEMA, "field": args.field, "seed": args.seed}
    per = {}
    for name in CONSTRUCTION_NAMES:
        ssr = construct(name, field, n=2, lam_j=2)
        try:
            results, bad = _selftest_construction(ssr, rng, args.samples)
        except DisagreementError as exc:
            results, bad = {}, {"invariant": "exception", "detail": str(exc)}
        per[name] = results
        if bad is not None:
            report["constructions"] = per
            return _fail(
                {"error": "selftest failed", "construction": name, **bad}, 2
            )
    # one small Lie build keeps the cross-module path covered
    g = faulkner.build_lie_algebra(construct("binary_cubics", field))
    per["lie_binary_cubics"] = {
        "jacobi": faulkner.verify_jacobi(g) is None,
        "heisenberg": faulkner.grading_report(g)["heisenberg"],
    }
    report["constructions"] = per
    _emit(report, args.out)
    if not all(all(v.values()) for v in per.values()):
        return _fail({"error": "selftest failed", "report": per}, 2)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssr", description="exact symplectic representation toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write JSON output to this path")

    p = sub.add_parser("construct", help="build a named structure")
    p.add_argument("name")
    p.add_argument("--field", required=True, help="Q or Fp:<p>")
    p.add_argument("--n", type=int, help="size parameter where applicable")
    p.add_argument("--lambda", dest="lam", help="scalar parameter (JSON)")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check all structural axioms")
    p.add_argument("--ssr", required=True)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("covariants", help="covariants at a vector")
    p.add_argument("--ssr", required=True)
    p.add_argument("--vector", required=True, help="JSON list")
    common(p)
    p.set_defaults(func=cmd_covariants)

    p = sub.add_parser("decompose", help="split a vector into null summands")
    p.add_argument("--ssr", required=True)
    p.add_argument("--vector", required=True)
    p.add_argument("--lambda", dest="lam", help="square class for extension")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("fiber", help="points on the level set through a vector")
    p.add_argument("--ssr", required=True)
    p.add_argument("--vector", required=True)
    p.add_argument("--samples", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("syzygy", help="check the cubic syzygies on random input")
    p.add_argument("--ssr", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_syzygy)

    p = sub.add_parser("lie-build", help="build and check the graded Lie algebra")
    p.add_argument("--ssr", required=True)
    common(p)
    p.set_defaults(func=cmd_lie_build)

    p = sub.add_parser("chart", help="evaluate the cover charts")
    p.add_argument("map", choices=["alpha", "beta", "act"])
    p.add_argument("--ssr", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--point", required=True, help="JSON point encoding")
    p.add_argument("--scalar", help='JSON pair "[a, b]" for act')
    common(p)
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("selftest", help="run the invariant suite of every module")
    p.add_argument("--field", default="Q")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _INVARIANT_ERRORS as exc:
        return _fail({"error": "invariant failure", "detail": str(exc)}, 2)
    except SSRError as exc:
        return _fail({"error": type(exc).__name__, "detail": str(exc)}, 1)
    except _VALIDATION_ERRORS as exc:
        return _fail({"error": type(exc).__name__, "detail": str(exc)}, 1)


if __name__ == "__main__":
    sys.exit(main())
