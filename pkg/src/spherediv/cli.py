"""Command-line interface.

Subcommands:

* ``test``       - run the divisibility test on a rotation-tuple JSON file
                   and write a report (JSON, or CSV degree table).
* ``construct``  - emit one of the explicit constructions: ``planar``,
                   ``odd-d4``, or the ``d2-analyze`` bad-angle analysis.
* ``experiment`` - run a genericity study or a singularity search from a
                   JSON config file; writes a JSON summary and a CSV log.

Exit codes: 0 = ran, 2 = invalid input, 3 = internal inconsistency.  Every
report carries the resolved seed, the tolerances used, and the library
version, so any certificate can be reproduced.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import __version__
from .constructions import analyze_circle, odd_d4_tuple, planar_division
from .divisibility import (
    DEFAULT_SING_TOL,
    divisibility_test,
    make_divisor,
    verify_divisor,
)
from .errors import InputDomainError, InternalInconsistencyError
from .experiments import (
    GenericityStudy,
    SearchSettings,
    default_free_count,
    run_genericity,
    search_csv_text,
    search_divisible,
    trial_csv_text,
)
from .rotations import Rotation, RotationTuple, haar_sample
from .sampling import derive_rng, fresh_seed

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputDomainError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputDomainError(
            f"{path} is not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}"
        ) from exc


def _load_tuple(path) -> RotationTuple:
    obj = _load_json(path)
    try:
        return RotationTuple.from_json_obj(obj)
    except InputDomainError as exc:
        raise InputDomainError(f"{path}: {exc}") from exc


def _write_json(path, obj) -> None:
    text = json.dumps(obj, indent=2)
    if path is None or path == "-":
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _resolve_seed_arg(seed) -> int:
    if seed is None:
        seed = fresh_seed()
        print(f"seed: {seed} (derived; pass --seed to reproduce)")
    else:
        print(f"seed: {seed}")
    return int(seed)


def _stamp(obj: dict, seed: int, sing_tol=None) -> dict:
    obj["seed"] = seed
    obj["version"] = __version__
    if sing_tol is not None:
        obj["sing_tol"] = sing_tol
    return obj


def cmd_test(args) -> int:
    rotations = _load_tuple(args.input)
    seed = _resolve_seed_arg(args.seed)
    report = divisibility_test(rotations, args.n_max, args.sing_tol, rng=seed)
    obj = report.to_json_obj()
    obj["version"] = __version__
    if args.format == "csv":
        out = args.out or "-"
        rows = [["n", "N_n", "sigma_min_rel", "verdict"]] + [
            [rec.n, rec.dim, f"{rec.sigma_min_rel:.17g}", rec.verdict]
            for rec in report.degrees
        ]
        if out == "-":
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerows(rows)
        else:
            with open(out, "w", newline="") as fh:
                csv.writer(fh, lineterminator="\n").writerows(rows)
    else:
        _write_json(args.out, obj)
    print(f"overall: {report.overall}")
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.kind == "planar":
        if args.d is None or args.r is None:
            raise InputDomainError("construct planar requires --d and --r")
        division = planar_division(args.d, args.r)
        seed = _resolve_seed_arg(args.seed)
        ver = verify_divisor(
            division.rotations,
            division.indicator,
            args.samples,
            derive_rng(seed, 7),
            skip=division.near_boundary,
        )
        obj = _stamp(
            {
                "kind": "planar",
                "d": args.d,
                "r": args.r,
                "tuple": division.rotations.to_json_obj(),
                "indicator": {
                    "type": "angular-sector",
                    "axes": [1, 2],
                    "width": division.sector_width,
                    "offset": 0.0,
                },
                "verification": ver.to_json_obj(),
            },
            seed,
        )
        _write_json(args.out, obj)
        print(f"max residual: {ver.max_residual:.3e} over {ver.n_samples} samples "
              f"({ver.n_skipped} boundary-skipped)")
        return EXIT_OK

    if args.kind == "odd-d4":
        if args.d is None:
            raise InputDomainError("construct odd-d4 requires --d")
        seed = _resolve_seed_arg(args.seed)
        if args.gamma1 is not None:
            gamma1 = Rotation.from_json_obj(_load_json(args.gamma1))
        else:
            gamma1 = haar_sample(args.d, derive_rng(seed, 8))
        rotations, witness = odd_d4_tuple(args.d, gamma1)
        divisor = make_divisor(witness, rotations.r)
        ver = verify_divisor(rotations, divisor, args.samples, derive_rng(seed, 9))
        obj = _stamp(
            {
                "kind": "odd-d4",
                "d": args.d,
                "tuple": rotations.to_json_obj(),
                "witness": witness.to_json_obj(),
                "divisor": {"r": rotations.r, "scale": divisor.scale},
                "verification": ver.to_json_obj(),
            },
            seed,
        )
        _write_json(args.out, obj)
        print(f"max residual: {ver.max_residual:.3e} over {ver.n_samples} samples")
        return EXIT_OK

    if args.kind == "d2-analyze":
        if args.n is None or not args.angles:
            raise InputDomainError("construct d2-analyze requires --n and --angles")
        analysis = analyze_circle(args.n, args.angles)
        obj = {"kind": "d2-analyze", "version": __version__, **analysis.to_json_obj()}
        _write_json(args.out, obj)
        print(f"bad angles: {[round(a, 12) for a in analysis.bad_angles.tolist()]}")
        return EXIT_OK

    raise InputDomainError(f"unknown construction kind {args.kind!r}")


def _suffix_from_config(config, d, count, seed):
    if "suffix" in config:
        rotations = [Rotation.from_json_obj(item) for item in config["suffix"]]
        if len(rotations) != count:
            raise InputDomainError(
                f"config suffix has {len(rotations)} rotations, expected {count}"
            )
        return tuple(rotations)
    rng = derive_rng(seed, 0)
    return tuple(haar_sample(d, rng) for _ in range(count))


def cmd_experiment(args) -> int:
    config = _load_json(args.config)
    if not isinstance(config, dict) or "kind" not in config:
        raise InputDomainError(f'{args.config}: config must be an object with a "kind" key')
    kind = config["kind"]
    seed = config.get("seed", args.seed)
    seed = _resolve_seed_arg(seed)
    out = args.out or f"experiment-{kind}"
    json_path = out if out.endswith(".json") else out + ".json"
    csv_path = (out[:-5] if out.endswith(".json") else out) + ".csv"

    try:
        if kind == "genericity":
            d, r = int(config["d"]), int(config["r"])
            ell = config.get("ell")
            n_max = int(config.get("n_max", 8))
            trials = int(config.get("trials", args.trials or 100))
            sing_tol = float(config.get("sing_tol", args.sing_tol))
            count = r - (int(ell) if ell is not None else default_free_count(d, r))
            study = GenericityStudy(
                d=d,
                r=r,
                suffix=_suffix_from_config(config, d, count, seed),
                trials=trials,
                n_max=n_max,
                seed=seed,
                ell=int(ell) if ell is not None else None,
                sing_tol=sing_tol,
            )
            result = run_genericity(study)
            summary = _stamp(result.to_json_obj(), seed, sing_tol)
            _write_json(json_path, summary)
            with open(csv_path, "w", newline="") as fh:
                fh.write(trial_csv_text(result))
            print(
                f"trials: {study.trials}, singular: {result.n_singular}, "
                f"failed: {result.n_failed}, min ratio: {result.ratio_quartiles[0]:.3e}"
            )
            return EXIT_OK

        if kind == "search":
            d, r, n = int(config["d"]), int(config["r"]), int(config["n"])
            settings = SearchSettings(
                restarts=int(config.get("restarts", 4)),
                max_iter=int(config.get("max_iter", 400)),
                simplex_scale=float(config.get("simplex_scale", 0.35)),
                target_ratio=float(config.get("target_ratio", args.sing_tol)),
                base_tuple=(
                    RotationTuple.from_json_obj(config["base_tuple"])
                    if "base_tuple" in config
                    else None
                ),
            )
            run = search_divisible(d, r, n, settings, rng=seed)
            summary = _stamp(run.to_json_obj(), seed, settings.target_ratio)
            _write_json(json_path, summary)
            with open(csv_path, "w", newline="") as fh:
                fh.write(search_csv_text(run))
            print(
                f"best ratio: {run.best_ratio:.3e}, certified: {run.certified}"
            )
            return EXIT_OK
    except KeyError as exc:
        raise InputDomainError(f"{args.config}: missing config key {exc}") from exc

    raise InputDomainError(f'{args.config}: unknown experiment kind {kind!r}')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spherediv",
        description="Decide, certify, and construct fractional divisions of spheres by rotations.",
    )
    parser.add_argument("--version", action="version", version=f"spherediv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="divisibility test for a rotation-tuple JSON file")
    p_test.add_argument("--input", required=True, help="rotation tuple JSON file")
    p_test.add_argument("--n-max", type=int, default=8, dest="n_max")
    p_test.add_argument("--sing-tol", type=float, default=DEFAULT_SING_TOL, dest="sing_tol")
    p_test.add_argument("--seed", type=int, default=None)
    p_test.add_argument("--out", default=None, help="report path (default: stdout)")
    p_test.add_argument("--format", choices=["json", "csv"], default="json")
    p_test.set_defaults(func=cmd_test)

    p_con = sub.add_parser("construct", help="emit an explicit construction")
    p_con.add_argument("kind", choices=["planar", "odd-d4", "d2-analyze"])
    p_con.add_argument("--d", type=int, default=None)
    p_con.add_argument("--r", type=int, default=None)
    p_con.add_argument("--n", type=int, default=None, help="degree for d2-analyze")
    p_con.add_argument(
        "--angles",
        type=lambda s: [float(tok) for tok in s.split(",") if tok.strip()],
        default=None,
        help="comma-separated fixed angles (radians) for d2-analyze",
    )
    p_con.add_argument("--gamma1", default=None, help="JSON file with the free rotation (odd-d4)")
    p_con.add_argument("--samples", type=int, default=100_000)
    p_con.add_argument("--seed", type=int, default=None)
    p_con.add_argument("--out", default=None)
    p_con.set_defaults(func=cmd_construct)

    p_exp = sub.add_parser("experiment", help="run a genericity study or a search")
    p_exp.add_argument("--config", required=True, help="experiment config JSON file")
    p_exp.add_argument("--seed", type=int, default=None, help="seed if absent from config")
    p_exp.add_argument("--trials", type=int, default=None)
    p_exp.add_argument("--sing-tol", type=float, default=DEFAULT_SING_TOL, dest="sing_tol")
    p_exp.add_argument("--out", default=None, help="output basename or .json path")
    p_exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputDomainError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
