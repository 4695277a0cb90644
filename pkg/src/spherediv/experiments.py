"""Monte-Carlo genericity studies and a derivative-free search for divisible tuples.

A genericity study freezes a suffix of rotations, draws the remaining ones
from Haar measure trial after trial, and records how close each extended
tuple comes to singularity.  Sections over a generic suffix are null sets,
so Haar sampling is expected to produce zero certified-singular trials
(the odd-d four-rotation diagonal suffix is the designed exception).

The search minimizes how singular the degree-n operator is over tuples
parametrized by Cayley charts around restart base points, with a
Nelder-Mead simplex (the objective is nonsmooth exactly at its zero set).
The objective is the operator's weighted smallest singular value divided
by r, a dimensionless number in [0, 1]: 1 at the identity tuple, 0 at a
divisible one.  (The sigma_min/sigma_max ratio is useless as an objective
at conformal degrees, where all singular values collapse together.)
Optimizer minima are never reported as divisible on their own: a candidate
counts only after its kernel witness and divisor pass the residual check.

Everything is reproducible from the root seed: trial k draws from
derive_rng(seed, 1, k), restart j from derive_rng(seed, 4, j), so results
do not depend on execution order.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .divisibility import (
    DEFAULT_SING_TOL,
    DivisibilityReport,
    build_zonal_basis,
    divisibility_test,
    kernel_witness,
    make_divisor,
    operator_gram,
    verify_divisor,
    weighted_singular_values,
)
from .errors import BasisConstructionError, InputDomainError, NotSingularError
from .rotations import Rotation, RotationTuple, haar_sample
from .sampling import derive_rng, resolve_seed

__all__ = [
    "GenericityResult",
    "GenericityStudy",
    "SearchRun",
    "SearchSettings",
    "TrialRecord",
    "cayley_rotation",
    "default_free_count",
    "run_genericity",
    "search_csv_text",
    "search_divisible",
    "trial_csv_text",
]


def default_free_count(d: int, r: int) -> int:
    """Free-rotation count for which sections are expected null: floor(r/2) if d >= 3, else 1."""
    return r // 2 if d >= 3 else 1


@dataclass(frozen=True)
class GenericityStudy:
    """Configuration of one genericity experiment.

    ``suffix`` holds the r - ell frozen rotations; each trial prepends ell
    fresh Haar rotations and runs the divisibility test up to ``n_max``.
    """

    d: int
    r: int
    suffix: tuple
    trials: int
    n_max: int
    seed: int
    ell: Optional[int] = None
    sing_tol: float = DEFAULT_SING_TOL

    def __post_init__(self):
        ell = self.ell if self.ell is not None else default_free_count(self.d, self.r)
        if not 1 <= ell <= self.r:
            raise InputDomainError(f"free-rotation count {ell} outside 1..r={self.r}")
        suffix = tuple(self.suffix)
        if len(suffix) != self.r - ell:
            raise InputDomainError(
                f"suffix has {len(suffix)} rotations, expected r - ell = {self.r - ell}"
            )
        for g in suffix:
            if g.d != self.d:
                raise InputDomainError(f"suffix rotation has dimension {g.d}, expected {self.d}")
        if self.trials < 1:
            raise InputDomainError(f"trials must be >= 1, got {self.trials}")
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "suffix", suffix)

    def to_json_obj(self) -> dict:
        return {
            "d": self.d,
            "r": self.r,
            "ell": self.ell,
            "trials": self.trials,
            "n_max": self.n_max,
            "seed": self.seed,
            "sing_tol": self.sing_tol,
            "suffix": [g.to_json_obj() for g in self.suffix],
        }


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    min_ratio: float
    singular: bool
    failed: bool
    degrees: tuple  # (n, sigma_min_rel, verdict) triples; empty when failed


@dataclass(frozen=True)
class GenericityResult:
    study: GenericityStudy
    records: tuple
    n_singular: int
    n_failed: int
    ratio_quartiles: tuple  # (min, q25, median, q75, max) over completed trials

    def trial_rows(self) -> list:
        rows = []
        for rec in self.records:
            if rec.failed:
                rows.append((rec.trial, -1, float("nan"), "failed"))
                continue
            for n, ratio, verdict in rec.degrees:
                rows.append((rec.trial, n, ratio, verdict))
        return rows

    def write_trial_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(trial_csv_text(self))

    def to_json_obj(self) -> dict:
        qmin, q25, q50, q75, qmax = self.ratio_quartiles
        return {
            "study": self.study.to_json_obj(),
            "trials": self.study.trials,
            "n_singular": self.n_singular,
            "n_failed": self.n_failed,
            "min_ratio": qmin,
            "q25_ratio": q25,
            "median_ratio": q50,
            "q75_ratio": q75,
            "max_ratio": qmax,
        }


def trial_csv_text(result: GenericityResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial", "n", "sigma_min_rel", "verdict"])
    for trial, n, ratio, verdict in result.trial_rows():
        writer.writerow([trial, n, f"{ratio:.17g}", verdict])
    return buf.getvalue()


def run_genericity(study: GenericityStudy) -> GenericityResult:
    """Execute the study; basis failures mark single trials failed, never abort."""
    records = []
    n_singular = 0
    n_failed = 0
    for k in range(study.trials):
        rng = derive_rng(study.seed, 1, k)
        free = tuple(haar_sample(study.d, rng) for _ in range(study.ell))
        extended = RotationTuple(free + study.suffix)
        try:
            report: DivisibilityReport = divisibility_test(
                extended,
                study.n_max,
                study.sing_tol,
                rng=int(rng.integers(0, 2**63)),
            )
        except BasisConstructionError:
            n_failed += 1
            records.append(
                TrialRecord(trial=k, min_ratio=float("nan"), singular=False, failed=True, degrees=())
            )
            continue
        degrees = tuple(
            (rec.n, rec.sigma_min_rel, rec.verdict) for rec in report.degrees
        )
        singular = report.divisible
        n_singular += int(singular)
        records.append(
            TrialRecord(
                trial=k,
                min_ratio=report.min_ratio,
                singular=singular,
                failed=False,
                degrees=degrees,
            )
        )
    ratios = [rec.min_ratio for rec in records if not rec.failed]
    if ratios:
        quart = tuple(float(q) for q in np.percentile(ratios, [0, 25, 50, 75, 100]))
    else:
        quart = (math.nan,) * 5
    return GenericityResult(
        study=study,
        records=tuple(records),
        n_singular=n_singular,
        n_failed=n_failed,
        ratio_quartiles=quart,
    )


def _skew_from_params(theta: np.ndarray, d: int) -> np.ndarray:
    s = np.zeros((d, d))
    iu = np.triu_indices(d, k=1)
    s[iu] = theta
    return s - s.T


def cayley_rotation(base: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Rotation base @ (I - S)(I + S)^{-1} for the skew matrix S packed in theta.

    The Cayley factor is exactly special orthogonal up to solve round-off; it
    charts a neighborhood of the base point rationally and cheaply.
    """
    d = base.shape[0]
    s = _skew_from_params(theta, d)
    eye = np.eye(d)
    factor = np.linalg.solve(eye - s, eye + s).T
    return base @ factor


@dataclass(frozen=True)
class SearchSettings:
    restarts: int = 4
    max_iter: int = 400
    simplex_scale: float = 0.35
    target_ratio: float = DEFAULT_SING_TOL
    cond_threshold: float = 1e6
    base_tuple: Optional[RotationTuple] = None
    margin: float = 0.5

    def to_json_obj(self) -> dict:
        obj = {
            "restarts": self.restarts,
            "max_iter": self.max_iter,
            "simplex_scale": self.simplex_scale,
            "target_ratio": self.target_ratio,
            "cond_threshold": self.cond_threshold,
            "margin": self.margin,
        }
        if self.base_tuple is not None:
            obj["base_tuple"] = self.base_tuple.to_json_obj()
        return obj


@dataclass(frozen=True)
class SearchRun:
    """Result of a singularity search at one degree.

    ``best_ratio`` and the trace hold the dimensionless objective
    (weighted sigma_min of the operator over r); values are always >= 0 and
    the trace is the nonincreasing best-so-far sequence over evaluations.
    """

    d: int
    r: int
    n: int
    seed: int
    settings: SearchSettings
    best_ratio: float
    best_tuple: RotationTuple
    trace: tuple
    certified: bool
    residual_max: Optional[float] = None
    restart_ratios: tuple = field(default_factory=tuple)

    def to_json_obj(self) -> dict:
        obj = {
            "d": self.d,
            "r": self.r,
            "n": self.n,
            "seed": self.seed,
            "settings": self.settings.to_json_obj(),
            "best_ratio": self.best_ratio,
            "best_tuple": self.best_tuple.to_json_obj(),
            "certified": self.certified,
            "restart_ratios": list(self.restart_ratios),
            "evaluations": len(self.trace),
        }
        if self.residual_max is not None:
            obj["residual_max"] = self.residual_max
        return obj


def search_divisible(
    d: int,
    r: int,
    n: int,
    settings: Optional[SearchSettings] = None,
    rng=None,
) -> SearchRun:
    """Minimize the degree-n singularity objective over rotation tuples.

    Runs Nelder-Mead restarts in Cayley charts.  Internally the simplex
    compares log-objective values: Nelder-Mead is comparison-based, so the
    iterates are unchanged, but the flat termination plateau around the
    zero set disappears and the simplex keeps contracting into it.  Any
    point reaching ``target_ratio`` is re-verified through kernel_witness
    and verify_divisor before the run may claim a divisible tuple; budget
    exhaustion returns the best tuple found with ``certified=False``.
    """
    if n < 1:
        raise InputDomainError(f"target degree must be >= 1, got n={n}")
    settings = settings or SearchSettings()
    if settings.restarts < 1:
        raise InputDomainError(f"restarts must be >= 1, got {settings.restarts}")
    seed = resolve_seed(rng)
    basis = build_zonal_basis(d, n, derive_rng(seed, 3), settings.cond_threshold)
    n_params = d * (d - 1) // 2

    def objective_of(mats) -> float:
        lmat = operator_gram(basis, mats)
        amat = np.linalg.solve(basis.gram, lmat.T).T
        return float(weighted_singular_values(amat, basis.gram)[-1]) / r

    trace: list = []

    def log_objective_factory(bases):
        def log_objective(theta):
            mats = [
                cayley_rotation(bases[s], theta[s * n_params : (s + 1) * n_params])
                for s in range(r)
            ]
            val = objective_of(mats)
            trace.append(val if not trace else min(trace[-1], val))
            return math.log10(val + 1e-300)

        return log_objective

    best_ratio = math.inf
    best_mats = None
    restart_ratios = []
    for j in range(settings.restarts):
        rng_j = derive_rng(seed, 4, j)
        if j == 0 and settings.base_tuple is not None:
            if settings.base_tuple.d != d or settings.base_tuple.r != r:
                raise InputDomainError("base_tuple shape does not match (d, r)")
            bases = [g.matrix for g in settings.base_tuple]
        else:
            bases = [haar_sample(d, rng_j).matrix for _ in range(r)]
        dim = r * n_params
        x0 = np.zeros(dim)
        simplex = np.vstack([x0, x0 + settings.simplex_scale * np.eye(dim)])
        res = minimize(
            log_objective_factory(bases),
            x0,
            method="Nelder-Mead",
            options={
                "maxiter": settings.max_iter,
                "maxfev": 4 * settings.max_iter,
                "initial_simplex": simplex,
                "xatol": 1e-13,
                "fatol": 1e-15,
            },
        )
        mats = [
            cayley_rotation(bases[s], res.x[s * n_params : (s + 1) * n_params])
            for s in range(r)
        ]
        val = objective_of(mats)
        restart_ratios.append(val)
        if val < best_ratio:
            best_ratio = val
            best_mats = mats
        if best_ratio < settings.target_ratio:
            break

    best_tuple = RotationTuple(tuple(Rotation(m) for m in best_mats))
    certified = False
    residual_max = None
    if best_ratio < settings.target_ratio:
        try:
            witness = kernel_witness(
                basis, best_tuple, settings.target_ratio, rng=derive_rng(seed, 5)
            )
            divisor = make_divisor(witness, r, settings.margin)
            ver = verify_divisor(best_tuple, divisor, 10_000, derive_rng(seed, 6))
            certified = ver.passed
            residual_max = ver.max_residual
        except NotSingularError:
            certified = False
    return SearchRun(
        d=d,
        r=r,
        n=n,
        seed=seed,
        settings=settings,
        best_ratio=float(best_ratio),
        best_tuple=best_tuple,
        trace=tuple(trace),
        certified=certified,
        residual_max=residual_max,
        restart_ratios=tuple(restart_ratios),
    )


def search_csv_text(run: SearchRun) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["restart", "n", "sigma_min_rel", "verdict"])
    for j, ratio in enumerate(run.restart_ratios):
        verdict = "singular" if (run.certified and ratio == run.best_ratio) else "invertible"
        writer.writerow([j, run.n, f"{ratio:.17g}", verdict])
    return buf.getvalue()
