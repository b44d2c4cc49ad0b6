"""Command-line front end: ``python -m bogoliubov <command> ...``.

Exit codes: 0 success, 1 I/O or schema error, 2 ``||G|| >= 1``, 3 certificate
or verification failure, 4 unreliable Fock truncation.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .diagonalizer import DiagonalizationResult, bosonic_diagonalize
from .errors import BogoliubovError, GapViolation, TruncationUnreliable
from .fock import DEFAULT_CAP, MAX_TAIL, lower_bound_check, lower_bounds, verify_spectrum
from .generate import KINDS, generate
from .io import (
    ProblemFile,
    dumps_problem,
    dumps_report,
    read_problem_file,
    write_ensemble_csv,
)
from .nambu import Problem

log = logging.getLogger("bogoliubov")

EXIT_OK = 0
EXIT_IO = 1
EXIT_GAP = 2
EXIT_CERT = 3
EXIT_TRUNCATION = 4

LEVEL_TOL = 1e-6
DENSITY_TOL = 1e-6


@dataclass(frozen=True)
class VerifyConfig:
    nmax: int = 40
    levels: int = 6
    tol: float = 1e-9
    level_tol: float = LEVEL_TOL
    max_tail: float = MAX_TAIL
    cap: int = DEFAULT_CAP


@dataclass(frozen=True)
class EnsembleConfig:
    count: int
    modes: int
    gnorm_lo: float
    gnorm_hi: float
    seed: int = 0
    kind: str = "random"
    tol: float = 1e-9
    jobs: int = 1


def _emit(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _vector(a) -> list:
    return [float(x) for x in np.asarray(a, dtype=float)]


def diagonalization_report(p: Problem, r: DiagonalizationResult, wall_time: dict) -> dict:
    """Structured summary of a diagonalization with every certificate field."""
    c = r.certificates
    cert = asdict(c)
    cert["diag_eq_residuals"] = list(c.diag_eq_residuals)
    cert["passed"] = c.passed
    cert["failures"] = c.failures()
    return {
        "instance": {"label": p.label, "dim": p.dim},
        "g_norm": r.g_norm,
        "g_hs": r.g_hs,
        "delta": r.delta,
        "xi_spectrum": _vector(r.xi_spectrum),
        "e0": r.ground_energy,
        "certificates": cert,
        "wall_time": wall_time,
    }


def _load(path) -> Problem:
    return read_problem_file(path).to_problem()


def cmd_diagonalize(args) -> int:
    t0 = time.perf_counter()
    p = _load(args.input)
    t1 = time.perf_counter()
    r = bosonic_diagonalize(p, tol=args.tol)
    t2 = time.perf_counter()
    report = diagonalization_report(p, r, {"load": t1 - t0, "diagonalize": t2 - t1})
    _emit(dumps_report(report), args.out)
    if not r.certificates.passed:
        print(f"certificate failure: {r.certificates.failures()}", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def run_verify(p: Problem, cfg: VerifyConfig) -> tuple[int, dict]:
    """Diagonalize, compare with the truncated Fock spectrum and build a report."""
    t0 = time.perf_counter()
    r = bosonic_diagonalize(p, tol=cfg.tol)
    t1 = time.perf_counter()
    code = EXIT_OK
    try:
        sr = verify_spectrum(p, r, cfg.nmax, cfg.levels, max_tail=cfg.max_tail, cap=cfg.cap)
    except TruncationUnreliable as exc:
        sr = exc.report
        code = EXIT_TRUNCATION
    t2 = time.perf_counter()
    density_tol = max(DENSITY_TOL, 10.0 * sr.tail_weight)
    half_trace, refined = lower_bounds(p)
    fock = {
        "n_max": cfg.nmax,
        "levels": _vector(sr.levels),
        "reference": _vector(sr.reference),
        "level_errors": _vector(sr.level_errors),
        "gamma_error": sr.gamma_error,
        "alpha_error": sr.alpha_error,
        "tail_weight": sr.tail_weight,
        "levels_ok": bool(np.all(sr.level_errors <= cfg.level_tol)),
        "density_ok": bool(max(sr.gamma_error, sr.alpha_error) <= density_tol),
        "lower_bound_half_trace": half_trace,
        "lower_bound_refined": refined,
        "lower_bound_ok": lower_bound_check(p, r.ground_energy),
    }
    report = diagonalization_report(p, r, {"diagonalize": t1 - t0, "fock": t2 - t1})
    report["fock"] = fock
    if code == EXIT_OK and not (fock["levels_ok"] and fock["density_ok"] and r.certificates.passed):
        code = EXIT_CERT
    return code, report


def cmd_verify(args) -> int:
    p = _load(args.input)
    cfg = VerifyConfig(nmax=args.nmax, levels=args.levels, tol=args.tol)
    code, report = run_verify(p, cfg)
    _emit(dumps_report(report), args.out)
    if code == EXIT_TRUNCATION:
        print(f"truncation unreliable: tail weight {report['fock']['tail_weight']:.3e}",
              file=sys.stderr)
    elif code == EXIT_CERT:
        print("verification mismatch", file=sys.stderr)
    return code


def cmd_generate(args) -> int:
    p = generate(args.kind, args.modes, args.gnorm, args.seed)
    _emit(dumps_problem(ProblemFile.from_problem(p)), args.out)
    return EXIT_OK


def ensemble_gnorm(seed: int, lo: float, hi: float) -> float:
    """Deterministic per-seed draw of ||G|| from [lo, hi]."""
    return float(lo + (hi - lo) * np.random.default_rng([seed, 1]).uniform())


def ensemble_row(seed: int, cfg: EnsembleConfig) -> tuple[dict, dict]:
    """(csv row, failures) for one ensemble member."""
    p = generate(cfg.kind, cfg.modes, ensemble_gnorm(seed, cfg.gnorm_lo, cfg.gnorm_hi), seed)
    r = bosonic_diagonalize(p, tol=cfg.tol)
    c = r.certificates
    row = {
        "seed": seed,
        "g_norm": c.g_norm,
        "g_hs": c.g_hs,
        "v_opnorm": c.v_opnorm,
        "v_opnorm_bound": c.v_opnorm_bound,
        "v_hs": c.v_hs,
        "v_hs_bound": c.v_hs_bound,
        "max_diag_eq_residual": max(c.diag_eq_residuals),
        "e0": r.ground_energy,
        "lower_bound": c.lower_bound,
    }
    return row, c.failures()


def _ensemble_task(item):
    seed, cfg = item
    return ensemble_row(seed, cfg)


def run_ensemble(cfg: EnsembleConfig) -> tuple[list, list]:
    """Rows ordered by seed and a list of ``(seed, failures)`` for failing members."""
    seeds = [cfg.seed + i for i in range(cfg.count)]
    items = [(s, cfg) for s in seeds]
    if cfg.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_ensemble_task, items))
    else:
        results = [_ensemble_task(it) for it in items]
    rows = [row for row, _ in results]
    failed = [(row["seed"], f) for row, f in results if f]
    return rows, failed


def cmd_ensemble(args) -> int:
    lo, hi = args.gnorm_range
    cfg = EnsembleConfig(
        count=args.count, modes=args.modes, gnorm_lo=lo, gnorm_hi=hi,
        seed=args.seed, kind=args.kind, tol=args.tol, jobs=args.jobs,
    )
    if cfg.count < 0 or not 0.0 < lo <= hi < 1.0:
        print("count must be >= 0 and the range must satisfy 0 < lo <= hi < 1", file=sys.stderr)
        return EXIT_IO
    rows, failed = run_ensemble(cfg)
    write_ensemble_csv(rows, args.out)
    if failed:
        seed, f = failed[0]
        print(f"{len(failed)} instance(s) failed; first failing seed {seed}: {f}", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bogoliubov", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("diagonalize", help="diagonalize a problem file and certify the result")
    d.add_argument("input")
    d.add_argument("--tol", type=float, default=1e-9)
    d.add_argument("--out", default=None, help="report path (default: stdout)")
    d.set_defaults(func=cmd_diagonalize)

    v = sub.add_parser("verify", help="cross-check against exact diagonalization in Fock space")
    v.add_argument("input")
    v.add_argument("--nmax", type=int, default=40)
    v.add_argument("--levels", type=int, default=6)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", help="write a deterministic test instance")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--modes", type=int, required=True)
    g.add_argument("--gnorm", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("ensemble", help="diagonalize a batch of generated instances into a CSV")
    e.add_argument("--count", type=int, required=True)
    e.add_argument("--modes", type=int, required=True)
    e.add_argument("--gnorm-range", type=float, nargs=2, metavar=("LO", "HI"), required=True)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--kind", choices=KINDS, default="random")
    e.add_argument("--tol", type=float, default=1e-9)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_ensemble)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GapViolation as exc:
        print(f"GapViolation: {exc}", file=sys.stderr)
        return EXIT_GAP
    except TruncationUnreliable as exc:
        print(f"TruncationUnreliable: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (BogoliubovError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
