"""Command implementations shared by the CLI and the HTTP service.

Each ``cmd_*`` returns a CommandResult: the OutputRecord, the flat table used
for CSV output and the process exit code.  Inputs arrive as the user typed
them (spins as ``"p/q"`` strings) and are validated here; any ValueError is
a usage error for the caller to report.

Exit codes
----------
0    ok / separable
1    L-matrix methods disagree
2    usage error, invalid input or not a state
3    --strict and the symbol vanishes by a selection rule
10   NPT entangled
11   PPT entangled
12   unknown
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd

from src.algebra.numbers import HalfInt
from src.algebra.wigner_symbols import (
    clebsch_gordan,
    selection_rules_3j,
    selection_rules_6j,
    selection_rules_cg,
    wigner_3j,
    wigner_6j,
)
from src.cli.records import OutputRecord
from src.config import get_settings
from src.oracle.bruteforce import wbeta_cloud
from src.separability.classify import VerdictKind, classify, separable_region
from src.separability.geometry import (
    large_n_trend,
    named_points,
    pair_for,
    ppt_polygon,
    state_triangle,
    validate_n,
)
from src.separability.spectral import (
    ellipse_points,
    epsilon0_closed_form,
    epsilon0_slope_at_zero,
    epsilon0_table,
    kramers_pairs,
)
from src.separability.witness import (
    beta_from_probabilities,
    detect_bound_entanglement,
    probabilities_from_beta,
    validate_probabilities,
)
from src.states.invariant_states import L_METHODS, SpinPair, l_matrix, l_matrix_exact

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_STRICT_ZERO = 3
EXIT_NPT = 10
EXIT_PPT_ENTANGLED = 11
EXIT_UNKNOWN = 12

VERDICT_EXIT_CODES = {
    VerdictKind.SEPARABLE: EXIT_OK,
    VerdictKind.NPT_ENTANGLED: EXIT_NPT,
    VerdictKind.PPT_ENTANGLED: EXIT_PPT_ENTANGLED,
    VerdictKind.UNKNOWN: EXIT_UNKNOWN,
    VerdictKind.NOT_A_STATE: EXIT_USAGE,
}

WIGNER_KINDS = ("3j", "6j", "cg")
_WIGNER = {
    "3j": (wigner_3j, selection_rules_3j),
    "6j": (wigner_6j, selection_rules_6j),
    "cg": (clebsch_gordan, selection_rules_cg),
}


@dataclass(frozen=True, eq=False)
class CommandResult:
    record: OutputRecord
    table: pd.DataFrame
    exit_code: int = EXIT_OK


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _xy(point) -> list[float]:
    return [float(point[0]), float(point[1])]


def _polyline(points) -> list[list[float]]:
    return [_xy(p) for p in points]


def _table_records(table: pd.DataFrame) -> list[dict]:
    """Rows as dicts with NaN replaced by None (JSON has no NaN)."""
    return table.astype(object).where(table.notna(), None).to_dict(orient="records")


def _rows(set_name: str, points, labels=None) -> list[dict]:
    labels = labels or [None] * len(points)
    return [
        {"set": set_name, "label": label, "index": i, "beta1": p[0], "beta2": p[1]}
        for i, (label, p) in enumerate(zip(labels, points, strict=True))
    ]


def _require_seed(samples: int, seed: int | None) -> None:
    if samples < 0:
        raise ValueError(f"samples must be non-negative, got {samples}")
    if samples and seed is None:
        raise ValueError("sampling needs an explicit --seed")


# ---------------------------------------------------------------------------
# wigner
# ---------------------------------------------------------------------------


def cmd_wigner(kind: str, args: Sequence[str], *, strict: bool = False) -> CommandResult:
    """Exact 3j, 6j or Clebsch-Gordan value from six ``"p/q"`` arguments."""
    if kind not in _WIGNER:
        raise ValueError(f"kind must be one of {WIGNER_KINDS}, got {kind!r}")
    if len(args) != 6:
        raise ValueError(f"wigner {kind} takes six arguments, got {len(args)}")
    values = [HalfInt.parse(a) for a in args]
    symbol, rules = _WIGNER[kind]
    value = symbol(*values)
    reasons = rules(*values) if value.is_zero else []

    results = {
        "kind": kind,
        "arguments": [str(v) for v in values],
        "exact": str(value),
        "signed_square": str(value.signed_square),
        "decimal": float(value),
        "selection_rules": reasons,
    }
    table = pd.DataFrame(
        [
            {
                "kind": kind,
                **{f"arg{i}": str(v) for i, v in enumerate(values, start=1)},
                "exact": results["exact"],
                "signed_square": results["signed_square"],
                "decimal": results["decimal"],
            }
        ]
    )
    record = OutputRecord(
        command=f"wigner {kind}",
        inputs={"kind": kind, "args": [a.strip() for a in args], "strict": strict},
        tolerance=0.0,
        results=results,
    )
    exit_code = EXIT_STRICT_ZERO if strict and reasons else EXIT_OK
    return CommandResult(record, table, exit_code)


# ---------------------------------------------------------------------------
# lmatrix
# ---------------------------------------------------------------------------


def lmatrix_report(pair: SpinPair) -> dict:
    """All three L constructions and how far they are from each other."""
    reference = l_matrix(pair, "six_j")
    trace = l_matrix(pair, "trace")
    rows = min(pair.n1, 3)
    closed = l_matrix(pair, "closed_rows").filled(np.nan)[:rows]
    deviations = {
        "trace_vs_six_j": float(np.max(np.abs(trace - reference))),
        "closed_rows_vs_six_j": float(np.max(np.abs(closed - reference[:rows]))),
    }
    orthogonality = float(np.max(np.abs(reference @ reference.T - np.eye(pair.n1))))
    return {
        "matrices": {
            "six_j": reference.tolist(),
            "trace": trace.tolist(),
            # rows K > 2 have no closed form
            "closed_rows": [
                closed[k].tolist() if k < rows else None for k in range(pair.n1)
            ],
        },
        "max_deviation": deviations,
        "orthogonality_error": orthogonality,
    }


def cmd_lmatrix(j1: str, j2: str, *, method: str = "six_j") -> CommandResult:
    if method not in L_METHODS:
        raise ValueError(f"method must be one of {L_METHODS}, got {method!r}")
    pair = SpinPair(HalfInt.parse(j1), HalfInt.parse(j2))
    tol = get_settings().numerics.method_agreement_tol

    report = lmatrix_report(pair)
    worst = max(report["max_deviation"].values())
    agree = worst <= tol and report["orthogonality_error"] <= tol
    if not agree:
        logger.warning(
            "L matrix methods for %s disagree: max deviation %.3e, orthogonality %.3e",
            pair,
            worst,
            report["orthogonality_error"],
        )

    results = {
        "pair": str(pair),
        "rows_K": list(pair.k_values),
        "columns_J": [str(j) for j in pair.j_values],
        "method": method,
        "matrix": report["matrices"][method],
        "exact": [[str(x) for x in row] for row in l_matrix_exact(pair, "six_j")],
        **report,
        "agree": agree,
    }
    table = pd.DataFrame(
        [
            {"method": name, "K": k, "J": str(j), "value": value}
            for name, matrix in report["matrices"].items()
            for k, row in zip(pair.k_values, matrix, strict=True)
            if row is not None
            for j, value in zip(pair.j_values, row, strict=True)
        ]
    )
    record = OutputRecord(
        command="lmatrix",
        inputs={"j1": j1, "j2": j2, "method": method},
        tolerance=tol,
        results=results,
    )
    return CommandResult(record, table, EXIT_OK if agree else EXIT_FAILURE)


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------


def cmd_geometry(
    n: int,
    *,
    samples: int = 0,
    seed: int | None = None,
    scheme: str | None = None,
) -> CommandResult:
    """Vertices, regions and (optionally) a sampled W^beta cloud for 3 x N."""
    n = validate_n(n)
    _require_seed(samples, seed)
    scheme = scheme or get_settings().sampling.scheme
    points = named_points(n)
    region = separable_region(n, samples=samples, seed=seed, scheme=scheme)
    triangle, polygon = state_triangle(n), ppt_polygon(n)

    rows = _rows("point", list(points.values()), list(points))
    rows += _rows("state_triangle", triangle.vertices)
    reflected = [(-v.beta1, v.beta2) for v in reversed(triangle.vertices)]
    rows += _rows("reflected_triangle", reflected)
    rows += _rows("ppt_polygon", polygon.vertices)
    rows += _rows("separable_vertices", region.vertices)
    rows += _rows("separable_curve", region.curve)

    results = {
        "N": n,
        "j2": str(HalfInt(n - 1)),
        "points": {name: _xy(p) for name, p in points.items()},
        "state_triangle": _polyline(triangle.vertices),
        "reflected_triangle": _polyline(reflected),
        "ppt_polygon": _polyline(polygon.vertices),
        "separable_region": {
            "kind": region.kind,
            "vertices": _polyline(region.vertices),
            "curve": _polyline(region.curve),
            "curve_params": list(region.curve_params),
            "equals_ppt_polygon": n % 2 == 1,
        },
        "witness_line_beta2": points["F"].beta2 if "F" in points else None,
        "ellipse": None,
        "large_n_trend": large_n_trend(n),
        "cloud": None,
    }
    if n % 2 == 0:
        arc = ellipse_points(n)
        results["ellipse"] = _polyline(arc)
        rows += _rows("ellipse", arc)
    if samples:
        cloud = wbeta_cloud(pair_for(n), samples, seed, scheme=scheme).plane
        results["cloud"] = {"count": samples, "scheme": scheme, "points": cloud.tolist()}
        rows += _rows("cloud", cloud)

    record = OutputRecord(
        command="geometry",
        inputs={"N": n, "samples": samples, "seed": seed, "scheme": scheme},
        seed=seed,
        tolerance=get_settings().numerics.region_tol,
        results=results,
    )
    return CommandResult(record, pd.DataFrame(rows))


# ---------------------------------------------------------------------------
# epsilon
# ---------------------------------------------------------------------------


def cmd_epsilon(n: int, *, grid: int | None = None) -> CommandResult:
    """epsilon_0(lambda) on a uniform grid with monotonicity and convexity verdicts."""
    n = validate_n(n)
    grid = grid or get_settings().sampling.epsilon_grid
    if grid < 3:
        raise ValueError(f"grid needs at least 3 points, got {grid}")
    table = epsilon0_table(n, grid)
    numerics = get_settings().numerics
    monotone = bool((table["first_diff"].dropna() >= -numerics.monotonicity_tol).all())
    convex = bool((table["second_diff"].dropna() >= -numerics.convexity_tol).all())
    multiplicities = kramers_pairs(n, 1.0)

    results = {
        "N": n,
        "grid": grid,
        "eps0_at_0": float(table["eps0"].iloc[0]),
        "eps0_at_1": float(table["eps0"].iloc[-1]),
        "closed_form_at_1": epsilon0_closed_form(n) if n % 2 == 0 else None,
        "slope_at_zero": epsilon0_slope_at_zero(n),
        "monotone": monotone,
        "convex": convex,
        "multiplicities_at_1": multiplicities,
        "kramers_degenerate": all(m % 2 == 0 for m in multiplicities),
        "table": _table_records(table),
    }
    record = OutputRecord(
        command="epsilon",
        inputs={"N": n, "grid": grid},
        tolerance=numerics.pairing_tol,
        results=results,
    )
    return CommandResult(record, table)


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def _parse_triple(p) -> np.ndarray:
    if isinstance(p, str):
        p = [float(x) for x in p.split(",")]
    return validate_probabilities(p)


def _parse_beta(beta) -> np.ndarray:
    if isinstance(beta, str):
        beta = [float(x) for x in beta.split(",")]
    values = np.asarray(beta, dtype=float)
    if values.shape == (2,):
        values = np.concatenate([[1.0], values])
    if values.shape != (3,):
        raise ValueError(f"beta needs (beta1, beta2) or (1, beta1, beta2), got {beta!r}")
    return values


def cmd_classify(
    n: int,
    *,
    p=None,
    beta=None,
    samples: int = 0,
    seed: int | None = None,
    scheme: str | None = None,
) -> CommandResult:
    """Detection protocol and verdict for one invariant 3 x N state."""
    n = validate_n(n)
    if (p is None) == (beta is None):
        raise ValueError("give exactly one of p or beta")
    _require_seed(samples, seed)

    if p is not None:
        beta_values = beta_from_probabilities(_parse_triple(p), n).values
    else:
        beta_values = _parse_beta(beta)
    probabilities = probabilities_from_beta(beta_values, n)

    verdict = classify(beta_values, n, samples=samples, seed=seed, scheme=scheme)
    logger.debug("N=%d beta=%s -> %s", n, beta_values.tolist(), verdict.kind)

    inequalities = None
    if verdict.kind is not VerdictKind.NOT_A_STATE:
        clipped = np.clip(probabilities, 0.0, None)
        outcome = detect_bound_entanglement(clipped / clipped.sum(), n)
        inequalities = {
            "witness": outcome.witness,
            "ineq1": outcome.ineq1,
            "ineq2": outcome.ineq2,
            "ppt": outcome.ppt,
            "witness_applicable": outcome.witness_applicable,
        }

    results = {
        "N": n,
        "p": probabilities.tolist(),
        "beta": beta_values.tolist(),
        "inequalities": inequalities,
        "verdict": str(verdict.kind),
        "certificate": verdict.certificate,
    }
    row = {
        "N": n,
        "p_minus": probabilities[0],
        "p_zero": probabilities[1],
        "p_plus": probabilities[2],
        "beta1": beta_values[1],
        "beta2": beta_values[2],
        **{
            key: (inequalities or {}).get(key, np.nan)
            for key in ("witness", "ineq1", "ineq2")
        },
        "verdict": str(verdict.kind),
    }
    record = OutputRecord(
        command="classify",
        inputs={
            "N": n,
            "p": None if p is None else _parse_triple(p).tolist(),
            "beta": None if beta is None else beta_values.tolist(),
            "samples": samples,
            "seed": seed,
            "scheme": scheme,
        },
        seed=seed,
        tolerance=get_settings().numerics.region_tol,
        results=results,
    )
    return CommandResult(record, pd.DataFrame([row]), VERDICT_EXIT_CODES[verdict.kind])
