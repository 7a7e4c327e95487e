"""Benchmark protocols and CSV reporting.

Two protocols are provided.  "once" runs permute -> LLL -> greedy polish
independently per trial on the same generated example.  "repeat" chains
the same sequence, feeding each round's output into the next round's
input.  Squared norms are recorded as exact integers; fractions are left
to whoever reads the CSV so nothing is lost to rounding.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .core import NormSummary
from .genlat import ExampleSpec, derive_seed, gen_example, random_permutation
from .greedy import ReduceConfig, reduce as greedy_reduce
from .lll import LLLConfig, lll_reduce

log = logging.getLogger(__name__)

MODES = ("once", "repeat")

CSV_HEADER = (
    "mode,n,q,delta,p,trial,"
    "frob_sq_0,frob_sq_lll,frob_sq_ours,"
    "min_sq_0,min_sq_lll,min_sq_ours,"
    "secs_lll,secs_ours,iters_ours"
)


@dataclass(frozen=True)
class ExperimentConfig:
    q: int
    ell_list: tuple[int, ...]
    delta: float = 1.0 - 1e-15
    p_schedule: tuple[float, ...] = (2.0,)
    trials: int = 10
    mode: str = "once"
    seed: int = 0
    csv_path: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.ell_list:
            raise ValueError("ell_list must be nonempty")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


@dataclass(frozen=True)
class TrialRecord:
    """One permute -> LLL -> greedy pass, squared norms kept exact."""

    mode: str
    n: int
    q: int
    delta: float
    p: str
    trial: int
    frob_sq_0: int
    frob_sq_lll: int
    frob_sq_ours: int
    min_sq_0: int
    min_sq_lll: int
    min_sq_ours: int
    secs_lll: float
    secs_ours: float
    iters_ours: int


def schedule_label(p_schedule) -> str:
    """Compact text form of an exponent schedule, e.g. '2' or '2;1'."""
    return ";".join(format(p, "g") for p in p_schedule)


def _make_record(config: ExperimentConfig, mode: str, ell: int, trial: int,
                 before: NormSummary, lll_res, ours_res) -> TrialRecord:
    return TrialRecord(
        mode=mode,
        n=3 * ell,
        q=config.q,
        delta=config.delta,
        p=schedule_label(config.p_schedule),
        trial=trial,
        frob_sq_0=before.frobenius_sq,
        frob_sq_lll=lll_res.after.frobenius_sq,
        frob_sq_ours=ours_res.after.frobenius_sq,
        min_sq_0=before.min_norm_sq,
        min_sq_lll=lll_res.after.min_norm_sq,
        min_sq_ours=ours_res.after.min_norm_sq,
        secs_lll=lll_res.seconds,
        secs_ours=ours_res.seconds,
        iters_ours=ours_res.iterations_applied,
    )


def _run_stage_pair(config: ExperimentConfig, basis):
    lll_res = lll_reduce(basis, LLLConfig(delta=config.delta))
    ours_res = greedy_reduce(
        lll_res.basis, ReduceConfig(p_schedule=config.p_schedule)
    )
    return lll_res, ours_res


def run_once(config: ExperimentConfig) -> list[TrialRecord]:
    """Independent trials: permute the example, LLL it, polish it.

    A failing trial is logged and dropped; the others still run.
    """
    records = []
    for ell in config.ell_list:
        example = gen_example(
            ExampleSpec(config.q, ell, derive_seed(config.seed, ell, 0))
        )
        for trial in range(config.trials):
            permuted = random_permutation(
                example, derive_seed(config.seed, ell, trial + 1)
            )
            try:
                lll_res, ours_res = _run_stage_pair(config, permuted)
            except (ArithmeticError, ValueError) as exc:
                log.warning("trial %d at n=%d failed: %s", trial, 3 * ell, exc)
                continue
            records.append(
                _make_record(
                    config, "once", ell, trial, lll_res.before, lll_res, ours_res
                )
            )
    return records


def run_repeatedly(config: ExperimentConfig) -> list[TrialRecord]:
    """Chained rounds: each round's polished output feeds the next round.

    config.trials is the chain length.  One record is emitted per round;
    the chain-level fractions fall out of the first and last records.  A
    failing round ends that chain (later rounds would need its output) but
    other sizes still run.
    """
    records = []
    for ell in config.ell_list:
        basis = gen_example(
            ExampleSpec(config.q, ell, derive_seed(config.seed, ell, 0))
        )
        for round_idx in range(config.trials):
            permuted = random_permutation(
                basis, derive_seed(config.seed, ell, round_idx + 1)
            )
            try:
                lll_res, ours_res = _run_stage_pair(config, permuted)
            except (ArithmeticError, ValueError) as exc:
                log.warning(
                    "round %d at n=%d failed: %s; chain stopped",
                    round_idx, 3 * ell, exc,
                )
                break
            records.append(
                _make_record(
                    config, "repeat", ell, round_idx, lll_res.before,
                    lll_res, ours_res,
                )
            )
            basis = ours_res.basis
    return records


def run_experiment(config: ExperimentConfig) -> list[TrialRecord]:
    runner = run_once if config.mode == "once" else run_repeatedly
    records = runner(config)
    if config.csv_path is not None:
        emit_csv(records, config.csv_path)
    return records


_INT_FIELDS = (
    "frob_sq_0", "frob_sq_lll", "frob_sq_ours",
    "min_sq_0", "min_sq_lll", "min_sq_ours",
)
_SEC_FIELDS = ("secs_lll", "secs_ours")


def _record_cells(rec: TrialRecord) -> list[str]:
    cells = [rec.mode, str(rec.n), str(rec.q), repr(rec.delta), rec.p,
             str(rec.trial)]
    cells.extend(str(getattr(rec, f)) for f in _INT_FIELDS)
    cells.extend(f"{getattr(rec, f):.6f}" for f in _SEC_FIELDS)
    cells.append(str(rec.iters_ours))
    return cells


def _mean_cell(values) -> str:
    mean = Fraction(sum(values), len(values))
    if mean.denominator == 1:
        return str(mean.numerator)
    return repr(float(mean))


def aggregate_rows(records) -> list[list[str]]:
    """mean/min/max rows per (mode, n) group, in first-appearance order."""
    groups: dict[tuple[str, int], list[TrialRecord]] = {}
    for rec in records:
        groups.setdefault((rec.mode, rec.n), []).append(rec)
    rows = []
    for (mode, n), group in groups.items():
        first = group[0]
        head = [mode, str(n), str(first.q), repr(first.delta), first.p]
        ints = {f: [getattr(r, f) for r in group] for f in _INT_FIELDS}
        secs = {f: [getattr(r, f) for r in group] for f in _SEC_FIELDS}
        iters = [r.iters_ours for r in group]
        mean_row = head + ["mean"]
        mean_row += [_mean_cell(ints[f]) for f in _INT_FIELDS]
        mean_row += [f"{sum(secs[f]) / len(group):.6f}" for f in _SEC_FIELDS]
        mean_row.append(_mean_cell(iters))
        min_row = head + ["min"]
        min_row += [str(min(ints[f])) for f in _INT_FIELDS]
        min_row += [f"{min(secs[f]):.6f}" for f in _SEC_FIELDS]
        min_row.append(str(min(iters)))
        max_row = head + ["max"]
        max_row += [str(max(ints[f])) for f in _INT_FIELDS]
        max_row += [f"{max(secs[f]):.6f}" for f in _SEC_FIELDS]
        max_row.append(str(max(iters)))
        rows.extend([mean_row, min_row, max_row])
    return rows


def emit_csv(records, path) -> None:
    """Write trial rows then per-(mode, n) aggregate rows.

    Integer columns are exact decimal; seconds use 6 decimal places.
    """
    lines = [CSV_HEADER]
    lines.extend(",".join(_record_cells(r)) for r in records)
    lines.extend(",".join(row) for row in aggregate_rows(records))
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"could not write CSV to {path}: {exc}") from exc
