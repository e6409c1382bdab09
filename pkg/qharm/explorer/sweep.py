import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from qharm.enums.shared import Branch, ExponentRegion, OutputFormat, Verdict
from qharm.explorer.config import SweepConfig
from qharm.explorer.critical import EmpiricalProfile, empirical_profile
from qharm.loggers.console import ConsoleLogger
from qharm.polyharm.domain import DomainSpec
from qharm.polyharm.harmonic_map import HarmonicMap, extremal_map, identity_map, random_harmonic_map
from qharm.subharm.thresholds import classify_exponent, thresholds
from qharm.subharm.verify import SampleBatch, SubharmonicityReport, evaluate_samples, verify_samples
from qharm.subharm.witness import axis_point, witness
from qharm.utils.utils import worker_count

SWEEP_COLUMNS = ("n", "K", "q", "q_plus", "q_minus", "extremal_verdict", "ensemble_verdict", "witness_delta", "ms")
# perturbation sizes tried, largest first, for identity + s * v ensemble members
ENSEMBLE_SCALES = tuple(Fraction(1, 2**k) for k in range(1, 11))


@dataclass
class EnsembleMember:
    batch: SampleBatch
    scale: Fraction
    profile: EmpiricalProfile

    def to_dict(self):
        return {"map": self.batch.map.name, "scale": str(self.scale), **self.profile.to_dict()}


@dataclass
class SweepRow:
    n: int
    K: float
    q: float
    q_plus: float
    q_minus: float
    region: ExponentRegion
    extremal_verdict: Verdict
    ensemble_verdict: Verdict
    witness_delta: Optional[float]
    ms: float
    stretch_report: SubharmonicityReport
    compress_report: SubharmonicityReport
    ensemble_reports: List[SubharmonicityReport] = field(default_factory=list)
    ensemble_members: List[EnsembleMember] = field(default_factory=list)
    ensemble_rejected: int = 0

    @property
    def theorem_violation(self) -> bool:
        """A failure where the exponent is outside the gap"""
        if self.region == ExponentRegion.GAP:
            return False
        return Verdict.FAIL in (self.extremal_verdict, self.ensemble_verdict)

    def to_csv_dict(self):
        return {
            "n": self.n,
            "K": self.K,
            "q": self.q,
            "q_plus": self.q_plus,
            "q_minus": self.q_minus,
            "extremal_verdict": str(self.extremal_verdict),
            "ensemble_verdict": str(self.ensemble_verdict),
            "witness_delta": self.witness_delta,
            "ms": self.ms,
        }

    def to_dict(self):
        row = self.to_csv_dict()
        row.update(
            {
                "region": str(self.region),
                "theorem_violation": self.theorem_violation,
                "stretch": self.stretch_report.to_dict(),
                "compress": self.compress_report.to_dict(),
                "ensemble": [report.to_dict() for report in self.ensemble_reports],
                "ensemble_members": [member.to_dict() for member in self.ensemble_members],
                "ensemble_rejected": self.ensemble_rejected,
            }
        )
        return row


@dataclass
class SweepTable:
    config: SweepConfig
    rows: List[SweepRow]

    @property
    def theorem_violations(self) -> List[SweepRow]:
        return [row for row in self.rows if row.theorem_violation]

    def to_records(self, output_format: OutputFormat):
        if output_format == OutputFormat.JSON:
            return {"config": self.config.to_dict(), "rows": [row.to_dict() for row in self.rows]}
        return [row.to_csv_dict() for row in self.rows]


def _ensemble_map(n: int, v: HarmonicMap, scale: Fraction) -> HarmonicMap:
    base = identity_map(n)
    components = [b + scale * c for b, c in zip(base.components, v.components)]
    return HarmonicMap(components, name=f"identity+{scale}*{v.name}")


def build_ensemble(cfg: SweepConfig, n: int, K: float, points: np.ndarray, dom: DomainSpec) -> Tuple[List[EnsembleMember], int]:
    """
    Random maps identity + s v with empirical dilatation <= K on `points`.

    For each member the perturbation v is fixed by the seed and s walks down
    ENSEMBLE_SCALES; a member whose every scale exceeds K is rejected.
    """
    members = []
    rejected = 0
    for index in range(cfg.ensemble_size):
        v = random_harmonic_map(n, cfg.ensemble_degree, cfg.seed + index)
        for scale in ENSEMBLE_SCALES:
            batch = evaluate_samples(_ensemble_map(n, v, scale), points, dom.eps_zero, dom.eps_degenerate)
            if batch.regular_mask.all():
                profile = empirical_profile(batch)
                if profile.h_linear <= K:
                    members.append(EnsembleMember(batch, scale, profile))
                    break
        else:
            rejected += 1
    return members, rejected


def _combined(reports: List[SubharmonicityReport]) -> Verdict:
    if not reports:
        return Verdict.NONE
    return Verdict.FAIL if any(not report.passed for report in reports) else Verdict.PASS


def _sweep_group(cfg: SweepConfig, n: int, K: float) -> List[SweepRow]:
    pair = thresholds(n, K)
    dom = DomainSpec.around_axis(n, cfg.half_width)
    points = np.concatenate([dom.sample(cfg.samples, cfg.seed), axis_point(n)[None, :]])
    stretch = evaluate_samples(extremal_map(n, K, Branch.STRETCH), points, dom.eps_zero, dom.eps_degenerate)
    compress = evaluate_samples(extremal_map(n, K, Branch.COMPRESS), points, dom.eps_zero, dom.eps_degenerate)
    members, rejected = build_ensemble(cfg, n, K, points, dom)

    rows = []
    for q in cfg.q_grid.q_values(pair):
        start = time.perf_counter()
        stretch_report = verify_samples(stretch, q, cfg.tol)
        compress_report = verify_samples(compress, q, cfg.tol)
        ensemble_reports = [verify_samples(member.batch, q, cfg.tol) for member in members]
        witness_delta = witness(n, K, q).laplacian_value if pair.in_gap(q) else None
        elapsed = (time.perf_counter() - start) * 1000.0 if cfg.record_timing else 0.0
        rows.append(
            SweepRow(
                n=n,
                K=pair.K,
                q=q,
                q_plus=pair.q_plus,
                q_minus=pair.q_minus,
                region=classify_exponent(n, K, q),
                extremal_verdict=_combined([stretch_report, compress_report]),
                ensemble_verdict=_combined(ensemble_reports),
                witness_delta=witness_delta,
                ms=elapsed,
                stretch_report=stretch_report,
                compress_report=compress_report,
                ensemble_reports=ensemble_reports,
                ensemble_members=members,
                ensemble_rejected=rejected,
            )
        )
    return rows


def sweep(cfg: SweepConfig, logger: Optional[ConsoleLogger] = None) -> SweepTable:
    """
    Run the (n, K, q) study.

    (n, K) groups run on a thread pool capped by QHARM_THREADS; rows come back
    in (n, K, q) order regardless of completion order.
    """
    groups = [(n, K) for n in cfg.n_values for K in cfg.K_values]
    logger = logger if logger is not None else ConsoleLogger()
    rows = []
    with ThreadPoolExecutor(max_workers=min(worker_count(), len(groups))) as executor:
        results = executor.map(lambda group: _sweep_group(cfg, *group), groups)
        for done, ((n, K), group_rows) in enumerate(zip(groups, results), start=1):
            rows.extend(group_rows)
            logger.debug(f"n={n} K={K:g}: {len(group_rows)} rows")
            logger.progress(done, len(groups), "Sweep groups ")
    return SweepTable(config=cfg, rows=rows)
