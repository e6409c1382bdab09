import math
from dataclasses import dataclass, field
from numbers import Integral, Real
from pathlib import Path
from typing import List, Tuple

from qharm.enums.shared import OutputFormat
from qharm.exceptions import SweepConfigError
from qharm.subharm.thresholds import ThresholdPair
from qharm.utils.file_parser import FileParser

AUTO = "auto"
EXPLICIT = "explicit"


def _is_int(value):
    return isinstance(value, Integral) and not isinstance(value, bool)


def _is_real(value):
    return isinstance(value, Real) and not isinstance(value, bool) and math.isfinite(value)


@dataclass(frozen=True)
class QGrid:
    """
    Exponents visited per (n, K).

    auto: q_minus - margin, q_minus, q_plus, q_plus + margin, points_per_gap
    evenly spaced points inside (q_minus, 0) and (0, q_plus), their midpoints,
    and -zero_offset / +zero_offset next to 0.
    explicit: `values` as given, for every (n, K).
    """

    mode: str = AUTO
    values: Tuple[float, ...] = ()
    points_per_gap: int = 5
    margin: float = 0.5
    zero_offset: float = 1e-3

    def q_values(self, pair: ThresholdPair) -> List[float]:
        if self.mode == EXPLICIT:
            return list(self.values)

        grid = {pair.q_minus - self.margin, pair.q_minus, pair.q_plus, pair.q_plus + self.margin}
        for lo, hi in ((pair.q_minus, 0.0), (0.0, pair.q_plus)):
            width = hi - lo
            if width <= 0:
                continue
            p = self.points_per_gap
            grid.update(lo + width * (j / (p + 1)) for j in range(1, p + 1))
            grid.add(lo + width * 0.5)
            offset = min(self.zero_offset, width * 0.5)
            grid.add(offset if lo == 0.0 else -offset)
        return sorted(grid)

    def to_dict(self):
        if self.mode == EXPLICIT:
            return {"mode": self.mode, "values": list(self.values)}
        return {
            "mode": self.mode,
            "points_per_gap": self.points_per_gap,
            "margin": self.margin,
            "zero_offset": self.zero_offset,
        }

    @classmethod
    def from_dict(cls, document) -> "QGrid":
        if not isinstance(document, dict):
            raise SweepConfigError("'q_grid' must be an object.")
        mode = document.get("mode", AUTO)
        if mode == EXPLICIT:
            _reject_unknown(document, {"mode", "values"}, "q_grid")
            values = document.get("values")
            if not isinstance(values, list) or not values or not all(_is_real(v) for v in values):
                raise SweepConfigError("q_grid 'values' must be a non-empty list of finite numbers.")
            return cls(mode=EXPLICIT, values=tuple(float(v) for v in values))
        if mode != AUTO:
            raise SweepConfigError(f"q_grid 'mode' must be '{AUTO}' or '{EXPLICIT}', got {mode!r}.")

        _reject_unknown(document, {"mode", "points_per_gap", "margin", "zero_offset"}, "q_grid")
        points_per_gap = document.get("points_per_gap", cls.points_per_gap)
        margin = document.get("margin", cls.margin)
        zero_offset = document.get("zero_offset", cls.zero_offset)
        if not _is_int(points_per_gap) or points_per_gap < 3:
            raise SweepConfigError(f"q_grid 'points_per_gap' must be an integer >= 3, got {points_per_gap!r}.")
        if not _is_real(margin) or margin <= 0:
            raise SweepConfigError(f"q_grid 'margin' must be positive, got {margin!r}.")
        if not _is_real(zero_offset) or zero_offset <= 0:
            raise SweepConfigError(f"q_grid 'zero_offset' must be positive, got {zero_offset!r}.")
        return cls(mode=AUTO, points_per_gap=int(points_per_gap), margin=float(margin), zero_offset=float(zero_offset))


def _reject_unknown(document: dict, allowed: set, where: str):
    unknown = sorted(set(document) - allowed)
    if unknown:
        raise SweepConfigError(f"Unknown {where} key(s): {', '.join(unknown)}.")


@dataclass(frozen=True)
class SweepConfig:
    """
    One (n, K, q) parameter study.

    Extremal maps and the ensemble are sampled on the box of `half_width`
    around e_n (which keeps every sample away from 0); e_n itself is always
    added to the samples.
    """

    n_values: Tuple[int, ...]
    K_values: Tuple[float, ...]
    q_grid: QGrid = field(default_factory=QGrid)
    samples: int = 512
    seed: int = 42
    tol: float = 1e-9
    half_width: float = 0.5
    ensemble_size: int = 4
    ensemble_degree: int = 2
    output_format: OutputFormat = OutputFormat.CSV
    record_timing: bool = False

    def to_dict(self):
        return {
            "n_values": list(self.n_values),
            "K_values": list(self.K_values),
            "q_grid": self.q_grid.to_dict(),
            "samples": self.samples,
            "seed": self.seed,
            "tol": self.tol,
            "half_width": self.half_width,
            "ensemble_size": self.ensemble_size,
            "ensemble_degree": self.ensemble_degree,
            "format": str(self.output_format),
            "record_timing": self.record_timing,
        }

    @classmethod
    def from_dict(cls, document) -> "SweepConfig":
        """
        Validate a decoded sweep document.

        Raises:
            SweepConfigError: Naming the first offending key.
        """
        if not isinstance(document, dict):
            raise SweepConfigError("Sweep configuration must be a JSON object.")
        _reject_unknown(
            document,
            {
                "n_values",
                "K_values",
                "q_grid",
                "samples",
                "seed",
                "tol",
                "half_width",
                "ensemble_size",
                "ensemble_degree",
                "format",
                "record_timing",
            },
            "sweep",
        )

        n_values = document.get("n_values")
        if not isinstance(n_values, list) or not n_values or not all(_is_int(n) and n >= 2 for n in n_values):
            raise SweepConfigError("'n_values' must be a non-empty list of integers >= 2.")
        K_values = document.get("K_values")
        if not isinstance(K_values, list) or not K_values or not all(_is_real(K) and K >= 1 for K in K_values):
            raise SweepConfigError("'K_values' must be a non-empty list of numbers >= 1.")

        q_grid = QGrid.from_dict(document.get("q_grid", {"mode": AUTO}))

        samples = document.get("samples", cls.samples)
        if not _is_int(samples) or samples < 1:
            raise SweepConfigError(f"'samples' must be an integer >= 1, got {samples!r}.")
        seed = document.get("seed", cls.seed)
        if not _is_int(seed) or seed < 0:
            raise SweepConfigError(f"'seed' must be a non-negative integer, got {seed!r}.")
        tol = document.get("tol", cls.tol)
        if not _is_real(tol) or tol < 0:
            raise SweepConfigError(f"'tol' must be a non-negative number, got {tol!r}.")
        half_width = document.get("half_width", cls.half_width)
        if not _is_real(half_width) or not 0 < half_width < 1:
            raise SweepConfigError(f"'half_width' must lie in (0, 1), got {half_width!r}.")
        ensemble_size = document.get("ensemble_size", cls.ensemble_size)
        if not _is_int(ensemble_size) or ensemble_size < 0:
            raise SweepConfigError(f"'ensemble_size' must be a non-negative integer, got {ensemble_size!r}.")
        ensemble_degree = document.get("ensemble_degree", cls.ensemble_degree)
        if not _is_int(ensemble_degree) or ensemble_degree < 1:
            raise SweepConfigError(f"'ensemble_degree' must be an integer >= 1, got {ensemble_degree!r}.")
        record_timing = document.get("record_timing", cls.record_timing)
        if not isinstance(record_timing, bool):
            raise SweepConfigError("'record_timing' must be true or false.")

        output_format = document.get("format", str(cls.output_format))
        try:
            output_format = OutputFormat[str(output_format).upper()]
        except KeyError:
            raise SweepConfigError(f"'format' must be one of text, json, csv, got {output_format!r}.")

        return cls(
            n_values=tuple(int(n) for n in n_values),
            K_values=tuple(float(K) for K in K_values),
            q_grid=q_grid,
            samples=int(samples),
            seed=int(seed),
            tol=float(tol),
            half_width=float(half_width),
            ensemble_size=int(ensemble_size),
            ensemble_degree=int(ensemble_degree),
            output_format=output_format,
            record_timing=record_timing,
        )

    @classmethod
    def load(cls, path: Path) -> "SweepConfig":
        try:
            document = FileParser.parse_json_file(path)
        except (FileNotFoundError, ValueError) as e:
            raise SweepConfigError(str(e))
        return cls.from_dict(document)
