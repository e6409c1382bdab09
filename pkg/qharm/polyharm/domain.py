from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.stats import qmc

from qharm.exceptions import InvalidParameterError

DEFAULT_EPS_ZERO = 1e-8
DEFAULT_EPS_DEGENERATE = 1e-8


@dataclass(frozen=True)
class DomainSpec:
    """
    Sampling region: an axis-aligned box (half_width) or a ball (radius).

    eps_zero and eps_degenerate are the exclusion radii standing in for
    removing u^-1(0) and the critical set {det Du = 0}.
    """

    center: Tuple[float, ...]
    half_width: Optional[float] = None
    radius: Optional[float] = None
    eps_zero: float = DEFAULT_EPS_ZERO
    eps_degenerate: float = DEFAULT_EPS_DEGENERATE

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not self.center:
            raise InvalidParameterError("Domain center must have at least one coordinate.")
        if (self.half_width is None) == (self.radius is None):
            raise InvalidParameterError("Give exactly one of half_width (box) or radius (ball).")
        size = self.half_width if self.half_width is not None else self.radius
        if not size > 0:
            raise InvalidParameterError(f"Domain size must be positive, got {size}.")
        if not (self.eps_zero > 0 and self.eps_degenerate > 0):
            raise InvalidParameterError("eps_zero and eps_degenerate must be positive.")

    @classmethod
    def box(cls, center, half_width: float, **eps):
        return cls(tuple(center), half_width=float(half_width), **eps)

    @classmethod
    def ball(cls, center, radius: float, **eps):
        return cls(tuple(center), radius=float(radius), **eps)

    @classmethod
    def around_axis(cls, n: int, half_width: float = 0.5, **eps):
        """Box centred on e_n, the witness point of the extremal maps"""
        return cls.box((0.0,) * (n - 1) + (1.0,), half_width, **eps)

    @classmethod
    def parse(cls, text: str, **eps):
        """
        Parse 'box:C1,...,Cn:HALF_WIDTH' or 'ball:C1,...,Cn:RADIUS'.

        Raises:
            InvalidParameterError: For anything else.
        """
        parts = text.strip().split(":")
        if len(parts) != 3 or parts[0].lower() not in {"box", "ball"}:
            raise InvalidParameterError(
                f"Invalid domain {text!r}, expected box:C1,...,Cn:HALF_WIDTH or ball:C1,...,Cn:RADIUS."
            )
        try:
            center = tuple(float(c) for c in parts[1].split(","))
            size = float(parts[2])
        except ValueError:
            raise InvalidParameterError(f"Invalid numbers in domain {text!r}.")
        if parts[0].lower() == "box":
            return cls.box(center, size, **eps)
        return cls.ball(center, size, **eps)

    @property
    def dimension(self):
        return len(self.center)

    @property
    def is_ball(self):
        return self.radius is not None

    def contains(self, x) -> bool:
        offset = np.asarray(x, dtype=np.float64) - np.asarray(self.center)
        if self.is_ball:
            return bool(np.linalg.norm(offset) <= self.radius)
        return bool(np.all(np.abs(offset) <= self.half_width))

    def sample(self, samples: int, seed: int) -> np.ndarray:
        """
        Seeded scrambled Halton points in the domain, shape (samples, n).

        Balls are filled by rejection from the enclosing cube, keeping the
        low-discrepancy sequence order.
        """
        if samples < 1:
            raise InvalidParameterError(f"samples must be >= 1, got {samples}.")
        n = self.dimension
        sampler = qmc.Halton(d=n, scramble=True, seed=np.random.default_rng(seed))
        center = np.asarray(self.center)

        if not self.is_ball:
            cube = sampler.random(samples)
            return center + self.half_width * (2.0 * cube - 1.0)

        accepted = []
        count = 0
        while count < samples:
            cube = 2.0 * sampler.random(max(2 * samples, 64)) - 1.0
            inside = cube[np.linalg.norm(cube, axis=1) <= 1.0]
            accepted.append(inside)
            count += inside.shape[0]
        unit = np.concatenate(accepted)[:samples]
        return center + self.radius * unit
