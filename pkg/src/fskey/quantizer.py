"""Equidistant multi-level RSS quantization with shift-token reconciliation.

Signal-strength means live in a closed dBm interval that, together with the
absolute-difference metric, forms a metric space.  A quantization scheme
places ``K`` evenly spaced levels on that interval; the spacing ``d`` fixes
the tolerance ``t = d/2``, the largest deviation the reconciliation scheme
provably corrects.  Alice publishes, per channel, the shift from her mean to
its nearest level; Bob adds that shift to his own mean before quantizing.
Whenever the two means differ by less than ``t`` both sides land on the same
level, and the published shift reveals only sub-tolerance information that
quantization discards anyway.

All values here are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True)
class MetricSpace:
    """Measurable RSS interval [mu_min, mu_max] in dBm with |a-b| distance.

    The bounds come from the radio hardware's RSS register range, e.g.
    [-104, -40] dBm for 802.15.4 transceivers.
    """

    mu_min: float
    mu_max: float

    def __post_init__(self):
        if not self.mu_min < self.mu_max:
            raise ValueError(
                f"mu_min must be below mu_max, got [{self.mu_min}, {self.mu_max}]"
            )

    def distance(self, a: float, b: float) -> float:
        """Distance in dB between two RSS values."""
        return abs(a - b)

    @property
    def width(self) -> float:
        return self.mu_max - self.mu_min


@dataclass(frozen=True)
class ReconcileToken:
    """Public shift from a measured mean to its quantization level.

    The shift never exceeds the tolerance of the scheme that produced it,
    so publishing it leaks nothing beyond what quantization discards.
    """

    shift: float


@dataclass(frozen=True)
class QuantizationScheme:
    """K evenly spaced levels over a metric space, tolerance t = d/2.

    Levels are anchored at ``mu_min`` and ascend in steps of ``d``; the last
    level sits at ``mu_min + (K-1)*d``.  Values above the last level's
    tolerance cell are clamped into it (mirroring RSS register saturation),
    which keeps every published shift within ``t``.

    Attributes
    ----------
    space : MetricSpace
        The underlying RSS interval.
    level_count : int
        Number of levels K (at least 2).
    spacing : float
        Distance d between neighbouring levels, ``width / K``.
    tolerance : float
        Half the spacing; deviations strictly below it are always repaired.
    bits_per_level : int
        ceil(log2 K), the width of one level's binary code.
    levels : tuple of float
        The K level values in ascending order.
    """

    space: MetricSpace
    level_count: int
    spacing: float
    tolerance: float
    bits_per_level: int
    levels: tuple[float, ...]

    @property
    def covered_max(self) -> float:
        """Upper edge of the region within tolerance of some level."""
        return self.levels[-1] + self.tolerance

    def clamp(self, mu: float) -> float:
        """Clamp a value into the region covered by the levels."""
        return min(max(mu, self.space.mu_min), self.covered_max)

    def level_index(self, level: float) -> int:
        """Index of an exact level value; raises for non-levels."""
        i = int(round((level - self.space.mu_min) / self.spacing))
        if i < 0 or i >= self.level_count or self.levels[i] != level:
            raise ValueError(f"{level} is not a level of this scheme")
        return i


def build_scheme(space: MetricSpace, tolerance: float) -> QuantizationScheme:
    """Construct the equidistant scheme with the given tolerance.

    The spacing is ``d = 2t`` and the level count ``K = floor(width / d)``.
    When ``2t`` divides the width exactly this reproduces the textbook
    relation ``d = width / K``; otherwise K is rounded down and the leftover
    width extends the top level's clamp region.

    Raises
    ------
    ValueError
        If ``tolerance <= 0`` or the tolerance is so large that fewer than
        two levels fit.
    """
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    spacing = 2.0 * tolerance
    count = int(math.floor(space.width / spacing + 1e-9))
    if count < 2:
        raise ValueError(
            f"tolerance {tolerance} leaves fewer than 2 levels on {space}"
        )
    levels = tuple(space.mu_min + i * spacing for i in range(count))
    return QuantizationScheme(
        space=space,
        level_count=count,
        spacing=spacing,
        tolerance=tolerance,
        bits_per_level=math.ceil(math.log2(count)),
        levels=levels,
    )


@lru_cache(maxsize=256)
def _cached_scheme(mu_min: float, mu_max: float, tolerance: float) -> QuantizationScheme:
    return build_scheme(MetricSpace(mu_min, mu_max), tolerance)


def scheme_for(space: MetricSpace, tolerance: float) -> QuantizationScheme:
    """Memoised ``build_scheme``; protocol retries reuse few tolerances."""
    return _cached_scheme(space.mu_min, space.mu_max, float(tolerance))


def quantize(scheme: QuantizationScheme, mu: float) -> float:
    """Map a value to its nearest level; midpoint ties go to the lower level.

    Out-of-range inputs are clamped first, so the result is always a level.
    """
    x = (scheme.clamp(mu) - scheme.space.mu_min) / scheme.spacing
    i = math.ceil(x - 0.5)
    if i < 0:
        i = 0
    elif i >= scheme.level_count:
        i = scheme.level_count - 1
    return scheme.levels[i]


def make_token(scheme: QuantizationScheme, mu: float) -> tuple[float, ReconcileToken]:
    """Quantize a mean and derive the public shift token.

    Returns the level ``q`` and the token carrying ``q - mu`` (with ``mu``
    clamped into the covered region); the shift magnitude never exceeds the
    tolerance.
    """
    clamped = scheme.clamp(mu)
    q = quantize(scheme, clamped)
    return q, ReconcileToken(shift=q - clamped)


def apply_token(scheme: QuantizationScheme, mu_prime: float, token: ReconcileToken) -> float:
    """Recover the sender's level from one's own mean plus the public shift."""
    return quantize(scheme, mu_prime + token.shift)


def encode_levels(scheme: QuantizationScheme, levels) -> str:
    """Concatenate the fixed-width binary codes of a level sequence.

    Each level contributes ``bits_per_level`` bits (its index, big-endian),
    so ``n`` levels yield an ``n * bits_per_level``-bit string.  Values that
    are not levels of the scheme are rejected.
    """
    width = scheme.bits_per_level
    return "".join(format(scheme.level_index(q), f"0{width}b") for q in levels)


def decode_bits(scheme: QuantizationScheme, bits: str) -> list[float]:
    """Inverse of :func:`encode_levels` for whole-level-aligned bit strings."""
    width = scheme.bits_per_level
    if len(bits) % width != 0:
        raise ValueError(f"bit string length {len(bits)} is not a multiple of {width}")
    out = []
    for pos in range(0, len(bits), width):
        i = int(bits[pos : pos + width], 2)
        if i >= scheme.level_count:
            raise ValueError(f"code {bits[pos:pos + width]} exceeds level count")
        out.append(scheme.levels[i])
    return out
