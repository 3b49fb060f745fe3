"""Stochastic model of the reciprocal frequency-selective channel.

The per-position RSS means over ``n`` channels are modelled as one
n-dimensional multivariate Normal.  Both parties observe the same channel
state plus independent measurement noise; the observable Alice-Bob
difference per channel is zero-mean Normal with standard deviation
``noise_sigma``, so each party carries noise of ``noise_sigma / sqrt(2)``.
An eavesdropper a wavelength away sees a statistically identical but
independent channel, so her view is an independent draw from the same
distribution.

The module also synthesises integer-valued RSS traces in the format real
measurement campaigns produce, fits a model back out of such traces, and
provides the closed-form success predictor for tolerance planning.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from fskey.errors import DataFormatError, NumericalError
from fskey.quantizer import MetricSpace

#: RSS register range of the 802.15.4 radios the defaults are tuned for.
DEFAULT_SPACE = MetricSpace(-104.0, -40.0)

_PARTIES = ("alice", "bob")


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass
class ChannelModel:
    """Multivariate Normal channel-state model plus reciprocity noise.

    Attributes
    ----------
    mean : ndarray, shape (n,)
        Per-channel RSS means in dBm.
    covariance : ndarray, shape (n, n)
        Covariance of the channel-state vector in dB^2; symmetric PSD.
    noise_sigma : float
        Standard deviation in dB of the Alice-Bob difference of observed
        means (not of a single party's noise).
    """

    mean: np.ndarray
    covariance: np.ndarray
    noise_sigma: float
    _factor: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=float)
        self.covariance = np.asarray(self.covariance, dtype=float)
        if self.mean.ndim != 1:
            raise ValueError("mean must be a vector")
        n = self.mean.shape[0]
        if self.covariance.shape != (n, n):
            raise ValueError(f"covariance must be {n}x{n}")
        if not np.allclose(self.covariance, self.covariance.T, atol=1e-10):
            raise NumericalError("covariance matrix is not symmetric")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")

    @property
    def n(self) -> int:
        return self.mean.shape[0]

    def psd_factor(self) -> np.ndarray:
        """Matrix B with B B^T = covariance; rejects non-PSD input."""
        if self._factor is None:
            w, v = np.linalg.eigh(0.5 * (self.covariance + self.covariance.T))
            floor = -1e-8 * max(1.0, float(w[-1]))
            if w[0] < floor:
                raise NumericalError(
                    f"covariance is not PSD (eigenvalue {w[0]:.3e})"
                )
            self._factor = v * np.sqrt(np.clip(w, 0.0, None))
        return self._factor

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean.tolist(),
            "cov": self.covariance.tolist(),
            "noise_sigma": float(self.noise_sigma),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChannelModel":
        try:
            mean = np.asarray(data["mean"], dtype=float)
            cov = np.asarray(data["cov"], dtype=float)
            noise = float(data["noise_sigma"])
            n = int(data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DataFormatError(f"malformed channel model: {exc}") from exc
        if mean.shape != (n,) or cov.shape != (n, n):
            raise DataFormatError("channel model dimensions are inconsistent")
        return cls(mean=mean, covariance=cov, noise_sigma=noise)


@dataclass(frozen=True)
class ChannelRealization:
    """One sampled constellation: true state and all observers' views."""

    c: np.ndarray
    x_alice: np.ndarray
    x_bob: np.ndarray
    x_eve: np.ndarray


def sample_realizations(model: ChannelModel, size: int, rng) -> ChannelRealization:
    """Draw ``size`` realizations at once; arrays have shape (size, n).

    The channel state is a multivariate Normal draw; Alice and Bob each add
    independent per-channel Normal noise of ``noise_sigma/sqrt(2)``, and the
    eavesdropper's view is an independent draw from the same distribution.
    """
    rng = _as_rng(rng)
    factor = model.psd_factor()
    n = model.n
    c = model.mean + rng.standard_normal((size, n)) @ factor.T
    x_eve = model.mean + rng.standard_normal((size, n)) @ factor.T
    party_sd = model.noise_sigma / math.sqrt(2.0)
    if party_sd > 0:
        e = rng.normal(0.0, party_sd, (2, size, n))
        x_alice = c + e[0]
        x_bob = c + e[1]
    else:
        x_alice = c.copy()
        x_bob = c.copy()
    return ChannelRealization(c=c, x_alice=x_alice, x_bob=x_bob, x_eve=x_eve)


def sample_realization(model: ChannelModel, rng_seed) -> ChannelRealization:
    """Draw a single realization; vectors have shape (n,)."""
    batch = sample_realizations(model, 1, rng_seed)
    return ChannelRealization(
        c=batch.c[0], x_alice=batch.x_alice[0], x_bob=batch.x_bob[0], x_eve=batch.x_eve[0]
    )


@dataclass
class RssTrace:
    """Long-form RSS measurement records.

    One row per (position, channel, party, sample) holding an integer dBm
    reading; ``channel`` and ``sample`` are 1-based like the wire format.
    """

    position: np.ndarray
    channel: np.ndarray
    party: np.ndarray  # uint8, 0 = alice, 1 = bob
    sample: np.ndarray
    rss_dbm: np.ndarray

    CSV_HEADER = "position,channel,party,sample,rss_dbm"

    def __len__(self) -> int:
        return len(self.rss_dbm)

    @property
    def n_channels(self) -> int:
        return int(self.channel.max()) if len(self) else 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(self.CSV_HEADER + "\n")
        for pos, ch, pt, sm, rss in zip(
            self.position, self.channel, self.party, self.sample, self.rss_dbm
        ):
            buf.write(f"{pos},{ch},{_PARTIES[pt]},{sm},{rss}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "RssTrace":
        lines = text.strip().splitlines()
        if not lines or lines[0].strip() != cls.CSV_HEADER:
            raise DataFormatError(
                f"trace must start with header '{cls.CSV_HEADER}'"
            )
        cols: list[list] = [[], [], [], [], []]
        for ln, line in enumerate(lines[1:], start=2):
            parts = line.split(",")
            if len(parts) != 5:
                raise DataFormatError(f"line {ln}: expected 5 fields")
            try:
                cols[0].append(int(parts[0]))
                cols[1].append(int(parts[1]))
                cols[2].append(_PARTIES.index(parts[2]))
                cols[3].append(int(parts[3]))
                cols[4].append(int(parts[4]))
            except ValueError as exc:
                raise DataFormatError(f"line {ln}: {exc}") from exc
        return cls(
            position=np.asarray(cols[0], dtype=np.int64),
            channel=np.asarray(cols[1], dtype=np.int64),
            party=np.asarray(cols[2], dtype=np.uint8),
            sample=np.asarray(cols[3], dtype=np.int64),
            rss_dbm=np.asarray(cols[4], dtype=np.int64),
        )

    def position_means(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Mean RSS per (position, channel, party).

        Returns (positions, alice_means, bob_means) where the mean arrays
        have shape (positions, channels).
        """
        if len(self) == 0:
            raise DataFormatError("empty trace")
        positions, pos_idx = np.unique(self.position, return_inverse=True)
        n = self.n_channels
        sums = np.zeros((2, len(positions), n))
        counts = np.zeros((2, len(positions), n), dtype=np.int64)
        np.add.at(sums, (self.party, pos_idx, self.channel - 1), self.rss_dbm)
        np.add.at(counts, (self.party, pos_idx, self.channel - 1), 1)
        if (counts == 0).any() or counts.std() > 0:
            raise DataFormatError("trace is not balanced over positions/channels/parties")
        means = sums / counts
        return positions, means[0], means[1]


def integer_sample_matrix(
    observed: np.ndarray,
    k: int,
    rng,
    space: MetricSpace = DEFAULT_SPACE,
    jitter_sd: float = 0.5,
) -> np.ndarray:
    """Integer RSS samples whose mean reproduces the observed value.

    For each observation this draws ``k`` integer samples with roughly
    ``jitter_sd`` dB of spread whose mean equals the observation rounded to
    the 1/k grid, matching hardware that reports integer RSS per message
    while k-sample means carry sub-dB precision.  Values are clamped into
    the measurable range, which can distort means only at the range edges.

    Returns an array of shape ``observed.shape + (k,)``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = _as_rng(rng)
    obs = np.asarray(observed, dtype=float)
    target = np.rint(obs * k)
    jitter = rng.normal(0.0, jitter_sd, obs.shape + (k,))
    jitter -= jitter.mean(axis=-1, keepdims=True)
    v = np.rint(obs[..., None] + jitter)
    deficit = (target - v.sum(axis=-1)).astype(np.int64)
    q = deficit // k
    r = deficit - q * k
    v += q[..., None]
    v += np.arange(k) < r[..., None]
    return np.clip(v, space.mu_min, space.mu_max).astype(np.int64)


def synthesize_trace(
    model: ChannelModel,
    positions: int,
    k: int,
    rng_seed,
    space: MetricSpace = DEFAULT_SPACE,
) -> RssTrace:
    """Generate a synthetic measurement trace for ``positions`` constellations.

    Each position is an independent channel realization; both parties emit
    ``k`` integer samples per channel via :func:`integer_sample_matrix`.
    Deterministic for a fixed seed.
    """
    rng = _as_rng(rng_seed)
    n = model.n
    real = sample_realizations(model, positions, rng) if positions else None
    rows = positions * n * 2 * k
    position = np.empty(rows, dtype=np.int64)
    channel = np.empty(rows, dtype=np.int64)
    party = np.empty(rows, dtype=np.uint8)
    sample = np.empty(rows, dtype=np.int64)
    rss = np.empty(rows, dtype=np.int64)
    if positions:
        obs = np.stack([real.x_alice, real.x_bob])  # (2, P, n)
        values = integer_sample_matrix(obs, k, rng, space)  # (2, P, n, k)
        # row order: position, channel, party, sample
        rss[:] = values.transpose(1, 2, 0, 3).reshape(-1)
        position[:] = np.repeat(np.arange(1, positions + 1), n * 2 * k)
        channel[:] = np.tile(np.repeat(np.arange(1, n + 1), 2 * k), positions)
        party[:] = np.tile(np.repeat([0, 1], k), positions * n)
        sample[:] = np.tile(np.arange(1, k + 1), positions * n * 2)
    return RssTrace(position=position, channel=channel, party=party, sample=sample, rss_dbm=rss)


def fit_model(trace: RssTrace) -> ChannelModel:
    """Fit the multivariate Normal model from a measurement trace.

    The mean vector averages all position means; the covariance is the
    sample covariance over all position-mean vectors (both parties); the
    reciprocity noise is the zero-mean standard deviation of per-channel
    Alice-Bob mean differences.  Degenerate input (all vectors equal)
    yields a zero covariance and a warning.
    """
    positions, alice, bob = trace.position_means()
    if len(positions) < 2:
        raise DataFormatError("need at least 2 positions to fit a model")
    stacked = np.vstack([alice, bob])
    mean = stacked.mean(axis=0)
    centered = stacked - mean
    cov = centered.T @ centered / (stacked.shape[0] - 1)
    if not centered.any():
        warnings.warn("degenerate trace: all position means identical", stacklevel=2)
        cov = np.zeros_like(cov)
    else:
        min_eig = float(np.linalg.eigvalsh(0.5 * (cov + cov.T))[0])
        if min_eig < 0:
            warnings.warn(
                f"fitted covariance repaired with ridge (min eigenvalue {min_eig:.3e})",
                stacklevel=2,
            )
            cov = cov + (1e-9 - min_eig) * np.eye(cov.shape[0])
    diffs = alice - bob
    noise_sigma = float(np.sqrt(np.mean(diffs**2)))
    return ChannelModel(mean=mean, covariance=0.5 * (cov + cov.T), noise_sigma=noise_sigma)


def normality_score(samples) -> float:
    """Probability-plot correlation coefficient against the Normal.

    Pearson correlation between the ordered sample and Normal order
    statistic medians (Filliben positions); 1.0 means perfectly Normal.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or len(x) < 10:
        raise ValueError("need at least 10 scalar samples")
    if x.std() == 0:
        raise NumericalError("normality score undefined for constant input")
    (_, _), (_, _, r) = stats.probplot(x, dist="norm", fit=True)
    return float(r)


def predict_success(tolerances, noise_sigma: float, n: int | None = None) -> float:
    """Closed-form probability that every channel deviates below tolerance.

    The Alice-Bob difference is Normal(0, noise_sigma^2) per channel, so a
    run where all deviations stay inside the per-channel tolerances (the
    regime where reconciliation provably succeeds) has probability
    ``prod_i(2 Phi(t_i / sigma) - 1)``.  A scalar tolerance with ``n``
    expands to n identical channels.  Zero noise gives probability 1.
    """
    t = np.atleast_1d(np.asarray(tolerances, dtype=float))
    if n is not None and t.size == 1:
        t = np.full(n, t[0])
    if (t <= 0).any():
        raise ValueError("tolerances must be positive")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be non-negative")
    if noise_sigma == 0:
        return 1.0
    per_channel = 2.0 * stats.norm.cdf(t / noise_sigma) - 1.0
    return float(np.prod(per_channel))
