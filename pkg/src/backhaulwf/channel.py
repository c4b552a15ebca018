"""Radio layer: effective noise, Shannon uplink rates, random scenario draws.

Every uplink is an orthogonal AWGN channel with bandwidth W (Hz), power gain
g and noise power n (W). All rate math runs on the derived effective noise
E = n / g, so nothing downstream ever needs g or n again:

    rate = W * log2(1 + P / E)   [bps]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "UplinkChannel",
    "ScenarioConfig",
    "effective_noise",
    "uplink_rate",
    "path_gain",
    "generate_scenario",
]


def effective_noise(gain: float, noise_w: float) -> float:
    """Noise power referred through the channel gain, E = n / g (Watts)."""
    if not gain > 0:
        raise InvalidParameterError(f"gain must be > 0, got {gain}")
    if not noise_w > 0:
        raise InvalidParameterError(f"noise_w must be > 0, got {noise_w}")
    return noise_w / gain


def uplink_rate(power_w: float, effective_noise_w: float, bandwidth_hz: float) -> float:
    """Shannon rate W * log2(1 + P/E) in bps; nondecreasing and concave in P."""
    if power_w < 0:
        raise InvalidParameterError(f"power_w must be >= 0, got {power_w}")
    if not effective_noise_w > 0:
        raise InvalidParameterError(
            f"effective_noise_w must be > 0, got {effective_noise_w}"
        )
    if not bandwidth_hz > 0:
        raise InvalidParameterError(f"bandwidth_hz must be > 0, got {bandwidth_hz}")
    return bandwidth_hz * math.log2(1.0 + power_w / effective_noise_w)


def path_gain(kappa: float, distance_m: float, path_loss_exponent: float) -> float:
    """Power gain g = kappa * d^(-alpha) for a shadowing draw kappa."""
    if not kappa > 0:
        raise InvalidParameterError(f"kappa must be > 0, got {kappa}")
    if not distance_m > 0:
        raise InvalidParameterError(f"distance_m must be > 0, got {distance_m}")
    if not path_loss_exponent > 0:
        raise InvalidParameterError(
            f"path_loss_exponent must be > 0, got {path_loss_exponent}"
        )
    return kappa * distance_m ** (-path_loss_exponent)


@dataclass(frozen=True)
class UplinkChannel:
    """One UE-to-AP uplink. effective_noise_w is always derived from n/g."""

    bandwidth_hz: float
    gain: float
    noise_w: float
    effective_noise_w: float = field(init=False)

    def __post_init__(self):
        if not self.bandwidth_hz > 0:
            raise InvalidParameterError(
                f"bandwidth_hz must be > 0, got {self.bandwidth_hz}"
            )
        object.__setattr__(
            self, "effective_noise_w", effective_noise(self.gain, self.noise_w)
        )

    @classmethod
    def from_effective_noise(
        cls, bandwidth_hz: float, effective_noise_w: float
    ) -> "UplinkChannel":
        """Build a channel directly from E (unit gain, noise = E)."""
        return cls(bandwidth_hz=bandwidth_hz, gain=1.0, noise_w=effective_noise_w)

    def rate_bps(self, power_w: float) -> float:
        return uplink_rate(power_w, self.effective_noise_w, self.bandwidth_hz)


# Default shadowing: 5 dB^2 variance in the dB domain, i.e. sigma_dB = sqrt(5).
DEFAULT_SHADOWING_STDDEV_DB = math.sqrt(5.0)

# Guard against g -> inf when an AP lands on top of the UE.
MIN_DISTANCE_M = 1.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Monte Carlo scenario: K APs dropped uniformly in a disk around the UE.

    noise_psd_dbw_per_hz is the one-sided noise PSD in dBW/Hz, so the noise
    power on a W-Hz channel is 10^(PSD/10) * W Watts.
    """

    num_aps: int = 5
    cluster_radius_m: float = 100.0
    path_loss_exponent: float = 4.0
    shadowing_stddev_db: float = DEFAULT_SHADOWING_STDDEV_DB
    noise_psd_dbw_per_hz: float = -190.0
    bandwidth_choices_hz: tuple[float, ...] = (1e6, 2e6, 5e6)
    p_max_w: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.num_aps < 1:
            raise InvalidParameterError(f"num_aps must be >= 1, got {self.num_aps}")
        if not self.cluster_radius_m > 0:
            raise InvalidParameterError(
                f"cluster_radius_m must be > 0, got {self.cluster_radius_m}"
            )
        if not self.path_loss_exponent > 0:
            raise InvalidParameterError(
                f"path_loss_exponent must be > 0, got {self.path_loss_exponent}"
            )
        if self.shadowing_stddev_db < 0:
            raise InvalidParameterError(
                f"shadowing_stddev_db must be >= 0, got {self.shadowing_stddev_db}"
            )
        choices = tuple(float(w) for w in self.bandwidth_choices_hz)
        if not choices or any(not w > 0 for w in choices):
            raise InvalidParameterError(
                f"bandwidth_choices_hz must be nonempty and > 0, got {choices}"
            )
        object.__setattr__(self, "bandwidth_choices_hz", choices)
        if not self.p_max_w > 0:
            raise InvalidParameterError(f"p_max_w must be > 0, got {self.p_max_w}")


def generate_scenario(
    config: ScenarioConfig, rng: np.random.Generator | None = None
) -> list[UplinkChannel]:
    """Draw K uplink channels for one trial.

    Distances come from uniform placement over the disk (d = D * sqrt(u),
    clamped to MIN_DISTANCE_M), shadowing is lognormal with the configured
    dB-domain standard deviation, and bandwidths are drawn uniformly from
    the configured choices. A fixed seed reproduces the scenario exactly.
    """
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    k = config.num_aps
    u = rng.random(k)
    shadow_db = rng.normal(0.0, config.shadowing_stddev_db, k)
    w_idx = rng.integers(0, len(config.bandwidth_choices_hz), k)

    noise_psd_w = 10.0 ** (config.noise_psd_dbw_per_hz / 10.0)
    channels = []
    for i in range(k):
        d = max(MIN_DISTANCE_M, config.cluster_radius_m * math.sqrt(u[i]))
        kappa = 10.0 ** (shadow_db[i] / 10.0)
        gain = path_gain(kappa, d, config.path_loss_exponent)
        w = config.bandwidth_choices_hz[w_idx[i]]
        channels.append(
            UplinkChannel(bandwidth_hz=w, gain=gain, noise_w=noise_psd_w * w)
        )
    return channels
