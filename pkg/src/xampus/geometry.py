"""Array layout and two-way travel-time geometry.

All timing here is expressed on the image-line clock: the transmit pulse
leaves the array center at t = 0, intersects the beam point parameterized by
axial time ``t_n`` (depth ``c * t_n``), and the echo lands back on element m
at ``arrival_time``.  The receive beamformer undoes the per-element spread
with ``focus_delay`` / ``receive_warp``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array centered on the scanned beam.

    Element offsets are symmetric about the beam: ``m * pitch`` for an odd
    count (2M+1 elements, m in -M..M), half-integer multiples of the pitch
    for an even count.  Either way ``offsets`` is ascending and
    ``offsets[i] == -offsets[n-1-i]``.
    """

    num_elements: int
    pitch: float
    speed_of_sound: float = 1540.0

    def __post_init__(self):
        if self.num_elements < 1:
            raise ValueError("num_elements must be >= 1")
        if self.pitch <= 0:
            raise ValueError("pitch must be positive")
        if self.speed_of_sound <= 0:
            raise ValueError("speed_of_sound must be positive")

    @property
    def offsets(self) -> np.ndarray:
        """Element x-coordinates in meters, ascending."""
        n = self.num_elements
        return (np.arange(n) - (n - 1) / 2.0) * self.pitch

    @property
    def offset_times(self) -> np.ndarray:
        """Per-element |offset| / c in seconds (the warp parameter)."""
        return np.abs(self.offsets) / self.speed_of_sound


def arrival_time(t_n, alpha, delta_m, c):
    """Echo arrival time at the element offset ``delta_m`` (meters).

    A pulse scattered at axial time ``t_n`` on a beam steered by ``alpha``
    arrives back at the element after covering the return path:

        t_n + sqrt((c t_n sin(alpha) - delta_m)^2 + (c t_n cos(alpha))^2) / c
    """
    t_n = np.asarray(t_n, dtype=float)
    return t_n + np.sqrt(
        (c * t_n * np.sin(alpha) - delta_m) ** 2 + (c * t_n * np.cos(alpha)) ** 2
    ) / c


def focus_delay(t_n, alpha, delta_m, c):
    """Receive-focus delay applied to element ``delta_m`` for focal time t_n.

    Possibly negative; equals on-axis round trip minus the element's own
    arrival, ``2 t_n - arrival_time``.
    """
    t_n = np.asarray(t_n, dtype=float)
    d = delta_m / c
    return t_n - np.sqrt(t_n**2 + d**2 - 2.0 * t_n * d * np.sin(alpha))


def receive_warp(t, delta_m, c, alpha=0.0):
    """Time warp mapping output time t to the element's own clock.

    Dynamic focusing evaluates element traces at

        0.5 * (t + sqrt(t^2 + 4 (delta/c) ((delta/c) - t sin(alpha))))

    which reduces to ``0.5 (t + sqrt(t^2 + 4 (delta/c)^2))`` for a linear
    scan (alpha = 0).  The radicand is a completed square, hence never
    negative.
    """
    t = np.asarray(t, dtype=float)
    d = delta_m / c
    return 0.5 * (t + np.sqrt(t**2 + 4.0 * d * (d - t * np.sin(alpha))))


def tau_hat(tau: float, geometry: ArrayGeometry) -> float:
    """Upper integration bound covering the longest warped arrival.

    ``max_m 0.5 (tau + sqrt(tau^2 + 4 (delta_m/c)^2))``; always >= tau.
    """
    d = geometry.offsets / geometry.speed_of_sound
    return float(np.max(0.5 * (tau + np.sqrt(tau**2 + 4.0 * d**2))))
