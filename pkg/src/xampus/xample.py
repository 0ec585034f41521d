"""Low-rate acquisition of the beamformed line, directly from element signals.

The scheme picks ``|kappa| = 4 rho L`` Fourier harmonics of the window
``[0, tau)`` clustered around the carrier (positive and negative halves, so
the modulating kernels come out real), mixes them with a matrix S, and warps
each branch kernel per element so that integrating against the raw element
traces reproduces what sampling the dynamically focused sum would have given:

    c_q = sum_m (1/tau) integral  s_hat[q, m](t) phi_m(t) dt  over [0, tau_hat]

with

    s_hat[q, m](t) = (1 + (d_m/t)^2) * sum_k S[q, k] exp(-2j pi k (t - d_m^2/t) / tau)
                     * step(t - |d_m|),          d_m = offset_m / c.

The ``xample_beamformed_oracle`` path instead integrates the unwarped kernels
against a materialized beamformed line; the two must agree, which is the
package's central consistency check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beamform import BeamformedLine
from .errors import GridTooShort, InvariantViolation, OffBand, SingularHarmonic
from .geometry import ArrayGeometry, tau_hat
from .pulse import SPECTRUM_FLOOR, PulseModel, build_H
from .sim import MAX_GRID_STEP, ChannelSet


def select_kappa(L: int, rho: float, tau: float, carrier_hz: float,
                 pulse: PulseModel | None = None,
                 floor: float = SPECTRUM_FLOOR) -> np.ndarray:
    """Harmonic index set for ``K = 2 rho L`` coefficients near the carrier.

    The positive half is the K consecutive integers centered on
    ``k_c = round(carrier_hz * tau)``; the returned set appends the negation
    of the positive half in matching order (column i + K pairs with column i),
    which is what keeps the mixed kernels real.

    Raises ``OffBand`` if a pulse model is supplied and any selected harmonic
    falls below ``floor`` of its spectrum peak.
    """
    if L < 1:
        raise InvariantViolation("L must be >= 1")
    if rho < 1:
        raise InvariantViolation("rho must be >= 1")
    k_float = 2.0 * rho * L
    K = int(round(k_float))
    if abs(K - k_float) > 1e-9 or K % 2 != 0:
        raise InvariantViolation("2*rho*L must be an even integer")
    k_c = int(round(carrier_hz * tau))
    pos = np.arange(k_c - K // 2 + 1, k_c + K // 2 + 1)
    if pos[0] < 1:
        raise InvariantViolation("harmonic set reaches k < 1; tau too short "
                                 "for this carrier")
    kappa = np.concatenate([pos, -pos])
    if pulse is not None:
        try:
            build_H(pulse, kappa, tau, floor=floor)
        except SingularHarmonic as e:
            raise OffBand(str(e)) from e
    return kappa


@dataclass(frozen=True)
class XampleConfig:
    """Everything that fixes the kernel bank and recovery problem sizes."""

    L: int
    rho: float
    tau: float
    carrier_hz: float
    kappa: np.ndarray
    p: int
    focus_mode: str
    geometry: ArrayGeometry

    def __post_init__(self):
        kappa = np.asarray(self.kappa, dtype=int)
        object.__setattr__(self, "kappa", kappa)
        K = len(kappa) // 2
        if len(kappa) != 2 * K or K != int(round(2 * self.rho * self.L)):
            raise InvariantViolation("|kappa| must equal 4*rho*L")
        pos = kappa[:K]
        if np.any(np.diff(pos) != 1):
            raise InvariantViolation("positive half of kappa must be consecutive")
        if np.any(kappa[K:] != -pos):
            raise InvariantViolation("negative half must mirror the positive half")
        if self.p < len(kappa):
            raise InvariantViolation("p must be >= |kappa| for full column rank")
        if self.focus_mode not in ("dynamic", "infinity"):
            raise InvariantViolation(f"unknown focus_mode {self.focus_mode!r}")

    @classmethod
    def create(cls, L: int, rho: float, tau: float, pulse: PulseModel,
               geometry: ArrayGeometry, focus_mode: str = "dynamic",
               floor: float = SPECTRUM_FLOOR) -> "XampleConfig":
        kappa = select_kappa(L, rho, tau, pulse.carrier_hz, pulse=pulse,
                             floor=floor)
        return cls(L=L, rho=rho, tau=tau, carrier_hz=pulse.carrier_hz,
                   kappa=kappa, p=len(kappa), focus_mode=focus_mode,
                   geometry=geometry)

    @property
    def K(self) -> int:
        """Positive-half harmonic count, 2*rho*L."""
        return len(self.kappa) // 2

    @property
    def kappa_pos(self) -> np.ndarray:
        return self.kappa[: self.K]


@dataclass(frozen=True)
class MixingMatrix:
    """Branch mixing weights S; rows are branches, columns follow kappa."""

    entries: np.ndarray
    structure: str = "custom"

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2:
            raise InvariantViolation("mixing matrix must be 2-D")
        if entries.shape[0] < entries.shape[1]:
            raise InvariantViolation("mixing matrix needs at least as many "
                                     "branches as harmonics")

    @property
    def num_branches(self) -> int:
        return self.entries.shape[0]


def build_S(p: int) -> MixingMatrix:
    """Square mixing matrix pairing each +k with its -k partner.

    [[ I/2,   I/2  ],
     [ I/2j, -I/2j ]]   with I of size p/2.

    Row q <= p/2 makes branch kernel cos(2 pi k_q t / tau); row q + p/2 makes
    -sin of the same harmonic.
    """
    if p % 2 != 0:
        raise InvariantViolation("p must be even for the paired structure")
    eye = np.eye(p // 2)
    entries = np.block([[0.5 * eye, 0.5 * eye],
                        [eye / 2j, -eye / 2j]])
    return MixingMatrix(entries=entries, structure="paired-real")


@dataclass
class XampleOutput:
    """Branch outputs per element and their fold over the aperture."""

    c_qm: np.ndarray  # (p, num_elements)
    c: np.ndarray     # (p,)


def _check_real_pairing(cfg: XampleConfig, S: MixingMatrix) -> None:
    """Real kernels require each -k column to conjugate its +k partner.

    Without this the branch waveforms are complex (not physically
    realizable) and the real-valued branch outputs lose half the
    information.
    """
    if S.entries.shape[1] != len(cfg.kappa):
        raise InvariantViolation("mixing matrix columns must match |kappa|")
    K = cfg.K
    if not np.allclose(S.entries[:, K:], np.conj(S.entries[:, :K]),
                       rtol=0, atol=1e-12):
        raise InvariantViolation(
            "mixing matrix must pair conjugate harmonics so the kernels "
            "are real"
        )


def _element_harmonics(kappa, tau, t, weights, trace, a, dynamic):
    """Windowed harmonic integrals of one element trace.

    Returns g[k] = sum_i weights[i] * bracket(t_i) * trace[t_i]
                   * exp(-2j pi k (t_i - a^2/t_i) / tau)
    restricted to t >= a, i.e. the per-element branch integrals before the
    S mixing is applied (mixing commutes with the time integral).
    """
    if not dynamic or a == 0.0:
        phase = t
        weighted = weights * trace
    else:
        mask = t >= a
        ts = t[mask]
        phase = ts - (a * a) / ts
        weighted = weights[mask] * (1.0 + (a / ts) ** 2) * trace[mask]
    ex = np.exp((-2j * np.pi / tau) * np.outer(kappa, phase))
    return ex @ weighted


def _trapezoid_weights(n: int, step: float) -> np.ndarray:
    w = np.full(n, step)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def xample_channels(ch: ChannelSet, cfg: XampleConfig, S: MixingMatrix,
                    fold: bool = False) -> XampleOutput:
    """Run the kernel bank over every element and fold the outputs.

    With ``fold=True`` symmetric element pairs are summed before modulation
    (their kernels are identical because the offset enters only as delta^2
    and |delta|); the result matches the per-element path to roundoff.
    """
    bound = tau_hat(cfg.tau, ch.geometry)
    if ch.duration < bound * (1 - 1e-12):
        raise GridTooShort(
            f"channel grid ends at {ch.duration:g} s, needs {bound:g} s"
        )
    n_elem = ch.geometry.num_elements
    _check_real_pairing(cfg, S)
    dynamic = cfg.focus_mode == "dynamic"
    t = ch.times
    w = _trapezoid_weights(ch.grid_len, ch.grid_step)
    a = ch.geometry.offset_times

    c_qm = np.zeros((S.num_branches, n_elem))
    if fold:
        for i in range((n_elem + 1) // 2):
            j = n_elem - 1 - i
            trace = ch.samples[i] if i == j else ch.samples[i] + ch.samples[j]
            g = _element_harmonics(cfg.kappa, cfg.tau, t, w, trace, a[i],
                                   dynamic)
            # the pair shares one modulation branch; its sample lands in the
            # lower-index column and the mirror column stays zero
            c_qm[:, i] = np.real(S.entries @ g) / cfg.tau
    else:
        for m in range(n_elem):
            g = _element_harmonics(cfg.kappa, cfg.tau, t, w, ch.samples[m],
                                   a[m], dynamic)
            c_qm[:, m] = np.real(S.entries @ g) / cfg.tau
    return XampleOutput(c_qm=c_qm, c=c_qm.sum(axis=1))


def xample_beamformed_oracle(line: BeamformedLine, cfg: XampleConfig,
                             S: MixingMatrix) -> np.ndarray:
    """Sample a materialized beamformed line with the unwarped kernel bank.

    The line must live on a simulation-resolution grid spanning [0, tau];
    this is the reference the direct per-element path is validated against.
    """
    if line.grid_step > MAX_GRID_STEP * (1 + 1e-12):
        raise InvariantViolation("oracle line must be at simulation resolution")
    if line.grid_step * (len(line.samples) - 1) < cfg.tau * (1 - 1e-9):
        raise GridTooShort("oracle line does not span [0, tau]")
    _check_real_pairing(cfg, S)
    t = line.times
    w = _trapezoid_weights(len(line.samples), line.grid_step)
    g = _element_harmonics(cfg.kappa, cfg.tau, t, w, line.samples, 0.0, False)
    return np.real(S.entries @ g) / cfg.tau


def kernel_value(cfg: XampleConfig, S: MixingMatrix, q: int, elem: int, t):
    """Branch kernel s_hat[q, elem] evaluated at time(s) t.

    ``q`` is the 0-based branch (row of S) and ``elem`` the 0-based element
    row.  In infinity mode, or for the on-axis element, this is the plain
    harmonic kernel; otherwise the warped form with the unit step at
    ``|offset|/c``.  The +/-k pairing makes the sum real; the real part is
    returned.
    """
    if not 0 <= q < S.num_branches:
        raise IndexError(f"branch {q} outside 0..{S.num_branches - 1}")
    offsets = cfg.geometry.offsets
    if not 0 <= elem < len(offsets):
        raise IndexError(f"element {elem} outside 0..{len(offsets) - 1}")
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    a = abs(offsets[elem]) / cfg.geometry.speed_of_sound
    row = S.entries[q]
    if cfg.focus_mode != "dynamic" or a == 0.0:
        vals = np.real(
            np.exp((-2j * np.pi / cfg.tau) * np.outer(cfg.kappa, t)).T @ row
        )
    else:
        vals = np.zeros(t.shape)
        mask = t >= a
        ts = t[mask]
        if ts.size:
            phase = ts - (a * a) / ts
            ex = np.exp((-2j * np.pi / cfg.tau) * np.outer(cfg.kappa, phase))
            vals[mask] = (1.0 + (a / ts) ** 2) * np.real(ex.T @ row)
    return float(vals[0]) if scalar else vals
