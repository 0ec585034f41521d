"""Parameter recovery: unmix the branch samples into Fourier coefficients,
then pull delays and amplitudes of the pulse stream out of them.

The positive-half coefficients satisfy

    y[k] = (1/tau) * sum_l b_l exp(-2j pi k t_l / tau)

i.e. a sum of cisoids whose pole phases encode the delays.  Delays come from
either the matrix pencil (with SVD model-order estimation) or an annihilating
filter; amplitudes are a linear least-squares fit given the delays.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (ConditioningFailure, IllConditioned, OrderOverflow,
                     RankDeficient, SingularSystem)
from .pulse import PulseModel, build_H
from .xample import MixingMatrix, XampleConfig, build_S

# sigma_i / sigma_1 above this counts toward the model order; 1e-2 suits data
# with noise or quadrature error, 1e-8 suits exact synthetic coefficients.
SV_THRESHOLD_DEFAULT = 1e-2
SV_THRESHOLD_EXACT = 1e-8

_COND_LIMIT = 1e10


@dataclass
class FourierCoeffs:
    """Positive-half harmonics of the beamformed line.

    ``phi`` holds the raw unmixed coefficients of the line itself;
    ``y`` has the pulse spectrum divided out and is what the delay
    estimators consume.
    """

    y: np.ndarray
    kappa_pos: np.ndarray
    tau: float
    phi: np.ndarray | None = None


@dataclass
class LineEstimate:
    """Recovered pulse stream for one image line."""

    delays: np.ndarray
    amplitudes: np.ndarray
    model_order: int
    singular_values: np.ndarray
    residual: float


def recover_fourier(c, S: MixingMatrix, H, kappa, tau: float) -> FourierCoeffs:
    """Unmix branch samples and deconvolve the pulse spectrum.

    ``H`` is the diagonal of the pulse-spectrum matrix over the full kappa
    (as returned by ``build_H``).  Solves S phi = c in the least-squares
    sense, divides out H, and keeps the positive half (the negative half is
    conjugate-redundant for a real line).
    """
    c = np.asarray(c, dtype=complex)
    kappa = np.asarray(kappa)
    K = len(kappa) // 2
    phi, _, rank, _ = np.linalg.lstsq(S.entries, c, rcond=None)
    if rank < S.entries.shape[1]:
        raise RankDeficient(
            f"mixing matrix rank {rank} < {S.entries.shape[1]} columns"
        )
    y_full = phi / np.asarray(H)
    return FourierCoeffs(y=y_full[:K], kappa_pos=kappa[:K], tau=tau,
                         phi=phi[:K])


def _hankel(u: np.ndarray, eta: int) -> np.ndarray:
    n = len(u)
    return np.array([u[i:i + eta + 1] for i in range(n - eta)])


def _delays_from_poles(z: np.ndarray, tau: float) -> np.ndarray:
    frac = (-np.angle(z) / (2.0 * np.pi)) % 1.0
    return np.sort(frac * tau)


def _check_pencil_parameter(eta: int, K: int, L_max: int) -> None:
    if not (L_max <= eta <= K - L_max):
        raise ValueError(
            f"pencil parameter eta={eta} outside [{L_max}, {K - L_max}]"
        )


def _default_eta(K: int, L_max: int) -> int:
    # K//3 balances the Hankel split, clamped into the feasible interval
    # (at the minimal K = 2*L_max the interval collapses to a point)
    return min(max(K // 3, L_max), K - L_max)


def matrix_pencil(coeffs: FourierCoeffs, eta: int | None = None,
                  sv_threshold: float = SV_THRESHOLD_DEFAULT,
                  L_max: int | None = None):
    """Delay estimation via the shifted-pencil eigenproblem.

    Builds the Hankel matrix of the coefficient sequence (split by ``eta``,
    default K//3 clamped into the feasible [L_max, K - L_max] interval),
    estimates the model order from the singular-value profile, and reads
    delays off the signal-subspace shift eigenvalues.

    Returns (delays ascending, full singular-value list).

    Raises ``OrderOverflow`` if more than ``L_max`` singular values clear the
    threshold, and ``ConditioningFailure`` if the eigen-solve fails.
    """
    u = np.asarray(coeffs.y, dtype=complex)
    K = len(u)
    if L_max is None:
        L_max = K // 2
    if eta is None:
        eta = _default_eta(K, L_max)
    _check_pencil_parameter(eta, K, L_max)

    Y = _hankel(u, eta)
    try:
        _, s, Vh = np.linalg.svd(Y)
    except np.linalg.LinAlgError as e:
        raise ConditioningFailure(f"SVD did not converge: {e}") from e
    if s[0] <= 0.0:
        return np.zeros(0), s
    order = int(np.sum(s / s[0] > sv_threshold))
    if order > L_max:
        raise OrderOverflow(
            f"{order} singular values above threshold, bound is {L_max}"
        )
    if order == 0:
        return np.zeros(0), s

    # Right singular vectors conjugated span the Vandermonde row space; the
    # one-step shift between their leading/trailing rows carries the poles.
    W = Vh[:order].T
    try:
        z = np.linalg.eigvals(np.linalg.pinv(W[:-1]) @ W[1:])
    except np.linalg.LinAlgError as e:
        raise ConditioningFailure(f"pencil eigen-solve failed: {e}") from e
    return _delays_from_poles(z, coeffs.tau), s


def annihilating_filter(coeffs: FourierCoeffs, L_est: int) -> np.ndarray:
    """Delay estimation via the annihilating (Prony) filter.

    Solves the Toeplitz system for the length-``L_est`` filter whose zeros
    sit on the coefficient poles, then maps root phases to delays.  Needs
    K >= 2 * L_est coefficients.
    """
    u = np.asarray(coeffs.y, dtype=complex)
    K = len(u)
    if L_est < 1:
        raise ValueError("L_est must be >= 1")
    if K < 2 * L_est:
        raise ValueError(f"need K >= 2*L_est, got K={K}, L_est={L_est}")
    rows = K - L_est
    T = np.array([[u[L_est - 1 + r - c] for c in range(L_est)]
                  for r in range(rows)])
    rhs = -u[L_est:]
    coef, _, rank, _ = np.linalg.lstsq(T, rhs, rcond=None)
    if rank < L_est:
        raise SingularSystem(
            f"annihilation system rank {rank} < {L_est}"
        )
    z = np.roots(np.concatenate([[1.0], coef]))
    return _delays_from_poles(z, coeffs.tau)


def least_squares_amplitudes(coeffs: FourierCoeffs, delays) -> np.ndarray:
    """Amplitudes fitting y = V(t) a for the given delays, in y units.

    V has entries exp(-2j pi k t_l / tau) over the actual harmonic indices.
    Returns the real parts; a warning is emitted when the imaginary residue
    exceeds 1e-3 of the real scale (a symptom of mismatched delays).
    """
    delays = np.asarray(delays, dtype=float)
    if delays.size == 0:
        return np.zeros(0)
    if len(set(delays.tolist())) != delays.size:
        raise ValueError("delays must be distinct")
    if delays.size > len(coeffs.y):
        raise ValueError("more delays than coefficients")
    V = np.exp((-2j * np.pi / coeffs.tau) * np.outer(coeffs.kappa_pos, delays))
    if np.linalg.cond(V) > _COND_LIMIT:
        raise IllConditioned(
            f"amplitude system condition exceeds {_COND_LIMIT:g} "
            "(near-coincident delays)"
        )
    a, _, _, _ = np.linalg.lstsq(V, coeffs.y, rcond=None)
    real_scale = max(np.max(np.abs(a.real)), np.finfo(float).tiny)
    if np.max(np.abs(a.imag)) / real_scale > 1e-3:
        warnings.warn("amplitude solution has significant imaginary residue",
                      RuntimeWarning, stacklevel=2)
    return a.real


def recover_line(c, cfg: XampleConfig, pulse: PulseModel,
                 method: str = "pencil", eta: int | None = None,
                 sv_threshold: float = SV_THRESHOLD_DEFAULT,
                 S: MixingMatrix | None = None) -> LineEstimate:
    """Full per-line chain: unmix, estimate delays, fit amplitudes.

    Amplitudes are rescaled by tau so they are in the units of the pulse
    stream itself (the 1/tau of the Fourier-coefficient convention divides
    out), matching what a direct fit of the beamformed line would give.
    """
    if method not in ("pencil", "annihilating"):
        raise ValueError(f"unknown method {method!r}")
    if S is None:
        S = build_S(cfg.p)
    H = build_H(pulse, cfg.kappa, cfg.tau)
    coeffs = recover_fourier(c, S, H, cfg.kappa, cfg.tau)

    if method == "pencil":
        delays, sv = matrix_pencil(coeffs, eta=eta, sv_threshold=sv_threshold,
                                   L_max=cfg.L)
    else:
        # share the pencil's SVD-based order estimate, then hand the count to
        # the annihilating filter
        u = coeffs.y
        K = len(u)
        eta_eff = _default_eta(K, cfg.L) if eta is None else eta
        _check_pencil_parameter(eta_eff, K, cfg.L)
        _, sv, _ = np.linalg.svd(_hankel(u, eta_eff))
        order = int(np.sum(sv / sv[0] > sv_threshold)) if sv[0] > 0 else 0
        if order > cfg.L:
            raise OrderOverflow(
                f"{order} singular values above threshold, bound is {cfg.L}"
            )
        delays = (annihilating_filter(coeffs, order) if order > 0
                  else np.zeros(0))

    if delays.size == 0:
        norm = np.linalg.norm(coeffs.y)
        residual = 0.0 if norm == 0 else 1.0
        return LineEstimate(delays=np.zeros(0), amplitudes=np.zeros(0),
                            model_order=0, singular_values=sv,
                            residual=residual)

    amps = least_squares_amplitudes(coeffs, delays)
    V = np.exp((-2j * np.pi / cfg.tau) * np.outer(coeffs.kappa_pos, delays))
    residual = float(np.linalg.norm(coeffs.y - V @ amps)
                     / np.linalg.norm(coeffs.y))
    return LineEstimate(delays=delays, amplitudes=amps * cfg.tau,
                        model_order=delays.size, singular_values=sv,
                        residual=residual)
