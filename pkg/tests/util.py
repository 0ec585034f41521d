"""Shared builders and independent oracles for the test suite."""

import numpy as np

from xampus import (ArrayGeometry, PulseModel, Scatterer, Scene,
                    simulation_grid_step, synthesize_channels)

PULSE = PulseModel(carrier_hz=5.142e6, envelope_sigma=1e-7, amplitude=1.0)
SPEED = 1540.0


def default_geometry(num_elements=16, pitch=0.3e-3):
    return ArrayGeometry(num_elements=num_elements, pitch=pitch,
                         speed_of_sound=SPEED)


def random_scene(rng, l_true, tau, margin=4e-6, min_sep=2e-6,
                 refl_range=(0.5, 2.0)):
    """Scene with l_true scatterers whose round trips stay inside the window
    with the given margin and pairwise separation (in round-trip time)."""
    while True:
        trip = np.sort(rng.uniform(margin, tau - margin, l_true))
        if l_true <= 1 or np.min(np.diff(trip)) >= min_sep:
            break
    refl = rng.uniform(*refl_range, l_true)
    scatterers = tuple(Scatterer(axial_time=t / 2.0, reflectivity=r)
                       for t, r in zip(trip, refl))
    return Scene(scatterers=scatterers, tau=tau), trip, refl


def synthesize(scene, geometry, oversample=16, pulse=PULSE):
    return synthesize_channels(scene, geometry, pulse,
                               simulation_grid_step(oversample))


def numeric_ctft(pulse, omega, step=None, span_sigmas=8.0):
    """Dense-grid Fourier integral of the pulse, the spectrum oracle."""
    if step is None:
        step = 1.0 / (64.0 * pulse.carrier_hz)
    half = span_sigmas * pulse.envelope_sigma
    t = np.arange(-half, half + step / 2, step)
    h = pulse.amplitude * np.exp(-t**2 / (2 * pulse.envelope_sigma**2)) \
        * np.cos(2 * np.pi * pulse.carrier_hz * t)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    return np.array([np.trapezoid(h * np.exp(-1j * w * t), t) for w in omega])


def line_fourier_coeffs(line, k_indices, tau):
    """Direct Fourier coefficients of the tau-periodic line extension:
    (1/tau) * integral over [0, tau] of line(t) exp(-2j pi k t / tau)."""
    n = int(round(tau / line.grid_step))
    t = np.arange(n + 1) * line.grid_step
    v = line.samples[: n + 1]
    out = np.empty(len(k_indices), dtype=complex)
    for i, k in enumerate(k_indices):
        out[i] = np.trapezoid(v * np.exp(-2j * np.pi * k * t / tau), t) / tau
    return out


def cisoid_coeffs(k_indices, tau, delays, amps):
    """Exact y-vector for a known pulse stream: sum_l a_l e^{-2j pi k t_l/tau}."""
    return np.exp((-2j * np.pi / tau) * np.outer(np.asarray(k_indices),
                                                 np.asarray(delays))) \
        @ np.asarray(amps, dtype=complex)
