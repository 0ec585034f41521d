"""B-mode style rendering: parameter streams to traces to 8-bit images."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllZero, InvariantViolation, ParseError
from .pulse import PulseModel
from .recover import LineEstimate

DEFAULT_DYNAMIC_RANGE_DB = 50.0
DEFAULT_NUM_LINES = 113


@dataclass
class ImageGrid:
    axial_step: float
    dynamic_range_db: float
    pixels: np.ndarray  # (axial_samples, num_lines) uint8

    @property
    def num_lines(self) -> int:
        return self.pixels.shape[1]

    @property
    def axial_samples(self) -> int:
        return self.pixels.shape[0]


def render_line(est: LineEstimate, pulse: PulseModel, axial_grid) -> np.ndarray:
    """Convolve the recovered pulse stream with the pulse envelope.

    The stream is already demodulated (delays + amplitudes), so the trace is
    sum_l |b_l| * env(t - t_l) with env the pulse's Gaussian window.
    """
    axial_grid = np.asarray(axial_grid, dtype=float)
    trace = np.zeros(len(axial_grid))
    sig = pulse.envelope_sigma
    for t_l, b_l in zip(est.delays, est.amplitudes):
        trace += abs(b_l) * pulse.amplitude * np.exp(
            -((axial_grid - t_l) ** 2) / (2.0 * sig**2)
        )
    return trace


def assemble_image(lines, dynamic_range_db: float = DEFAULT_DYNAMIC_RANGE_DB,
                   axial_step: float = 50e-9) -> ImageGrid:
    """Log-compress traces into an 8-bit image, lines as columns.

    pixel = clamp(255 * (1 + 20 log10(v / v_max) / DR), 0, 255), with zeros
    mapping to zero.  Normalization is by the global maximum, so scaling all
    traces together leaves the image bit-identical.
    """
    try:
        traces = np.asarray(lines, dtype=float)
    except ValueError as e:
        raise InvariantViolation(f"traces must share one length: {e}") from e
    if traces.ndim != 2:
        raise InvariantViolation("traces must share one length")
    v_max = traces.max()
    if v_max <= 0.0:
        raise AllZero("all traces are zero; nothing to normalize")
    pixels = np.zeros(traces.shape)
    pos = traces > 0
    with np.errstate(divide="ignore"):
        pixels[pos] = 255.0 * (
            1.0 + 20.0 * np.log10(traces[pos] / v_max) / dynamic_range_db
        )
    pixels = np.clip(np.rint(pixels), 0, 255).astype(np.uint8)
    return ImageGrid(axial_step=axial_step, dynamic_range_db=dynamic_range_db,
                     pixels=pixels.T)


def write_pgm(path, image: ImageGrid) -> None:
    """Binary PGM (P5), width = lines, height = axial samples."""
    h, w = image.pixels.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(image.pixels.tobytes())


def read_pgm(path) -> np.ndarray:
    """Read back a P5 image written by ``write_pgm``."""
    with open(path, "rb") as f:
        data = f.read()
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P5":
        raise ParseError(f"{path}: not a binary PGM")
    w, h = (int(v) for v in parts[1].split())
    pixels = np.frombuffer(parts[3][: w * h], dtype=np.uint8)
    if pixels.size != w * h:
        raise ParseError(f"{path}: truncated PGM body")
    return pixels.reshape(h, w)
