"""Internal spectral primitives: centered DFTs, band-limited upsampling,
exact shear/rotation resamplings of periodic fields.

Conventions.  The "centered" transform pair used throughout maps an
array indexed by j' = j - n/2 to one indexed by l' = l - n/2:

    F[l] = sum_j  a[j] exp(-2i*pi*(l - n/2)*(j - n/2)/n)

so that physically centered axes (x' = (j - n/2)*dx, p = (l - n/2)*dp)
transform into each other without explicit phase ramps.
"""

import numpy as np

__all__ = [
    "centered_fft", "centered_ifft", "upsample2",
    "shear_x", "shear_p", "rotate_field", "reflect_field",
]


def centered_fft(a: np.ndarray, axis: int = -1) -> np.ndarray:
    return np.fft.fftshift(
        np.fft.fft(np.fft.ifftshift(a, axes=axis), axis=axis), axes=axis)


def centered_ifft(a: np.ndarray, axis: int = -1) -> np.ndarray:
    return np.fft.fftshift(
        np.fft.ifft(np.fft.ifftshift(a, axes=axis), axis=axis), axes=axis)


def upsample2(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """Trigonometric interpolation onto a lattice of doubled resolution.

    Zero-pads the spectrum; the Nyquist bin is split evenly between
    +/- Nyquist so real inputs stay real. Exact for band-limited data.
    """
    a = np.asarray(a)
    n = a.shape[axis]
    if n % 2:
        raise ValueError("upsample2 requires an even sample count")
    spec = np.fft.fft(a, axis=axis)
    shape = list(a.shape)
    shape[axis] = 2 * n
    padded = np.zeros(shape, dtype=complex)

    def sl(start, stop):
        idx = [slice(None)] * a.ndim
        idx[axis] = slice(start, stop)
        return tuple(idx)

    half = n // 2
    padded[sl(0, half)] = spec[sl(0, half)]
    padded[sl(2 * n - half + 1, 2 * n)] = spec[sl(half + 1, n)]
    # split the Nyquist bin
    padded[sl(half, half + 1)] = 0.5 * spec[sl(half, half + 1)]
    padded[sl(2 * n - half, 2 * n - half + 1)] = 0.5 * spec[sl(half, half + 1)]
    return 2.0 * np.fft.ifft(padded, axis=axis)


def _axis_freqs(n: int, d: float) -> np.ndarray:
    return 2.0 * np.pi * np.fft.fftfreq(n, d=d)


def shear_x(field: np.ndarray, a: float, dx: float, p: np.ndarray) -> np.ndarray:
    """Exact periodic resampling g(x, p) = f(x + a*p, p).

    field is indexed (x, p); the shift of each p-row is a spectral
    translation, exact for the periodic band-limited field.
    """
    n = field.shape[0]
    kx = _axis_freqs(n, dx)
    phase = np.exp(1j * np.outer(kx, a * p))
    out = np.fft.ifft(phase * np.fft.fft(field, axis=0), axis=0)
    if np.isrealobj(field):
        return out.real
    return out


def shear_p(field: np.ndarray, b: float, dp: float, x: np.ndarray) -> np.ndarray:
    """Exact periodic resampling g(x, p) = f(x, p + b*x)."""
    n = field.shape[1]
    kp = _axis_freqs(n, dp)
    phase = np.exp(1j * np.outer(b * x, kp))
    out = np.fft.ifft(phase * np.fft.fft(field, axis=1), axis=1)
    if np.isrealobj(field):
        return out.real
    return out


def reflect_field(field: np.ndarray) -> np.ndarray:
    """Point reflection (x, p) -> (-x, -p) on centered periodic axes."""
    n0, n1 = field.shape
    i = (-np.arange(n0)) % n0
    j = (-np.arange(n1)) % n1
    return field[np.ix_(i, j)]


def rotate_field(field: np.ndarray, theta: float, dx: float, dp: float,
                 x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Spectral three-shear rotation of a phase-space field.

    Returns g with g(x, p) = f(x cos(t) + p sin(t), -x sin(t) + p cos(t)).
    Angles are folded into [-pi/2, pi/2] via a point reflection so the
    shear factors stay bounded (|tan(theta/2)| <= 1). Requires axes
    centered on zero.
    """
    theta = float(theta)
    # fold to the principal range
    while theta > np.pi / 2 + 1e-12:
        field = reflect_field(field)
        theta -= np.pi
    while theta < -np.pi / 2 - 1e-12:
        field = reflect_field(field)
        theta += np.pi
    if abs(theta) < 1e-15:
        return field.copy()
    a = np.tan(0.5 * theta)
    s = np.sin(theta)
    out = shear_x(field, a, dx, p)
    out = shear_p(out, -s, dp, x)
    out = shear_x(out, a, dx, p)
    return out
