"""Filter and image comparison metrics.

``compare_filters`` scores two filters modulo the transform family's
natural invariances (circular shift, sign, reversal); ``orientation_purity``
summarizes how directional a nonnegative magnitude image is.
"""

import numpy as np

from .errors import DegenerateInputError, InvalidArgumentError


def compare_filters(f, ref) -> float:
    """Shifted-cosine distance in [0, 1], zero iff equal up to the
    invariance group.

    The score is 1 - max over circular shifts s, sign sigma, and
    orientation rho in {identity, reversal} of
    sigma * <rho(shift(f, s)), ref> / (||f|| ||ref||). Filters of unequal
    length are zero-padded at the tail to the common length.
    """
    f = np.asarray(f, dtype=np.float64).ravel()
    ref = np.asarray(ref, dtype=np.float64).ravel()
    n = max(f.shape[0], ref.shape[0])
    if n == 0:
        raise DegenerateInputError("cannot compare empty filters")
    f = np.pad(f, (0, n - f.shape[0]))
    ref = np.pad(ref, (0, n - ref.shape[0]))
    nf = np.linalg.norm(f)
    nr = np.linalg.norm(ref)
    if nf == 0.0 or nr == 0.0:
        raise DegenerateInputError("distance undefined for a zero filter")
    best = 0.0
    for candidate in (f, f[::-1]):
        for s in range(n):
            dot = float(np.dot(np.roll(candidate, s), ref))
            best = max(best, abs(dot))
    return float(min(max(1.0 - best / (nf * nr), 0.0), 1.0))


def orientation_purity(m):
    """Dominant direction and anisotropy of a nonnegative image.

    Builds the structure matrix of the image: the sum over pixels of the
    outer product of the intensity gradient with itself. Purity is the
    eigenvalue contrast (lmax - lmin)/(lmax + lmin): 1 for a clean ridge or
    stripe pattern, near 0 for an isotropic blob, and ~0 for checkerboard
    patterns whose crossed gradients cancel. The dominant angle is the
    stripe direction (perpendicular to the dominant gradient), in [0, pi)
    measured from the column axis toward the row axis, so a horizontal
    ridge scores 0.

    Returns
    -------
    (angle, purity) : tuple of float
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise InvalidArgumentError("expected a 2D image, got shape %r"
                                   % (m.shape,))
    if (m < 0).any():
        raise InvalidArgumentError("image must be nonnegative")
    if m.sum() == 0.0:
        raise DegenerateInputError("purity undefined for an all-zero image")
    gi, gj = np.gradient(m)
    sii = float((gi * gi).sum())
    sjj = float((gj * gj).sum())
    sij = float((gi * gj).sum())
    if sii + sjj == 0.0:
        raise DegenerateInputError(
            "purity undefined for a constant image")
    evals, evecs = np.linalg.eigh(np.array([[sii, sij], [sij, sjj]]))
    purity = float((evals[1] - evals[0]) / (evals[1] + evals[0]))
    vi, vj = evecs[:, 0]  # minor axis: intensity varies least along stripes
    angle = float(np.arctan2(vi, vj) % np.pi)
    if angle >= np.pi:  # guard the wrap at exactly pi
        angle -= np.pi
    return angle, purity
