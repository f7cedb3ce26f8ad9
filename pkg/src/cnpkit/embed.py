"""Universal embedding of certified kernels into the unit-ball kernel.

Every kernel with the complete Nevanlinna-Pick property factors as

    k(x, y) = conj(delta(x)) * delta(y) / (1 - F(x, y))

with ``delta`` nowhere zero and ``F`` PSD with diagonal in ``[0, 1)``. A
Gram factorization of ``F`` then realizes the sample inside the unit ball of
``l^2_m``: with coordinates ``f(x)`` of the factor,

    k(x, y) = conj(delta(x)) * delta(y) / (1 - <f(x), f(y)>),

i.e. the kernel is a rescaled restriction of the ball kernel ``Ball(m)``.
``m`` here is the numerical rank of ``F`` on the sample (at the zero
threshold), which is at most ``n - 1``; it is a sample-scale stand-in for
the possibly infinite rank of the kernel itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hermitian import DEFAULT_TOL, HermitianMatrix, Tolerances, _symmetrized, gram_factor
from .kernels import SampleSet, _gram_array, normalize_at

__all__ = ["BallEmbedding", "f_form", "universal_embedding", "reconstruct"]


def f_form(sample_or_gram, base: int, tol: Tolerances = DEFAULT_TOL) -> HermitianMatrix:
    """Full n-by-n positive form ``1 - k_ib k_bj / (k_ij k_bb)``.

    Unlike ``certify.f_matrix`` this keeps the base row and column, which are
    identically zero. PSD for samples passing certification; a negative
    eigenvalue here is a refutation witness, reported by downstream
    consumers rather than raised.
    """
    from .certify import _check_irreducible

    K = _gram_array(sample_or_gram)
    n = K.shape[0]
    if not 0 <= base < n:
        raise DomainError(f"base index {base} out of range [0, {n})")
    _check_irreducible(K, tol)
    kbb = K[base, base].real
    F = 1.0 - np.outer(K[:, base], K[base, :]) / (K * kbb)
    F[base, :] = 0.0
    F[:, base] = 0.0
    return _symmetrized(F)


@dataclass(frozen=True)
class BallEmbedding:
    """Sample coordinates in the open unit ball of ``l^2_m`` plus scalings.

    ``gram[i, j] = conj(delta[i]) * delta[j] / (1 - <coords[i], coords[j]>)``
    with the kit-wide inner product (conjugate-linear in the second slot).
    All ``delta`` values are nonzero, all coordinates have norm strictly
    below one, and distinct sample points get distinct coordinates.
    """

    base: int
    delta: np.ndarray
    coords: np.ndarray
    m: int
    reconstruction_error: float
    tolerances: Tolerances


def universal_embedding(
    sample: SampleSet, base: int, tol: Tolerances = DEFAULT_TOL
) -> BallEmbedding:
    """Realize a certified sample as a rescaled piece of the ball kernel.

    ``delta`` comes from normalization at ``base``; coordinates come from the
    Gram factorization of ``f_form``. Raises ``NotPsdError`` when the form is
    not PSD (contradicting certification) and ``DomainError`` if a coordinate
    reaches the unit sphere beyond tolerance.
    """
    _, delta = normalize_at(sample, base)
    F = f_form(sample, base, tol)
    coords, m = gram_factor(F, tol)
    norms = np.linalg.norm(coords, axis=1)
    worst = float(np.max(norms)) if norms.size else 0.0
    if worst >= 1.0 + tol.psd_slack_rel:
        raise DomainError(
            f"embedded coordinate has norm {worst:.9f} >= 1; the diagonal of "
            "the positive form must stay inside [0, 1)"
        )
    embedding = BallEmbedding(
        base=base,
        delta=delta,
        coords=coords,
        m=m,
        reconstruction_error=0.0,
        tolerances=tol,
    )
    K = sample.gram.a
    err = float(
        np.max(np.abs(reconstruct(embedding).a - K)) / max(1.0, np.max(np.abs(K)))
    )
    return BallEmbedding(
        base=base,
        delta=delta,
        coords=coords,
        m=m,
        reconstruction_error=err,
        tolerances=tol,
    )


def reconstruct(e: BallEmbedding) -> HermitianMatrix:
    """Rebuild the Gram matrix encoded by an embedding.

    ``K[i, j] = conj(delta[i]) * delta[j] / (1 - sum_l coords[i, l] *
    conj(coords[j, l]))``. With ``m = 0`` the inner products vanish and the
    result is the rank-one matrix ``conj(delta_i) delta_j``.
    """
    S = e.coords @ e.coords.conj().T
    K = np.outer(e.delta.conj(), e.delta) / (1.0 - S)
    return _symmetrized(K)
