"""Complete Nevanlinna-Pick certification on finite samples.

The certificate matrices:

* ``f_matrix(sample, base)``: the (n-1)x(n-1) matrix over non-base indices
  with entries ``1 - k_ib k_bj / (k_ij k_bb)``. The kernel has the complete
  Nevanlinna-Pick property iff this is PSD for every finite subset and base.
* ``h_matrix(sample)``: the entrywise reciprocal of the Gram. Equivalently,
  the kernel has the property iff this has exactly one positive eigenvalue.
* ``m_matrix(sample, base)``: ``k_bb / (k_ib k_bj) - 1/k_ij`` over non-base
  indices; the Schur complement of the base entry of ``h_matrix`` equals
  ``-m_matrix``, which ties the two tests together by congruence.

``certify_cnp`` renders the verdict with machine-checkable witnesses. The
primary decision path is the H-inertia test, which needs no base-point
choice and, by eigenvalue interlacing, covers every subsample at once; the
F-matrix test for every base is run as a consistency cross-check whenever
the H test accepts.

A verdict is a statement about the sampled Gram, not about the kernel on its
whole domain: reports say "certified on this sample".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ReducibleKernelError
from .hermitian import (
    DEFAULT_TOL,
    HermitianMatrix,
    Inertia,
    Tolerances,
    _spectral_scale,
    _symmetrized,
    inertia,
)
from .kernels import Kernel, SampleSet, _gram_array, gram, irreducible_partition

__all__ = [
    "CnpCertificate",
    "f_matrix",
    "h_matrix",
    "m_matrix",
    "certify_cnp",
    "find_non_cnp_triple",
]


def _check_irreducible(K: np.ndarray, tol: Tolerances) -> None:
    amax = float(np.max(np.abs(K))) or 1.0
    small = np.abs(K) <= tol.kernel_zero_abs * amax
    if np.any(small):
        i, j = map(int, np.argwhere(small)[0])
        raise ReducibleKernelError(
            f"gram({i}, {j}) is zero within tolerance; split the sample with "
            "irreducible_partition and certify each block",
            index=(i, j),
        )


def f_matrix(sample_or_gram, base: int, tol: Tolerances = DEFAULT_TOL) -> HermitianMatrix:
    """Certificate matrix over the non-base indices.

    Entry ``(i, j)`` is ``1 - k_ib k_bj / (k_ij k_bb)`` where ``b`` is the
    base. Requires an irreducible sample with at least two points. Diagonal
    entries lie in ``[0, 1)`` by the Cauchy-Schwarz inequality.
    """
    K = _gram_array(sample_or_gram)
    n = K.shape[0]
    if n < 2:
        raise DomainError("f_matrix needs a sample with at least 2 points")
    if not 0 <= base < n:
        raise DomainError(f"base index {base} out of range [0, {n})")
    _check_irreducible(K, tol)
    idx = [i for i in range(n) if i != base]
    kbb = K[base, base].real
    F = 1.0 - np.outer(K[idx, base], K[base, idx]) / (K[np.ix_(idx, idx)] * kbb)
    return _symmetrized(F)


def h_matrix(sample_or_gram, tol: Tolerances = DEFAULT_TOL) -> HermitianMatrix:
    """Entrywise reciprocal of the Gram of an irreducible sample."""
    K = _gram_array(sample_or_gram)
    _check_irreducible(K, tol)
    return _symmetrized(1.0 / K)


def m_matrix(sample_or_gram, base: int, tol: Tolerances = DEFAULT_TOL) -> HermitianMatrix:
    """Rank-one-minus-reciprocal intermediate over the non-base indices.

    ``M[i, j] = k_bb / (k_ib k_bj) - 1 / k_ij``; equals the entrywise product
    of ``f_matrix`` with the nowhere-zero rank-one PSD matrix
    ``k_bb / (k_ib k_bj)``, so M is PSD exactly when F is. It is also the
    negated Schur complement of the base entry inside ``h_matrix``.
    """
    K = _gram_array(sample_or_gram)
    n = K.shape[0]
    if n < 2:
        raise DomainError("m_matrix needs a sample with at least 2 points")
    if not 0 <= base < n:
        raise DomainError(f"base index {base} out of range [0, {n})")
    _check_irreducible(K, tol)
    idx = [i for i in range(n) if i != base]
    kbb = K[base, base].real
    M = kbb / np.outer(K[idx, base], K[base, idx]) - 1.0 / K[np.ix_(idx, idx)]
    return _symmetrized(M)


@dataclass(frozen=True)
class CnpCertificate:
    """Verdict for the complete Nevanlinna-Pick property on one sample.

    ``method`` is ``"h_inertia"`` (primary, base-point free), ``"f_matrix"``
    (cross-check found the violation), or ``"zero_pattern"`` (the Gram's zero
    pattern is not block-diagonal, which refutes the property outright).
    When the verdict is False, ``witness`` carries enough data to reproduce
    the violation by re-evaluation.
    """

    verdict: bool
    method: str
    blocks: tuple[tuple[int, ...], ...]
    zero_pattern_consistent: bool
    block_inertias: tuple[Inertia, ...]
    f_min_eigs: tuple[tuple[int, float], ...]
    witness: dict
    tolerances: Tolerances


def certify_cnp(sample_or_gram, tol: Tolerances = DEFAULT_TOL) -> CnpCertificate:
    """Certify the complete Nevanlinna-Pick property of a sampled Gram.

    Reducible samples are split by the zero-pattern partition and certified
    per block; the verdict is the conjunction. An inconsistent zero pattern
    yields verdict False immediately. Accepts a ``SampleSet`` or a raw
    Hermitian Gram.
    """
    K = _gram_array(sample_or_gram)
    part = irreducible_partition(K, tol)

    if not part.consistent:
        i, j = part.violations[0]
        return CnpCertificate(
            verdict=False,
            method="zero_pattern",
            blocks=part.blocks,
            zero_pattern_consistent=False,
            block_inertias=(),
            f_min_eigs=(),
            witness={
                "kind": "zero_pattern",
                "pair": [i, j],
                "detail": (
                    f"gram({i}, {j}) = 0 while {i} and {j} are connected through "
                    "nonzero entries; the zero pattern of a Nevanlinna-Pick "
                    "kernel must be block-diagonal"
                ),
            },
            tolerances=tol,
        )

    block_inertias: list[Inertia] = []
    for block in part.blocks:
        ix = np.array(block)
        Kb = K[np.ix_(ix, ix)]
        H = _symmetrized(1.0 / Kb)
        w, v = np.linalg.eigh(H.a)
        thr = tol.zero_eig_rel * _spectral_scale(w)
        n_pos = int(np.sum(w > thr))
        n_neg = int(np.sum(w < -thr))
        ine = Inertia(n_pos, len(block) - n_pos - n_neg, n_neg)
        block_inertias.append(ine)
        if n_pos != 1:
            pos_ix = np.flatnonzero(w > thr)
            return CnpCertificate(
                verdict=False,
                method="h_inertia",
                blocks=part.blocks,
                zero_pattern_consistent=True,
                block_inertias=tuple(block_inertias),
                f_min_eigs=(),
                witness={
                    "kind": "h_inertia",
                    "block": list(block),
                    "inertia": ine.as_tuple(),
                    "positive_eigenvalues": w[pos_ix].tolist(),
                    "eigenvectors": v[:, pos_ix],
                },
                tolerances=tol,
            )

    # H accepted every block; cross-check the F test for every base index.
    f_min_eigs: list[tuple[int, float]] = []
    for block in part.blocks:
        if len(block) < 2:
            continue
        ix = np.array(block)
        Kb = K[np.ix_(ix, ix)]
        for local_base in range(len(block)):
            F = f_matrix(Kb, local_base, tol)
            w, v = np.linalg.eigh(F.a)
            f_min_eigs.append((int(block[local_base]), float(w[0])))
            if w[0] < -tol.psd_slack_rel * _spectral_scale(w):
                return CnpCertificate(
                    verdict=False,
                    method="f_matrix",
                    blocks=part.blocks,
                    zero_pattern_consistent=True,
                    block_inertias=tuple(block_inertias),
                    f_min_eigs=tuple(f_min_eigs),
                    witness={
                        "kind": "f_matrix",
                        "base": int(block[local_base]),
                        "block": list(block),
                        "min_eigenvalue": float(w[0]),
                        "eigenvector": v[:, 0],
                    },
                    tolerances=tol,
                )

    return CnpCertificate(
        verdict=True,
        method="h_inertia",
        blocks=part.blocks,
        zero_pattern_consistent=True,
        block_inertias=tuple(block_inertias),
        f_min_eigs=tuple(f_min_eigs),
        witness={
            "kind": "h_inertia",
            "block_inertias": [ine.as_tuple() for ine in block_inertias],
        },
        tolerances=tol,
    )


def find_non_cnp_triple(
    kernel: Kernel,
    *,
    seed: int,
    max_trials: int = 10_000,
    radius: float = 0.9,
    n_points: int = 3,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[complex, ...]:
    """Randomized search for a point tuple whose H-matrix refutes the cNP property.

    Samples tuples uniformly from the disk ``|z| <= radius`` with a fixed
    seed and returns the first whose reciprocal Gram has at least two
    positive eigenvalues. Raises ``RuntimeError`` if the budget is exhausted
    (expected for kernels that do have the property).
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_trials):
        r = radius * np.sqrt(rng.uniform(0.0, 1.0, n_points))
        th = rng.uniform(0.0, 2.0 * np.pi, n_points)
        z = r * np.exp(1j * th)
        if len({complex(c) for c in z}) < n_points:
            continue
        sample = gram(kernel, z, tol)
        ine = inertia(h_matrix(sample, tol), tol)
        if ine.n_pos >= 2:
            return tuple(complex(c) for c in z)
    raise RuntimeError(
        f"no refuting {n_points}-tuple found in {max_trials} trials; "
        "the kernel may have the complete Nevanlinna-Pick property"
    )
