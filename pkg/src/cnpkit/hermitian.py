"""Dense Hermitian linear algebra primitives.

Inertia, PSD tests with witnesses, Hadamard (entrywise) products, Schur
complements, entrywise reciprocals, and rank-revealing Gram factorization.

Eigenvalue classification is relative to ``max(1, spectral radius)`` so that
matrices at very different scales (unit-disk Grams next to hyperbolic-cosine
Grams) are treated uniformly. All operations are pure functions of immutable
inputs and may run concurrently.

Conjugation convention, fixed kit-wide: a Gram matrix stores
``K[i, j] = k(x_i, x_j)`` with ``K[j, i] = conj(K[i, j])``, and factor
vectors satisfy ``<f_i, f_j> = K[i, j]`` for the inner product that is
conjugate-linear in its second slot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPsdError, ReducibleKernelError, SingularBlockError

__all__ = [
    "HermitianMatrix",
    "Inertia",
    "Tolerances",
    "PsdReport",
    "DEFAULT_TOL",
    "as_hermitian",
    "inertia",
    "is_psd",
    "hadamard",
    "schur_complement",
    "reciprocal_entrywise",
    "gram_factor",
]

#: Allowed relative asymmetry of raw input before construction refuses it.
CONSTRUCTION_TOL = 1e-12


class HermitianMatrix:
    """Square complex matrix with conjugate symmetry enforced at construction.

    The raw input may carry floating-point asymmetry up to ``CONSTRUCTION_TOL``
    relative to its magnitude; it is symmetrized as ``(A + A*) / 2`` and the
    observed asymmetry is recorded in ``defect``.
    """

    __slots__ = ("a", "defect")

    def __init__(self, entries, *, construction_tol: float = CONSTRUCTION_TOL):
        a = np.array(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValueError("matrix dimension must be >= 1")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        defect = float(np.max(np.abs(a - a.conj().T)))
        scale = max(1.0, float(np.max(np.abs(a))))
        if defect > construction_tol * scale:
            raise ValueError(
                f"matrix is not Hermitian: asymmetry {defect:.3e} exceeds "
                f"{construction_tol:g} * max(1, |A|) = {construction_tol * scale:.3e}"
            )
        sym = (a + a.conj().T) / 2.0
        sym.setflags(write=False)
        self.a = sym
        self.defect = defect

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"HermitianMatrix(dim={self.dim}, defect={self.defect:.2e})"


def as_hermitian(x) -> HermitianMatrix:
    """Coerce an array-like (or pass through a ``HermitianMatrix``)."""
    if isinstance(x, HermitianMatrix):
        return x
    return HermitianMatrix(x)


def _symmetrized(a: np.ndarray) -> HermitianMatrix:
    """Wrap an internally computed matrix, discarding floating-point skew."""
    return HermitianMatrix((a + a.conj().T) / 2.0, construction_tol=np.inf)


@dataclass(frozen=True)
class Inertia:
    """Eigenvalue sign counts (n_pos, n_zero, n_neg)."""

    n_pos: int
    n_zero: int
    n_neg: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_pos, self.n_zero, self.n_neg)

    def __add__(self, other: "Inertia") -> "Inertia":
        return Inertia(
            self.n_pos + other.n_pos,
            self.n_zero + other.n_zero,
            self.n_neg + other.n_neg,
        )


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used throughout the kit.

    ``zero_eig_rel``: an eigenvalue counts as zero when its magnitude is at
    most ``zero_eig_rel * max(1, spectral radius)``.
    ``psd_slack_rel``: a matrix passes the PSD test when its minimum
    eigenvalue is at least ``-psd_slack_rel * max(1, spectral radius)``.
    ``kernel_zero_abs``: a Gram entry counts as zero when its modulus, after
    normalizing the matrix by its largest modulus entry, is at most this.
    """

    zero_eig_rel: float = 1e-9
    psd_slack_rel: float = 1e-9
    kernel_zero_abs: float = 1e-12

    def __post_init__(self):
        for name in ("zero_eig_rel", "psd_slack_rel", "kernel_zero_abs"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = Tolerances()


def _spectral_scale(w: np.ndarray) -> float:
    if w.size == 0:
        return 1.0
    return max(1.0, float(np.max(np.abs(w))))


def inertia(A, tol: Tolerances = DEFAULT_TOL) -> Inertia:
    """Count eigenvalues of ``A`` by sign.

    An eigenvalue is classified as zero when its magnitude is at most
    ``tol.zero_eig_rel * max(1, spectral radius)``.
    """
    h = as_hermitian(A)
    w = np.linalg.eigvalsh(h.a)
    thr = tol.zero_eig_rel * _spectral_scale(w)
    n_pos = int(np.sum(w > thr))
    n_neg = int(np.sum(w < -thr))
    return Inertia(n_pos, h.dim - n_pos - n_neg, n_neg)


@dataclass(frozen=True)
class PsdReport:
    """PSD verdict with a checkable witness (the extremal eigenpair)."""

    ok: bool
    min_eigenvalue: float
    eigenvector: np.ndarray
    threshold: float


def is_psd(A, tol: Tolerances = DEFAULT_TOL) -> PsdReport:
    """Test positive semidefiniteness within tolerance.

    True iff the minimum eigenvalue is at least
    ``-tol.psd_slack_rel * max(1, spectral radius)``. The witness carries the
    minimum eigenvalue and its eigenvector.
    """
    h = as_hermitian(A)
    w, v = np.linalg.eigh(h.a)
    thr = tol.psd_slack_rel * _spectral_scale(w)
    return PsdReport(
        ok=bool(w[0] >= -thr),
        min_eigenvalue=float(w[0]),
        eigenvector=v[:, 0].copy(),
        threshold=thr,
    )


def hadamard(A, B) -> HermitianMatrix:
    """Entrywise (Schur) product of two Hermitian matrices of equal size."""
    ha, hb = as_hermitian(A), as_hermitian(B)
    if ha.dim != hb.dim:
        raise ValueError(f"dimension mismatch: {ha.dim} vs {hb.dim}")
    return HermitianMatrix(ha.a * hb.a)


def schur_complement(A, tail_size: int, tol: Tolerances = DEFAULT_TOL) -> HermitianMatrix:
    """Schur complement of the trailing ``tail_size`` block.

    For ``A = [[H, B], [B*, C]]`` with ``C`` the trailing block, returns
    ``H - B C^{-1} B*``. ``A`` is congruent to ``diag(complement, C)``, so
    inertia decomposes as ``inertia(A) = inertia(complement) + inertia(C)``.
    """
    h = as_hermitian(A)
    n = h.dim
    if not 1 <= tail_size < n:
        raise ValueError(f"tail_size must be in [1, {n - 1}], got {tail_size}")
    head = n - tail_size
    C = h.a[head:, head:]
    wc = np.linalg.eigvalsh(C)
    w_all = np.linalg.eigvalsh(h.a)
    if np.min(np.abs(wc)) <= tol.zero_eig_rel * _spectral_scale(w_all):
        raise SingularBlockError(
            f"trailing {tail_size}x{tail_size} block is numerically singular "
            f"(|eigenvalue| {np.min(np.abs(wc)):.3e})"
        )
    B = h.a[:head, head:]
    comp = h.a[:head, :head] - B @ np.linalg.solve(C, B.conj().T)
    return _symmetrized(comp)


def reciprocal_entrywise(A, tol: Tolerances = DEFAULT_TOL) -> HermitianMatrix:
    """Entrywise reciprocal; Hermitian by conjugate symmetry of the input.

    Every entry must have modulus above ``tol.kernel_zero_abs``. A zero entry
    signals a reducible kernel: partition the sample first
    (``kernels.irreducible_partition``) and take reciprocals per block.
    """
    h = as_hermitian(A)
    small = np.abs(h.a) <= tol.kernel_zero_abs
    if np.any(small):
        i, j = map(int, np.argwhere(small)[0])
        raise ReducibleKernelError(
            f"entry ({i}, {j}) is zero within tolerance; the kernel is "
            "reducible - partition into irreducible blocks first",
            index=(i, j),
        )
    return HermitianMatrix(1.0 / h.a)


def gram_factor(A, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, int]:
    """Factor a PSD matrix as inner products of ``m``-dimensional vectors.

    Returns ``(coords, m)`` where ``coords`` has shape ``(n, m)``, row ``i``
    is the vector ``f_i``, and ``sum_l coords[i, l] * conj(coords[j, l])``
    reproduces ``A[i, j]``. The rank ``m`` is the number of eigenvalues above
    the zero threshold; eigenvectors are truncated accordingly.

    The factor is canonicalized for determinism: eigenvalues sorted
    descending, and each eigenvector's phase fixed so its first
    significantly nonzero component is real positive.
    """
    h = as_hermitian(A)
    w, v = np.linalg.eigh(h.a)
    scale = _spectral_scale(w)
    if w[0] < -tol.psd_slack_rel * scale:
        raise NotPsdError(
            f"matrix is not PSD: min eigenvalue {w[0]:.6e} below "
            f"-{tol.psd_slack_rel:g} * max(1, spectral radius)",
            min_eigenvalue=float(w[0]),
        )
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    keep = w > tol.zero_eig_rel * scale
    w, v = w[keep], v[:, keep]
    for col in range(v.shape[1]):
        nz = np.flatnonzero(np.abs(v[:, col]) > 1e-8)
        if nz.size:
            pivot = v[nz[0], col]
            v[:, col] *= np.conj(pivot) / abs(pivot)
    coords = v * np.sqrt(w)[np.newaxis, :]
    return coords, coords.shape[1]
