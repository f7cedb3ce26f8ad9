"""Kernel catalog, sample Grams, normalization, and the irreducibility partition.

Catalog variants and their domains:

====================  ==========================================  ==================
variant               formula                                     domain
====================  ==========================================  ==================
``Szego``             ``1 / (1 - conj(x) y)``                     ``|z| < 1``
``Bergman``           ``1 / (1 - conj(x) y)^2``                   ``|z| < 1``
``Dirichlet``         ``sum_{p>=0} (conj(x) y)^p / (p + 1)``      ``|z| < 1``
``Sobolev``           ``cosh(min) cosh(1 - max) / sinh(1)``       ``t in [0, 1]``
``Ball(m)``           ``1 / (1 - <x, y>)`` on ``l^2_m``           ``|x| < 1``
``ExplicitGram``      stored matrix, points are row indices       n/a
====================  ==========================================  ==================

``Ball(1)`` coincides entrywise with ``Szego``. ``Bergman`` is a catalog
addition used as a negative control in certification tests.

The ``Sobolev`` entry is the reproducing kernel of the space of functions on
``[0, 1]`` with ``int |g|^2 + |g'|^2 < inf``. It is derived here from the
boundary-value problem ``k - k'' = delta_s``, ``k'(0) = k'(1) = 0`` (printed
formulas for this kernel in the literature are not all mutually consistent,
so the kit derives its own and unit-tests the reproducing property against
numerical quadrature).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ReducibleKernelError
from .hermitian import DEFAULT_TOL, HermitianMatrix, Tolerances, as_hermitian

__all__ = [
    "Kernel",
    "Szego",
    "Bergman",
    "Dirichlet",
    "Sobolev",
    "Ball",
    "ExplicitGram",
    "SampleSet",
    "Partition",
    "kernel_from_json",
    "gram",
    "normalize_at",
    "irreducible_partition",
]


class Kernel:
    """Base class of catalog kernels. Subclasses are immutable value objects."""

    name = "abstract"

    def coerce_point(self, p):
        """Validate and normalize a raw point into this kernel's point type."""
        raise NotImplementedError

    def evaluate(self, x, y) -> complex:
        """Kernel value ``k(x, y)``; satisfies ``k(y, x) = conj(k(x, y))``."""
        raise NotImplementedError

    def gram_matrix(self, points) -> np.ndarray:
        return np.array(
            [[self.evaluate(x, y) for y in points] for x in points], dtype=complex
        )

    def to_json(self) -> dict:
        return {"type": self.name}

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


def _disk_point(p, kernel_name: str) -> complex:
    z = complex(p)
    if abs(z) >= 1.0:
        raise DomainError(f"{kernel_name} kernel needs |z| < 1, got |z| = {abs(z):.6g}")
    return z


class Szego(Kernel):
    """Hardy-space kernel of the unit disk, ``1 / (1 - conj(x) y)``."""

    name = "szego"

    def coerce_point(self, p) -> complex:
        return _disk_point(p, self.name)

    def evaluate(self, x, y) -> complex:
        return 1.0 / (1.0 - np.conj(x) * y)

    def gram_matrix(self, points) -> np.ndarray:
        z = np.asarray(points, dtype=complex)
        return 1.0 / (1.0 - np.outer(z.conj(), z))


class Bergman(Kernel):
    """Bergman kernel of the unit disk, ``1 / (1 - conj(x) y)^2``.

    Not a complete Nevanlinna-Pick kernel; kept as a negative control.
    """

    name = "bergman"

    def coerce_point(self, p) -> complex:
        return _disk_point(p, self.name)

    def evaluate(self, x, y) -> complex:
        return 1.0 / (1.0 - np.conj(x) * y) ** 2

    def gram_matrix(self, points) -> np.ndarray:
        z = np.asarray(points, dtype=complex)
        return 1.0 / (1.0 - np.outer(z.conj(), z)) ** 2


class Dirichlet(Kernel):
    """Dirichlet-space kernel, evaluated by truncated power series.

    The series ``sum (conj(x) y)^p / (p + 1)`` handles the removable
    singularity at 0 cleanly; the closed form ``-log(1 - w) / w`` is kept as
    a cross-check away from 0.
    """

    name = "dirichlet"

    def __init__(self, series_terms: int = 200):
        if series_terms < 1:
            raise ValueError("series_terms must be >= 1")
        self.series_terms = int(series_terms)

    def coerce_point(self, p) -> complex:
        return _disk_point(p, self.name)

    def _series(self, w):
        # Horner evaluation of sum_{p<N} w^p / (p+1), vectorized over w.
        acc = np.zeros_like(np.asarray(w, dtype=complex))
        for p in range(self.series_terms - 1, -1, -1):
            acc = acc * w + 1.0 / (p + 1)
        return acc

    def evaluate(self, x, y) -> complex:
        return complex(self._series(np.conj(x) * y))

    @staticmethod
    def closed_form(w: complex) -> complex:
        """``-log(1 - w) / w`` for ``w != 0``; cross-check only."""
        if w == 0:
            return 1.0 + 0j
        return -np.log(1.0 - w) / w

    def gram_matrix(self, points) -> np.ndarray:
        z = np.asarray(points, dtype=complex)
        return self._series(np.outer(z.conj(), z))

    def to_json(self) -> dict:
        return {"type": self.name, "series_terms": self.series_terms}

    def __repr__(self) -> str:
        return f"Dirichlet(series_terms={self.series_terms})"


class Sobolev(Kernel):
    """Reproducing kernel of first-order square-integrable functions on [0, 1].

    ``k(s, t) = cosh(min(s, t)) cosh(1 - max(s, t)) / sinh(1)``, the Green's
    function of ``k - k'' = delta`` with Neumann boundary conditions.
    """

    name = "sobolev"

    def coerce_point(self, p) -> float:
        t = complex(p)
        if abs(t.imag) > 0:
            raise DomainError(f"sobolev kernel needs a real point, got {p!r}")
        t = float(t.real)
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"sobolev kernel needs t in [0, 1], got {t:.6g}")
        return t

    def evaluate(self, x, y) -> complex:
        lo, hi = min(x, y), max(x, y)
        return complex(np.cosh(lo) * np.cosh(1.0 - hi) / np.sinh(1.0))

    def gram_matrix(self, points) -> np.ndarray:
        t = np.asarray(points, dtype=float)
        lo = np.minimum.outer(t, t)
        hi = np.maximum.outer(t, t)
        return (np.cosh(lo) * np.cosh(1.0 - hi) / np.sinh(1.0)).astype(complex)


class Ball(Kernel):
    """Unit-ball kernel ``1 / (1 - <x, y>)`` on m-dimensional Hilbert space.

    ``<x, y> = sum_l conj(x_l) y_l``, so ``Ball(1)`` is the ``Szego`` kernel.
    This is the universal target of ``embed.universal_embedding``.
    """

    name = "ball"

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("ball dimension m must be >= 1")
        self.m = int(m)

    def coerce_point(self, p) -> np.ndarray:
        x = np.atleast_1d(np.array(p, dtype=complex))
        if x.ndim != 1 or x.size != self.m:
            raise DomainError(f"ball({self.m}) point must have {self.m} coordinates")
        if np.linalg.norm(x) >= 1.0:
            raise DomainError(
                f"ball point must have norm < 1, got {np.linalg.norm(x):.6g}"
            )
        x.setflags(write=False)
        return x

    def evaluate(self, x, y) -> complex:
        return 1.0 / (1.0 - complex(np.sum(np.conj(x) * y)))

    def gram_matrix(self, points) -> np.ndarray:
        X = np.asarray(points, dtype=complex)
        return 1.0 / (1.0 - X.conj() @ X.T)

    def to_json(self) -> dict:
        return {"type": self.name, "m": self.m}

    def __repr__(self) -> str:
        return f"Ball(m={self.m})"


class ExplicitGram(Kernel):
    """Kernel given directly by a Hermitian Gram matrix; points are indices."""

    name = "gram"

    def __init__(self, matrix, labels=None):
        self.matrix = as_hermitian(matrix)
        n = self.matrix.dim
        self.labels = tuple(str(x) for x in labels) if labels is not None else tuple(
            str(i) for i in range(n)
        )
        if len(self.labels) != n:
            raise ValueError("labels length must match matrix dimension")

    def coerce_point(self, p) -> int:
        i = int(p)
        if not 0 <= i < self.matrix.dim:
            raise DomainError(f"gram index {i} out of range [0, {self.matrix.dim})")
        return i

    def evaluate(self, x, y) -> complex:
        return complex(self.matrix.a[x, y])

    def gram_matrix(self, points) -> np.ndarray:
        ix = np.asarray(points, dtype=int)
        return self.matrix.a[np.ix_(ix, ix)].copy()

    def to_json(self) -> dict:
        from .serialize import complex_matrix_to_json

        return {
            "type": self.name,
            "matrix": complex_matrix_to_json(self.matrix.a),
            "labels": list(self.labels),
        }

    def __repr__(self) -> str:
        return f"ExplicitGram(dim={self.matrix.dim})"


def kernel_from_json(doc: dict) -> Kernel:
    """Build a catalog kernel from its JSON description."""
    kind = doc.get("type")
    if kind == "szego":
        return Szego()
    if kind == "bergman":
        return Bergman()
    if kind == "dirichlet":
        return Dirichlet(series_terms=int(doc.get("series_terms", 200)))
    if kind == "sobolev":
        return Sobolev()
    if kind == "ball":
        if "m" not in doc:
            raise DomainError("ball kernel JSON needs field 'm'")
        return Ball(m=int(doc["m"]))
    if kind == "gram":
        from .serialize import complex_matrix_from_json

        return ExplicitGram(
            complex_matrix_from_json(doc["matrix"]), labels=doc.get("labels")
        )
    raise DomainError(f"unknown kernel type {kind!r}")


@dataclass(frozen=True)
class SampleSet:
    """A kernel together with distinct in-domain points and the cached Gram."""

    kernel: Kernel
    points: tuple
    gram: HermitianMatrix

    @property
    def n(self) -> int:
        return len(self.points)

    def point_labels(self) -> tuple[str, ...]:
        if isinstance(self.kernel, ExplicitGram):
            return tuple(self.kernel.labels[i] for i in self.points)
        return tuple(_fmt_point(p) for p in self.points)


def _fmt_point(p) -> str:
    if isinstance(p, np.ndarray):
        return "(" + ", ".join(_fmt_point(c) for c in p) + ")"
    z = complex(p)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _points_equal(p, q) -> bool:
    if isinstance(p, np.ndarray) or isinstance(q, np.ndarray):
        return np.array_equal(np.asarray(p), np.asarray(q))
    return p == q


def gram(kernel: Kernel, points, tol: Tolerances = DEFAULT_TOL) -> SampleSet:
    """Assemble and validate the Gram matrix of ``kernel`` on ``points``.

    Points must be pairwise distinct and in the kernel's domain, and the Gram
    must be positive (semi)definite within tolerance: a minimum eigenvalue
    below ``-psd_slack_rel * max(1, spectral radius)`` is rejected.
    """
    pts = [kernel.coerce_point(p) for p in points]
    if not pts:
        raise DomainError("a sample needs at least one point")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if _points_equal(pts[i], pts[j]):
                raise DomainError(f"duplicate points at positions {i} and {j}")
    K = kernel.gram_matrix(pts)
    h = as_hermitian(K)
    w = np.linalg.eigvalsh(h.a)
    floor = -tol.psd_slack_rel * max(1.0, float(np.max(np.abs(w))))
    if w[0] < floor:
        raise DomainError(
            f"Gram matrix is not positive definite within tolerance: "
            f"min eigenvalue {w[0]:.6e} < {floor:.3e}"
        )
    return SampleSet(kernel=kernel, points=tuple(pts), gram=h)


def normalize_at(sample: SampleSet, base: int) -> tuple[SampleSet, np.ndarray]:
    """Rescale the sample so the base row of the Gram is identically one.

    Returns ``(normalized_sample, delta)`` with
    ``gram'[i, j] = k_bb * gram[i, j] / (gram[i, b] * gram[b, j])`` and
    ``delta[j] = gram[b, j] / sqrt(k_bb)``, so that
    ``gram[i, j] = conj(delta[i]) * delta[j] * gram'[i, j]``.

    Rescaling by a nowhere-zero rank-one factor changes neither multipliers
    nor any certification verdict.
    """
    K = sample.gram.a
    n = sample.n
    if not 0 <= base < n:
        raise DomainError(f"base index {base} out of range [0, {n})")
    row = K[base, :]
    amax = float(np.max(np.abs(K))) or 1.0
    small = np.abs(row) <= DEFAULT_TOL.kernel_zero_abs * amax
    if np.any(small):
        j = int(np.flatnonzero(small)[0])
        raise ReducibleKernelError(
            f"gram({base}, {j}) is zero: the sample is reducible at the base row",
            index=(base, j),
        )
    k00 = float(K[base, base].real)
    delta = row / np.sqrt(k00)
    Kp = k00 * K / np.outer(row.conj(), row)
    normalized = SampleSet(
        kernel=ExplicitGram(Kp, labels=sample.point_labels()),
        points=tuple(range(n)),
        gram=as_hermitian(Kp),
    )
    return normalized, delta


@dataclass(frozen=True)
class Partition:
    """Zero-pattern partition of sample indices into irreducible blocks.

    ``blocks`` are the connected components of the graph whose edges are the
    nonzero Gram entries. For a Nevanlinna-Pick kernel the zero pattern is an
    equivalence, i.e. block-diagonal under permutation; ``consistent`` is
    False when some pair inside a component has a zero entry, which already
    refutes the Nevanlinna-Pick property of the kernel. ``violations`` lists
    such pairs.
    """

    blocks: tuple[tuple[int, ...], ...]
    consistent: bool
    violations: tuple[tuple[int, int], ...]


def _gram_array(sample_or_gram) -> np.ndarray:
    if isinstance(sample_or_gram, SampleSet):
        return sample_or_gram.gram.a
    return as_hermitian(sample_or_gram).a


def irreducible_partition(sample_or_gram, tol: Tolerances = DEFAULT_TOL) -> Partition:
    """Partition indices into blocks connected by nonzero Gram entries.

    Accepts a ``SampleSet`` or a raw Hermitian matrix (arbitrary Grams may
    violate the block structure; that is reported, never raised). An entry
    counts as zero when ``|K[i, j]| <= kernel_zero_abs * max|K|``.
    """
    K = _gram_array(sample_or_gram)
    n = K.shape[0]
    amax = float(np.max(np.abs(K))) or 1.0
    nonzero = np.abs(K) > tol.kernel_zero_abs * amax

    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if nonzero[i, j]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    blocks = tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=min))

    violations = []
    for block in blocks:
        for a in range(len(block)):
            for b in range(a + 1, len(block)):
                i, j = block[a], block[b]
                if not nonzero[i, j]:
                    violations.append((i, j))
    return Partition(
        blocks=blocks,
        consistent=not violations,
        violations=tuple(violations),
    )
