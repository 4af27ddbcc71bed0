"""Fusion rings: sector sets with integer fusion multiplicities.

A :class:`FusionRing` is the combinatorial skeleton of a rational sector
theory: an ordered list of sector labels (index 0 is the vacuum), a
conjugation involution and the multiplicity tensor ``N[s, t, u]`` counting
channels in ``s x t -> u``.  Construction only checks shapes; the axioms are
checked by :func:`validate_ring`, which returns a list of human-readable
violations (empty iff the ring is valid).
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import StructuralError

__all__ = [
    "FusionRing",
    "validate_ring",
    "fusion_matrix",
    "fp_dimensions",
    "global_dimension",
]

DEFAULT_TOL = 1e-9


class FusionRing:
    """Sector labels, conjugation and fusion multiplicities ``N[s, t, u]``.

    Immutable after construction; all derived quantities are cached.
    """

    def __init__(self, labels, dual, N):
        labels = tuple(str(x) for x in labels)
        n = len(labels)
        if n == 0:
            raise StructuralError("a fusion ring needs at least the vacuum sector")
        if len(set(labels)) != n:
            raise StructuralError("sector labels must be distinct")
        dual = tuple(int(d) for d in dual)
        if len(dual) != n or any(not 0 <= d < n for d in dual):
            raise StructuralError("dual must be a length-%d list of sector indices" % n)
        N = np.asarray(N)
        if N.shape != (n, n, n):
            raise StructuralError(
                f"N must have shape ({n}, {n}, {n}), got {N.shape}"
            )
        if not np.issubdtype(N.dtype, np.integer):
            rounded = np.rint(np.real(N)).astype(np.int64)
            if np.max(np.abs(N - rounded)) > 0:
                raise StructuralError("N entries must be integers")
            N = rounded
        N = N.astype(np.int64)
        N.setflags(write=False)
        self.labels = labels
        self.dual = dual
        self.N = N

    @property
    def size(self) -> int:
        return len(self.labels)

    def __eq__(self, other):
        return (
            isinstance(other, FusionRing)
            and self.labels == other.labels
            and self.dual == other.dual
            and np.array_equal(self.N, other.N)
        )

    def __hash__(self):
        return hash((self.labels, self.dual, self.N.tobytes()))

    def __repr__(self):
        return f"FusionRing({list(self.labels)})"

    def fusion_matrix(self, s: int) -> np.ndarray:
        """Matrix ``(N^s)[t, u] = N[s, t, u]``."""
        return self.N[s]

    def channels(self, s: int, t: int):
        """Sectors ``u`` with ``N[s, t, u] > 0``, in index order."""
        return [u for u in range(self.size) if self.N[s, t, u] > 0]

    @cached_property
    def fp_dims(self) -> np.ndarray:
        """Frobenius-Perron dimension of each sector."""
        return np.array(
            [max(np.abs(np.linalg.eigvals(self.N[s]))) for s in range(self.size)]
        )

    @cached_property
    def global_dim(self) -> float:
        return float(np.sum(self.fp_dims**2))


def validate_ring(ring: FusionRing, tol: float = DEFAULT_TOL) -> list[str]:
    """Check the fusion-ring axioms; return the list of violations (empty iff valid)."""
    n = ring.size
    N = ring.N
    dual = ring.dual
    bad: list[str] = []

    if np.any(N < 0):
        s, t, u = np.argwhere(N < 0)[0]
        bad.append(f"negative multiplicity N[{s},{t},{u}] = {N[s, t, u]}")

    # vacuum is a two-sided unit
    eye = np.eye(n, dtype=np.int64)
    if not np.array_equal(N[0], eye):
        bad.append("vacuum is not a left unit: N[0,t,u] != delta(t,u)")
    if not np.array_equal(N[:, 0, :], eye):
        bad.append("vacuum is not a right unit: N[s,0,u] != delta(s,u)")

    # conjugation structure
    if dual[0] != 0:
        bad.append("dual(0) != 0")
    for s in range(n):
        if dual[dual[s]] != s:
            bad.append(f"dual is not an involution at sector {s}")
            break
    for s in range(n):
        for t in range(n):
            want = 1 if t == dual[s] else 0
            if N[s, t, 0] != want:
                bad.append(
                    f"conjugation: N[{s},{t},0] = {N[s, t, 0]}, expected {want}"
                )

    # associativity: sum_e N[s,t,e] N[e,u,f] == sum_e N[t,u,e] N[s,e,f]
    left = np.einsum("ste,euf->stuf", N, N)
    right = np.einsum("tue,sef->stuf", N, N)
    if not np.array_equal(left, right):
        s, t, u, f = np.argwhere(left != right)[0]
        bad.append(
            f"associativity fails at (s,t,u,f)=({s},{t},{u},{f}): "
            f"{left[s, t, u, f]} != {right[s, t, u, f]}"
        )

    # Frobenius reciprocity: N[s,t,u] = N[dual(s),u,t] = N[u,dual(t),s]
    for s in range(n):
        for t in range(n):
            for u in range(n):
                if N[s, t, u] != N[dual[s], u, t] or N[s, t, u] != N[u, dual[t], s]:
                    bad.append(
                        f"Frobenius reciprocity fails at (s,t,u)=({s},{t},{u})"
                    )
                    return bad
    return bad


def fusion_matrix(ring: FusionRing, s: int) -> np.ndarray:
    return ring.fusion_matrix(s)


def fp_dimensions(ring: FusionRing, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Frobenius-Perron dimensions; checked to satisfy the dimension identity."""
    d = ring.fp_dims
    resid = np.max(np.abs(np.outer(d, d) - np.einsum("stu,u->st", ring.N, d)))
    if resid > max(tol, 1e3 * np.finfo(float).eps * ring.size):
        raise StructuralError(
            f"Frobenius-Perron dimensions inconsistent (residual {resid:.2e}); "
            "is the ring valid?"
        )
    return d


def global_dimension(ring: FusionRing) -> float:
    """Global dimension (mu-index) sum_s d_s^2."""
    fp_dimensions(ring)
    return ring.global_dim
