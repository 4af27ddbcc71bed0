"""Built-in category catalogs: Ising, Fibonacci and SU(2) level k.

Each generator returns a :class:`CategoryData` bundle (ring, modular data,
F/R presentation, central charge) that passes every validator in the
package.  The SU(2) data comes from the quantum Racah 6j symbols in the
unitary gauge; Ising and Fibonacci use the standard explicit tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .category import CategoryPresentation
from .errors import StructuralError
from .modular import ModularData
from .rings import FusionRing

__all__ = ["CategoryData", "ising", "fibonacci", "su2", "catalog", "CATALOG_NAMES"]

CATALOG_NAMES = ("ising", "fibonacci", "su2")


@dataclass
class CategoryData:
    """Everything the pipeline needs about one catalog category."""

    name: str
    ring: FusionRing
    modular: ModularData
    presentation: CategoryPresentation
    central_charge: float

    @property
    def labels(self):
        return self.ring.labels


def _full_fr_tables(ring: FusionRing, f_exceptions: dict, r_values: dict):
    """All-admissible F/R tables: exceptions override the default value 1."""
    n = ring.size
    N = ring.N
    F = {}
    for a in range(n):
        for b in range(n):
            for e in range(n):
                if not N[a, b, e]:
                    continue
                for c in range(n):
                    for d in range(n):
                        if not N[e, c, d]:
                            continue
                        for f in range(n):
                            if N[b, c, f] and N[a, f, d]:
                                key = (a, b, c, d, e, f)
                                F[key] = f_exceptions.get(key, 1.0)
    R = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if N[a, b, c]:
                    R[(a, b, c)] = r_values.get((a, b, c), 1.0)
    return F, R


@lru_cache(maxsize=None)
def ising() -> CategoryData:
    """Ising category: sectors (0, 1/16, 1/2) of the c = 1/2 chiral theory."""
    labels = ("0", "1/16", "1/2")
    dual = (0, 1, 2)
    n = 3
    VAC, SIG, PSI = 0, 1, 2
    N = np.zeros((n, n, n), dtype=np.int64)
    N[VAC] = np.eye(n)
    N[:, VAC, :] = np.eye(n)
    N[SIG, SIG, VAC] = N[SIG, SIG, PSI] = 1
    N[SIG, PSI, SIG] = N[PSI, SIG, SIG] = 1
    N[PSI, PSI, VAC] = 1
    ring = FusionRing(labels, dual, N)

    s2 = math.sqrt(2.0)
    S = 0.5 * np.array([[1, s2, 1], [s2, 0, -s2], [1, -s2, 1]], dtype=complex)
    T = np.array([1.0, np.exp(1j * np.pi / 8), -1.0])
    md = ModularData(ring, S, T)

    inv_s2 = 1.0 / s2
    f_exc = {}
    # the 2x2 sigma block
    for e in (VAC, PSI):
        for f in (VAC, PSI):
            sign = -1.0 if (e, f) == (PSI, PSI) else 1.0
            f_exc[(SIG, SIG, SIG, SIG, e, f)] = sign * inv_s2
    f_exc[(PSI, SIG, PSI, SIG, SIG, SIG)] = -1.0
    f_exc[(SIG, PSI, SIG, PSI, SIG, SIG)] = -1.0
    r_val = {
        (SIG, SIG, VAC): np.exp(-1j * np.pi / 8),
        (SIG, SIG, PSI): np.exp(3j * np.pi / 8),
        (PSI, PSI, VAC): -1.0,
        (SIG, PSI, SIG): -1.0j,
        (PSI, SIG, SIG): -1.0j,
    }
    F, R = _full_fr_tables(ring, f_exc, r_val)
    cat = CategoryPresentation(ring, F, R)
    return CategoryData("ising", ring, md, cat, 0.5)


@lru_cache(maxsize=None)
def fibonacci() -> CategoryData:
    """Fibonacci category (tau x tau = 1 + tau), c = 14/5."""
    labels = ("0", "tau")
    dual = (0, 1)
    N = np.zeros((2, 2, 2), dtype=np.int64)
    N[0] = np.eye(2)
    N[:, 0, :] = np.eye(2)
    N[1, 1, 0] = N[1, 1, 1] = 1
    ring = FusionRing(labels, dual, N)

    phi = (1.0 + math.sqrt(5.0)) / 2.0
    norm = 1.0 / math.sqrt(phi + 2.0)
    S = norm * np.array([[1.0, phi], [phi, -1.0]], dtype=complex)
    T = np.array([1.0, np.exp(4j * np.pi / 5)])
    md = ModularData(ring, S, T)

    f_exc = {
        (1, 1, 1, 1, 0, 0): 1.0 / phi,
        (1, 1, 1, 1, 0, 1): 1.0 / math.sqrt(phi),
        (1, 1, 1, 1, 1, 0): 1.0 / math.sqrt(phi),
        (1, 1, 1, 1, 1, 1): -1.0 / phi,
    }
    r_val = {
        (1, 1, 0): np.exp(-4j * np.pi / 5),
        (1, 1, 1): np.exp(3j * np.pi / 5),
    }
    F, R = _full_fr_tables(ring, f_exc, r_val)
    cat = CategoryPresentation(ring, F, R)
    return CategoryData("fibonacci", ring, md, cat, 2.8)


# -- SU(2)_k via quantum 6j symbols ----------------------------------------


def _qint(m: int, k: int) -> float:
    """Quantum integer [m] at q = exp(2 pi i / (k+2))."""
    return math.sin(math.pi * m / (k + 2)) / math.sin(math.pi / (k + 2))


def _qfact(m: int, k: int) -> float:
    out = 1.0
    for j in range(2, m + 1):
        out *= _qint(j, k)
    return out


def _admissible_triple(a: int, b: int, c: int, k: int) -> bool:
    # a, b, c are twice the spins
    return (
        abs(a - b) <= c <= a + b
        and (a + b + c) % 2 == 0
        and a + b + c <= 2 * k
    )


def _q6j(a, b, e, c, d, f, k) -> float:
    """Quantum 6j symbol {a b e; c d f}; arguments are twice the spins."""

    def tri(x, y, z):
        return math.sqrt(
            _qfact((-x + y + z) // 2, k)
            * _qfact((x - y + z) // 2, k)
            * _qfact((x + y - z) // 2, k)
            / _qfact((x + y + z) // 2 + 1, k)
        )

    pref = tri(a, b, e) * tri(e, c, d) * tri(b, c, f) * tri(a, f, d)
    z_min = max(a + b + e, e + c + d, b + c + f, a + f + d) // 2
    z_max = min(a + b + c + d, a + e + c + f, b + e + d + f) // 2
    total = 0.0
    for z in range(z_min, z_max + 1):
        num = (-1.0) ** z * _qfact(z + 1, k)
        den = (
            _qfact(z - (a + b + e) // 2, k)
            * _qfact(z - (e + c + d) // 2, k)
            * _qfact(z - (b + c + f) // 2, k)
            * _qfact(z - (a + f + d) // 2, k)
            * _qfact((a + b + c + d) // 2 - z, k)
            * _qfact((a + e + c + f) // 2 - z, k)
            * _qfact((b + e + d + f) // 2 - z, k)
        )
        total += num / den
    return pref * total


@lru_cache(maxsize=None)
def su2(k: int) -> CategoryData:
    """SU(2) level k: sectors j = 0, 1/2, ..., k/2."""
    if k < 1:
        raise StructuralError("su2 level must be >= 1")
    n = k + 1  # label index a corresponds to twice the spin
    labels = tuple(str(a // 2) if a % 2 == 0 else f"{a}/2" for a in range(n))
    dual = tuple(range(n))
    N = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if _admissible_triple(a, b, c, k):
                    N[a, b, c] = 1
    ring = FusionRing(labels, dual, N)

    S = np.array(
        [
            [
                math.sqrt(2.0 / (k + 2)) * math.sin(math.pi * (a + 1) * (b + 1) / (k + 2))
                for b in range(n)
            ]
            for a in range(n)
        ],
        dtype=complex,
    )
    # conformal weights h_j = j(j+1)/(k+2) with a = 2j
    T = np.array([np.exp(2j * np.pi * (a * (a + 2) / 4.0) / (k + 2)) for a in range(n)])
    md = ModularData(ring, S, T)

    F = {}
    for a in range(n):
        for b in range(n):
            for e in range(n):
                if not N[a, b, e]:
                    continue
                for c in range(n):
                    for d in range(n):
                        if not N[e, c, d]:
                            continue
                        for f in range(n):
                            if N[b, c, f] and N[a, f, d]:
                                val = (
                                    (-1.0) ** ((a + b + c + d) // 2)
                                    * math.sqrt(_qint(e + 1, k) * _qint(f + 1, k))
                                    * _q6j(a, b, e, c, d, f, k)
                                )
                                F[(a, b, c, d, e, f)] = val
    R = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if N[a, b, c]:
                    # spins: x(x+2)/4 = j(j+1) with x twice the spin
                    expo = (c * (c + 2) - a * (a + 2) - b * (b + 2)) / 4.0
                    R[(a, b, c)] = (
                        (-1.0) ** ((a + b - c) // 2)
                        * np.exp(1j * np.pi * expo / (k + 2))
                    )
    cat = CategoryPresentation(ring, F, R)
    c_charge = 3.0 * k / (k + 2)
    return CategoryData(f"su2_{k}", ring, md, cat, c_charge)


def catalog(name: str, level: int | None = None) -> CategoryData:
    """Look up a catalog category by name (and level, for su2)."""
    name = name.lower()
    if name == "ising":
        return ising()
    if name == "fibonacci":
        return fibonacci()
    if name == "su2":
        if level is None:
            raise StructuralError("su2 catalog requires a level >= 1")
        return su2(int(level))
    raise StructuralError(f"unknown catalog {name!r}; choose from {CATALOG_NAMES}")
