"""Modular-invariant and nimrep enumeration, Cardy solutions, compatibility.

Modular invariants are enumerated completely: a numeric basis of the
commutant of {S, T} is computed by SVD, integer points of the bounded
polytope are found by backtracking over pivot entries, and every candidate
is re-verified after integer rounding.  Nimreps are enumerated by
backtracking over the entries of generator matrices with row-norm pruning,
then deduplicated up to simultaneous boundary relabeling.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DataInconsistencyError, NumericDegeneracyError, StructuralError
from .modular import ModularData
from .rings import DEFAULT_TOL, FusionRing

__all__ = [
    "Nimrep",
    "CardySolution",
    "enumerate_modular_invariants",
    "brute_force_invariants",
    "enumerate_nimreps",
    "regular_nimrep",
    "cardy_solve",
    "compatibility",
]


# -- modular invariants ------------------------------------------------------


def _commutant_basis(md: ModularData, rcond: float = 1e-10):
    """Real basis of {M : SM = MS, TM = MT} as columns of an (n^2, m) array."""
    S, T = md.S, md.T
    n = md.size
    eye = np.eye(n)
    ops = [
        np.kron(S, eye) - np.kron(eye, S.T),
        np.kron(np.diag(T), eye) - np.kron(eye, np.diag(T)),
    ]
    A = np.vstack([np.vstack([op.real, op.imag]) for op in ops])
    # unknown M is real: nullspace over the reals
    u, s, vh = np.linalg.svd(A)
    smax = s[0] if len(s) else 0.0
    keep = s > rcond * max(smax, 1.0)
    rank = int(np.sum(keep))
    if rank < len(s):
        gap = s[rank - 1] / max(s[rank], 1e-300) if rank else np.inf
        if gap < 1e4:
            raise NumericDegeneracyError(
                f"commutant rank is numerically ambiguous (gap {gap:.1f})"
            )
    return vh[rank:].T  # (n^2, m)


def enumerate_modular_invariants(
    md: ModularData, max_entry: int | None = None, tol: float = 1e-7
) -> list[np.ndarray]:
    """All non-negative integer Z with ``Z[0,0] = 1``, ``ZS = SZ``, ``ZT = TZ``.

    Entries are bounded by ``floor(d_s d_t)`` (or ``max_entry``); the list is
    complete within those bounds and lexicographically ordered.
    """
    n = md.size
    d = md.ring.fp_dims
    bound = np.floor(np.outer(d, d) + tol).astype(int)
    if max_entry is not None:
        bound = np.minimum(bound, int(max_entry))
    B = _commutant_basis(md)
    m = B.shape[1]
    if m == 0:
        return []
    # pivot rows: a well-conditioned m x m subblock of B
    _, _, piv = scipy.linalg.qr(B.T, pivoting=True)
    rows = np.sort(piv[:m])
    Bp = B[rows]
    if abs(np.linalg.det(Bp)) < 1e-8:
        raise NumericDegeneracyError("commutant pivot block is singular")
    flat_bound = bound.reshape(-1)
    out = []
    ranges = [range(int(flat_bound[r]) + 1) for r in rows]
    vac = 0  # flat index of Z[0,0]
    for combo in itertools.product(*ranges):
        if vac in rows and combo[list(rows).index(vac)] != 1:
            continue
        coeff = np.linalg.solve(Bp, np.array(combo, dtype=float))
        vec = B @ coeff
        Z = np.rint(vec.reshape(n, n)).astype(np.int64)
        if np.max(np.abs(vec.reshape(n, n) - Z)) > tol:
            continue
        if Z[0, 0] != 1 or np.any(Z < 0) or np.any(Z > bound):
            continue
        Zf = Z.astype(float)
        if np.max(np.abs(md.S @ Zf - Zf @ md.S)) > tol:
            continue
        if np.max(np.abs(md.T[:, None] * Zf - Zf * md.T[None, :])) > tol:
            continue
        out.append(Z)
    uniq = {tuple(Z.reshape(-1)): Z for Z in out}
    return [uniq[k] for k in sorted(uniq)]


def brute_force_invariants(md: ModularData, max_entry: int, tol: float = 1e-7):
    """Oracle: exhaustive scan over all integer matrices with bounded entries."""
    n = md.size
    out = []
    for flat in itertools.product(range(max_entry + 1), repeat=n * n):
        Z = np.array(flat, dtype=np.int64).reshape(n, n)
        if Z[0, 0] != 1:
            continue
        Zf = Z.astype(float)
        if np.max(np.abs(md.S @ Zf - Zf @ md.S)) > tol:
            continue
        if np.max(np.abs(md.T[:, None] * Zf - Zf * md.T[None, :])) > tol:
            continue
        out.append(Z)
    return sorted(out, key=lambda Z: tuple(Z.reshape(-1)))


# -- nimreps -----------------------------------------------------------------


@dataclass
class Nimrep:
    """Non-negative integer matrix representation of the fusion ring."""

    ring: FusionRing
    matrices: tuple  # one (size x size) int matrix per sector

    @property
    def size(self) -> int:
        return self.matrices[0].shape[0]

    def validate(self) -> list[str]:
        ring = self.ring
        n = ring.size
        bad = []
        if len(self.matrices) != n:
            return [f"expected {n} matrices, got {len(self.matrices)}"]
        size = self.size
        for s, mat in enumerate(self.matrices):
            if mat.shape != (size, size):
                bad.append(f"matrix {s} has shape {mat.shape}")
            if np.any(mat < 0):
                bad.append(f"matrix {s} has negative entries")
        if bad:
            return bad
        if not np.array_equal(self.matrices[0], np.eye(size, dtype=np.int64)):
            bad.append("vacuum matrix is not the identity")
        for s in range(n):
            if not np.array_equal(self.matrices[ring.dual[s]], self.matrices[s].T):
                bad.append(f"duality fails: n^dual({s}) != transpose(n^{s})")
        for s in range(n):
            for t in range(n):
                want = sum(
                    int(ring.N[s, t, u]) * self.matrices[u] for u in range(n)
                )
                if not np.array_equal(self.matrices[s] @ self.matrices[t], want):
                    bad.append(f"representation property fails at ({s},{t})")
                    return bad
        return bad

    def key(self):
        return tuple(tuple(m.reshape(-1)) for m in self.matrices)


def regular_nimrep(ring: FusionRing) -> Nimrep:
    """Boundaries labeled by sectors; ``n^s = N^s`` (the Cardy case)."""
    mats = tuple(ring.N[s].copy() for s in range(ring.size))
    return Nimrep(ring, mats)


def _generator_plan(ring: FusionRing, gens: tuple[int, ...]):
    """Derivation order for the remaining sectors from products of known ones.

    Returns a list of steps ``(s, t, u)`` meaning: once ``n^s``, ``n^t`` and
    all previously derived matrices are known, ``n^u`` follows from the
    representation identity (its coefficient is 1).  None if no full plan.
    """
    known = {0, *gens}
    plan = []
    changed = True
    while changed and len(known) < ring.size:
        changed = False
        for s in known.copy():
            for t in known.copy():
                unknowns = [
                    u for u in range(ring.size) if ring.N[s, t, u] > 0 and u not in known
                ]
                if len(unknowns) == 1 and ring.N[s, t, unknowns[0]] == 1:
                    plan.append((s, t, unknowns[0]))
                    known.add(unknowns[0])
                    changed = True
    return plan if len(known) == ring.size else None


def _select_generators(ring: FusionRing):
    for r in range(1, ring.size):
        for gens in itertools.combinations(range(1, ring.size), r):
            plan = _generator_plan(ring, gens)
            if plan is not None:
                return gens, plan
    raise StructuralError("fusion ring admits no derivation plan (degenerate N)")


def _candidate_generator_matrices(ring: FusionRing, g: int, size: int, tol: float):
    """All candidate n^g: bounded entries, row square sums <= floor(d_g^2)."""
    d = ring.fp_dims
    entry_bound = int(math.floor(d[g] + tol))
    row_bound = int(math.floor(d[g] ** 2 + tol))
    symmetric = ring.dual[g] == g
    mats = []
    cells = (
        [(i, j) for i in range(size) for j in range(i, size)]
        if symmetric
        else [(i, j) for i in range(size) for j in range(size)]
    )

    mat = np.zeros((size, size), dtype=np.int64)

    def rows_ok(upto_cell):
        sq = mat**2
        return all(sq[i].sum() <= row_bound for i in range(size)) and all(
            sq[:, j].sum() <= row_bound for j in range(size)
        )

    def rec(idx):
        if idx == len(cells):
            mats.append(mat.copy())
            return
        i, j = cells[idx]
        for v in range(entry_bound + 1):
            mat[i, j] = v
            if symmetric:
                mat[j, i] = v
            if rows_ok(idx):
                rec(idx + 1)
        mat[i, j] = 0
        if symmetric:
            mat[j, i] = 0

    rec(0)
    return mats


def _derive_all(ring: FusionRing, assigned: dict, plan) -> dict | None:
    mats = dict(assigned)
    size = mats[0].shape[0]
    for s, t, u in plan:
        P = mats[s] @ mats[t]
        for w in range(ring.size):
            if w == u or ring.N[s, t, w] == 0:
                continue
            if w not in mats:
                return None
            P = P - int(ring.N[s, t, w]) * mats[w]
        if np.any(P < 0):
            return None
        mats[u] = P
    return mats if len(mats) == ring.size else None


def _canonical_key(matrices, size):
    """Lexicographically minimal key over simultaneous boundary relabelings."""
    # fingerprint-based pruning: only permute within equal-invariant classes
    fp = []
    for a in range(size):
        fp.append(
            (
                tuple(int(m[a, a]) for m in matrices),
                tuple(tuple(sorted(m[a])) for m in matrices),
            )
        )
    order = sorted(range(size), key=lambda a: fp[a])
    groups = []
    for a in order:
        if groups and fp[groups[-1][-1]] == fp[a]:
            groups[-1].append(a)
        else:
            groups.append([a])
    best = None
    for parts in itertools.product(*[itertools.permutations(g) for g in groups]):
        perm = [a for part in parts for a in part]
        key = tuple(
            tuple(m[np.ix_(perm, perm)].reshape(-1)) for m in matrices
        )
        if best is None or key < best:
            best = key
    return best


def enumerate_nimreps(ring: FusionRing, size: int, tol: float = DEFAULT_TOL) -> list[Nimrep]:
    """All nimreps of the given boundary count, up to relabeling.

    Backtracks over generator-matrix entries (bounded by ``floor(d_s)``),
    derives the remaining matrices from the representation identity and
    verifies everything exactly.
    """
    if size < 1:
        raise StructuralError("nimrep size must be >= 1")
    if ring.size == 1:
        return [Nimrep(ring, (np.eye(size, dtype=np.int64),))] if size == 1 else []
    gens, plan = _select_generators(ring)
    candidate_lists = [
        _candidate_generator_matrices(ring, g, size, tol) for g in gens
    ]
    found = {}
    eye = np.eye(size, dtype=np.int64)
    for combo in itertools.product(*candidate_lists):
        assigned = {0: eye}
        for g, mat in zip(gens, combo):
            assigned[g] = mat
        mats = _derive_all(ring, assigned, plan)
        if mats is None:
            continue
        matrices = tuple(mats[s] for s in range(ring.size))
        nr = Nimrep(ring, matrices)
        if nr.validate():
            continue
        key = _canonical_key(matrices, size)
        if key not in found:
            canon = tuple(
                np.array(k, dtype=np.int64).reshape(size, size) for k in key
            )
            found[key] = Nimrep(ring, canon)
    return [found[k] for k in sorted(found)]


# -- Cardy solutions ---------------------------------------------------------


@dataclass
class CardySolution:
    """Unitary psi diagonalizing a nimrep against the columns of S."""

    nimrep: Nimrep
    psi: np.ndarray  # (size, size), columns ordered by exponent
    exponents: tuple  # sector index per column
    residual: float


def _joint_eigenbasis(mats, cluster_tol=1e-7):
    """Joint eigenvectors of a commuting normal family, by block refinement."""
    size = mats[0].shape[0]
    blocks = [np.eye(size, dtype=complex)]
    tuples = [()]
    for M in mats:
        new_blocks, new_tuples = [], []
        for B, tup in zip(blocks, tuples):
            sub = B.conj().T @ M.astype(complex) @ B
            T, Q = scipy.linalg.schur(sub, output="complex")
            off = np.max(np.abs(T - np.diag(np.diag(T)))) if T.size else 0.0
            if off > 1e-8:
                raise DataInconsistencyError(
                    f"nimrep matrices are not simultaneously diagonalizable "
                    f"(off-diagonal {off:.2e})"
                )
            w = np.diag(T)
            order = np.lexsort((np.round(w.imag, 9), np.round(w.real, 9)))
            idx_sorted = list(order)
            start = 0
            while start < len(idx_sorted):
                stop = start + 1
                while (
                    stop < len(idx_sorted)
                    and abs(w[idx_sorted[stop]] - w[idx_sorted[stop - 1]]) < cluster_tol
                ):
                    stop += 1
                sel = idx_sorted[start:stop]
                new_blocks.append(B @ Q[:, sel])
                new_tuples.append(tup + (complex(np.mean(w[sel])),))
                start = stop
        blocks, tuples = new_blocks, new_tuples
    return blocks, tuples


def _match_exponents(md: ModularData, tuples, tol=1e-6):
    S = md.S
    ratios = S / S[0][None, :]
    matches = []
    for tup in tuples:
        dists = [
            max(abs(tup[s] - ratios[s, t]) for s in range(md.size))
            for t in range(md.size)
        ]
        t = int(np.argmin(dists))
        if dists[t] > tol:
            raise DataInconsistencyError(
                f"nimrep has no modular spectrum: eigenvalue tuple "
                f"{np.round(tup, 6)} matches no column of S (best residual "
                f"{dists[t]:.2e})"
            )
        matches.append(t)
    return matches


def cardy_solve(nimrep: Nimrep, md: ModularData, tol: float = DEFAULT_TOL) -> CardySolution:
    """Solve ``n^s = psi (S_s./S_0.) psi*`` by joint diagonalization."""
    bad = nimrep.validate()
    if bad:
        raise StructuralError(f"invalid nimrep: {bad[0]}")
    blocks, tuples = _joint_eigenbasis(list(nimrep.matrices))
    matches = _match_exponents(md, tuples)
    cols = []
    for B, t in zip(blocks, matches):
        for k in range(B.shape[1]):
            cols.append((t, B[:, k]))
    cols.sort(key=lambda item: item[0])
    size = nimrep.size
    if len(cols) != size:
        raise DataInconsistencyError("joint eigenbasis has wrong cardinality")
    psi = np.zeros((size, size), dtype=complex)
    exponents = []
    for j, (t, v) in enumerate(cols):
        vmax = np.max(np.abs(v))
        anchor = next(i for i in range(size) if abs(v[i]) >= 0.3 * vmax)
        phase = v[anchor] / abs(v[anchor])
        psi[:, j] = v / phase
        exponents.append(t)
    # Perron column: all entries real positive once the phase is fixed
    residual = 0.0
    ratios = md.S / md.S[0][None, :]
    for s in range(md.size):
        recon = psi @ np.diag([ratios[s, t] for t in exponents]) @ psi.conj().T
        residual = max(residual, float(np.max(np.abs(recon - nimrep.matrices[s]))))
    unit = float(np.max(np.abs(psi @ psi.conj().T - np.eye(size))))
    residual = max(residual, unit)
    return CardySolution(nimrep, psi, tuple(exponents), residual)


def compatibility(Z, nimrep: Nimrep, md: ModularData, tol: float = 1e-6):
    """Exponent multiplicities of the nimrep vs the diagonal of Z.

    Returns ``(ok, table)`` with ``table[t]`` the number of joint eigenvalue
    tuples matching column ``t`` of S.
    """
    Z = np.asarray(Z, dtype=np.int64)
    try:
        blocks, tuples = _joint_eigenbasis(list(nimrep.matrices))
        matches = _match_exponents(md, tuples)
    except DataInconsistencyError:
        return False, {}
    table = {t: 0 for t in range(md.size)}
    for B, t in zip(blocks, matches):
        table[t] += B.shape[1]
    ok = all(table[t] == int(Z[t, t]) for t in range(md.size))
    return ok, table
