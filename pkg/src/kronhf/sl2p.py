"""Irreducible p-dimensional representations of SL(2,p) and Kazhdan brackets.

The group acts on the projective line over F_p by Moebius transformations;
the permutation representation on C^(p+1) restricts to the sum-zero
hyperplane W, and in the difference basis w_i = e_{i+1} - e_i the restricted
generators are integer matrices with entries in {-1, 0, 1}. Spectral
estimates for the adjoint action on trace-zero matrices run in floating
point on an orthonormal transport of the same representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np

from .errors import DomainError, ValidationError
from .fields import QQ, is_prime
from .matrices import Matrix
from .modules import KroneckerModule


@dataclass(frozen=True)
class ProjPoint:
    """Point of P^1(F_p): a residue 0..p-1 or None for infinity."""

    p: int
    value: int | None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"{self.p} is not prime")
        if self.value is not None and not (0 <= self.value < self.p):
            raise ValidationError("finite point out of range")

    @property
    def index(self) -> int:
        """Position in the fixed ordering 0, 1, ..., p-1, infinity."""
        return self.p if self.value is None else self.value

    def __repr__(self):
        return f"({'inf' if self.value is None else self.value} : P1(F_{self.p}))"


@dataclass(frozen=True)
class SL2pElement:
    p: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"{self.p} is not prime")
        for x in (self.a, self.b, self.c, self.d):
            if not (0 <= x < self.p):
                raise ValidationError("entries must be reduced residues")
        if (self.a * self.d - self.b * self.c) % self.p != 1:
            raise ValidationError("determinant must be 1 mod p")

    def __mul__(self, other: "SL2pElement") -> "SL2pElement":
        p = self.p
        return SL2pElement(
            p,
            (self.a * other.a + self.b * other.c) % p,
            (self.a * other.b + self.b * other.d) % p,
            (self.c * other.a + self.d * other.c) % p,
            (self.c * other.b + self.d * other.d) % p,
        )


def gen_s(p: int) -> SL2pElement:
    return SL2pElement(p, 1, 1, 0, 1)


def gen_t(p: int) -> SL2pElement:
    return SL2pElement(p, 0, 1, (-1) % p, 0)


def identity_element(p: int) -> SL2pElement:
    return SL2pElement(p, 1, 0, 0, 1)


def mobius(g: SL2pElement, z: ProjPoint) -> ProjPoint:
    """(a z + b) / (c z + d) with x/0 = infinity and evaluation at infinity a/c."""
    if g.p != z.p:
        raise ValidationError("characteristic mismatch")
    p = g.p
    if z.value is None:
        if g.c % p == 0:
            return ProjPoint(p, None)
        return ProjPoint(p, g.a * pow(g.c, -1, p) % p)
    num = (g.a * z.value + g.b) % p
    den = (g.c * z.value + g.d) % p
    if den == 0:
        return ProjPoint(p, None)
    return ProjPoint(p, num * pow(den, -1, p) % p)


def point_permutation(g: SL2pElement) -> list:
    """sigma[i] = index of the Moebius image of the i-th point."""
    p = g.p
    out = []
    for i in range(p + 1):
        z = ProjPoint(p, None if i == p else i)
        out.append(mobius(g, z).index)
    return out


def permutation_rep(g: SL2pElement) -> Matrix:
    """(p+1) x (p+1) permutation matrix of the projective action over Q."""
    sigma = point_permutation(g)
    return Matrix.from_entries(QQ, g.p + 1, g.p + 1,
                               ((sigma[z], z, QQ.one) for z in range(g.p + 1)))


def restricted_rep(g: SL2pElement) -> Matrix:
    """Matrix of the permutation action on the sum-zero subspace W.

    Basis w_i = e_{i+1} - e_i for i = 1..p; the image of w_i telescopes to a
    contiguous block of +-1 entries, so the matrix is integral.
    """
    p = g.p
    sigma = point_permutation(g)
    entries = []
    for i in range(1, p + 1):  # column i (1-based)
        a, b = sigma[i], sigma[i - 1]
        if a > b:
            for row in range(b + 1, a + 1):  # w_row, 1-based
                entries.append((row - 1, i - 1, QQ.one))
        elif b > a:
            for row in range(a + 1, b + 1):
                entries.append((row - 1, i - 1, -QQ.one))
    return Matrix.from_entries(QQ, p, p, entries)


@dataclass
class IrreducibleRep:
    p: int
    mat_s: Matrix
    mat_t: Matrix
    basis: str = "difference"


def irreducible_rep(p: int) -> IrreducibleRep:
    """The p-dimensional representation on W, with its invariants checked."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    ms = restricted_rep(gen_s(p))
    mt = restricted_rep(gen_t(p))
    ident = Matrix.identity(QQ, p)
    if mt @ mt != ident:
        raise AssertionError("t matrix must be an involution")
    acc = ident
    for _ in range(p):
        acc = acc @ ms
    if acc != ident:
        raise AssertionError("s matrix must have order p")
    for i in range(p):
        for j in range(p):
            if mt.entry(i, j) != mt.entry(p - 1 - i, p - 1 - j):
                raise AssertionError("t matrix must be centrally symmetric")
    return IrreducibleRep(p, ms, mt)


# -- irreducibility via the commutant -------------------------------------------


def _commutant_dim_mod(mats, prime) -> int:
    """Commutant dimension of integer matrices reduced mod a large prime (numpy)."""
    n = mats[0].rows
    rows = []
    for m in mats:
        a = np.zeros((n, n), dtype=np.int64)
        for i, j, v in m.entries():
            a[i, j] = int(v) % prime
        # X a = a X  as n^2 linear equations: kron(I, a^T)? assemble directly
        block = np.zeros((n * n, n * n), dtype=np.int64)
        for r in range(n):
            for c in range(n):
                row = block[r * n + c]
                # (X a)[r, c] = sum_k X[r, k] a[k, c]
                for k in range(n):
                    row[r * n + k] = (row[r * n + k] + a[k, c]) % prime
                # (a X)[r, c] = sum_k a[r, k] X[k, c]
                for k in range(n):
                    row[k * n + c] = (row[k * n + c] - a[r, k]) % prime
        rows.append(block % prime)
    big = np.vstack(rows) % prime
    rank = _rank_mod(big, prime)
    return n * n - rank


def _rank_mod(a: np.ndarray, p: int) -> int:
    a = a.copy() % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        mask = np.nonzero(a[:, c])[0]
        mask = mask[mask != r]
        if mask.size:
            a[mask] = (a[mask] - np.outer(a[mask, c], a[r])) % p
        r += 1
    return r


def commutant_dimension(mats) -> int:
    """Exact dimension over Q of {X : X m = m X for all m}.

    A modular rank gives dim_Q <= dim_(F_p); since the identity always
    commutes, a modular answer of 1 is exact. Otherwise falls back to exact
    rational elimination.
    """
    if not mats:
        raise ValidationError("need at least one matrix")
    n = mats[0].rows
    for m in mats:
        if m.rows != m.cols or m.rows != n:
            raise ValidationError("square matrices of equal size required")
        if m.field != QQ:
            raise ValidationError("commutant solver works over Q")
        for _, _, v in m.entries():
            if v.denominator != 1:
                raise ValidationError("integer matrices expected")
    dim_mod = _commutant_dim_mod(mats, 2_147_483_647)
    if dim_mod == 1:
        return 1
    # exact fallback
    rows = []
    for m in mats:
        for r in range(n):
            for c in range(n):
                row = {}
                for k in range(n):
                    v = m.entry(k, c)
                    if v:
                        row[r * n + k] = row.get(r * n + k, QQ.zero) + v
                for k in range(n):
                    v = m.entry(r, k)
                    if v:
                        row[k * n + c] = row.get(k * n + c, QQ.zero) - v
                rows.append({k: v for k, v in row.items() if v})
    system = Matrix._build(QQ, len(rows), n * n, rows)
    return n * n - system.rank()


def is_irreducible(mats) -> bool:
    """True iff the commutant of the rational representation is the scalars."""
    return commutant_dimension(mats) == 1


# -- orthogonal transport and the adjoint action ---------------------------------


def orthonormal_w_basis(p: int) -> np.ndarray:
    """(p+1) x p orthonormal basis of the sum-zero subspace (Gram-Schmidt of w_i)."""
    diffs = np.zeros((p + 1, p))
    for i in range(p):
        diffs[i, i] = -1.0
        diffs[i + 1, i] = 1.0
    q, _ = np.linalg.qr(diffs)
    return q[:, :p]


def orthogonal_rep(g: SL2pElement) -> np.ndarray:
    """Orthogonal p x p matrix of the permutation action on W."""
    p = g.p
    sigma = point_permutation(g)
    perm = np.zeros((p + 1, p + 1))
    for z in range(p + 1):
        perm[sigma[z], z] = 1.0
    u = orthonormal_w_basis(p)
    return u.T @ perm @ u


def _traceless_basis(p: int) -> np.ndarray:
    """Orthonormal basis of trace-zero p x p matrices under <S, T> = tr(S T^t)."""
    mats = []
    for i in range(p):
        for j in range(p):
            if i != j:
                e = np.zeros((p, p))
                e[i, j] = 1.0
                mats.append(e)
    prev = []
    for i in range(p - 1):
        d = np.zeros((p, p))
        d[i, i] = 1.0
        d[i + 1, i + 1] = -1.0
        for q in prev:
            d = d - np.sum(d * q) * q
        d = d / math.sqrt(np.sum(d * d))
        prev.append(d)
    return np.array(mats + prev)


def adjoint_rep(rho_g: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Matrix of T -> g T g^(-1) on trace-zero matrices, orthonormal basis.

    Requires an orthogonal input (covers invertibility); the output is again
    orthogonal within tol.
    """
    rho_g = np.asarray(rho_g, dtype=float)
    n = rho_g.shape[0]
    if rho_g.shape != (n, n):
        raise ValidationError("square matrix required")
    if np.max(np.abs(rho_g @ rho_g.T - np.eye(n))) > max(tol, 1e-8):
        raise ValidationError("adjoint transport expects an orthogonal matrix")
    basis = _traceless_basis(n)
    images = np.einsum("ij,bjk,lk->bil", rho_g, basis, rho_g)
    out = np.einsum("aij,bij->ab", basis, images)
    if np.max(np.abs(out @ out.T - np.eye(out.shape[0]))) > 1e-8:
        raise AssertionError("adjoint matrix failed the orthogonality check")
    return out


def adjoint_generators(p: int):
    """Adjoint action matrices of the two generators on the trace-zero space."""
    return [adjoint_rep(orthogonal_rep(gen_s(p))), adjoint_rep(orthogonal_rep(gen_t(p)))]


# -- Kazhdan bracket ----------------------------------------------------------------


def kazhdan_lower_bound(gens, tol: float = 1e-8) -> float:
    """sqrt of the smallest eigenvalue of the averaged displacement form.

    For unit v, max_s ||g v - v|| is at least the quadratic mean, whose square
    is v^t [ (1/|S|) sum (I - g)^t (I - g) ] v; the smallest eigenvalue of
    that form lower-bounds the squared Kazhdan constant.
    """
    if not gens:
        raise ValidationError("need at least one generator")
    n = gens[0].shape[0]
    acc = np.zeros((n, n))
    for g in gens:
        g = np.asarray(g, dtype=float)
        if np.max(np.abs(g @ g.T - np.eye(n))) > tol:
            raise ValidationError("generators must be orthogonal within tol")
        d = np.eye(n) - g
        acc += d.T @ d
    acc /= len(gens)
    lam = float(np.linalg.eigvalsh((acc + acc.T) / 2.0)[0])
    if lam < 1e-12:  # eigenvalue noise would be amplified by the square root
        return 0.0
    return math.sqrt(lam)


def kazhdan_upper_bound(gens, trials: int = 200, seed: int = 0) -> float:
    """Best displacement max over sampled and coordinate-descended unit vectors."""
    if not gens:
        raise ValidationError("need at least one generator")
    mats = [np.asarray(g, dtype=float) - np.eye(g.shape[0]) for g in gens]
    n = mats[0].shape[0]

    def objective(v):
        return max(float(np.linalg.norm(m @ v)) for m in mats)

    rng = np.random.default_rng(seed)
    best = math.inf
    for _ in range(max(1, trials)):
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        val = objective(v)
        step = 0.5
        while step > 1e-3:
            improved = False
            for i in range(n):
                for sgn in (1.0, -1.0):
                    cand = v.copy()
                    cand[i] += sgn * step
                    cand /= np.linalg.norm(cand)
                    cv = objective(cand)
                    if cv < val - 1e-12:
                        v, val = cand, cv
                        improved = True
            if not improved:
                step /= 2.0
        best = min(best, val)
    return best


@dataclass
class KazhdanEstimate:
    p: int
    lower: float
    upper: float
    dim: int
    generators: str = "s, t on trace-zero matrices"

    @property
    def alpha(self) -> float:
        return self.lower ** 2 / 12.0


def kazhdan_estimate(p: int, trials: int = 200, seed: int = 0) -> KazhdanEstimate:
    gens = adjoint_generators(p)
    lb = kazhdan_lower_bound(gens)
    ub = kazhdan_upper_bound(gens, trials=trials, seed=seed)
    if lb > ub + 1e-8:
        raise AssertionError("lower bound exceeds upper bound; bug")
    return KazhdanEstimate(p, lb, ub, gens[0].shape[0])


# -- the wild counterexample family ---------------------------------------------------


def theta3_counterexample_module(p: int, field=QQ) -> KroneckerModule:
    """The 3-Kronecker module (identity, rho_p(s), rho_p(t)) on (k^p, k^p).

    Over a prime field this is a reduction experiment, not the rational
    family itself; callers should flag it as such.
    """
    rep = irreducible_rep(p)
    if field == QQ:
        ms, mt = rep.mat_s, rep.mat_t
    else:
        ms = Matrix.from_entries(field, p, p,
                                 ((i, j, field.coerce(v)) for i, j, v in rep.mat_s.entries()))
        mt = Matrix.from_entries(field, p, p,
                                 ((i, j, field.coerce(v)) for i, j, v in rep.mat_t.entries()))
    return KroneckerModule(3, field, p, p, [Matrix.identity(field, p), ms, mt])


def rep_dump_text(p: int) -> str:
    """Fixture format: the s matrix then the t matrix in matrix text form."""
    rep = irreducible_rep(p)
    return rep.mat_s.to_text() + "\n" + rep.mat_t.to_text()
