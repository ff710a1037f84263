"""Dense-interface exact matrices over Q or F_q, stored sparsely.

Only nonzero entries are kept (a dict of nonempty row dicts), which keeps
the structured modules of this project (shift, selection and companion
patterns) linear in their size while presenting an ordinary dense row-major
contract, including the text file format.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError, ValidationError
from .fields import field_from_label

_EMPTY = {}


class Matrix:
    __slots__ = ("field", "rows", "cols", "_rows")

    def __init__(self, field, rows: int, cols: int, row_dicts=None):
        """row_dicts: {row_index: {col: nonzero value}}, empty rows omitted."""
        if rows < 0 or cols < 0:
            raise ShapeError("negative dimensions")
        self.field = field
        self.rows = rows
        self.cols = cols
        self._rows = {} if row_dicts is None else row_dicts

    # -- construction -----------------------------------------------------

    @staticmethod
    def _build(field, rows, cols, row_list):
        """From a full list of row dicts; prunes empties."""
        return Matrix(field, rows, cols,
                      {i: r for i, r in enumerate(row_list) if r})

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field, n):
        one = field.one
        return cls(field, n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def from_dense(cls, field, data):
        rows = len(data)
        cols = len(data[0]) if rows else 0
        rd = {}
        for i, r in enumerate(data):
            if len(r) != cols:
                raise ShapeError("ragged rows")
            row = {j: field.coerce(v) for j, v in enumerate(r) if field.coerce(v)}
            if row:
                rd[i] = row
        return cls(field, rows, cols, rd)

    @classmethod
    def from_entries(cls, field, rows, cols, entries):
        rd = {}
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ShapeError(f"entry ({i},{j}) outside {rows}x{cols}")
            v = field.coerce(v)
            if v:
                rd.setdefault(i, {})[j] = v
        return cls(field, rows, cols, rd)

    @classmethod
    def selection(cls, field, n, indices):
        """n x len(indices) matrix whose t-th column is the unit e_{indices[t]}."""
        rd = {}
        for t, i in enumerate(indices):
            if not 0 <= i < n:
                raise ShapeError(f"selection index {i} outside 0..{n - 1}")
            rd.setdefault(i, {})[t] = field.one
        return cls(field, n, len(indices), rd)

    @classmethod
    def column(cls, field, values):
        return cls.from_dense(field, [[v] for v in values])

    # -- access -----------------------------------------------------------

    def entry(self, i, j):
        return self._rows.get(i, _EMPTY).get(j, self.field.zero)

    def row_items(self, i):
        return self._rows.get(i, _EMPTY).items()

    def entries(self):
        for i, row in self._rows.items():
            for j, v in row.items():
                yield i, j, v

    @property
    def nnz(self):
        return sum(len(r) for r in self._rows.values())

    def is_zero(self):
        return not self._rows

    def to_dense(self):
        z = self.field.zero
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def copy(self):
        return Matrix(self.field, self.rows, self.cols,
                      {i: dict(r) for i, r in self._rows.items()})

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self._rows == other._rows
        )

    def __hash__(self):
        raise TypeError("Matrix is not hashable")

    def __repr__(self):
        if self.rows * self.cols <= 64:
            return f"Matrix({self.field!r}, {self.to_dense()})"
        return f"Matrix({self.field!r}, {self.rows}x{self.cols}, nnz={self.nnz})"

    # -- algebra ----------------------------------------------------------

    def _check_same_field(self, other):
        if self.field != other.field:
            raise ValidationError("field mismatch")

    def __matmul__(self, other):
        self._check_same_field(other)
        if self.cols != other.rows:
            raise ShapeError(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        fld = self.field
        zero = fld.zero
        out = {}
        orows = other._rows
        for i, row in self._rows.items():
            acc = {}
            for k, v in row.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for j, w in brow.items():
                    nv = fld.add(acc.get(j, zero), fld.mul(v, w))
                    if nv:
                        acc[j] = nv
                    else:
                        acc.pop(j, None)
            if acc:
                out[i] = acc
        return Matrix(fld, self.rows, other.cols, out)

    def __add__(self, other):
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in add")
        fld = self.field
        out = {i: dict(r) for i, r in self._rows.items()}
        for i, r2 in other._rows.items():
            row = out.setdefault(i, {})
            for j, v in r2.items():
                nv = fld.add(row.get(j, fld.zero), v)
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            if not row:
                del out[i]
        return Matrix(fld, self.rows, self.cols, out)

    def __neg__(self):
        fld = self.field
        return Matrix(fld, self.rows, self.cols,
                      {i: {j: fld.neg(v) for j, v in r.items()}
                       for i, r in self._rows.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        fld = self.field
        c = fld.coerce(c)
        if not c:
            return Matrix.zeros(fld, self.rows, self.cols)
        return Matrix(fld, self.rows, self.cols,
                      {i: {j: fld.mul(c, v) for j, v in r.items()}
                       for i, r in self._rows.items()})

    def transpose(self):
        out = {}
        for i, row in self._rows.items():
            for j, v in row.items():
                out.setdefault(j, {})[i] = v
        return Matrix(self.field, self.cols, self.rows, out)

    @staticmethod
    def hstack(mats):
        if not mats:
            raise ShapeError("hstack of nothing")
        fld = mats[0].field
        rows = mats[0].rows
        out = {}
        off = 0
        for m in mats:
            if m.field != fld or m.rows != rows:
                raise ShapeError("hstack mismatch")
            for i, row in m._rows.items():
                dst = out.setdefault(i, {})
                for j, v in row.items():
                    dst[j + off] = v
            off += m.cols
        return Matrix(fld, rows, off, out)

    @staticmethod
    def vstack(mats):
        if not mats:
            raise ShapeError("vstack of nothing")
        fld = mats[0].field
        cols = mats[0].cols
        out = {}
        off = 0
        for m in mats:
            if m.field != fld or m.cols != cols:
                raise ShapeError("vstack mismatch")
            for i, row in m._rows.items():
                out[i + off] = dict(row)
            off += m.rows
        return Matrix(fld, off, cols, out)

    def submatrix(self, row_idx, col_idx):
        cmap = {c: t for t, c in enumerate(col_idx)}
        out = {}
        for t, i in enumerate(row_idx):
            src = self._rows.get(i)
            if not src:
                continue
            row = {}
            for j, v in src.items():
                tt = cmap.get(j)
                if tt is not None:
                    row[tt] = v
            if row:
                out[t] = row
        return Matrix(self.field, len(row_idx), len(col_idx), out)

    # -- elimination ------------------------------------------------------

    def rref(self):
        """Reduced row echelon form and pivot columns.

        Pivot choice is deterministic: columns left to right, first nonzero
        row top to bottom, so downstream bases are reproducible.
        """
        fld = self.field
        rows = [dict(self._rows.get(i, _EMPTY)) for i in range(self.rows)]
        pivots = []
        rpos = 0
        nrows = len(rows)
        for c in range(self.cols):
            pr = None
            for i in range(rpos, nrows):
                if c in rows[i]:
                    pr = i
                    break
            if pr is None:
                continue
            rows[rpos], rows[pr] = rows[pr], rows[rpos]
            pv = rows[rpos][c]
            if pv != fld.one:
                inv = fld.inv(pv)
                rows[rpos] = {j: fld.mul(v, inv) for j, v in rows[rpos].items()}
            prow = rows[rpos]
            for i in range(nrows):
                if i != rpos and c in rows[i]:
                    f = rows[i][c]
                    ri = rows[i]
                    for j, v in prow.items():
                        nv = fld.sub(ri.get(j, fld.zero), fld.mul(f, v))
                        if nv:
                            ri[j] = nv
                        else:
                            ri.pop(j, None)
            pivots.append(c)
            rpos += 1
            if rpos == nrows:
                break
        return Matrix._build(fld, self.rows, self.cols, rows), pivots

    def is_selection(self):
        """Row indices per column if every column is a unit vector, else None.

        Duplicate row indices are possible; rank() only takes the fast path
        when they are distinct.
        """
        seen = {}
        count = 0
        one = self.field.one
        for i, row in self._rows.items():
            for j, v in row.items():
                if v != one or j in seen:
                    return None
                seen[j] = i
                count += 1
        if count != self.cols:
            return None
        return [seen[j] for j in range(self.cols)]

    def rank(self):
        sel = self.is_selection()
        if sel is not None and len(set(sel)) == len(sel):
            return len(sel)
        _, pivots = self.rref()
        return len(pivots)

    def kernel_basis(self):
        """Matrix whose columns are a basis of the right null space.

        Basis vectors are the standard free-variable vectors of the rref,
        ordered by ascending free column; they satisfy m @ v = 0 exactly.
        """
        R, pivots = self.rref()
        pivset = set(pivots)
        free = [c for c in range(self.cols) if c not in pivset]
        fld = self.field
        out = {}
        for t, fcol in enumerate(free):
            out.setdefault(fcol, {})[t] = fld.one
            for i, p in enumerate(pivots):
                coef = R._rows.get(i, _EMPTY).get(fcol)
                if coef:
                    out.setdefault(p, {})[t] = fld.neg(coef)
        return Matrix(fld, self.cols, len(free), out)

    def solve(self, b: "Matrix") -> "Matrix":
        """A particular solution X of self @ X = b (free variables zero)."""
        self._check_same_field(b)
        if b.rows != self.rows:
            raise ShapeError("rhs row mismatch")
        aug = Matrix.hstack([self, b])
        R, pivots = aug.rref()
        if pivots and pivots[-1] >= self.cols:
            raise ValidationError("inconsistent linear system")
        out = {}
        for i, p in enumerate(pivots):
            for j, v in R._rows.get(i, _EMPTY).items():
                if j >= self.cols:
                    out.setdefault(p, {})[j - self.cols] = v
        return Matrix(self.field, self.cols, b.cols, out)

    # -- text format --------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"field {self.field.label}", f"{self.rows} {self.cols}"]
        fmt = self.field.fmt
        z = self.field.zero
        for i in range(self.rows):
            row = self._rows.get(i, _EMPTY)
            lines.append(" ".join(fmt(row.get(j, z)) for j in range(self.cols)))
        return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> Matrix:
    tokens = text.split()
    if len(tokens) < 4 or tokens[0] != "field":
        raise ValidationError("matrix text must start with a 'field' line")
    fld = field_from_label(tokens[1])
    rows, cols = int(tokens[2]), int(tokens[3])
    vals = tokens[4:]
    if len(vals) != rows * cols:
        raise ValidationError(f"expected {rows * cols} entries, got {len(vals)}")
    entries = []
    for k, tok in enumerate(vals):
        v = fld.parse(tok)
        if v:
            entries.append((k // cols, k % cols, v))
    return Matrix.from_entries(fld, rows, cols, entries)


def column_space_dim_of_stack(mats) -> int:
    """Dimension of the sum of the column spaces of the given matrices."""
    if not mats:
        return 0
    fld = mats[0].field
    rows = mats[0].rows
    for m in mats:
        if m.field != fld:
            raise ValidationError("field mismatch in image stack")
        if m.rows != rows:
            raise ShapeError("ambient dimension mismatch in image stack")
    return Matrix.hstack(mats).rank()


def random_matrix(field, rows, cols, rng, span=5):
    from fractions import Fraction

    ent = []
    for i in range(rows):
        for j in range(cols):
            if field.char == 0:
                v = Fraction(rng.randint(-span, span), rng.randint(1, 3))
            else:
                v = rng.randrange(field.q)
            if v:
                ent.append((i, j, v))
    return Matrix.from_entries(field, rows, cols, ent)


def random_invertible(field, n, rng, span=3):
    """Product of random unitriangular factors and a permutation; always invertible."""
    from fractions import Fraction

    lo_ent = [(i, i, field.one) for i in range(n)]
    up_ent = [(i, i, field.one) for i in range(n)]
    for i in range(n):
        for j in range(i):
            if field.char == 0:
                a, b = Fraction(rng.randint(-span, span)), Fraction(rng.randint(-span, span))
            else:
                a, b = rng.randrange(field.q), rng.randrange(field.q)
            if a:
                lo_ent.append((i, j, a))
            if b:
                up_ent.append((j, i, b))
    lo = Matrix.from_entries(field, n, n, lo_ent)
    up = Matrix.from_entries(field, n, n, up_ent)
    perm = list(range(n))
    rng.shuffle(perm)
    p = Matrix.selection(field, n, perm)
    return p @ lo @ up


# -- float side ------------------------------------------------------------


def min_eigenvalue_symmetric(m, tol: float = 1e-10) -> float:
    """Smallest eigenvalue of a symmetric float matrix within tol."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("square matrix required")
    if a.size == 0:
        return 0.0
    if not np.all(np.isfinite(a)):
        raise ValidationError("non-finite entries")
    if np.max(np.abs(a - a.T)) > tol:
        raise ValidationError("matrix is not symmetric within tol")
    sym = (a + a.T) / 2.0
    return float(np.linalg.eigvalsh(sym)[0])
