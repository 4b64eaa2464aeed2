"""Dense exact matrices over a ring: the common currency of all verification.

Entries are stored as canonical payloads; determinants use the division-free
Berkowitz algorithm and inverses come from the characteristic polynomial, so
everything works over any of the ring kinds.
"""

from __future__ import annotations

from .errors import DescriptorMismatch, NotAUnit
from .rings import RingElement


class Matrix:
    """Immutable nrows x ncols matrix over ``ring``."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring, rows):
        self.ring = ring
        canon_rows = []
        for row in rows:
            canon_rows.append(tuple(self._canon_entry(e) for e in row))
        self.rows = tuple(canon_rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged rows")

    def _canon_entry(self, e):
        if isinstance(e, RingElement):
            if e.ring != self.ring:
                raise DescriptorMismatch(f"entry over {e.ring}, matrix over {self.ring}")
            return e.payload
        if isinstance(e, int):
            return self.ring.from_int(e)
        if isinstance(e, str):
            return self.ring.parse_payload(e)
        return self.ring.canon(e)

    # constructors ---------------------------------------------------------
    @classmethod
    def identity(cls, ring, n):
        one, zero = ring.one_p(), ring.zero_p()
        return cls(ring, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, nrows, ncols=None):
        zero = ring.zero_p()
        ncols = nrows if ncols is None else ncols
        return cls(ring, [[zero] * ncols for _ in range(nrows)])

    @classmethod
    def diagonal(cls, ring, entries):
        entries = [e.payload if isinstance(e, RingElement) else ring.from_int(e) if isinstance(e, int) else e for e in entries]
        zero = ring.zero_p()
        n = len(entries)
        return cls(ring, [[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, ring, blocks):
        n = sum(b.nrows for b in blocks)
        zero = ring.zero_p()
        rows = [[zero] * n for _ in range(n)]
        off = 0
        for b in blocks:
            if b.ring != ring:
                raise DescriptorMismatch("block over a different ring")
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[off + i][off + j] = b.rows[i][j]
            off += b.nrows
        return cls(ring, rows)

    @classmethod
    def permutation(cls, ring, images):
        """Matrix sending basis vector j to basis vector images[j] (0-based)."""
        n = len(images)
        one, zero = ring.one_p(), ring.zero_p()
        rows = [[zero] * n for _ in range(n)]
        for j, i in enumerate(images):
            rows[i][j] = one
        return cls(ring, rows)

    # accessors ------------------------------------------------------------
    def entry(self, i, j):
        return RingElement(self.ring, self.rows[i][j])

    def is_square(self):
        return self.nrows == self.ncols

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __ne__(self, other):
        return not self.__eq__(other)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        self._compat(other)
        R = self.ring
        return Matrix(R, [
            [R.add(a, b) for a, b in zip(ra, rb)]
            for ra, rb in zip(self.rows, other.rows)
        ])

    def __sub__(self, other):
        self._compat(other)
        R = self.ring
        return Matrix(R, [
            [R.sub(a, b) for a, b in zip(ra, rb)]
            for ra, rb in zip(self.rows, other.rows)
        ])

    def __neg__(self):
        R = self.ring
        return Matrix(R, [[R.neg(a) for a in row] for row in self.rows])

    def _compat(self, other):
        if not isinstance(other, Matrix) or other.ring != self.ring:
            raise DescriptorMismatch("matrix rings differ")

    def __matmul__(self, other):
        self._compat(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        R = self.ring
        zero = R.zero_p()
        bt = list(zip(*other.rows))
        out = []
        for row in self.rows:
            out_row = []
            for col in bt:
                acc = zero
                for a, b in zip(row, col):
                    if a == zero or b == zero:
                        continue
                    acc = R.add(acc, R.mul(a, b))
                out_row.append(acc)
            out.append(out_row)
        return Matrix(R, out)

    __mul__ = __matmul__

    def scale(self, c):
        c = c.payload if isinstance(c, RingElement) else self.ring.from_int(c)
        R = self.ring
        return Matrix(R, [[R.mul(c, a) for a in row] for row in self.rows])

    def transpose(self):
        return Matrix(self.ring, list(zip(*self.rows)))

    def is_identity(self):
        return self.is_square() and self == Matrix.identity(self.ring, self.nrows)

    def map_entries(self, fn, target_ring=None):
        """Apply ``fn`` (RingElement -> RingElement) entry-wise."""
        target = target_ring or self.ring
        return Matrix(target, [
            [fn(RingElement(self.ring, a)) for a in row] for row in self.rows
        ])

    # determinant and inverse ----------------------------------------------
    def charpoly(self):
        """Coefficients [c0..cn] of det(tI - A) = c0*t^n + ... + cn (Berkowitz)."""
        if not self.is_square():
            raise ValueError("characteristic polynomial of a non-square matrix")
        R = self.ring
        n = self.nrows
        if n == 0:
            return [R.one_p()]
        A = self.rows
        one, zero = R.one_p(), R.zero_p()
        coeffs = [one, R.neg(A[0][0])]
        for i in range(1, n):
            a = A[i][i]
            row = [A[i][j] for j in range(i)]
            col = [A[j][i] for j in range(i)]
            sub = [[A[p][q] for q in range(i)] for p in range(i)]
            # sequence 1, -a, -R M^j C
            seq = [one, R.neg(a)]
            vec = col
            for _ in range(i):
                dot = zero
                for x, y in zip(row, vec):
                    dot = R.add(dot, R.mul(x, y))
                seq.append(R.neg(dot))
                vec = [
                    _dot(R, sub_row, vec) for sub_row in sub
                ]
            new = [zero] * (i + 2)
            for r in range(i + 2):
                acc = zero
                for c in range(min(r, len(coeffs) - 1) + 1):
                    if r - c < len(seq):
                        acc = R.add(acc, R.mul(seq[r - c], coeffs[c]))
                new[r] = acc
            coeffs = new
        return coeffs

    def det(self):
        coeffs = self.charpoly()
        n = self.nrows
        c_n = coeffs[-1]
        R = self.ring
        det_p = c_n if n % 2 == 0 else R.neg(c_n)
        return RingElement(R, det_p)

    def inverse(self):
        """Exact inverse via the characteristic polynomial; det must be a unit."""
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        R = self.ring
        n = self.nrows
        coeffs = self.charpoly()
        c_n = coeffs[-1]
        if R.is_zero_p(c_n):
            raise NotAUnit("matrix determinant is zero", witness=0)
        # A * (c0 A^{n-1} + c1 A^{n-2} + ... + c_{n-1} I) = -c_n I
        acc = Matrix.zeros(R, n)
        for c in coeffs[:-1]:
            acc = acc @ self
            acc = acc + Matrix.identity(R, n).scale(RingElement(R, c))
        neg_cn_inv = R.neg(R.inv(c_n))
        return acc.scale(RingElement(R, neg_cn_inv))

    # formatting -----------------------------------------------------------
    def to_lists(self):
        return [
            [self.ring.format_payload(a) for a in row] for row in self.rows
        ]

    def __repr__(self):
        body = "; ".join(
            ", ".join(self.ring.format_payload(a) for a in row) for row in self.rows
        )
        return f"[{body}]"


def _dot(R, xs, ys):
    acc = R.zero_p()
    for x, y in zip(xs, ys):
        acc = R.add(acc, R.mul(x, y))
    return acc


def matrix_from_literals(ring, rows):
    """Row-major lists of element literals (strings or ints) -> Matrix."""
    return Matrix(ring, rows)


SquareMatrix = Matrix
