"""Quadratic spaces, hyperbolic forms and ambient gram matrices.

Conventions: q(z) = (1/2) z^T phi z with phi the symmetric gram matrix of the
bilinear form, and a matrix M is orthogonal for Phi when M^T Phi M = Phi
exactly.  Two basis orderings of Q perp H(R)^m are supported: Grouped
(Q, P, P*) and Interleaved (hyperbolic pairs adjacent), conjugate under a
fixed shuffle permutation.
"""

from __future__ import annotations

import enum

from .errors import IsotropicVector, NotDiagonal, NotInRing
from .matrices import Matrix
from .rings import RingElement


class Ordering(enum.Enum):
    GROUPED = "grouped"
    INTERLEAVED = "interleaved"

    @classmethod
    def parse(cls, text):
        return cls(str(text).strip().lower())


class QuadraticSpace:
    """Rank-n quadratic space given by an invertible symmetric gram matrix."""

    def __init__(self, ring, gram, diagonal=None):
        if isinstance(gram, (list, tuple)):
            gram = Matrix(ring, gram)
        if not gram.is_square():
            raise NotInRing("gram matrix must be square")
        self.ring = ring
        self.n = gram.nrows
        self.gram = gram
        if gram != gram.transpose():
            raise NotInRing("gram matrix must be symmetric")
        if not gram.det().is_unit():
            raise NotInRing("gram determinant must be a unit")
        if diagonal is None:
            diagonal = all(
                ring.is_zero_p(gram.rows[i][j])
                for i in range(self.n)
                for j in range(self.n)
                if i != j
            )
        if diagonal:
            for i in range(self.n):
                if any(not ring.is_zero_p(gram.rows[i][j]) for j in range(self.n) if j != i):
                    raise NotDiagonal("diagonal flag set but off-diagonal entries present")
                if not ring.is_unit(gram.rows[i][i]):
                    raise NotInRing("diagonal gram entries must be units")
        self.diagonal = diagonal

    @classmethod
    def diagonal_space(cls, ring, entries):
        return cls(ring, Matrix.diagonal(ring, list(entries)), diagonal=True)

    @classmethod
    def hyperbolic(cls, ring, planes):
        """phi = psi~_planes, the rank-2*planes split form."""
        return cls(ring, hyperbolic_gram(ring, planes, Ordering.INTERLEAVED))

    def is_hyperbolic(self):
        if self.n % 2:
            return False
        return self.gram == hyperbolic_gram(self.ring, self.n // 2, Ordering.INTERLEAVED)

    def phi_inverse(self):
        ring = self.ring
        if self.diagonal:
            return Matrix.diagonal(
                ring, [ring.inv(self.gram.rows[i][i]) for i in range(self.n)]
            )
        return self.gram.inverse()

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticSpace)
            and other.ring == self.ring
            and other.gram == self.gram
        )

    def __repr__(self):
        return f"QuadraticSpace(n={self.n}, ring={self.ring})"


def hyperbolic_gram(ring, m, ordering):
    """Gram matrix of H(R)^m: adjacent 0/1 pairs, or [[0,I],[I,0]] grouped."""
    if m < 1:
        raise NotInRing("need at least one hyperbolic plane")
    ordering = Ordering(ordering)
    one, zero = ring.one_p(), ring.zero_p()
    n = 2 * m
    rows = [[zero] * n for _ in range(n)]
    if ordering is Ordering.INTERLEAVED:
        for i in range(m):
            rows[2 * i][2 * i + 1] = one
            rows[2 * i + 1][2 * i] = one
    else:
        for i in range(m):
            rows[i][m + i] = one
            rows[m + i][i] = one
    return Matrix(ring, rows)


class AmbientForm:
    """Gram matrix of q perp h^m in one of the two basis orderings."""

    def __init__(self, q, m, ordering=Ordering.INTERLEAVED):
        if m < 1:
            raise NotInRing("need at least one hyperbolic plane")
        self.q = q
        self.m = m
        self.ordering = Ordering(ordering)
        self.size = q.n + 2 * m
        ring = q.ring
        hyp = hyperbolic_gram(ring, m, self.ordering)
        self.gram = Matrix.block_diag(ring, [q.gram, hyp])

    @property
    def ring(self):
        return self.q.ring

    def __eq__(self, other):
        return (
            isinstance(other, AmbientForm)
            and other.q == self.q
            and other.m == self.m
            and other.ordering == self.ordering
        )

    def __repr__(self):
        return f"AmbientForm(n={self.q.n}, m={self.m}, {self.ordering.value})"


def ambient_gram(q, m, ordering=Ordering.INTERLEAVED):
    return AmbientForm(q, m, ordering)


def shuffle_images(n, m):
    """0-based permutation: grouped index -> interleaved index."""
    images = list(range(n))
    for i in range(m):
        images.append(n + 2 * i)        # P_i  -> A_i
    for i in range(m):
        images.append(n + 2 * i + 1)    # P*_i -> B_i
    return images


def shuffle_matrix(ring, n, m):
    return Matrix.permutation(ring, shuffle_images(n, m))


def grouped_to_interleaved(M, n, m):
    S = shuffle_matrix(M.ring, n, m)
    return S @ M @ S.transpose()


def interleaved_to_grouped(M, n, m):
    S = shuffle_matrix(M.ring, n, m)
    return S.transpose() @ M @ S


def is_orthogonal(M, form):
    """Exact test M^T Phi M = Phi; ``form`` is an AmbientForm or a gram Matrix."""
    gram = form.gram if isinstance(form, (AmbientForm, QuadraticSpace)) else form
    if M.nrows != gram.nrows:
        return False
    return M.transpose() @ gram @ M == gram


def quadratic_value(q, v):
    """q(v) = (1/2) v^T phi v; needs 2 invertible in the ring."""
    ring = q.ring
    col = Matrix(ring, [[x] for x in v])
    val = (col.transpose() @ q.gram @ col).entry(0, 0)
    half = RingElement(ring, ring.inv(ring.from_int(2)))
    return half * val


def reflection(q, v):
    """Reflection along v: z -> z - (B(v,z)/q(v)) v.  q(v) must be a unit."""
    ring = q.ring
    v = [ring(x) if not isinstance(x, RingElement) else x for x in v]
    qv = quadratic_value(q, v)
    if not qv.is_unit():
        raise IsotropicVector(f"q(v) = {qv} is not a unit")
    qv_inv = qv.inverse()
    row = Matrix(ring, [[e.payload for e in v]])
    col = row.transpose()
    return Matrix.identity(ring, q.n) - (col @ (row @ q.gram)).scale(qv_inv)


def d_vector(q):
    """Inverses of the diagonal gram entries (d_j = phi_jj^{-1})."""
    if not q.diagonal:
        raise NotDiagonal("d_vector needs a diagonal quadratic space")
    ring = q.ring
    return [RingElement(ring, ring.inv(q.gram.rows[i][i])) for i in range(q.n)]
