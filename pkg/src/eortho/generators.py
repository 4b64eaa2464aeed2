"""Generator letters for the orthogonal group of q perp h^m and their exact
matrix realizations.

Letter kinds: Roy's elementary transformations E_alpha / E*_beta (full m x n
parameter matrices or single nonzero entries), classical elementary orthogonal
generators oe_kl(a) on the hyperbolic part, torus and swap-torus letters
tau_u / sigma_u per hyperbolic plane, block embeddings A perp I_2m of O(q),
and formal inverses.  Words are finite letter sequences sharing a context.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DescriptorMismatch,
    NotHyperbolicForm,
    PreconditionViolated,
)
from .matrices import Matrix
from .quadform import (
    AmbientForm,
    Ordering,
    QuadraticSpace,
    d_vector,
    grouped_to_interleaved,
    interleaved_to_grouped,
    is_orthogonal,
)
from .rings import RingElement, format_element, format_ring, parse_element, parse_ring


# ---------------------------------------------------------------------------
# letters and words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EAlpha:
    """E_alpha for alpha: Q -> P, an m x n matrix."""

    alpha: Matrix


@dataclass(frozen=True)
class EBetaStar:
    """E*_beta for beta: Q -> P*, an m x n matrix."""

    beta: Matrix


@dataclass(frozen=True)
class EAlphaSingle:
    """alpha_{ij}(x): single nonzero entry x at plane i, column j (1-based)."""

    i: int
    j: int
    x: RingElement


@dataclass(frozen=True)
class EBetaStarSingle:
    i: int
    j: int
    y: RingElement


@dataclass(frozen=True)
class OE:
    """oe_{kl}(a) = I + a e_kl - a e_{sigma(l) sigma(k)}, k < l, k != sigma(l)."""

    k: int
    l: int
    a: RingElement


@dataclass(frozen=True)
class Tau:
    """[u] perp [u^-1] on one hyperbolic plane."""

    u: RingElement
    plane: int


@dataclass(frozen=True)
class SigmaU:
    """[u] top [u^-1] (antidiagonal) on one hyperbolic plane."""

    u: RingElement
    plane: int


@dataclass(frozen=True)
class BlockOq:
    """A perp I_2m for an orthogonal A on the Q block."""

    matrix: Matrix


@dataclass(frozen=True)
class Inverse:
    letter: object


DSER_KINDS = (EAlpha, EBetaStar, EAlphaSingle, EBetaStarSingle)


@dataclass(frozen=True)
class WordContext:
    space: QuadraticSpace
    m: int
    ordering: Ordering = Ordering.INTERLEAVED

    @property
    def n(self):
        return self.space.n

    @property
    def ring(self):
        return self.space.ring

    @property
    def size(self):
        return self.space.n + 2 * self.m

    def form(self):
        return AmbientForm(self.space, self.m, self.ordering)


@dataclass(frozen=True)
class Word:
    context: WordContext
    letters: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def concat(self, other):
        if other.context != self.context:
            raise DescriptorMismatch("word contexts differ")
        return Word(self.context, self.letters + other.letters)

    def inverse(self):
        return Word(
            self.context, tuple(letter_inverse(l) for l in reversed(self.letters))
        )


# ---------------------------------------------------------------------------
# index bookkeeping (all 1-based, matching the generator notation)
# ---------------------------------------------------------------------------


def sigma_pair(l, n, m):
    """Hyperbolic pairing: partner of basis index l in the interleaved basis."""
    size = n + 2 * m
    if not 1 <= l <= size:
        raise PreconditionViolated(f"index {l} out of range 1..{size}")
    if l <= n:
        if n % 2:
            raise PreconditionViolated("pairing on the Q block needs even rank")
        return l + 1 if l % 2 else l - 1
    t = l - n
    return n + (t + 1 if t % 2 else t - 1)


def plane_x_index(n, i):
    """Interleaved index of the P coordinate of plane i."""
    return n + 2 * i - 1


def plane_f_index(n, i):
    """Interleaved index of the P* coordinate of plane i."""
    return n + 2 * i


# ---------------------------------------------------------------------------
# matrix realizations
# ---------------------------------------------------------------------------


def _half(ring):
    return ring.inv(ring.from_int(2))


def _blocks(ring, grid):
    rows = []
    for brow in grid:
        for i in range(brow[0].nrows):
            row = []
            for b in brow:
                row.extend(b.rows[i])
            rows.append(row)
    return Matrix(ring, rows)


def _grouped_dser(context, mat, star):
    """Grouped block matrix of E_alpha (star=False) or E*_beta (star=True)."""
    space, m = context.space, context.m
    ring = space.ring
    n = space.n
    if mat.nrows != m or mat.ncols != n:
        raise PreconditionViolated(f"parameter matrix must be {m}x{n}")
    adj = space.phi_inverse() @ mat.transpose()  # alpha*: n x m
    prod = mat @ adj  # m x m
    half = RingElement(ring, _half(ring))
    half_prod = prod.scale(half)
    I_n = Matrix.identity(ring, n)
    I_m = Matrix.identity(ring, m)
    Z_nm = Matrix.zeros(ring, n, m)
    Z_mn = Matrix.zeros(ring, m, n)
    Z_mm = Matrix.zeros(ring, m, m)
    if not star:
        grid = [
            [I_n, Z_nm, -adj],
            [mat, I_m, -half_prod],
            [Z_mn, Z_mm, I_m],
        ]
    else:
        grid = [
            [I_n, -adj, Z_nm],
            [Z_mn, I_m, Z_mm],
            [mat, -half_prod, I_m],
        ]
    return _blocks(ring, grid)


def single_to_full(letter, context):
    """Promote a single-entry letter to its full-matrix form."""
    ring = context.ring
    m, n = context.m, context.n
    rows = [[ring.zero_p()] * n for _ in range(m)]
    if isinstance(letter, EAlphaSingle):
        rows[letter.i - 1][letter.j - 1] = letter.x.payload
        return EAlpha(Matrix(ring, rows))
    if isinstance(letter, EBetaStarSingle):
        rows[letter.i - 1][letter.j - 1] = letter.y.payload
        return EBetaStar(Matrix(ring, rows))
    raise PreconditionViolated(f"not a single letter: {letter!r}")


def _n1_single(context, letter):
    """Interleaved single-letter matrix for a diagonal space (d_j formulas)."""
    space = context.space
    ring = space.ring
    n = space.n
    d = d_vector(space)
    half = RingElement(ring, _half(ring))
    M = Matrix.identity(ring, context.size)
    rows = [list(r) for r in M.rows]
    if isinstance(letter, EAlphaSingle):
        i, j, x = letter.i, letter.j, letter.x
        A, B = plane_x_index(n, i), plane_f_index(n, i)
        rows[A - 1][j - 1] = x.payload
        rows[j - 1][B - 1] = (-(d[j - 1] * x)).payload
        rows[A - 1][B - 1] = (-(half * d[j - 1] * x * x)).payload
    else:
        i, j, y = letter.i, letter.j, letter.y
        A, B = plane_x_index(n, i), plane_f_index(n, i)
        rows[B - 1][j - 1] = y.payload
        rows[j - 1][A - 1] = (-(d[j - 1] * y)).payload
        rows[B - 1][A - 1] = (-(half * d[j - 1] * y * y)).payload
    return Matrix(ring, rows)


def dser_letter_matrix(letter, context):
    """Matrix of a DSER letter (E_alpha, E*_beta or a single entry)."""
    if isinstance(letter, (EAlphaSingle, EBetaStarSingle)):
        if context.ordering is Ordering.INTERLEAVED and context.space.diagonal:
            return _n1_single(context, letter)
        letter = single_to_full(letter, context)
    if isinstance(letter, EAlpha):
        grouped = _grouped_dser(context, letter.alpha, star=False)
    elif isinstance(letter, EBetaStar):
        grouped = _grouped_dser(context, letter.beta, star=True)
    else:
        raise PreconditionViolated(f"not a DSER letter: {letter!r}")
    if context.ordering is Ordering.GROUPED:
        return grouped
    return grouped_to_interleaved(grouped, context.n, context.m)


def oe_matrix_relaxed(k, l, a, context):
    """I + a e_kl - a e_{sigma(l) sigma(k)} without the k != sigma(l) guard.

    For a Q-block pair with l = sigma(k) the two terms cancel and the result
    is the identity; generator letters stay strict (see oe_matrix).
    """
    n, m = context.n, context.m
    size = context.size
    if not (1 <= k <= size and 1 <= l <= size):
        raise PreconditionViolated(f"indices ({k},{l}) out of range")
    if k >= l:
        raise PreconditionViolated("oe generators need k < l")
    if min(k, l) <= n and not context.space.is_hyperbolic():
        raise NotHyperbolicForm(
            "oe indices in the Q block need the fully hyperbolic form"
        )
    sl, sk = sigma_pair(l, n, m), sigma_pair(k, n, m)
    ring = context.ring
    a = ring(a) if not isinstance(a, RingElement) else a
    rows = [list(r) for r in Matrix.identity(ring, size).rows]
    rows[k - 1][l - 1] = ring.add(rows[k - 1][l - 1], a.payload)
    rows[sl - 1][sk - 1] = ring.sub(rows[sl - 1][sk - 1], a.payload)
    M = Matrix(ring, rows)
    if context.ordering is Ordering.GROUPED:
        return interleaved_to_grouped(M, n, m)
    return M


def oe_matrix(k, l, a, context):
    """Classical elementary orthogonal generator on the interleaved basis."""
    if k == sigma_pair(l, context.n, context.m):
        raise PreconditionViolated("oe generators need k != sigma(l)")
    return oe_matrix_relaxed(k, l, a, context)


def letter_matrix(letter, context):
    """Matrix of any letter kind in the context's ordering."""
    ring = context.ring
    n, m = context.n, context.m
    if isinstance(letter, DSER_KINDS):
        return dser_letter_matrix(letter, context)
    if isinstance(letter, OE):
        return oe_matrix(letter.k, letter.l, letter.a, context)
    if isinstance(letter, Inverse):
        return letter_matrix(letter_inverse(letter.letter), context)
    if isinstance(letter, BlockOq):
        A = letter.matrix
        if A.nrows != n:
            raise PreconditionViolated("block must match the rank of Q")
        return Matrix.block_diag(ring, [A, Matrix.identity(ring, 2 * m)])
    if isinstance(letter, (Tau, SigmaU)):
        if not 1 <= letter.plane <= m:
            raise PreconditionViolated(f"plane {letter.plane} out of range 1..{m}")
        rows = [list(r) for r in Matrix.identity(ring, context.size).rows]
        A = plane_x_index(n, letter.plane) - 1
        B = plane_f_index(n, letter.plane) - 1
        u = letter.u.payload
        u_inv = ring.inv(u)
        if isinstance(letter, Tau):
            rows[A][A], rows[B][B] = u, u_inv
        else:
            rows[A][A] = rows[B][B] = ring.zero_p()
            rows[A][B], rows[B][A] = u, u_inv
        M = Matrix(ring, rows)
        if context.ordering is Ordering.GROUPED:
            return interleaved_to_grouped(M, n, m)
        return M
    raise PreconditionViolated(f"unknown letter kind {letter!r}")


def letter_inverse(letter):
    """Structural inverse (E_alpha -> E_{-alpha}, oe(a) -> oe(-a), ...)."""
    if isinstance(letter, EAlpha):
        return EAlpha(-letter.alpha)
    if isinstance(letter, EBetaStar):
        return EBetaStar(-letter.beta)
    if isinstance(letter, EAlphaSingle):
        return EAlphaSingle(letter.i, letter.j, -letter.x)
    if isinstance(letter, EBetaStarSingle):
        return EBetaStarSingle(letter.i, letter.j, -letter.y)
    if isinstance(letter, OE):
        return OE(letter.k, letter.l, -letter.a)
    if isinstance(letter, Tau):
        return Tau(letter.u.inverse(), letter.plane)
    if isinstance(letter, SigmaU):
        return letter  # involution
    if isinstance(letter, BlockOq):
        return BlockOq(letter.matrix.inverse())
    if isinstance(letter, Inverse):
        return letter.letter
    raise PreconditionViolated(f"unknown letter kind {letter!r}")


def word_matrix(word, context=None):
    """Ordered product of the letter matrices of a word."""
    context = context or word.context
    M = Matrix.identity(context.ring, context.size)
    for letter in word.letters:
        M = M @ letter_matrix(letter, context)
    return M


def commutator_word(context, g, h):
    """[g, h] = g h g^-1 h^-1 as a four-letter word."""
    return Word(context, (g, h, letter_inverse(g), letter_inverse(h)))


def map_letter(letter, fn, target_ring):
    """Apply ``fn`` (RingElement -> RingElement over target_ring) to all parameters."""
    if isinstance(letter, EAlpha):
        return EAlpha(letter.alpha.map_entries(fn, target_ring))
    if isinstance(letter, EBetaStar):
        return EBetaStar(letter.beta.map_entries(fn, target_ring))
    if isinstance(letter, EAlphaSingle):
        return EAlphaSingle(letter.i, letter.j, fn(letter.x))
    if isinstance(letter, EBetaStarSingle):
        return EBetaStarSingle(letter.i, letter.j, fn(letter.y))
    if isinstance(letter, OE):
        return OE(letter.k, letter.l, fn(letter.a))
    if isinstance(letter, Tau):
        return Tau(fn(letter.u), letter.plane)
    if isinstance(letter, SigmaU):
        return SigmaU(fn(letter.u), letter.plane)
    if isinstance(letter, BlockOq):
        return BlockOq(letter.matrix.map_entries(fn, target_ring))
    if isinstance(letter, Inverse):
        return Inverse(map_letter(letter.letter, fn, target_ring))
    raise PreconditionViolated(f"unknown letter kind {letter!r}")


def map_word(word, fn, target_context):
    return Word(
        target_context,
        tuple(map_letter(l, fn, target_context.ring) for l in word.letters),
    )


def is_dser_letter(letter):
    if isinstance(letter, Inverse):
        return is_dser_letter(letter.letter)
    return isinstance(letter, DSER_KINDS)


def _touches_only_hyperbolic(letter, n):
    if isinstance(letter, Inverse):
        return _touches_only_hyperbolic(letter.letter, n)
    if isinstance(letter, (Tau, SigmaU)):
        return True
    if isinstance(letter, OE):
        return letter.k > n and letter.l > n
    return False


def verify_rao_factorization(eta, w1, w2):
    """Check eta = word(w1) * word(w2) with w1 elementary and w2 in O(h^m)."""
    context = w1.context
    if w2.context != context:
        return False
    if not all(is_dser_letter(l) for l in w1.letters):
        return False
    if not all(_touches_only_hyperbolic(l, context.n) for l in w2.letters):
        return False
    if eta.nrows != context.size:
        return False
    return eta == word_matrix(w1) @ word_matrix(w2)


# ---------------------------------------------------------------------------
# JSON wire format for letters and words
# ---------------------------------------------------------------------------


def letter_to_json(letter):
    if isinstance(letter, EAlpha):
        return {"kind": "EAlpha", "alpha": letter.alpha.to_lists()}
    if isinstance(letter, EBetaStar):
        return {"kind": "EBetaStar", "beta": letter.beta.to_lists()}
    if isinstance(letter, EAlphaSingle):
        return {"kind": "EAlphaSingle", "i": letter.i, "j": letter.j,
                "x": format_element(letter.x)}
    if isinstance(letter, EBetaStarSingle):
        return {"kind": "EBetaStarSingle", "i": letter.i, "j": letter.j,
                "y": format_element(letter.y)}
    if isinstance(letter, OE):
        return {"kind": "OE", "k": letter.k, "l": letter.l,
                "a": format_element(letter.a)}
    if isinstance(letter, Tau):
        return {"kind": "Tau", "u": format_element(letter.u), "plane": letter.plane}
    if isinstance(letter, SigmaU):
        return {"kind": "SigmaU", "u": format_element(letter.u), "plane": letter.plane}
    if isinstance(letter, BlockOq):
        return {"kind": "BlockOq", "matrix": letter.matrix.to_lists()}
    if isinstance(letter, Inverse):
        return {"kind": "Inverse", "letter": letter_to_json(letter.letter)}
    raise PreconditionViolated(f"unknown letter kind {letter!r}")


def letter_from_json(data, ring):
    kind = data["kind"]
    if kind == "EAlpha":
        return EAlpha(Matrix(ring, data["alpha"]))
    if kind == "EBetaStar":
        return EBetaStar(Matrix(ring, data["beta"]))
    if kind == "EAlphaSingle":
        return EAlphaSingle(data["i"], data["j"], parse_element(ring, data["x"]))
    if kind == "EBetaStarSingle":
        return EBetaStarSingle(data["i"], data["j"], parse_element(ring, data["y"]))
    if kind == "OE":
        return OE(data["k"], data["l"], parse_element(ring, data["a"]))
    if kind == "Tau":
        return Tau(parse_element(ring, data["u"]), data["plane"])
    if kind == "SigmaU":
        return SigmaU(parse_element(ring, data["u"]), data["plane"])
    if kind == "BlockOq":
        return BlockOq(Matrix(ring, data["matrix"]))
    if kind == "Inverse":
        return Inverse(letter_from_json(data["letter"], ring))
    raise PreconditionViolated(f"unknown letter kind {kind!r}")


def context_to_json(context):
    return {
        "n": context.n,
        "m": context.m,
        "ordering": context.ordering.value,
        "ring": format_ring(context.ring),
        "phi": context.space.gram.to_lists(),
    }


def context_from_json(data):
    ring = parse_ring(data["ring"])
    space = QuadraticSpace(ring, data["phi"])
    return WordContext(space, data["m"], Ordering.parse(data["ordering"]))


def word_to_json(word):
    return {
        "context": context_to_json(word.context),
        "letters": [letter_to_json(l) for l in word.letters],
    }


def word_from_json(data):
    context = context_from_json(data["context"])
    letters = tuple(letter_from_json(l, context.ring) for l in data["letters"])
    return Word(context, letters)
