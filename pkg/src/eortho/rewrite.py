"""Constructive rewritings of generator words.

Three engines live here: the translation between DSER letters and classical
elementary orthogonal generators over the fully hyperbolic form, the
conjugation normalizer (torus, swap-torus, block-orthogonal and
hyperbolic-oe conjugators, applied letter by letter), and the splitting of a
2x2 orthogonal matrix of the hyperbolic plane over a local ring.

Every rule emits words of DSER letters whose matrix is g * e * g^-1 exactly;
the test-suite and the certificate checker re-multiply, never trust.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    NotHyperbolicForm,
    NotLocalRing,
    NotOrthogonal,
    PreconditionViolated,
    SamePlane,
    UnsupportedConjugator,
)
from .matrices import Matrix
from .quadform import Ordering, hyperbolic_gram, is_orthogonal
from .rings import RingElement
from .generators import (
    DSER_KINDS,
    BlockOq,
    EAlpha,
    EAlphaSingle,
    EBetaStar,
    EBetaStarSingle,
    Inverse,
    OE,
    SigmaU,
    Tau,
    Word,
    dser_letter_matrix,
    letter_inverse,
    letter_matrix,
    oe_matrix,
    plane_f_index,
    plane_x_index,
    sigma_pair,
    single_to_full,
    word_matrix,
)


# ---------------------------------------------------------------------------
# DSER <-> classical elementary orthogonal letters (hyperbolic form)
# ---------------------------------------------------------------------------


def dser_to_oe(letter, n, m, context=None):
    """Single DSER letter as one oe generator; needs phi = psi~_{n/2}."""
    if context is not None and not context.space.is_hyperbolic():
        raise NotHyperbolicForm("dser_to_oe needs the fully hyperbolic form")
    if n % 2:
        raise NotHyperbolicForm("dser_to_oe needs even rank")
    if isinstance(letter, EAlphaSingle):
        return OE(sigma_pair(letter.j, n, m), n + 2 * letter.i, -letter.x)
    if isinstance(letter, EBetaStarSingle):
        return OE(sigma_pair(letter.j, n, m), n + 2 * letter.i - 1, -letter.y)
    raise PreconditionViolated(f"expected a single DSER letter, got {letter!r}")


def oe_to_dser(k, l, a, n, m):
    """oe_{kl}(a) as a word of DSER letters (a commutator or a single letter).

    Case selection over the index positions; auxiliary indices are fixed to 1.
    Returns a tuple of letters.
    """
    if n % 2 or n < 2:
        raise NotHyperbolicForm("oe_to_dser needs even rank >= 2")
    if m < 1:
        raise PreconditionViolated("need at least one hyperbolic plane")
    size = n + 2 * m
    if not (1 <= k <= size and 1 <= l <= size):
        raise PreconditionViolated(f"indices ({k},{l}) out of range")
    if k >= l:
        raise PreconditionViolated("oe generators need k < l")
    if l == sigma_pair(k, n, m) and k > n:
        # a Q-block pair with l = sigma(k) degenerates to the identity and the
        # case-1 commutator below still matches it exactly
        raise SamePlane(f"indices ({k},{l}) form one hyperbolic pair")
    ring = a.ring
    one = ring.one

    def comm(A, B):
        return (A, B, letter_inverse(A), letter_inverse(B))

    if k <= n and l <= n:
        i = 1
        return comm(EAlphaSingle(i, l, a), EBetaStarSingle(i, sigma_pair(k, n, m), one))
    if k <= n < l:
        t = l - n
        if t % 2 == 0:
            return (EAlphaSingle(t // 2, sigma_pair(k, n, m), -a),)
        return (EBetaStarSingle((t + 1) // 2, sigma_pair(k, n, m), -a),)
    ti, tj = k - n, l - n
    i, j = (ti + 1) // 2, (tj + 1) // 2
    s = 1
    ss = sigma_pair(s, n, m)
    if ti % 2 and tj % 2:
        return comm(EAlphaSingle(i, s, a), EBetaStarSingle(j, ss, -one))
    if ti % 2:
        return comm(EAlphaSingle(i, s, a), EAlphaSingle(j, ss, -one))
    if tj % 2:
        return comm(EBetaStarSingle(i, s, a), EBetaStarSingle(j, ss, -one))
    return comm(EBetaStarSingle(i, s, a), EAlphaSingle(j, ss, -one))


def oe_to_dser_word(context, k, l, a):
    return Word(context, oe_to_dser(k, l, a, context.n, context.m))


# ---------------------------------------------------------------------------
# conjugation rules
# ---------------------------------------------------------------------------


def _half_times(ring, value):
    return RingElement(ring, ring.inv(ring.from_int(2))) * value


def _single_parts(letter):
    if isinstance(letter, EAlphaSingle):
        return "a", letter.i, letter.j, letter.x
    return "b", letter.i, letter.j, letter.y


def _make_single(kind, i, j, value):
    return EAlphaSingle(i, j, value) if kind == "a" else EBetaStarSingle(i, j, value)


def _row_products(space, mat):
    """Gram products row_p phi^{-1} row_r^T; zero means the rows commute."""
    inv = space.phi_inverse()
    prod = mat @ inv @ mat.transpose()
    return prod


def _split_full_letter(letter, context):
    """Full-matrix letter as an exact product of singles, or None.

    Exact whenever the plane rows pairwise commute (row_p phi^{-1} row_r^T = 0
    for p != r); single-plane letters always qualify.
    """
    kind = "a" if isinstance(letter, EAlpha) else "b"
    mat = letter.alpha if kind == "a" else letter.beta
    ring = context.ring
    planes = [
        i for i in range(context.m)
        if any(not ring.is_zero_p(c) for c in mat.rows[i])
    ]
    if len(planes) > 1:
        prod = _row_products(context.space, mat)
        for p in planes:
            for r in planes:
                if p != r and not ring.is_zero_p(prod.rows[p][r]):
                    return None
    out = []
    for i in planes:
        for j in range(context.n):
            c = mat.rows[i][j]
            if not ring.is_zero_p(c):
                out.append(_make_single(kind, i + 1, j + 1, RingElement(ring, c)))
    return out


def normalize_to_singles(letters, context):
    """Rewrite a DSER word into single-entry letters (exact, or raise)."""
    out = []
    for letter in letters:
        if isinstance(letter, Inverse):
            inner = normalize_to_singles([letter.letter], context)
            out.extend(letter_inverse(l) for l in reversed(inner))
            continue
        if isinstance(letter, (EAlphaSingle, EBetaStarSingle)):
            out.append(letter)
            continue
        if isinstance(letter, (EAlpha, EBetaStar)):
            parts = _split_full_letter(letter, context)
            if parts is None:
                raise UnsupportedConjugator(
                    "full letter with non-commuting plane rows cannot be split",
                    letter=letter,
                )
            out.extend(parts)
            continue
        raise UnsupportedConjugator(f"not a DSER letter: {letter!r}", letter=letter)
    return out


def _classify_hyperbolic_oe(k, l, n):
    """Planes (p, r) and coordinate type of an oe letter inside the h^m block."""
    tk, tl = k - n, l - n
    p, r = (tk + 1) // 2, (tl + 1) // 2
    typ = ("x" if tk % 2 else "f") + ("x" if tl % 2 else "f")
    return p, r, typ


def _conj_oe_on_single(g, e, context):
    """Rule table for a hyperbolic-block oe conjugator against a single letter.

    Non-fixed cases are exact 3-letter sandwiches with corrections +-(1/2)c*t,
    the sign +/- according to the correction landing on plane p or r.
    """
    p, r, typ = _classify_hyperbolic_oe(g.k, g.l, context.n)
    c = g.a
    kind, i, j, t = _single_parts(e)
    corr = None
    if typ == "xx":
        if kind == "a" and i == r:
            corr = ("a", p, _half_times(c.ring, c * t))
        elif kind == "b" and i == p:
            corr = ("b", r, -_half_times(c.ring, c * t))
    elif typ == "ff":
        if kind == "a" and i == p:
            corr = ("a", r, -_half_times(c.ring, c * t))
        elif kind == "b" and i == r:
            corr = ("b", p, _half_times(c.ring, c * t))
    elif typ == "fx":
        if kind == "a" and i == p:
            corr = ("b", r, -_half_times(c.ring, c * t))
        elif kind == "a" and i == r:
            corr = ("b", p, _half_times(c.ring, c * t))
    elif typ == "xf":
        if kind == "b" and i == p:
            corr = ("a", r, -_half_times(c.ring, c * t))
        elif kind == "b" and i == r:
            corr = ("a", p, _half_times(c.ring, c * t))
    if corr is None:
        return [e]
    ckind, cplane, cval = corr
    sandwich = _make_single(ckind, cplane, j, cval)
    return [sandwich, e, sandwich]


def _peel_oe_letters(M, context, cap=16):
    """Factor a unipotent orthogonal matrix into oe letters, or raise."""
    ring = context.ring
    n, m = context.n, context.m
    size = context.size
    letters = []
    C = M
    for _ in range(cap):
        if C.is_identity():
            return letters
        picked = None
        for u in range(1, size + 1):
            for v in range(1, size + 1):
                if u == v or v == sigma_pair(u, n, m):
                    continue
                val = C.rows[u - 1][v - 1]
                if ring.is_zero_p(val):
                    continue
                if u < v:
                    picked = OE(u, v, RingElement(ring, val))
                else:
                    su, sv = sigma_pair(u, n, m), sigma_pair(v, n, m)
                    if sv < su:
                        picked = OE(sv, su, -RingElement(ring, val))
                if picked is not None:
                    break
            if picked is not None:
                break
        if picked is None:
            break
        letters.append(picked)
        C = oe_matrix(picked.k, picked.l, -picked.a, context) @ C
    raise UnsupportedConjugator("matrix does not factor into oe letters")


def _conj_dser_by_dser_hyperbolic(g_single, e_single, context):
    """Conjugate one single by another through the oe translation."""
    n, m = context.n, context.m
    g_oe = dser_to_oe(g_single, n, m)
    e_oe = dser_to_oe(e_single, n, m)
    G = oe_matrix(g_oe.k, g_oe.l, g_oe.a, context)
    E = oe_matrix(e_oe.k, e_oe.l, e_oe.a, context)
    Gi = oe_matrix(g_oe.k, g_oe.l, -g_oe.a, context)
    C = G @ E @ Gi
    out = []
    for oe in _peel_oe_letters(C, context):
        out.extend(oe_to_dser(oe.k, oe.l, oe.a, n, m))
    return out


def _scale_plane_row(mat, plane, factor):
    rows = [list(r) for r in mat.rows]
    ring = factor.ring
    rows[plane - 1] = [ring.mul(factor.payload, c) for c in rows[plane - 1]]
    return Matrix(ring, rows)


def conjugate_letter(g, e, context):
    """g * e * g^-1 as a word of DSER letters, for covered conjugators g."""
    if isinstance(e, Inverse):
        return conjugate_letter(g, e.letter, context).inverse()
    if isinstance(g, Inverse):
        return conjugate_letter(letter_inverse(g.letter), e, context)
    if not isinstance(e, DSER_KINDS):
        raise UnsupportedConjugator(f"target {e!r} is not a DSER letter", letter=e)

    if isinstance(g, Tau):
        if isinstance(e, EAlphaSingle):
            x = e.x * g.u if e.i == g.plane else e.x
            return Word(context, (EAlphaSingle(e.i, e.j, x),))
        if isinstance(e, EBetaStarSingle):
            y = e.y * g.u.inverse() if e.i == g.plane else e.y
            return Word(context, (EBetaStarSingle(e.i, e.j, y),))
        if isinstance(e, EAlpha):
            return Word(context, (EAlpha(_scale_plane_row(e.alpha, g.plane, g.u)),))
        return Word(context, (EBetaStar(_scale_plane_row(e.beta, g.plane, g.u.inverse())),))

    if isinstance(g, SigmaU):
        singles = normalize_to_singles([e], context)
        out = []
        for s in singles:
            kind, i, j, t = _single_parts(s)
            if i != g.plane:
                out.append(s)
            elif kind == "a":
                out.append(EBetaStarSingle(i, j, g.u.inverse() * t))
            else:
                out.append(EAlphaSingle(i, j, g.u * t))
        return Word(context, tuple(out))

    if isinstance(g, BlockOq):
        A_inv = g.matrix.inverse()
        if isinstance(e, (EAlphaSingle, EBetaStarSingle)):
            e = single_to_full(e, context)
        if isinstance(e, EAlpha):
            return Word(context, (EAlpha(e.alpha @ A_inv),))
        return Word(context, (EBetaStar(e.beta @ A_inv),))

    if isinstance(g, OE):
        if g.k > context.n and g.l > context.n:
            singles = normalize_to_singles([e], context)
            out = []
            for s in singles:
                out.extend(_conj_oe_on_single(g, s, context))
            return Word(context, tuple(out))
        # oe touching the Q block: only meaningful over the hyperbolic form
        if not context.space.is_hyperbolic():
            raise UnsupportedConjugator(
                "oe conjugator touches the Q block over a non-hyperbolic form",
                letter=g,
            )
        out = []
        for s in normalize_to_singles([e], context):
            s_oe = dser_to_oe(s, context.n, context.m)
            G = oe_matrix(g.k, g.l, g.a, context)
            E = oe_matrix(s_oe.k, s_oe.l, s_oe.a, context)
            Gi = oe_matrix(g.k, g.l, -g.a, context)
            for oe in _peel_oe_letters(G @ E @ Gi, context):
                out.extend(oe_to_dser(oe.k, oe.l, oe.a, context.n, context.m))
        return Word(context, tuple(out))

    if isinstance(g, DSER_KINDS):
        if not context.space.is_hyperbolic():
            raise UnsupportedConjugator(
                "DSER conjugators are only rewritten over the hyperbolic form",
                letter=g,
            )
        g_singles = normalize_to_singles([g], context)
        target = normalize_to_singles([e], context)
        for gs in reversed(g_singles):
            new = []
            for t in target:
                new.extend(_conj_dser_by_dser_hyperbolic(gs, t, context))
            target = new
        return Word(context, tuple(target))

    raise UnsupportedConjugator(f"conjugator {g!r} outside covered families", letter=g)


def conjugate_word(g, e, context=None):
    """Conjugate a DSER word by a word of covered conjugators, letter by letter."""
    context = context or e.context
    letters = normalize_to_singles(list(e.letters), context)
    for idx in range(len(g.letters) - 1, -1, -1):
        gl = g.letters[idx]
        out = []
        for el in letters:
            try:
                w = conjugate_letter(gl, el, context)
            except UnsupportedConjugator as exc:
                exc.index = idx
                raise
            out.extend(w.letters)
        letters = normalize_to_singles(out, context)
    return Word(context, tuple(letters))


# ---------------------------------------------------------------------------
# splitting O(h) over a local ring
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitDiag:
    """alpha = [u] perp [u^-1]."""

    u: RingElement
    tag = "Diag"

    def realize(self):
        ring = self.u.ring
        return Matrix(ring, [[self.u.payload, ring.zero_p()],
                             [ring.zero_p(), ring.inv(self.u.payload)]])


@dataclass(frozen=True)
class SplitAntiDiag:
    """alpha = [u] top [u^-1]."""

    u: RingElement
    tag = "AntiDiag"

    def realize(self):
        ring = self.u.ring
        return Matrix(ring, [[ring.zero_p(), self.u.payload],
                             [ring.inv(self.u.payload), ring.zero_p()]])


def split_orthogonal_h(M):
    """Split a 2x2 orthogonal matrix of the hyperbolic plane.

    det(M) = 1 forces the diagonal shape, det(M) = -1 the antidiagonal one;
    any other determinant square root of 1 witnesses a nontrivial idempotent,
    so the ring cannot be local.
    """
    ring = M.ring
    if M.nrows != 2 or M.ncols != 2:
        raise NotOrthogonal("split_orthogonal_h needs a 2x2 matrix")
    psi = hyperbolic_gram(ring, 1, Ordering.INTERLEAVED)
    if not is_orthogonal(M, psi):
        raise NotOrthogonal("matrix does not preserve the hyperbolic form")
    delta = M.det()
    one = RingElement(ring, ring.one_p())
    if delta == one:
        a, b = M.rows[0]
        c, d = M.rows[1]
        if not (ring.is_zero_p(b) and ring.is_zero_p(c)):
            raise NotLocalRing(
                "det 1 with nonzero off-diagonal entries", witness=delta
            )
        u = RingElement(ring, a)
        if RingElement(ring, d) != u.inverse():
            raise NotLocalRing("diagonal entries are not inverse units", witness=delta)
        return SplitDiag(u)
    if delta == -one:
        # the reduction beta = M psi~ has det 1, so M must be antidiagonal
        b = RingElement(ring, M.rows[0][1])
        if not (ring.is_zero_p(M.rows[0][0]) and ring.is_zero_p(M.rows[1][1])):
            raise NotLocalRing(
                "det -1 with nonzero diagonal entries", witness=delta
            )
        if RingElement(ring, M.rows[1][0]) != b.inverse():
            raise NotLocalRing("antidiagonal entries are not inverse units", witness=delta)
        return SplitAntiDiag(b)
    if delta * delta == one:
        raise NotLocalRing(
            f"determinant {delta} is a nontrivial square root of 1", witness=delta
        )
    raise NotOrthogonal(f"determinant {delta} of an orthogonal matrix must square to 1")
