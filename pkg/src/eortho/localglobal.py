"""Polynomial-matrix machinery: evaluation-kernel shape checks, localization
of generator words, the dilation substitution X -> s^N X that clears
denominators, and finite-comaximal-cover membership verification.

Words over Z[X] are data-level objects; matrix verification embeds
coefficients into Q[X] (injective for these domains) because letter matrices
need 1/2, which Z and Z localized at an odd s do not supply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    DescriptorMismatch,
    NonIntegralConjugator,
    NotComaximal,
    PreconditionViolated,
)
from .matrices import Matrix
from .quadform import QuadraticSpace
from .rings import (
    IntegerRing,
    LocalizedRing,
    ModRing,
    PolyRing,
    Q,
    RingElement,
    clear_denominator_power,
    convert,
    poly_substitute,
)
from .generators import (
    EAlphaSingle,
    EBetaStarSingle,
    Inverse,
    Word,
    WordContext,
    context_from_json,
    context_to_json,
    letter_from_json,
    letter_inverse,
    letter_to_json,
    map_letter,
    map_word,
    word_matrix,
)


def _poly_eval_zero(x):
    """Constant term of an R[X] element, as an element of R."""
    ring = x.ring
    return RingElement(ring.base, x.payload[0] if x.payload else ring.base.zero_p())


def eval_at_zero_is_identity(theta):
    """True iff substituting X = 0 into the polynomial matrix yields I."""
    ring = theta.ring
    if not isinstance(ring, PolyRing):
        raise DescriptorMismatch("eval_at_zero_is_identity needs a matrix over R[X]")
    at_zero = theta.map_entries(_poly_eval_zero, ring.base)
    return at_zero.is_identity()


@dataclass(frozen=True)
class LocalizedWord:
    """Word over R_s[X] in kernel shape: product of gamma E(p(X)) gamma^-1.

    ``context`` is over Poly(Localized(base, s), X); each item is a pair
    (gamma letters, core single letter) where the core parameter is a
    polynomial and the gammas are constant DSER letters.
    """

    base: object
    s: object
    context: WordContext
    items: tuple = field(default_factory=tuple)

    def __post_init__(self):
        ring = self.context.ring
        if not (isinstance(ring, PolyRing) and isinstance(ring.base, LocalizedRing)):
            raise DescriptorMismatch("LocalizedWord needs a Poly(Localized(R,s), X) context")
        if ring.base.base != self.base or ring.base.s != self.s:
            raise DescriptorMismatch("context ring does not match (base, s)")
        for gamma, core in self.items:
            if not isinstance(core, (EAlphaSingle, EBetaStarSingle)):
                raise PreconditionViolated("core letters must be single DSER letters")

    @property
    def loc_ring(self):
        return self.context.ring.base

    def word(self):
        letters = []
        for gamma, core in self.items:
            letters.extend(gamma)
            letters.append(core)
            letters.extend(letter_inverse(l) for l in reversed(gamma))
        return Word(self.context, tuple(letters))

    def matrix(self, verification_context=None):
        if verification_context is None:
            return word_matrix(self.word())
        fn = _embedding_fn(self.context.ring, verification_context.ring)
        return word_matrix(map_word(self.word(), fn, verification_context))


@dataclass(frozen=True)
class DilationResult:
    N: int
    word: Word


def _core_param(core):
    return core.x if isinstance(core, EAlphaSingle) else core.y


def kernel_shape_check(w):
    """Every core parameter divisible by X, and the matrix is I at X = 0."""
    loc = w.loc_ring
    for gamma, core in w.items:
        p = _core_param(core).payload
        if p and not loc.is_zero_p(p[0]):
            return False
        for g in gamma:
            if not _is_constant_letter(g, w.context.ring):
                return False
    vctx = verification_context(w.context)
    return eval_at_zero_is_identity(w.matrix(vctx))


def _is_constant_letter(letter, poly_ring):
    try:
        map_letter(letter, _require_constant, poly_ring)
        return True
    except PreconditionViolated:
        return False


def _require_constant(x):
    if len(x.payload) > 1:
        raise PreconditionViolated("non-constant conjugator parameter")
    return x


def verification_context(context):
    """Context over Poly(Q, X) (or the original ring when 1/2 exists)."""
    ring = context.ring
    base = ring.base
    if base.has_invertible_two():
        return context
    target = PolyRing(Q, ring.variable)
    fn = _embedding_fn(ring, target)
    gram = context.space.gram.map_entries(fn, target)
    space = QuadraticSpace(target, gram, diagonal=context.space.diagonal)
    return WordContext(space, context.m, context.ordering)


def _embedding_fn(source, target):
    if source == target:
        return lambda x: x
    return lambda x: convert(x, target)


def dilate(w):
    """Clear denominators: N and a word over R[X] localizing to w(s^N X).

    N is the maximum clear_denominator_power over all core coefficients
    (sufficient, not minimal: the X^d coefficient picks up s^{N d}).
    """
    loc = w.loc_ring
    base = w.base
    poly_loc = w.context.ring
    poly_base = PolyRing(base, poly_loc.variable)

    def pull_const(x):
        # constant polynomial over R_s with no denominator -> constant over R
        if len(x.payload) > 1:
            raise NonIntegralConjugator("conjugator parameter depends on X")
        c = x.payload[0] if x.payload else loc.zero_p()
        k, r = clear_denominator_power(RingElement(loc, c))
        if k:
            raise NonIntegralConjugator(
                f"parameter {loc.format_payload(c)} has denominator s^{k}"
            )
        return RingElement(poly_base, (r.payload,))

    # choose N
    N = 0
    for gamma, core in w.items:
        for coeff in _core_param(core).payload:
            k, _ = clear_denominator_power(RingElement(loc, coeff))
            N = max(N, k)

    gram = w.context.space.gram.map_entries(pull_const, poly_base)
    space = QuadraticSpace(poly_base, gram, diagonal=w.context.space.diagonal)
    out_context = WordContext(space, w.context.m, w.context.ordering)

    s_elem = RingElement(loc, (w.s, 0))
    letters = []
    for gamma, core in w.items:
        pulled_gamma = [map_letter(g, pull_const, poly_base) for g in gamma]
        coeffs = []
        for d, coeff in enumerate(_core_param(core).payload):
            scaled = (s_elem ** (N * d)) * RingElement(loc, coeff)
            k, r = clear_denominator_power(scaled)
            if k:
                raise NonIntegralConjugator(
                    "constant core coefficient cannot be cleared by dilation"
                    if d == 0
                    else "insufficient dilation power"
                )
            coeffs.append(r.payload)
        param = RingElement(poly_base, tuple(coeffs))
        core_out = (
            EAlphaSingle(core.i, core.j, param)
            if isinstance(core, EAlphaSingle)
            else EBetaStarSingle(core.i, core.j, param)
        )
        letters.extend(pulled_gamma)
        letters.append(core_out)
        letters.extend(letter_inverse(l) for l in reversed(pulled_gamma))
    return DilationResult(N, Word(out_context, tuple(letters)))


def dilation_is_sound(w, result):
    """Exact check: localize(result.word) equals w with X -> s^N X."""
    vctx = verification_context(w.context)
    vbase = vctx.ring.base
    # input side: realize w, then substitute X -> s^N X
    s_pow = convert(RingElement(w.loc_ring, (w.s, 0)) ** result.N, vbase)
    image = RingElement(vctx.ring, (vbase.zero_p(), s_pow.payload))
    dilated_input = w.matrix(vctx).map_entries(
        lambda e: poly_substitute(e, image), vctx.ring
    )
    # output side: embed the integral word into the verification ring
    fn = _embedding_fn(result.word.context.ring, vctx.ring)
    out_matrix = word_matrix(map_word(result.word, fn, vctx))
    return out_matrix == dilated_input


def localize_poly_matrix(theta, s):
    """Entry-wise localization Poly(R, X) -> Poly(R_s, X)."""
    ring = theta.ring
    if not isinstance(ring, PolyRing):
        raise DescriptorMismatch("expected a matrix over R[X]")
    loc = LocalizedRing(ring.base, s)
    target = PolyRing(loc, ring.variable)
    return theta.map_entries(lambda e: convert(e, target), target)


def _comaximal(base, elements):
    if isinstance(base, IntegerRing):
        g = 0
        for s in elements:
            g = math.gcd(g, s)
        return g == 1
    if isinstance(base, ModRing):
        g = base.modulus
        for s in elements:
            g = math.gcd(g, s)
        return g == 1
    raise NotComaximal(f"comaximality check unsupported over {base}")


def locword_to_json(w):
    loc = w.loc_ring
    return {
        "base_ring": _format_ring(w.base),
        "s": w.base.format_payload(w.s),
        "context": context_to_json(w.context),
        "items": [
            {
                "gamma": [letter_to_json(g) for g in gamma],
                "core": letter_to_json(core),
            }
            for gamma, core in w.items
        ],
    }


def locword_from_json(data):
    context = context_from_json(data["context"])
    ring = context.ring
    base = ring.base.base
    s = ring.base.s
    items = tuple(
        (
            tuple(letter_from_json(g, ring) for g in item["gamma"]),
            letter_from_json(item["core"], ring),
        )
        for item in data["items"]
    )
    return LocalizedWord(base, s, context, items)


def _format_ring(ring):
    from .rings import format_ring

    return format_ring(ring)


def verify_local_membership(theta, certificates):
    """Check a finite comaximal cover of localized kernel-shape words for theta.

    ``certificates`` maps cover elements s to LocalizedWords.  True iff the
    s generate the unit ideal, each word matches the localization of theta
    at its s, and each word passes kernel_shape_check.
    """
    ring = theta.ring
    if not isinstance(ring, PolyRing):
        raise DescriptorMismatch("theta must be a matrix over R[X]")
    base = ring.base
    cover = list(certificates)
    if not cover:
        raise NotComaximal("empty cover")
    if not _comaximal(base, cover):
        raise NotComaximal(f"cover {cover} does not generate the unit ideal")
    for s, w in certificates.items():
        if w.base != base or w.s != base.canon(s):
            return False
        vctx = verification_context(w.context)
        theta_s = localize_poly_matrix(theta, s)
        if vctx.ring != w.context.ring:
            fn = _embedding_fn(w.context.ring, vctx.ring)
            theta_s = theta_s.map_entries(fn, vctx.ring)
        if w.matrix(vctx) != theta_s:
            return False
        if not kernel_shape_check(w):
            return False
    return True
