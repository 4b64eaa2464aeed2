"""Command-line entry point: identity suites, rewriting, conjugation,
splitting, dilation, and certificate verification.

Every certificate carries the matrices inline and ``matrices_equal`` computed
by re-multiplication; ``verify-certificate`` re-checks a certificate from its
own content without recomputing the rewrite.  Exit codes: 0 success, 1
verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from dataclasses import dataclass, field

from . import rewrite
from .errors import (
    EorthoError,
    NonIntegralConjugator,
    NotComaximal,
    NotLocalRing,
    NotOrthogonal,
    UnsupportedConjugator,
)
from .matrices import Matrix
from .quadform import Ordering, QuadraticSpace, hyperbolic_gram, is_orthogonal, reflection
from .rings import (
    LaurentRing,
    ModRing,
    Q,
    RingElement,
    Z,
    format_element,
    format_ring,
    parse_element,
    parse_ring,
    random_element,
)
from .generators import (
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
    WordContext,
    context_from_json,
    context_to_json,
    dser_letter_matrix,
    letter_from_json,
    letter_inverse,
    letter_matrix,
    letter_to_json,
    oe_matrix,
    oe_matrix_relaxed,
    sigma_pair,
    word_matrix,
)
from .localglobal import (
    LocalizedWord,
    dilate,
    dilation_is_sound,
    kernel_shape_check,
    locword_from_json,
    locword_to_json,
    verification_context,
)

VERIFY_FAILURE = 1
USAGE_ERROR = 2

_USAGE_ERRORS = (
    "NotInRing",
    "DescriptorMismatch",
    "PreconditionViolated",
    "SamePlane",
    "NotHyperbolicForm",
    "NotDiagonal",
)


@dataclass
class SuiteReport:
    suite: str
    ring: str
    seed: int
    cases: int = 0
    failures: list = field(default_factory=list)
    wall_ms: float = 0.0  # reported on stderr only, kept out of the JSON stream

    def record(self, case_id, ok, detail=None):
        self.cases += 1
        if not ok:
            self.failures.append({"case": case_id, "detail": detail or "mismatch"})

    def to_json(self):
        return {
            "v": 1,
            "suite": self.suite,
            "ring": self.ring,
            "seed": self.seed,
            "cases": self.cases,
            "failures": sorted(self.failures, key=lambda f: f["case"]),
        }


# ---------------------------------------------------------------------------
# symbolic contexts for the suites
# ---------------------------------------------------------------------------


def _symbolic_context(n, m, extra=(), invertible_extra=()):
    """Diagonal space diag(p1..pn) with symbolic unit entries."""
    diag = tuple(f"p{i}" for i in range(1, n + 1))
    ring = LaurentRing(Q, diag + tuple(extra), invertible=diag + tuple(invertible_extra))
    phi = Matrix.diagonal(ring, [ring.var(p) for p in diag])
    space = QuadraticSpace(ring, phi, diagonal=True)
    return WordContext(space, m, Ordering.INTERLEAVED)


def _hyperbolic_context(n, m, extra=()):
    ring = LaurentRing(Q, tuple(extra))
    space = QuadraticSpace.hyperbolic(ring, n // 2)
    return WordContext(space, m, Ordering.INTERLEAVED)


def _conj_matrix(g, e, context):
    G = letter_matrix(g, context)
    E = letter_matrix(e, context)
    Gi = letter_matrix(letter_inverse(g), context)
    return G @ E @ Gi


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_roy(report, rng, n_max=3, m_max=3):
    for n in range(1, n_max + 1):
        for m in range(1, m_max + 1):
            names = tuple(f"x{i}{j}" for i in range(1, m + 1) for j in range(1, n + 1))
            ctx = _symbolic_context(n, m, extra=names + ("t",))
            ring = ctx.ring
            form = ctx.form()
            full = Matrix(
                ring,
                [[ring.var(f"x{i}{j}").payload for j in range(1, n + 1)] for i in range(1, m + 1)],
            )
            t = ring.var("t")
            letters = [("full-alpha", EAlpha(full)), ("full-beta", EBetaStar(full))]
            for i in range(1, m + 1):
                for j in range(1, n + 1):
                    letters.append((f"alpha-single:{i},{j}", EAlphaSingle(i, j, t)))
                    letters.append((f"beta-single:{i},{j}", EBetaStarSingle(i, j, t)))
            for name, letter in letters:
                M = dser_letter_matrix(letter, ctx)
                ok = is_orthogonal(M, form) and M.det().is_one()
                report.record(f"roy:n={n},m={m}:{name}", ok)


def suite_n1_table(report, rng, n=2, m=2):
    names = ("t",) + tuple(f"c{k}" for k in range(4))
    ctx = _symbolic_context(n, m, extra=names)
    ring = ctx.ring
    t = ring.var("t")
    conjugators = []
    for p in range(1, m + 1):
        for r in range(p + 1, m + 1):
            A_p, B_p = n + 2 * p - 1, n + 2 * p
            A_r, B_r = n + 2 * r - 1, n + 2 * r
            conjugators += [
                (f"oe[{A_p},{A_r}]", OE(A_p, A_r, ring.var("c0"))),
                (f"oe[{A_p},{B_r}]", OE(A_p, B_r, ring.var("c1"))),
                (f"oe[{B_p},{A_r}]", OE(B_p, A_r, ring.var("c2"))),
                (f"oe[{B_p},{B_r}]", OE(B_p, B_r, ring.var("c3"))),
            ]
    for gname, g in conjugators:
        for i in range(1, m + 1):
            for j in range(1, n + 1):
                for ename, e in (
                    (f"alpha:{i},{j}", EAlphaSingle(i, j, t)),
                    (f"beta:{i},{j}", EBetaStarSingle(i, j, t)),
                ):
                    w = rewrite.conjugate_letter(g, e, ctx)
                    ok = word_matrix(w) == _conj_matrix(g, e, ctx)
                    report.record(f"n1:{gname}:{ename}", ok)


def suite_tau_sigma(report, rng, n_max=3, m_max=3):
    for n in range(1, n_max + 1):
        for m in range(1, m_max + 1):
            ctx = _symbolic_context(n, m, extra=("t", "u"), invertible_extra=("u",))
            ring = ctx.ring
            t, u = ring.var("t"), ring.var("u")
            for plane in range(1, m + 1):
                for g, gname in ((Tau(u, plane), f"tau[u,{plane}]"),
                                 (SigmaU(ring.one, plane), f"sigma[1,{plane}]")):
                    for i in range(1, m + 1):
                        for j in range(1, n + 1):
                            for e, ename in ((EAlphaSingle(i, j, t), f"alpha:{i},{j}"),
                                             (EBetaStarSingle(i, j, t), f"beta:{i},{j}")):
                                w = rewrite.conjugate_letter(g, e, ctx)
                                ok = word_matrix(w) == _conj_matrix(g, e, ctx)
                                report.record(
                                    f"tau-sigma:n={n},m={m}:{gname}:{ename}", ok
                                )


def _random_reflection_product(space, rng, max_factors=3):
    ring = space.ring
    A = Matrix.identity(ring, space.n)
    factors = rng.randint(1, max_factors)
    made = 0
    guard = 0
    while made < factors and guard < 200:
        guard += 1
        v = [random_element(ring, rng) for _ in range(space.n)]
        try:
            A = A @ reflection(space, v)
            made += 1
        except EorthoError:
            continue
    return A


def suite_block_oq(report, rng, samples=200, n=2, m=2, rings=None):
    rings = rings or [("Q", Q), ("Zmod:7", ModRing(7))]
    per_ring = samples // len(rings)
    for rname, ring in rings:
        diag = []
        while len(diag) < n:
            c = random_element(ring, rng)
            if c.is_unit():
                diag.append(c)
        space = QuadraticSpace(ring, Matrix.diagonal(ring, diag), diagonal=True)
        ctx = WordContext(space, m, Ordering.INTERLEAVED)
        for trial in range(per_ring):
            A = _random_reflection_product(space, rng)
            beta = Matrix(ring, [
                [random_element(ring, rng).payload for _ in range(n)] for _ in range(m)
            ])
            kind = rng.choice(("alpha", "beta"))
            e = EAlpha(beta) if kind == "alpha" else EBetaStar(beta)
            g = BlockOq(A)
            w = rewrite.conjugate_letter(g, e, ctx)
            ok = word_matrix(w) == _conj_matrix(g, e, ctx)
            report.record(f"block-oq:{rname}:{kind}:{trial:03d}", ok)


def suite_eo_equality(report, rng, n_values=(2, 4), m_values=(1, 2, 3)):
    for n in n_values:
        for m in m_values:
            ctx = _hyperbolic_context(n, m, extra=("a",))
            ring = ctx.ring
            a = ring.var("a")
            size = n + 2 * m
            for k in range(1, size + 1):
                for l in range(k + 1, size + 1):
                    if l == sigma_pair(k, n, m):
                        continue
                    target = Word(ctx, rewrite.oe_to_dser(k, l, a, n, m))
                    ok = word_matrix(target) == oe_matrix(k, l, a, ctx)
                    report.record(f"eo-eq:n={n},m={m}:oe({k},{l})->dser", ok)
            for i in range(1, m + 1):
                for j in range(1, n + 1):
                    for e, ename in ((EAlphaSingle(i, j, a), f"alpha:{i},{j}"),
                                     (EBetaStarSingle(i, j, a), f"beta:{i},{j}")):
                        oe = rewrite.dser_to_oe(e, n, m)
                        ok = oe_matrix(oe.k, oe.l, oe.a, ctx) == dser_letter_matrix(e, ctx)
                        # two-sided: translating back gives one single letter equal to e
                        back = rewrite.oe_to_dser(oe.k, oe.l, oe.a, n, m)
                        ok = ok and len(back) == 1 and back[0] == e
                        report.record(f"eo-eq:n={n},m={m}:dser->oe:{ename}", ok)


def suite_split(report, rng, moduli=(7, 9)):
    for mod in moduli:
        ring = ModRing(mod)
        psi = hyperbolic_gram(ring, 1, Ordering.INTERLEAVED)
        count = 0
        for a in range(mod):
            for b in range(mod):
                for c in range(mod):
                    for d in range(mod):
                        M = Matrix(ring, [[a, b], [c, d]])
                        if not is_orthogonal(M, psi):
                            continue
                        count += 1
                        try:
                            res = rewrite.split_orthogonal_h(M)
                            ok = res.realize() == M
                        except EorthoError:
                            ok = False
                        report.record(f"split:Zmod:{mod}:[{a},{b};{c},{d}]", ok)
        report.record(f"split:Zmod:{mod}:exhaustive-count", count > 0,
                      detail=f"no orthogonal matrices found mod {mod}")
    # non-local fixture: det = 4 over Zmod:15 must raise NotLocalRing
    ring = ModRing(15)
    M = Matrix(ring, [[10, 6], [6, 10]])
    try:
        rewrite.split_orthogonal_h(M)
        report.record("split:Zmod:15:idempotent-fixture", False,
                      detail="NotLocalRing was not raised")
    except NotLocalRing:
        report.record("split:Zmod:15:idempotent-fixture", True)


def _random_locword(rng, s, n=1, m=2):
    from .rings import LocalizedRing, PolyRing

    loc = LocalizedRing(Z, s)
    P = PolyRing(loc, "X")
    phi = Matrix.diagonal(P, [rng.choice([1, -1]) for _ in range(n)])
    space = QuadraticSpace(P, phi, diagonal=True)
    ctx = WordContext(space, m, Ordering.INTERLEAVED)
    items = []
    for _ in range(rng.randint(1, 3)):
        gamma = []
        for _ in range(rng.randint(0, 2)):
            gamma.append(
                EAlphaSingle(rng.randint(1, m), rng.randint(1, n),
                             RingElement(P, (loc.from_int(rng.randint(-3, 3)),)))
                if rng.random() < 0.5
                else EBetaStarSingle(rng.randint(1, m), rng.randint(1, n),
                                     RingElement(P, (loc.from_int(rng.randint(-3, 3)),)))
            )
        deg = rng.randint(1, 3)
        coeffs = [loc.zero_p()]
        for _ in range(deg):
            coeffs.append(loc.canon((rng.randint(-5, 5), rng.randint(0, 3))))
        param = RingElement(P, tuple(coeffs))
        core = (
            EAlphaSingle(rng.randint(1, m), rng.randint(1, n), param)
            if rng.random() < 0.5
            else EBetaStarSingle(rng.randint(1, m), rng.randint(1, n), param)
        )
        items.append((tuple(gamma), core))
    return LocalizedWord(Z, s, ctx, tuple(items))


def suite_dilation(report, rng, samples=100):
    s_choices = (2, 3, 6)
    for trial in range(samples):
        s = s_choices[trial % len(s_choices)]
        w = _random_locword(rng, s)
        try:
            res = dilate(w)
            ok = dilation_is_sound(w, res) and kernel_shape_check(w)
        except EorthoError:
            ok = False
        report.record(f"dilation:s={s}:{trial:03d}", ok)


SUITES = {
    "roy": suite_roy,
    "n1-table": suite_n1_table,
    "tau-sigma": suite_tau_sigma,
    "block-oq": suite_block_oq,
    "eo-equality": suite_eo_equality,
    "split": suite_split,
    "dilation": suite_dilation,
}


def run_suite(name, seed=0, ring_desc=None, n=None, m=None):
    """Run one named suite (or 'all'); returns a list of SuiteReports."""
    names = list(SUITES) if name == "all" else [name]
    reports = []
    for nm in names:
        rng = random.Random(seed)
        report = SuiteReport(suite=nm, ring=ring_desc or "default", seed=seed)
        start = time.perf_counter()
        fn = SUITES[nm]
        kwargs = {}
        if nm in ("roy", "tau-sigma"):
            if n is not None:
                kwargs["n_max"] = n
            if m is not None:
                kwargs["m_max"] = m
        if nm == "split" and ring_desc and ring_desc.startswith("Zmod:"):
            kwargs["moduli"] = (int(ring_desc.split(":")[1]),)
        if nm == "block-oq" and ring_desc:
            ring = parse_ring(ring_desc)
            kwargs["rings"] = [(ring_desc, ring)]
        fn(report, rng, **kwargs)
        report.wall_ms = (time.perf_counter() - start) * 1000.0
        reports.append(report)
    return reports


# ---------------------------------------------------------------------------
# letter specs on the command line: tau:u:1, ealpha:1:1:x, oe:1:3:a, ...
# ---------------------------------------------------------------------------


def parse_letter_spec(spec, ring):
    parts = spec.split(":")
    kind = parts[0].lower()
    if kind == "inv":
        return Inverse(parse_letter_spec(":".join(parts[1:]), ring))
    if kind == "tau":
        return Tau(parse_element(ring, parts[1]), int(parts[2]))
    if kind == "sigma":
        return SigmaU(parse_element(ring, parts[1]), int(parts[2]))
    if kind == "ealpha":
        return EAlphaSingle(int(parts[1]), int(parts[2]), parse_element(ring, parts[3]))
    if kind == "ebetastar":
        return EBetaStarSingle(int(parts[1]), int(parts[2]), parse_element(ring, parts[3]))
    if kind == "oe":
        return OE(int(parts[1]), int(parts[2]), parse_element(ring, parts[3]))
    if kind == "blockoq":
        return BlockOq(Matrix(ring, json.loads(":".join(parts[1:]))))
    raise EorthoError(f"unknown letter spec {spec!r}")


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


def _spec_symbols(specs):
    """Bare identifiers used as parameters; tau/sigma units are invertible."""
    plain, invertible = [], []
    for spec in specs:
        parts = spec.split(":")
        kind = parts[0].lower()
        while kind == "inv":
            parts = parts[1:]
            kind = parts[0].lower()
        if kind in ("tau", "sigma") and _IDENT.match(parts[1]):
            invertible.append(parts[1])
        elif kind in ("ealpha", "ebetastar", "oe") and _IDENT.match(parts[3]):
            plain.append(parts[3])
    return plain, invertible


def _infer_context(g_specs, e_specs, args):
    n, m = args.n, args.m
    if n is None or m is None:
        max_j, max_plane = 1, 1
        for spec in list(g_specs) + list(e_specs):
            parts = spec.split(":")
            kind = parts[0].lower()
            while kind == "inv":
                parts = parts[1:]
                kind = parts[0].lower()
            if kind in ("ealpha", "ebetastar"):
                max_plane = max(max_plane, int(parts[1]))
                max_j = max(max_j, int(parts[2]))
            elif kind in ("tau", "sigma"):
                max_plane = max(max_plane, int(parts[2]))
            elif kind in ("oe", "blockoq"):
                raise EorthoError("oe/blockoq specs need explicit --n and --m")
        n = n if n is not None else max_j
        m = m if m is not None else max_plane
    if args.ring:
        ring = parse_ring(args.ring)
        if args.phi:
            phi = Matrix(ring, json.loads(args.phi))
            space = QuadraticSpace(ring, phi)
        else:
            space = QuadraticSpace(ring, Matrix.identity(ring, n), diagonal=True)
    else:
        plain, invertible = _spec_symbols(list(g_specs) + list(e_specs))
        diag = tuple(f"p{i}" for i in range(1, n + 1))
        names, inv_names = [], list(diag)
        for v in plain:
            if v not in names and v not in diag:
                names.append(v)
        for v in invertible:
            if v not in inv_names:
                inv_names.append(v)
        all_names = diag + tuple(x for x in names + inv_names if x not in diag)
        ring = LaurentRing(Q, all_names, invertible=tuple(inv_names))
        phi = Matrix.diagonal(ring, [ring.var(p) for p in diag])
        space = QuadraticSpace(ring, phi, diagonal=True)
    ordering = Ordering.parse(args.ordering)
    return WordContext(space, m, ordering)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def _word_certificate(command, context, input_desc, input_matrix, letters):
    out_word = Word(context, tuple(letters))
    out_matrix = word_matrix(out_word)
    return {
        "v": 1,
        "command": command,
        "ring": format_ring(context.ring),
        "context": context_to_json(context),
        "input": input_desc,
        "output_word": [letter_to_json(l) for l in out_word.letters],
        "input_matrix": input_matrix.to_lists(),
        "output_matrix": out_matrix.to_lists(),
        "matrices_equal": out_matrix == input_matrix,
    }


def check_certificate(cert):
    """Re-verify a certificate from its own content (re-multiplication only)."""
    command = cert.get("command")
    if command in ("rewrite oe-to-dser", "rewrite dser-to-oe", "conjugate"):
        context = context_from_json(cert["context"])
        ring = context.ring
        letters = tuple(letter_from_json(l, ring) for l in cert["output_word"])
        out = word_matrix(Word(context, letters))
        input_matrix = Matrix(ring, cert["input_matrix"])
        return out == input_matrix and out == Matrix(ring, cert["output_matrix"])
    if command == "split-oh":
        ring = parse_ring(cert["ring"])
        M = Matrix(ring, cert["input_matrix"])
        u = parse_element(ring, cert["output"]["u"])
        tag = cert["output"]["tag"]
        real = (rewrite.SplitDiag(u) if tag == "Diag" else rewrite.SplitAntiDiag(u)).realize()
        return real == M
    if command == "dilate":
        from .generators import word_from_json
        from .localglobal import DilationResult

        w = locword_from_json(cert["input"]["localized_word"])
        out_word = word_from_json(cert["output"]["word"])
        return dilation_is_sound(w, DilationResult(cert["output"]["N"], out_word))
    raise EorthoError(f"unknown certificate command {command!r}")


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------


def _emit(data, args):
    text = json.dumps(data, indent=None if getattr(args, "compact", False) else 2,
                      sort_keys=True)
    print(text)


def cmd_verify_identities(args):
    if args.suite not in list(SUITES) + ["all"]:
        print(f"unknown suite {args.suite!r}", file=sys.stderr)
        return USAGE_ERROR
    reports = run_suite(args.suite, seed=args.seed, ring_desc=args.ring,
                        n=args.n, m=args.m)
    payload = {"v": 1, "reports": [r.to_json() for r in reports]}
    failures = sum(len(r.failures) for r in reports)
    if args.format == "json":
        _emit(payload, args)
    else:
        for r in reports:
            status = "ok" if not r.failures else f"{len(r.failures)} FAILED"
            print(f"suite {r.suite}: {r.cases} cases, {status}")
            for f in sorted(r.failures, key=lambda f: f["case"]):
                print(f"  FAIL {f['case']}: {f['detail']}")
    for r in reports:
        print(f"[timing] {r.suite}: {r.wall_ms:.1f} ms", file=sys.stderr)
    return 0 if failures == 0 else VERIFY_FAILURE


def cmd_rewrite(args):
    ring = parse_ring(args.ring) if args.ring else LaurentRing(Q, ("a",))
    space = QuadraticSpace.hyperbolic(ring, args.n // 2)
    context = WordContext(space, args.m, Ordering.INTERLEAVED)
    if args.direction == "oe-to-dser":
        if args.k is None or args.l is None:
            print("oe-to-dser needs --k and --l", file=sys.stderr)
            return USAGE_ERROR
        a = parse_element(ring, args.a)
        letters = rewrite.oe_to_dser(args.k, args.l, a, args.n, args.m)
        input_matrix = oe_matrix_relaxed(args.k, args.l, a, context)
        input_desc = {"oe": {"k": args.k, "l": args.l, "a": format_element(a)}}
        cert = _word_certificate("rewrite oe-to-dser", context, input_desc,
                                 input_matrix, letters)
    else:
        x = parse_element(ring, args.x)
        single = (EAlphaSingle if args.kind == "ealpha" else EBetaStarSingle)(
            args.i, args.j, x)
        oe = rewrite.dser_to_oe(single, args.n, args.m)
        input_matrix = dser_letter_matrix(single, context)
        input_desc = {"letter": letter_to_json(single)}
        cert = _word_certificate("rewrite dser-to-oe", context, input_desc,
                                 input_matrix, [oe])
    _emit(cert, args)
    return 0 if cert["matrices_equal"] else VERIFY_FAILURE


def cmd_conjugate(args):
    context = _infer_context(args.g, args.e, args)
    ring = context.ring
    g_letters = [parse_letter_spec(s, ring) for s in args.g]
    e_letters = [parse_letter_spec(s, ring) for s in args.e]
    gword = Word(context, tuple(g_letters))
    eword = Word(context, tuple(e_letters))
    out = rewrite.conjugate_word(gword, eword, context)
    input_matrix = (
        word_matrix(gword) @ word_matrix(eword) @ word_matrix(gword.inverse())
    )
    input_desc = {
        "g": [letter_to_json(l) for l in gword.letters],
        "e": [letter_to_json(l) for l in eword.letters],
    }
    cert = _word_certificate("conjugate", context, input_desc, input_matrix,
                             out.letters)
    _emit(cert, args)
    return 0 if cert["matrices_equal"] else VERIFY_FAILURE


def cmd_split(args):
    ring = parse_ring(args.ring)
    M = Matrix(ring, json.loads(args.matrix))
    res = rewrite.split_orthogonal_h(M)
    cert = {
        "v": 1,
        "command": "split-oh",
        "ring": format_ring(ring),
        "input_matrix": M.to_lists(),
        "output": {"tag": res.tag, "u": format_element(res.u)},
        "matrices_equal": res.realize() == M,
    }
    _emit(cert, args)
    return 0 if cert["matrices_equal"] else VERIFY_FAILURE


def cmd_dilate(args):
    data = json.loads(_read_input(args.word))
    w = locword_from_json(data)
    if args.ring and format_ring(w.base) != args.ring:
        print(f"--ring {args.ring} does not match the word's base ring "
              f"{format_ring(w.base)}", file=sys.stderr)
        return USAGE_ERROR
    if args.s and w.base.format_payload(w.s) != args.s:
        print(f"--s {args.s} does not match the word's s "
              f"{w.base.format_payload(w.s)}", file=sys.stderr)
        return USAGE_ERROR
    res = dilate(w)
    sound = dilation_is_sound(w, res)
    from .generators import word_to_json

    cert = {
        "v": 1,
        "command": "dilate",
        "ring": format_ring(w.context.ring),
        "input": {"localized_word": locword_to_json(w)},
        "output": {"N": res.N, "word": word_to_json(res.word)},
        "matrices_equal": sound,
    }
    _emit(cert, args)
    return 0 if sound else VERIFY_FAILURE


def cmd_verify_certificate(args):
    cert = json.loads(_read_input(args.certificate))
    ok = check_certificate(cert)
    _emit({"v": 1, "verified": bool(ok)}, args)
    return 0 if ok else VERIFY_FAILURE


def _read_input(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="eortho",
        description="Exact elementary orthogonal group computations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-identities", help="run an identity suite")
    p.add_argument("--suite", default="all",
                   choices=list(SUITES) + ["all"])
    p.add_argument("--ring", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    _format_flags(p)
    p.set_defaults(fn=cmd_verify_identities)

    p = sub.add_parser("rewrite", help="translate between oe and DSER letters")
    p.add_argument("direction", choices=["oe-to-dser", "dser-to-oe"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ring", default=None)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--a", default="a")
    p.add_argument("--kind", choices=["ealpha", "ebetastar"], default="ealpha")
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--x", default="a")
    _format_flags(p)
    p.set_defaults(fn=cmd_rewrite)

    p = sub.add_parser("conjugate", help="normalize g e g^-1 into a DSER word")
    p.add_argument("--g", action="append", required=True,
                   help="conjugator letter spec (repeatable)")
    p.add_argument("--e", action="append", required=True,
                   help="target letter spec (repeatable)")
    p.add_argument("--ring", default=None)
    p.add_argument("--phi", default=None, help="gram matrix as JSON")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--ordering", default="interleaved",
                   choices=["grouped", "interleaved"])
    _format_flags(p)
    p.set_defaults(fn=cmd_conjugate)

    p = sub.add_parser("split-oh", help="split a 2x2 orthogonal matrix of h")
    p.add_argument("--ring", required=True)
    p.add_argument("--matrix", required=True, help="2x2 matrix as JSON")
    _format_flags(p)
    p.set_defaults(fn=cmd_split)

    p = sub.add_parser("dilate", help="clear denominators of a localized word")
    p.add_argument("--word", required=True, help="LocalizedWord JSON file, or -")
    p.add_argument("--ring", default=None)
    p.add_argument("--s", default=None)
    _format_flags(p)
    p.set_defaults(fn=cmd_dilate)

    p = sub.add_parser("verify-certificate", help="re-check an emitted certificate")
    p.add_argument("certificate", help="certificate JSON file, or -")
    _format_flags(p)
    p.set_defaults(fn=cmd_verify_certificate)

    return parser


def _format_flags(p):
    p.add_argument("--json", dest="format", action="store_const", const="json",
                   default="json")
    p.add_argument("--text", dest="format", action="store_const", const="text")
    p.add_argument("--compact", action="store_true")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except EorthoError as exc:
        kind = type(exc).__name__
        payload = {"v": 1, "error": {"kind": kind, "message": str(exc)}}
        extra = getattr(exc, "witness", None)
        if extra is not None:
            payload["error"]["witness"] = str(extra)
        print(json.dumps(payload, sort_keys=True))
        if kind in _USAGE_ERRORS:
            return USAGE_ERROR
        return VERIFY_FAILURE
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(json.dumps({"v": 1, "error": {"kind": type(exc).__name__,
                                            "message": str(exc)}}, sort_keys=True))
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
