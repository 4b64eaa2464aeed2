"""Exact arithmetic tower: integers, rationals, odd modular rings, multivariate
Laurent polynomials, localizations R_s and univariate polynomial rings R[X].

Elements are kept in canonical form (reduced fraction, reduced residue, sorted
monomial map without zero coefficients, fraction r/s^k with minimal k,
coefficient list without trailing zeros), so structural equality coincides with
ring equality.  Ring objects are descriptors plus the arithmetic on payloads;
:class:`RingElement` is a thin operator-overloading wrapper.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import DescriptorMismatch, NotAUnit, NotInRing

_UNIT_SEARCH_CAP = 64  # highest power of s probed when testing r | s^t


class Ring:
    """Base descriptor.  Subclasses implement arithmetic on raw payloads."""

    kind = "?"

    # element construction ------------------------------------------------
    def __call__(self, value):
        if isinstance(value, RingElement):
            if value.ring == self:
                return value
            return convert(value, self)
        if isinstance(value, str):
            return RingElement(self, self.parse_payload(value))
        return RingElement(self, self.from_value(value))

    @property
    def zero(self):
        return RingElement(self, self.zero_p())

    @property
    def one(self):
        return RingElement(self, self.one_p())

    def from_value(self, value):
        if isinstance(value, int):
            return self.from_int(value)
        raise NotInRing(f"cannot coerce {value!r} into {self}")

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero_p(self, a):
        return a == self.zero_p()

    def is_one_p(self, a):
        return a == self.one_p()

    def divide_exact(self, a, b):
        """Return c with b*c = a, or None when no such element is found."""
        raise NotImplementedError

    def has_invertible_two(self):
        try:
            self.inv(self.from_int(2))
            return True
        except NotAUnit:
            return False

    def is_local_ring(self):
        return False

    def __repr__(self):
        return format_ring(self)

    def __str__(self):
        return format_ring(self)

    def __ne__(self, other):
        return not self.__eq__(other)


class RingElement:
    """A canonical payload tagged with its ring."""

    __slots__ = ("ring", "payload")

    def __init__(self, ring, payload):
        self.ring = ring
        self.payload = ring.canon(payload)

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return RingElement(self.ring, self.ring.from_int(other))
        raise DescriptorMismatch(f"cannot combine {self.ring} element with {other!r}")

    def __add__(self, other):
        other = self._coerce(other)
        return RingElement(self.ring, self.ring.add(self.payload, other.payload))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return RingElement(self.ring, self.ring.sub(self.payload, other.payload))

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        other = self._coerce(other)
        return RingElement(self.ring, self.ring.mul(self.payload, other.payload))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.payload))

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        return RingElement(self.ring, self.ring.inv(self.payload))

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def is_zero(self):
        return self.ring.is_zero_p(self.payload)

    def is_one(self):
        return self.ring.is_one_p(self.payload)

    def is_unit(self):
        return self.ring.is_unit(self.payload)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.payload == self.ring.from_int(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.payload == other.payload

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return f"<{format_element(self)} in {self.ring}>"

    def __str__(self):
        return format_element(self)


# ---------------------------------------------------------------------------
# Integers and rationals
# ---------------------------------------------------------------------------


class IntegerRing(Ring):
    kind = "Z"

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("Z")

    def canon(self, a):
        if not isinstance(a, int):
            raise NotInRing(f"integer payload expected, got {a!r}")
        return a

    def zero_p(self):
        return 0

    def one_p(self):
        return 1

    def from_int(self, n):
        return n

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} is not a unit in Z", witness=a)

    def divide_exact(self, a, b):
        if b == 0:
            return None
        q, r = divmod(a, b)
        return q if r == 0 else None

    def random(self, rng):
        return rng.randint(-9, 9)

    def format_payload(self, a):
        return str(a)

    def parse_payload(self, text):
        text = text.strip()
        try:
            return int(text)
        except ValueError:
            raise NotInRing(f"{text!r} is not an integer literal") from None


class RationalRing(Ring):
    kind = "Q"

    def __eq__(self, other):
        return isinstance(other, RationalRing)

    def __hash__(self):
        return hash("Q")

    def canon(self, a):
        if isinstance(a, int):
            return Fraction(a)
        if not isinstance(a, Fraction):
            raise NotInRing(f"rational payload expected, got {a!r}")
        return a

    def zero_p(self):
        return Fraction(0)

    def one_p(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def from_value(self, value):
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise NotInRing(f"cannot coerce {value!r} into Q")

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise NotAUnit("0 is not a unit in Q", witness=0)
        return 1 / a

    def divide_exact(self, a, b):
        return a / b if b != 0 else None

    def is_local_ring(self):
        return True

    def random(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def format_payload(self, a):
        return str(a)

    def parse_payload(self, text):
        text = text.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise NotInRing(f"{text!r} is not a rational literal") from None


class ModRing(Ring):
    """Z/m for odd m, so 2 is always invertible."""

    kind = "Zmod"

    def __init__(self, modulus):
        if not isinstance(modulus, int) or modulus < 1 or modulus % 2 == 0:
            raise NotInRing(f"modulus must be a positive odd integer, got {modulus}")
        self.modulus = modulus

    def __eq__(self, other):
        return isinstance(other, ModRing) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("Zmod", self.modulus))

    def canon(self, a):
        if not isinstance(a, int):
            raise NotInRing(f"residue payload expected, got {a!r}")
        return a % self.modulus

    def zero_p(self):
        return 0

    def one_p(self):
        return 1 % self.modulus

    def from_int(self, n):
        return n % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def is_unit(self, a):
        return math.gcd(a, self.modulus) == 1

    def inv(self, a):
        try:
            return pow(a, -1, self.modulus)
        except ValueError:
            g = math.gcd(a, self.modulus)
            raise NotAUnit(
                f"{a} is not a unit mod {self.modulus} (gcd {g})", witness=g
            ) from None

    def divide_exact(self, a, b):
        g = math.gcd(b, self.modulus)
        if a % g != 0:
            return None
        m1 = self.modulus // g
        return ((a // g) * pow(b // g, -1, m1)) % self.modulus if m1 > 1 else a % self.modulus

    def is_local_ring(self):
        # local iff the modulus is an odd prime power
        m = self.modulus
        if m < 3:
            return False
        p = None
        for cand in range(3, m + 1, 2):
            if m % cand == 0:
                p = cand
                break
        while m % p == 0:
            m //= p
        return m == 1

    def random(self, rng):
        return rng.randrange(self.modulus)

    def format_payload(self, a):
        return str(a)

    def parse_payload(self, text):
        text = text.strip()
        try:
            return int(text) % self.modulus
        except ValueError:
            raise NotInRing(f"{text!r} is not a residue literal") from None


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class LaurentRing(Ring):
    """Sparse multivariate (Laurent) polynomials over a base ring.

    Variables listed in ``invertible`` admit negative exponents; the others are
    ordinary polynomial variables.  Payload: dict {exponent tuple: base payload}.
    """

    kind = "laurent"

    def __init__(self, base, variables, invertible=()):
        self.base = base
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise NotInRing("variable names must be distinct")
        self.invertible = frozenset(invertible)
        if not self.invertible <= set(self.variables):
            raise NotInRing("invertible variables must be among the variables")
        self._inv_mask = tuple(v in self.invertible for v in self.variables)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentRing)
            and other.base == self.base
            and other.variables == self.variables
            and other.invertible == self.invertible
        )

    def __hash__(self):
        return hash(("laurent", self.base, self.variables, self.invertible))

    def var(self, name, power=1):
        if name not in self.variables:
            raise NotInRing(f"unknown variable {name!r}")
        exps = tuple(power if v == name else 0 for v in self.variables)
        return RingElement(self, {exps: self.base.one_p()})

    def _check_exps(self, exps):
        for e, ok_neg in zip(exps, self._inv_mask):
            if e < 0 and not ok_neg:
                raise NotInRing(
                    f"negative exponent on non-invertible variable in {self}"
                )

    def canon(self, a):
        if not isinstance(a, dict):
            raise NotInRing(f"monomial map expected, got {a!r}")
        a = {tuple(e): c for e, c in a.items()}
        out = {}
        for exps in sorted(a):
            c = self.base.canon(a[exps])
            if self.base.is_zero_p(c):
                continue
            self._check_exps(exps)
            out[tuple(exps)] = c
        return out

    def zero_p(self):
        return {}

    def one_p(self):
        return {(0,) * len(self.variables): self.base.one_p()}

    def from_int(self, n):
        c = self.base.from_int(n)
        if self.base.is_zero_p(c):
            return {}
        return {(0,) * len(self.variables): c}

    def add(self, a, b):
        out = dict(a)
        for exps, c in b.items():
            if exps in out:
                out[exps] = self.base.add(out[exps], c)
            else:
                out[exps] = c
        return self.canon(out)

    def neg(self, a):
        return {e: self.base.neg(c) for e, c in a.items()}

    def mul(self, a, b):
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = self.base.mul(c1, c2)
                if e in out:
                    out[e] = self.base.add(out[e], c)
                else:
                    out[e] = c
        return self.canon(out)

    def is_unit(self, a):
        if len(a) != 1:
            return False
        (exps, c), = a.items()
        if not self.base.is_unit(c):
            return False
        return all(e == 0 or ok for e, ok in zip(exps, self._inv_mask))

    def inv(self, a):
        if len(a) != 1:
            raise NotAUnit(
                f"only monomials are units; got {len(a)} terms", witness=len(a)
            )
        (exps, c), = a.items()
        for e, ok in zip(exps, self._inv_mask):
            if e != 0 and not ok:
                raise NotAUnit(
                    "monomial involves a non-invertible variable", witness=exps
                )
        return {tuple(-e for e in exps): self.base.inv(c)}

    def divide_exact(self, a, b):
        if not b:
            return None
        if not a:
            return {}
        if len(b) == 1:
            (exps_b, c_b), = b.items()
            out = {}
            for exps, c in a.items():
                q = self.base.divide_exact(c, c_b)
                if q is None:
                    return None
                e = tuple(x - y for x, y in zip(exps, exps_b))
                for ev, ok in zip(e, self._inv_mask):
                    if ev < 0 and not ok:
                        return None
                out[e] = q
            return self.canon(out)
        # multi-term divisor: shift into ordinary polynomials, then divide by
        # leading terms in lex order (exact for integral domain bases)
        shift_a = tuple(min(e[i] for e in a) for i in range(len(self.variables)))
        shift_b = tuple(min(e[i] for e in b) for i in range(len(self.variables)))
        a_sh = {tuple(x - y for x, y in zip(e, shift_a)): c for e, c in a.items()}
        b_sh = {tuple(x - y for x, y in zip(e, shift_b)): c for e, c in b.items()}
        lead_b = max(b_sh)
        quot = {}
        guard = len(a_sh) * (len(b_sh) + 2) + 8
        while a_sh:
            guard -= 1
            if guard < 0:
                return None
            lead_a = max(a_sh)
            e = tuple(x - y for x, y in zip(lead_a, lead_b))
            if any(x < 0 for x in e):
                return None
            c = self.base.divide_exact(a_sh[lead_a], b_sh[lead_b])
            if c is None:
                return None
            quot[e] = c
            for eb, cb in b_sh.items():
                key = tuple(x + y for x, y in zip(e, eb))
                cur = a_sh.get(key, self.base.zero_p())
                new = self.base.sub(cur, self.base.mul(c, cb))
                if self.base.is_zero_p(new):
                    a_sh.pop(key, None)
                else:
                    a_sh[key] = new
        net = tuple(sa - sb for sa, sb in zip(shift_a, shift_b))
        out = {tuple(x + y for x, y in zip(e, net)): c for e, c in quot.items()}
        try:
            return self.canon(out)
        except NotInRing:
            return None

    def random(self, rng):
        out = {}
        for _ in range(rng.randint(0, 3)):
            exps = tuple(
                rng.randint(-2, 2) if ok else rng.randint(0, 2)
                for ok in self._inv_mask
            )
            out[exps] = self.base.random(rng)
        return self.canon(out)

    def format_payload(self, a):
        if not a:
            return "0"
        parts = []
        for exps in sorted(a, reverse=True):
            c = a[exps]
            mon = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.variables, exps)
                if e != 0
            )
            cs = self.base.format_payload(c)
            if not mon:
                term = cs
            elif self.base.is_one_p(c):
                term = mon
            elif self.base.is_zero_p(self.base.add(c, self.base.one_p())):
                term = f"-{mon}"
            else:
                term = f"{cs}*{mon}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    def parse_payload(self, text):
        terms = _split_terms(text)
        out = self.zero_p()
        for sign, term in terms:
            exps = [0] * len(self.variables)
            coeff = self.base.one_p()
            for factor in term.split("*"):
                factor = factor.strip()
                if not factor:
                    raise NotInRing(f"empty factor in {text!r}")
                m = _VAR_POW.fullmatch(factor)
                if m and m.group(1) in self.variables:
                    idx = self.variables.index(m.group(1))
                    exps[idx] += int(m.group(2)) if m.group(2) else 1
                else:
                    coeff = self.base.mul(coeff, self.base.parse_payload(factor))
            if sign < 0:
                coeff = self.base.neg(coeff)
            out = self.add(out, self.canon({tuple(exps): coeff}))
        return out


_VAR_POW = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?")


def _split_terms(text):
    """Split a monomial sum into (sign, term) pairs; '^-1' stays intact."""
    text = text.replace(" ", "")
    if not text:
        raise NotInRing("empty element literal")
    terms = []
    sign, start = 1, 0
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        start = 1
    i = start
    while i < len(text):
        ch = text[i]
        if ch in "+-" and text[i - 1] not in "^*/+-":
            terms.append((sign, text[start:i]))
            sign = -1 if ch == "-" else 1
            start = i + 1
        i += 1
    terms.append((sign, text[start:]))
    if any(not t for _, t in terms):
        raise NotInRing(f"malformed element literal {text!r}")
    return terms


# ---------------------------------------------------------------------------
# Localization R_s
# ---------------------------------------------------------------------------


class LocalizedRing(Ring):
    """Ring of fractions r/s^k for a fixed non-nilpotent s.

    Payload (r, k) with k minimal: no factor of s cancels while staying in the
    base ring.  Over a Mod base the canonical form lives in Z/m1, m1 the
    largest divisor of the modulus coprime to s.
    """

    kind = "loc"

    def __init__(self, base, s):
        if isinstance(base, LocalizedRing):
            raise NotInRing("nested localization is not supported")
        self.base = base
        self.s = base.canon(s.payload if isinstance(s, RingElement) else s)
        if base.is_zero_p(self.s):
            raise NotInRing("cannot localize at zero")
        self._m1 = None
        if isinstance(base, ModRing):
            m1 = base.modulus
            g = math.gcd(self.s % base.modulus, m1)
            while g > 1:
                m1 //= g
                g = math.gcd(self.s, m1)
            if m1 == 1:
                raise NotInRing(f"{self.s} is nilpotent in {base}")
            self._m1 = m1
            self._s_inv = pow(self.s, -1, m1)

    def __eq__(self, other):
        return (
            isinstance(other, LocalizedRing)
            and other.base == self.base
            and other.s == self.s
        )

    def __hash__(self):
        return hash(("loc", self.base, repr(self.s)))

    def canon(self, a):
        if not (isinstance(a, tuple) and len(a) == 2):
            raise NotInRing(f"(numerator, power) payload expected, got {a!r}")
        r, k = self.base.canon(a[0]), a[1]
        if not isinstance(k, int) or k < 0:
            raise NotInRing(f"denominator power must be a nonnegative int, got {k!r}")
        if self._m1 is not None:
            return ((r * pow(self._s_inv, k, self._m1)) % self._m1, 0)
        if self.base.is_zero_p(r):
            return (self.base.zero_p(), 0)
        while k > 0:
            q = self.base.divide_exact(r, self.s)
            if q is None:
                break
            r, k = q, k - 1
        return (r, k)

    def zero_p(self):
        return (self.base.zero_p(), 0)

    def one_p(self):
        return self.canon((self.base.one_p(), 0))

    def from_int(self, n):
        return self.canon((self.base.from_int(n), 0))

    def _s_pow(self, k):
        out = self.base.one_p()
        for _ in range(k):
            out = self.base.mul(out, self.s)
        return out

    def add(self, a, b):
        (r1, k1), (r2, k2) = a, b
        k = max(k1, k2)
        r = self.base.add(
            self.base.mul(r1, self._s_pow(k - k1)),
            self.base.mul(r2, self._s_pow(k - k2)),
        )
        return self.canon((r, k))

    def neg(self, a):
        return (self.base.neg(a[0]), a[1])

    def mul(self, a, b):
        return self.canon((self.base.mul(a[0], b[0]), a[1] + b[1]))

    def is_unit(self, a):
        try:
            self.inv(a)
            return True
        except NotAUnit:
            return False

    def inv(self, a):
        r, k = a
        if self.base.is_zero_p(r):
            raise NotAUnit("0 is not a unit", witness=0)
        if self._m1 is not None:
            g = math.gcd(r, self._m1)
            if g != 1:
                raise NotAUnit(f"gcd({r}, {self._m1}) = {g}", witness=g)
            return (pow(r, -1, self._m1), 0)
        if self.base.is_unit(r):
            return self.canon((self.base.mul(self.base.inv(r), self._s_pow(k)), 0))
        # r must divide a power of s
        for t in range(1, _UNIT_SEARCH_CAP + 1):
            w = self.base.divide_exact(self._s_pow(t), r)
            if w is not None:
                return self.canon((self.base.mul(w, self._s_pow(k)), t))
        raise NotAUnit(f"{self.base.format_payload(r)} divides no power of s", witness=r)

    def divide_exact(self, a, b):
        (ra, ka), (rb, kb) = a, b
        if self.base.is_zero_p(rb) and self._m1 is None:
            return None
        if self.base.is_zero_p(ra):
            return self.zero_p()
        if self._m1 is not None:
            av = (ra * pow(self._s_inv, ka, self._m1)) % self._m1
            bv = (rb * pow(self._s_inv, kb, self._m1)) % self._m1
            q = ModRing(self._m1).divide_exact(av, bv)
            return None if q is None else self.canon((q, 0))
        num = self.base.mul(ra, self._s_pow(kb))
        for j in range(_UNIT_SEARCH_CAP + 1):
            y = self.base.divide_exact(num, rb)
            if y is not None:
                return self.canon((y, ka + j))
            num = self.base.mul(num, self.s)
        return None

    def is_local_ring(self):
        # Z localized at a prime is local
        if isinstance(self.base, IntegerRing):
            p = abs(self.s)
            if p < 2:
                return False
            return all(p % d for d in range(2, int(p**0.5) + 1))
        return False

    def random(self, rng):
        return self.canon((self.base.random(rng), rng.randint(0, 3)))

    def format_payload(self, a):
        r, k = a
        rs = self.base.format_payload(r)
        if k == 0:
            return rs
        ss = self.base.format_payload(self.s)
        return f"{rs}/{ss}" if k == 1 else f"{rs}/{ss}^{k}"

    def parse_payload(self, text):
        text = text.strip()
        if "/" not in text:
            return self.canon((self.base.parse_payload(text), 0))
        left, right = text.rsplit("/", 1)
        num = self.base.parse_payload(left)
        m = re.fullmatch(r"(.+?)\^(\d+)", right)
        den_text, k = (m.group(1), int(m.group(2))) if m else (right, 1)
        den = self.base.parse_payload(den_text)
        # denominator must itself be invertible here, i.e. divide a power of s
        inv_den = self.inv((den, 0))
        return self.mul((num, 0), self._pow_payload(inv_den, k))

    def _pow_payload(self, a, n):
        out = self.one_p()
        for _ in range(n):
            out = self.mul(out, a)
        return out


# ---------------------------------------------------------------------------
# Univariate polynomial extension R[X]
# ---------------------------------------------------------------------------


class PolyRing(Ring):
    """R[X] with dense ascending coefficient tuples (no trailing zeros)."""

    kind = "poly"

    def __init__(self, base, variable):
        self.base = base
        self.variable = str(variable)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.base == self.base
            and other.variable == self.variable
        )

    def __hash__(self):
        return hash(("poly", self.base, self.variable))

    def var(self):
        return RingElement(self, (self.base.zero_p(), self.base.one_p()))

    def canon(self, a):
        if isinstance(a, dict):  # allow monomial-map input
            deg = max((e[0] for e in a), default=-1)
            coeffs = [self.base.zero_p()] * (deg + 1)
            for e, c in a.items():
                if e[0] < 0:
                    raise NotInRing("negative exponent in a polynomial")
                coeffs[e[0]] = self.base.add(coeffs[e[0]], c)
            a = tuple(coeffs)
        if not isinstance(a, tuple):
            raise NotInRing(f"coefficient tuple expected, got {a!r}")
        coeffs = [self.base.canon(c) for c in a]
        while coeffs and self.base.is_zero_p(coeffs[-1]):
            coeffs.pop()
        return tuple(coeffs)

    def zero_p(self):
        return ()

    def one_p(self):
        return (self.base.one_p(),)

    def from_int(self, n):
        return self.canon((self.base.from_int(n),))

    def add(self, a, b):
        n = max(len(a), len(b))
        z = self.base.zero_p()
        out = [
            self.base.add(a[i] if i < len(a) else z, b[i] if i < len(b) else z)
            for i in range(n)
        ]
        return self.canon(tuple(out))

    def neg(self, a):
        return tuple(self.base.neg(c) for c in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        z = self.base.zero_p()
        out = [z] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            for j, cb in enumerate(b):
                out[i + j] = self.base.add(out[i + j], self.base.mul(ca, cb))
        return self.canon(tuple(out))

    def degree(self, a):
        return len(a) - 1

    def is_unit(self, a):
        return len(a) == 1 and self.base.is_unit(a[0])

    def inv(self, a):
        if len(a) != 1:
            raise NotAUnit(
                "only unit constants are inverted in R[X]", witness=len(a) - 1
            )
        return (self.base.inv(a[0]),)

    def divide_exact(self, a, b):
        if not b:
            return None
        rem = list(a)
        quot = [self.base.zero_p()] * max(len(a) - len(b) + 1, 0)
        while len(rem) >= len(b):
            c = self.base.divide_exact(rem[-1], b[-1])
            if c is None:
                return None
            shift = len(rem) - len(b)
            quot[shift] = c
            for i, cb in enumerate(b):
                rem[shift + i] = self.base.sub(rem[shift + i], self.base.mul(c, cb))
            while rem and self.base.is_zero_p(rem[-1]):
                rem.pop()
        return self.canon(tuple(quot)) if not rem else None

    def random(self, rng):
        return self.canon(tuple(self.base.random(rng) for _ in range(rng.randint(0, 3))))

    def format_payload(self, a):
        if not a:
            return "0"
        helper = LaurentRing(self.base, (self.variable,))
        return helper.format_payload({(i,): c for i, c in enumerate(a) if not self.base.is_zero_p(c)})

    def parse_payload(self, text):
        helper = LaurentRing(self.base, (self.variable,))
        return self.canon(helper.parse_payload(text))


# ---------------------------------------------------------------------------
# spec-level operations
# ---------------------------------------------------------------------------

Z = IntegerRing()
Q = RationalRing()


def ring_add(x, y):
    return x + y


def ring_mul(x, y):
    return x * y


def ring_sub(x, y):
    return x - y


def ring_neg(x):
    return -x


def ring_inv(x):
    return x.inverse()


def localize(x, s):
    """Image of x under the canonical map R -> R_s."""
    if isinstance(s, LocalizedRing):
        target = s
    else:
        target = LocalizedRing(x.ring, x.ring(s).payload if not isinstance(s, RingElement) else s.payload)
    if target.base != x.ring:
        raise DescriptorMismatch(f"cannot localize {x.ring} element into {target}")
    return RingElement(target, (x.payload, 0))


def clear_denominator_power(x):
    """Minimal k and r in the base ring with s^k * x = localize(r)."""
    ring = x.ring
    if not isinstance(ring, LocalizedRing):
        raise DescriptorMismatch("clear_denominator_power needs a localized element")
    r, k = x.payload
    return k, RingElement(ring.base, r)


def poly_substitute(p, image):
    """Evaluate p in R[X] at ``image`` (an element of R[X] or of R)."""
    ring = p.ring
    if not isinstance(ring, PolyRing):
        raise DescriptorMismatch("poly_substitute needs a polynomial element")
    if isinstance(image, int):
        image = RingElement(ring.base, ring.base.from_int(image))
    target = image.ring
    if target == ring:
        embed = lambda c: RingElement(ring, (c,))
    elif target == ring.base:
        embed = lambda c: RingElement(ring.base, c)
    else:
        raise DescriptorMismatch(f"cannot substitute a {target} value into {ring}")
    result = target.zero
    for c in reversed(p.payload):
        result = result * image + embed(c)
    return result


def convert(x, target):
    """Canonical embedding of ``x`` into ``target`` (coefficient-wise where needed)."""
    ring = x.ring
    if ring == target:
        return x
    if isinstance(ring, IntegerRing):
        if isinstance(target, (RationalRing, ModRing)):
            return RingElement(target, target.from_int(x.payload))
    if isinstance(target, LocalizedRing) and target.base == ring:
        return RingElement(target, (x.payload, 0))
    if isinstance(target, PolyRing):
        if target.base == ring:
            return RingElement(target, (x.payload,))
        if isinstance(ring, PolyRing) and ring.variable == target.variable:
            coeffs = tuple(
                convert(RingElement(ring.base, c), target.base).payload for c in x.payload
            )
            return RingElement(target, coeffs)
        # constants through the base chain
        return RingElement(target, (convert(x, target.base).payload,))
    if isinstance(target, LaurentRing):
        if target.base == ring:
            return RingElement(target, {(0,) * len(target.variables): x.payload})
        if isinstance(ring, LaurentRing):
            if set(ring.variables) <= set(target.variables) and ring.base == target.base:
                pos = [target.variables.index(v) for v in ring.variables]
                out = {}
                for exps, c in x.payload.items():
                    key = [0] * len(target.variables)
                    for p, e in zip(pos, exps):
                        key[p] = e
                    out[tuple(key)] = c
                return RingElement(target, out)
        return RingElement(
            target, {(0,) * len(target.variables): convert(x, target.base).payload}
        )
    if isinstance(ring, LocalizedRing) and isinstance(target, RationalRing):
        if isinstance(ring.base, IntegerRing):
            r, k = x.payload
            return RingElement(target, Fraction(r, ring.s**k))
        if isinstance(ring.base, RationalRing):
            r, k = x.payload
            return RingElement(target, r / ring.s**k)
    if isinstance(ring, LocalizedRing) and isinstance(target, LocalizedRing):
        if ring.base == target.base and target.s == ring.s:
            return RingElement(target, x.payload)
    raise DescriptorMismatch(f"no canonical map {ring} -> {target}")


# ---------------------------------------------------------------------------
# descriptor grammar: Z, Q, Zmod:9, laurent:Q:[a,b,u]:inv=[u], loc:Z:s=2,
# poly:<base>:X
# ---------------------------------------------------------------------------


def parse_ring(text):
    tokens = text.strip().split(":")
    ring, i = _parse_ring_tokens(tokens, 0)
    if i != len(tokens):
        raise NotInRing(f"trailing tokens in ring descriptor {text!r}")
    return ring


def _parse_ring_tokens(tokens, i):
    if i >= len(tokens):
        raise NotInRing("truncated ring descriptor")
    head = tokens[i]
    if head == "Z":
        return Z, i + 1
    if head == "Q":
        return Q, i + 1
    if head == "Zmod":
        return ModRing(int(tokens[i + 1])), i + 2
    if head == "laurent":
        base, j = _parse_ring_tokens(tokens, i + 1)
        variables = _parse_name_list(tokens[j])
        j += 1
        invertible = ()
        if j < len(tokens) and tokens[j].startswith("inv="):
            invertible = _parse_name_list(tokens[j][4:])
            j += 1
        return LaurentRing(base, variables, invertible), j
    if head == "loc":
        base, j = _parse_ring_tokens(tokens, i + 1)
        if j >= len(tokens) or not tokens[j].startswith("s="):
            raise NotInRing("localization descriptor needs s=<element>")
        s = base.parse_payload(tokens[j][2:])
        return LocalizedRing(base, s), j + 1
    if head == "poly":
        base, j = _parse_ring_tokens(tokens, i + 1)
        if j >= len(tokens):
            raise NotInRing("polynomial descriptor needs a variable name")
        return PolyRing(base, tokens[j]), j + 1
    raise NotInRing(f"unknown ring kind {head!r}")


def _parse_name_list(text):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise NotInRing(f"expected [name,...], got {text!r}")
    inner = text[1:-1].strip()
    return tuple(n.strip() for n in inner.split(",")) if inner else ()


def format_ring(ring):
    if isinstance(ring, IntegerRing):
        return "Z"
    if isinstance(ring, RationalRing):
        return "Q"
    if isinstance(ring, ModRing):
        return f"Zmod:{ring.modulus}"
    if isinstance(ring, LaurentRing):
        vars_part = "[" + ",".join(ring.variables) + "]"
        inv_part = ":inv=[" + ",".join(sorted(ring.invertible)) + "]"
        return f"laurent:{format_ring(ring.base)}:{vars_part}{inv_part}"
    if isinstance(ring, LocalizedRing):
        return f"loc:{format_ring(ring.base)}:s={ring.base.format_payload(ring.s)}"
    if isinstance(ring, PolyRing):
        return f"poly:{format_ring(ring.base)}:{ring.variable}"
    return f"<ring {ring.kind}>"


def parse_element(ring, text):
    return RingElement(ring, ring.parse_payload(str(text)))


def format_element(x):
    return x.ring.format_payload(x.payload)


def random_element(ring, rng):
    return RingElement(ring, ring.random(rng))
