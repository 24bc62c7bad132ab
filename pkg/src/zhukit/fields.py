"""Exact base fields: the rationals, prime fields F_p (p odd) and simple
algebraic extensions F[t]/(m(t)).

Each field object implements arithmetic on *raw* element representations
(``gmpy2.mpq`` for Q, ``int`` in ``[0, p)`` for F_p, a tuple of base raws for
an extension).  The linear-algebra and mode code works on raws for speed;
:class:`Scalar` is the user-facing immutable wrapper.
"""
from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Iterator, Sequence

import gmpy2
from gmpy2 import mpq

__all__ = [
    "FieldError",
    "Field",
    "Rationals",
    "PrimeField",
    "Extension",
    "Scalar",
    "QQ",
    "parse_field",
    "embed",
    "is_prime",
]


class FieldError(ValueError):
    """Usage error: bad field description, mismatched fields, no embedding."""


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


class Field:
    """Abstract exact field.  Subclasses define the raw arithmetic."""

    kind = "abstract"
    char = 0
    order: int | None = None  # None for infinite fields
    degree = 1  # degree over the prime field (Q counts as prime field)

    # --- raw arithmetic -------------------------------------------------
    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def from_fraction(self, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return self.div(self.from_int(num), self.from_int(den))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one()
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def fmt(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise FieldError(f"{self} is infinite")

    def random(self, rng: random.Random):
        raise NotImplementedError

    # --- structure ------------------------------------------------------
    def tower(self) -> list["Field"]:
        """This field followed by its base, base of base, ... down to the prime field."""
        chain: list[Field] = [self]
        while isinstance(chain[-1], Extension):
            chain.append(chain[-1].base)
        return chain

    def prime_field(self) -> "Field":
        return self.tower()[-1]

    def __call__(self, value) -> "Scalar":
        return Scalar(self, self.coerce(value))

    def coerce(self, value):
        """Turn an int, Fraction, string or Scalar into a raw element."""
        if isinstance(value, Scalar):
            if value.field == self:
                return value.value
            return embed(value, self).value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_fraction(value.numerator, value.denominator)
        if type(value) is type(mpq()):
            return self.from_fraction(int(value.numerator), int(value.denominator))
        if isinstance(value, str):
            return self.parse(value)
        raise FieldError(f"cannot coerce {value!r} into {self}")

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"<field {self}>"


class Rationals(Field):
    kind = "Q"
    char = 0

    def zero(self):
        return mpq(0)

    def one(self):
        return mpq(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return mpq(n)

    def from_fraction(self, num, den=1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return mpq(num, den)

    def fmt(self, a):
        return str(a)

    def parse(self, text):
        text = text.strip().replace(" ", "")
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise FieldError(f"not a rational number: {text!r}")
        return mpq(text)

    def random(self, rng):
        return mpq(rng.randint(-9, 9), rng.randint(1, 5))

    def _key(self):
        return ("Q",)

    def __str__(self):
        return "Q"


QQ = Rationals()


class PrimeField(Field):
    kind = "Fp"

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p == 2:
            raise FieldError("characteristic 2 is excluded")
        self.p = p
        self.char = p
        self.order = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n % self.p

    def fmt(self, a):
        return str(a)

    def parse(self, text):
        q = QQ.parse(text)
        return self.from_fraction(int(q.numerator), int(q.denominator))

    def elements(self):
        return iter(range(self.p))

    def random(self, rng):
        return rng.randrange(self.p)

    def _key(self):
        return ("F", self.p)

    def __str__(self):
        return f"F{self.p}"


# --- polynomials over a field (coefficient lists, low degree first) --------


def poly_trim(F: Field, c: Sequence) -> list:
    c = list(c)
    while c and F.is_zero(c[-1]):
        c.pop()
    return c


def poly_add(F, a, b):
    n = max(len(a), len(b))
    z = F.zero()
    return poly_trim(F, [F.add(a[i] if i < len(a) else z, b[i] if i < len(b) else z) for i in range(n)])


def poly_sub(F, a, b):
    n = max(len(a), len(b))
    z = F.zero()
    return poly_trim(F, [F.sub(a[i] if i < len(a) else z, b[i] if i < len(b) else z) for i in range(n)])


def poly_mul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(F, out)


def poly_divmod(F, a, b):
    b = poly_trim(F, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = poly_trim(F, a)
    lead_inv = F.inv(b[-1])
    q = [F.zero()] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        c = F.mul(r[-1], lead_inv)
        shift = len(r) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = F.sub(r[shift + i], F.mul(c, y))
        r = poly_trim(F, r)
    return poly_trim(F, q), r


def poly_monic(F, a):
    a = poly_trim(F, a)
    if not a:
        return a
    li = F.inv(a[-1])
    return [F.mul(x, li) for x in a]


def poly_gcd(F, a, b):
    a, b = poly_trim(F, a), poly_trim(F, b)
    while b:
        a, b = b, poly_divmod(F, a, b)[1]
    return poly_monic(F, a)


def poly_xgcd(F, a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = poly_trim(F, a), poly_trim(F, b)
    s0, s1 = [F.one()], []
    t0, t1 = [], [F.one()]
    while r1:
        q, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(F, s0, poly_mul(F, q, s1))
        t0, t1 = t1, poly_sub(F, t0, poly_mul(F, q, t1))
    li = F.inv(r0[-1])
    return ([F.mul(x, li) for x in r0], [F.mul(x, li) for x in s0], [F.mul(x, li) for x in t0])


def poly_powmod(F, base, e, mod):
    result = [F.one()]
    base = poly_divmod(F, base, mod)[1]
    while e:
        if e & 1:
            result = poly_divmod(F, poly_mul(F, result, base), mod)[1]
        base = poly_divmod(F, poly_mul(F, base, base), mod)[1]
        e >>= 1
    return result


def poly_deriv(F, a):
    return poly_trim(F, [F.mul(F.from_int(i), a[i]) for i in range(1, len(a))])


def poly_eval(F, a, x):
    acc = F.zero()
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def is_irreducible(F: Field, poly) -> bool:
    """Irreducibility of a polynomial over F.

    Finite fields use Ben-Or's test (gcd with x^(q^i) - x); Q uses sympy's
    factorisation.  Towers over Q are not supported.
    """
    poly = poly_trim(F, poly)
    d = len(poly) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if F.order is not None:
        f = poly_monic(F, poly)
        x = [F.zero(), F.one()]
        h = x
        for _ in range(d // 2):
            h = poly_powmod(F, h, F.order, f)
            g = poly_gcd(F, poly_sub(F, h, x), f)
            if len(g) > 1:
                return False
        return True
    if isinstance(F, Rationals):
        import sympy

        t = sympy.Symbol("t")
        expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * t**i for i, c in enumerate(poly))
        return sympy.Poly(expr, t, domain="QQ").is_irreducible
    raise FieldError(f"irreducibility test over {F} is unsupported")


class Extension(Field):
    """Simple extension base[var]/(minpoly) with a monic irreducible minpoly."""

    kind = "ext"
    MAX_DEGREE = 8

    def __init__(self, base: Field, minpoly: Sequence, var: str = "t", check: bool = True):
        coeffs = [base.coerce(c) for c in minpoly]
        coeffs = poly_trim(base, coeffs)
        d = len(coeffs) - 1
        if d < 1:
            raise FieldError("minimal polynomial must have degree >= 1")
        if d > self.MAX_DEGREE:
            raise FieldError(f"extension degree {d} exceeds the supported maximum {self.MAX_DEGREE}")
        if coeffs[-1] != base.one():
            raise FieldError("minimal polynomial must be monic")
        self.base = base
        self.minpoly = tuple(coeffs)
        self.var = var
        self.n = d
        self.char = base.char
        self.degree = base.degree * d
        self.order = base.order**d if base.order is not None else None
        if check and not is_irreducible(base, coeffs):
            raise FieldError(f"{self._poly_str()} is not irreducible over {base}")
        self._zero = tuple([base.zero()] * d)
        self._one = tuple([base.one()] + [base.zero()] * (d - 1))

    def _poly_str(self):
        return format_poly(self.base, list(self.minpoly), self.var)

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        n = self.n
        prod = [B.zero()] * (2 * n - 1)
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not B.is_zero(y):
                    prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        m = self.minpoly
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if B.is_zero(c):
                continue
            for i in range(n):
                prod[k - n + i] = B.sub(prod[k - n + i], B.mul(c, m[i]))
        return tuple(prod[:n])

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        B = self.base
        g, s, _ = poly_xgcd(B, list(a), list(self.minpoly))
        if len(g) != 1:
            raise ZeroDivisionError("element not invertible (minpoly reducible?)")
        s = s + [B.zero()] * (self.n - len(s))
        return tuple(s[: self.n])

    def is_zero(self, a):
        B = self.base
        return all(B.is_zero(x) for x in a)

    def from_int(self, n):
        return self.from_base(self.base.from_int(n))

    def from_base(self, b):
        return (b,) + self._zero[1:]

    def gen(self):
        """The adjoined root t."""
        if self.n == 1:
            return (self.base.neg(self.minpoly[0]),)
        return (self.base.zero(), self.base.one()) + self._zero[2:]

    def fmt(self, a):
        return format_poly(self.base, list(a), self.var, zero_text="0")

    def parse(self, text):
        coeffs = parse_poly(text, self.var)
        acc = self.zero()
        g = self.gen()
        for power, c in coeffs.items():
            term = self.from_base(self.base.from_fraction(c.numerator, c.denominator))
            acc = self.add(acc, self.mul(term, self.pow(g, power)))
        return acc

    def elements(self):
        import itertools

        base_elems = list(self.base.elements())
        for combo in itertools.product(base_elems, repeat=self.n):
            yield tuple(combo)

    def random(self, rng):
        return tuple(self.base.random(rng) for _ in range(self.n))

    def coerce(self, value):
        """Also accepts a coefficient sequence (lowest power first) over the base."""
        if isinstance(value, (tuple, list)):
            if len(value) != self.n:
                raise FieldError(f"expected {self.n} coefficients for {self}, got {len(value)}")
            return tuple(self.base.coerce(c) for c in value)
        return super().coerce(value)

    def _key(self):
        return ("ext", self.base._key(), self.minpoly, self.var)

    def __str__(self):
        return f"{self.base}[{self.var}]/({self._poly_str()})"


def format_poly(F: Field, coeffs: Sequence, var: str = "x", zero_text: str = "0") -> str:
    """Render ``coeffs`` (low degree first) as e.g. ``t^2+3`` or ``2+3t``.

    Field elements are rendered ascending in degree for extension elements
    (``2+3t``) and descending for minimal polynomials; callers pick the order
    via ``var`` usage.  Here we always go ascending, matching scalar output.
    """
    parts = []
    for k, c in enumerate(coeffs):
        if F.is_zero(c):
            continue
        cs = F.fmt(c)
        if k == 0:
            parts.append(cs)
            continue
        mono = var if k == 1 else f"{var}^{k}"
        if cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append("-" + mono)
        elif re.fullmatch(r"-?\d+", cs):
            parts.append(cs + mono)
        else:
            parts.append(f"({cs}){mono}")
    if not parts:
        return zero_text
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


_TERM = re.compile(
    r"""(?P<sign>[+-]?)
        (?:\((?P<pcoef>[+-]?\d+(?:/\d+)?)\)|(?P<coef>\d+(?:/\d+)?))?
        \*?
        (?P<var>[a-z])?
        (?:\^(?P<exp>\d+))?""",
    re.X,
)


def parse_poly(text: str, var: str) -> dict[int, Fraction]:
    """Parse a univariate polynomial with rational coefficients into {power: coeff}."""
    s = text.replace(" ", "")
    if not s:
        raise FieldError("empty polynomial")
    pos = 0
    out: dict[int, Fraction] = {}
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise FieldError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
        coef_txt = m.group("pcoef") or m.group("coef")
        v = m.group("var")
        if v is None and coef_txt is None:
            raise FieldError(f"cannot parse polynomial {text!r}")
        if v is not None and v != var:
            raise FieldError(f"unexpected variable {v!r} in {text!r} (expected {var!r})")
        if m.group("exp") is not None and v is None:
            raise FieldError(f"exponent without variable in {text!r}")
        coef = Fraction(coef_txt) if coef_txt is not None else Fraction(1)
        if m.group("sign") == "-":
            coef = -coef
        power = 0 if v is None else int(m.group("exp") or 1)
        out[power] = out.get(power, Fraction(0)) + coef
        pos = m.end()
        if pos < len(s) and s[pos] not in "+-":
            raise FieldError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
    return {k: v for k, v in out.items() if v != 0}


def parse_field(text: str) -> Field:
    """Parse ``Q``, ``F<p>``, ``F<p>[t]/(poly)`` or ``Q[t]/(poly)``."""
    s = text.strip().replace(" ", "")
    m = re.fullmatch(r"(Q|F(\d+))(?:\[([a-z])\]/\((.+)\))?", s)
    if m is None:
        raise FieldError(f"bad field description {text!r}")
    base: Field = QQ if m.group(1) == "Q" else PrimeField(int(m.group(2)))
    if m.group(3) is None:
        return base
    var = m.group(3)
    coeffs = parse_poly(m.group(4), var)
    for c in coeffs.values():
        if c.denominator != 1:
            raise FieldError("minimal polynomial must have integer coefficients")
    deg = max(coeffs) if coeffs else 0
    return Extension(base, [int(coeffs.get(i, 0)) for i in range(deg + 1)], var=var)


class Scalar:
    """An immutable element of an exact field."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"field mismatch: {self.field} vs {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Scalar(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.pow(self.value, e))

    def inv(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (FieldError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.fmt(self.value)

    def __repr__(self):
        return f"Scalar({self.field}, {self})"


def embed_raw(value, source: Field, target: Field):
    """Embed a raw element of ``source`` into ``target`` along the tower of ``target``."""
    chain = target.tower()
    if source not in chain:
        raise FieldError(f"{source} does not embed in {target}")
    idx = chain.index(source)
    for level in reversed(chain[:idx]):
        value = level.from_base(value)
    return value


def embed(a: Scalar, target: Field) -> Scalar:
    return Scalar(target, embed_raw(a.value, a.field, target))
