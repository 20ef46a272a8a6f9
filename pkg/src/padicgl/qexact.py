"""Exact scalar arithmetic over half-integer powers of q.

Every number this library touches -- Satake parameters, L-factor
coefficients, epsilon monomials, eigenvalue norms -- lies in
Q(i) * q^((1/2)Z) for a concrete prime power q = p^f.  Scalars are stored
as a Gaussian rational c together with a half-integer exponent k/2, and
the representation is deliberately *not* canonical: 3 * q^0 and 1 * q^(1/2)
denote the same number when q = 9.  Equality therefore always goes through
the context-aware tests in this module, never through field-wise
comparison of the raw data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

FractionLike = Union[int, Fraction, Tuple[int, int]]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _fraction(value: FractionLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (tuple, list)) and len(value) == 2:
        return Fraction(value[0], value[1])
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _half_integer(value: FractionLike, what: str = "exponent") -> Fraction:
    x = _fraction(value)
    if (2 * x).denominator != 1:
        raise ValueError(f"{what} must lie in (1/2)Z, got {x}")
    return x


@dataclass(frozen=True)
class GaussianRational:
    """An element of Q(i), kept in lowest terms by Fraction."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(re: FractionLike, im: FractionLike = 0) -> "GaussianRational":
        return GaussianRational(_fraction(re), _fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def inverse(self) -> "GaussianRational":
        n = self.norm_sq()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        return self * other.inverse()

    def __pow__(self, n: int) -> "GaussianRational":
        if n < 0:
            return self.inverse() ** (-n)
        out = GaussianRational.of(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, r: Fraction) -> "GaussianRational":
        return GaussianRational(self.re * r, self.im * r)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        istr = "i" if mag == 1 else f"{mag}i"
        return f"{self.re}{sign}{istr}"


QI_ZERO = GaussianRational.of(0)
QI_ONE = GaussianRational.of(1)
QI_I = GaussianRational.of(0, 1)


@dataclass(frozen=True)
class LocalFieldContext:
    """The numeric data of the base field: q = p^f, the valuation d of the
    absolute different, and the exponent n(psi) of the additive character."""

    p: int
    f: int
    d: int = 0
    n_psi: int = 0

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.f < 1:
            raise ValueError("f must be a positive integer")
        if self.d < 0:
            raise ValueError("d must be non-negative")

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def sqrt_q(self) -> Optional[int]:
        """Integer square root of q when f is even, else None."""
        if self.f % 2 == 0:
            return self.p ** (self.f // 2)
        return None

    def q_pow(self, k: int) -> Fraction:
        """q^k as an exact rational, k any integer."""
        if k >= 0:
            return Fraction(self.q ** k)
        return Fraction(1, self.q ** (-k))


@dataclass(frozen=True)
class ExactScalar:
    """c * q^(k/2) with c a Gaussian rational.  Non-canonical by design."""

    c: GaussianRational
    k: int = 0

    @staticmethod
    def of(re: FractionLike, im: FractionLike = 0, k: int = 0) -> "ExactScalar":
        return ExactScalar(GaussianRational.of(re, im), k)

    @staticmethod
    def one() -> "ExactScalar":
        return ExactScalar(QI_ONE, 0)

    @staticmethod
    def q_power(w: FractionLike) -> "ExactScalar":
        """The scalar q^w for a half-integer w."""
        w = _half_integer(w)
        return ExactScalar(QI_ONE, int(2 * w))

    def is_zero(self) -> bool:
        return self.c.is_zero()

    def __mul__(self, other: "ExactScalar") -> "ExactScalar":
        return ExactScalar(self.c * other.c, self.k + other.k)

    def __truediv__(self, other: "ExactScalar") -> "ExactScalar":
        if other.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        return ExactScalar(self.c / other.c, self.k - other.k)

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.c, self.k)

    def __pow__(self, n: int) -> "ExactScalar":
        if n < 0 and self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        return ExactScalar(self.c ** n, self.k * n)

    def inverse(self) -> "ExactScalar":
        return self ** (-1)

    def shift(self, w: FractionLike) -> "ExactScalar":
        """Multiply by q^w, w half-integer."""
        w = _half_integer(w)
        return ExactScalar(self.c, self.k + int(2 * w))


def canonical_scalar_form(x: ExactScalar, ctx: LocalFieldContext) -> Tuple[GaussianRational, int]:
    """Reduce to (c', r) with r in {0, 1} denoting c' * q^(r/2); for square q
    the root is absorbed and r = 0.  Two scalars are equal iff their
    canonical forms agree."""
    a, r = divmod(x.k, 2)
    c = x.c.scale(ctx.q_pow(a))
    if r and ctx.sqrt_q is not None:
        c = c.scale(Fraction(ctx.sqrt_q))
        r = 0
    return c, r


def canonical_scalar_key(x: ExactScalar, ctx: LocalFieldContext):
    c, r = canonical_scalar_form(x, ctx)
    return (c.re.numerator, c.re.denominator, c.im.numerator, c.im.denominator, r)


def scalars_equal(x: ExactScalar, y: ExactScalar, ctx: LocalFieldContext) -> bool:
    return canonical_scalar_key(x, ctx) == canonical_scalar_key(y, ctx)


def equals_one(x: ExactScalar, ctx: LocalFieldContext) -> bool:
    """True iff x denotes 1 for the concrete q.  Exact: requires c real,
    positive, with c^2 = q^(-k)."""
    if x.c.im != 0:
        return False
    if x.c.re <= 0:
        return False
    return x.c.re * x.c.re == ctx.q_pow(-x.k)


def as_q_power(x: ExactScalar, ctx: LocalFieldContext) -> Optional[Fraction]:
    """If x = q^w for a half-integer w, return w, else None."""
    if x.c.im != 0 or x.c.re <= 0:
        return None
    num, den = x.c.re.numerator, x.c.re.denominator
    a = 0
    while num % ctx.p == 0:
        num //= ctx.p
        a += 1
    b = 0
    while den % ctx.p == 0:
        den //= ctx.p
        b += 1
    if num != 1 or den != 1:
        return None
    w = Fraction(x.k, 2) + Fraction(a - b, ctx.f)
    if (2 * w).denominator != 1:
        return None
    return w


def _format_exponent(w: Fraction) -> str:
    if w.denominator == 1:
        return f"q^{w.numerator}"
    return f"q^({w})"


def render_scalar(x: ExactScalar, ctx: LocalFieldContext) -> str:
    """Canonical text form "c * q^(k/2)" with pure q-powers collapsed, so the
    Sp(3) L-coefficient prints as "q^-2" and not "1/9"."""
    if x.is_zero():
        return "0"
    w = as_q_power(x, ctx)
    if w is not None:
        return "1" if w == 0 else _format_exponent(w)
    neg = -x
    w = as_q_power(neg, ctx)
    if w is not None:
        return "-1" if w == 0 else "-" + _format_exponent(w)
    c, r = canonical_scalar_form(x, ctx)
    base = str(c)
    if r == 0:
        return base
    return f"{base} * q^(1/2)"


@dataclass(frozen=True)
class PosQMonomial:
    """a * q^(k/2) with a > 0 rational; the value |.|^2 of a scalar lives here."""

    a: Fraction
    k: int = 0

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("PosQMonomial requires a > 0")

    def __mul__(self, other: "PosQMonomial") -> "PosQMonomial":
        return PosQMonomial(self.a * other.a, self.k + other.k)


def norm_sq(x: ExactScalar) -> PosQMonomial:
    """|x|^2 as a positive monomial; x must be nonzero."""
    n = x.c.norm_sq()
    if n == 0:
        raise ValueError("norm of zero scalar")
    return PosQMonomial(n, 2 * x.k)


def norm_sq_compare(x: PosQMonomial, y: PosQMonomial, ctx: LocalFieldContext) -> int:
    """Exact three-way comparison of positive monomials: -1, 0 or +1.

    Comparing a1*q^(k1/2) with a2*q^(k2/2) is done after squaring, which
    clears the half-exponents without ever leaving the rationals.
    """
    left = x.a * x.a
    right = y.a * y.a
    if x.k >= y.k:
        left *= ctx.q_pow(x.k - y.k)
    else:
        right *= ctx.q_pow(y.k - x.k)
    if left < right:
        return -1
    if left > right:
        return 1
    return 0


def norm_is_one(x: ExactScalar, ctx: LocalFieldContext) -> bool:
    return norm_sq_compare(norm_sq(x), PosQMonomial(Fraction(1), 0), ctx) == 0


@dataclass(frozen=True)
class LFactor:
    """A product of inverse factors (1 - a T^t)^(-1) with T = q^(-s).

    The empty product denotes the constant function 1.  Multisets are kept
    as stored; canonical order is only imposed when a context is available.
    """

    factors: Tuple[Tuple[ExactScalar, int], ...] = ()

    def __post_init__(self):
        for a, t in self.factors:
            if a.is_zero():
                raise ValueError("L-factor coefficient must be nonzero")
            if t < 1:
                raise ValueError("L-factor exponent t must be >= 1")

    @staticmethod
    def one() -> "LFactor":
        return LFactor(())

    @staticmethod
    def of(pairs: Iterable[Tuple[ExactScalar, int]]) -> "LFactor":
        return LFactor(tuple(pairs))

    def __mul__(self, other: "LFactor") -> "LFactor":
        return LFactor(self.factors + other.factors)

    def is_one(self) -> bool:
        return not self.factors

    def shift(self, c: FractionLike) -> "LFactor":
        """L(s + c) as an LFactor in s: every (a, t) becomes (a*q^(-t*c), t)."""
        c = _half_integer(c, "shift")
        return LFactor(tuple((a.shift(-t * c), t) for a, t in self.factors))

    def canonical_key(self, ctx: LocalFieldContext):
        return tuple(sorted((t,) + canonical_scalar_key(a, ctx) for a, t in self.factors))

    def pole_at(self, s0: FractionLike, ctx: LocalFieldContext) -> Tuple[bool, int]:
        """Pole data at s = s0 (half-integer): a factor (a, t) vanishes there
        iff a * q^(-t*s0) = 1."""
        s0 = _half_integer(s0, "s0")
        order = 0
        for a, t in self.factors:
            if equals_one(a.shift(-t * s0), ctx):
                order += 1
        return order >= 1, order


def lfactors_equal(l1: LFactor, l2: LFactor, ctx: LocalFieldContext) -> bool:
    return l1.canonical_key(ctx) == l2.canonical_key(ctx)


def render_lfactor(l: LFactor, ctx: LocalFieldContext) -> str:
    if l.is_one():
        return "1"
    rendered = []
    for key, (a, t) in sorted(
        ((((t,) + canonical_scalar_key(a, ctx)), (a, t)) for a, t in l.factors),
        key=lambda item: item[0],
    ):
        tpart = "T" if t == 1 else f"T^{t}"
        coeff = render_scalar(a, ctx)
        body = tpart if coeff == "1" else f"{coeff} {tpart}"
        rendered.append(f"(1 - {body})^-1")
    return " * ".join(rendered)
