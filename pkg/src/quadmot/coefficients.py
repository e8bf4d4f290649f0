"""Exact coefficient rings and formal group law arithmetic.

Everything downstream (quadric rings, correspondences, motivic
decompositions) is driven by a handful of theories that differ only in
their coefficient ring and formal group law:

* the additive law over ``Z/2^M`` (Chow groups, integrally or mod 2),
* the multiplicative-type law over ``Z/2^M [v, v^-1]`` (K0 flavour),
* the height-n laws over ``Z/2^M [v_n, v_n^-1]`` with logarithm
  ``sum_k p^-k v^((p^nk - 1)/(p^n - 1)) t^(p^nk)`` (Morava K-theories),

all truncated at a fixed degree N.  Coefficient arithmetic is exact:
residues modulo ``p^M`` for ring elements, and a denominator-tracked
pair (numerator modulo ``p^(M+K)``, denominator exponent) for the
rational intermediates of the logarithm/exponential, where K is a guard
precision that defaults to N.  A non-integral formal group law
coefficient is a construction bug and raises, never rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class PrecisionError(ArithmeticError):
    """A denominator exponent exceeded the configured guard precision."""


class NonIntegralError(ArithmeticError):
    """A coefficient that must be p-integral kept a denominator."""


class TruncationError(ArithmeticError):
    """A series coefficient beyond the truncation degree was requested."""


MODE_INTEGRAL = "integral"
MODE_MOD_P = "mod-p"
MODE_V_ONE = "set-v-to-one"


@dataclass(frozen=True)
class CoeffRing:
    """Ring of coefficients ``Z/p^M [v, v^-1]`` (v optional).

    ``height`` is the n with deg v = 1 - p^n; ``height=None`` means the
    plain ring ``Z/p^M`` without a periodicity class.  In mode
    ``set-v-to-one`` the class v is identified with 1 and all gradings
    collapse modulo ``p^n - 1``.
    """

    p: int = 2
    precision: int = 8
    height: int | None = None
    mode: str = MODE_INTEGRAL
    connective: bool = False

    def __post_init__(self):
        if self.mode not in (MODE_INTEGRAL, MODE_MOD_P, MODE_V_ONE):
            raise ValueError(f"unknown ring mode {self.mode!r}")
        if self.mode == MODE_MOD_P and self.precision != 1:
            object.__setattr__(self, "precision", 1)
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.height is not None and self.height < 1:
            raise ValueError("height must be >= 1 when present")

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    @property
    def period(self) -> int | None:
        """Grading period ``p^n - 1`` of the periodicity class."""
        return self.p ** self.height - 1 if self.height is not None else None

    # -- element constructors -------------------------------------------------

    def zero(self) -> "CoeffElement":
        return CoeffElement(self, {})

    def one(self) -> "CoeffElement":
        return CoeffElement(self, {0: 1})

    def integer(self, k: int) -> "CoeffElement":
        return CoeffElement(self, {0: k})

    def v(self, exp: int = 1, coeff: int = 1) -> "CoeffElement":
        if self.height is None:
            raise ValueError("ring has no periodicity class")
        return CoeffElement(self, {exp: coeff})


class CoeffElement:
    """Laurent polynomial in the periodicity class with residue coefficients.

    Stored sparsely as ``{v_exponent: residue mod p^M}``; zero residues are
    never kept, so equality is structural.
    """

    __slots__ = ("ring", "c")

    def __init__(self, ring: CoeffRing, c: dict[int, int]):
        self.ring = ring
        m = ring.modulus
        clean: dict[int, int] = {}
        for e, a in c.items():
            if ring.mode == MODE_V_ONE:
                e = 0
            if ring.height is None and e != 0:
                raise ValueError("nonzero v-exponent in a ring without v")
            if ring.connective and e < 0:
                raise ValueError("negative v-exponent in a connective ring")
            a = (clean.get(e, 0) + a) % m
            if a:
                clean[e] = a
            elif e in clean:
                del clean[e]
        self.c = clean

    # -- ring operations ------------------------------------------------------

    def __add__(self, other: "CoeffElement") -> "CoeffElement":
        self._check(other)
        out = dict(self.c)
        for e, a in other.c.items():
            out[e] = out.get(e, 0) + a
        return CoeffElement(self.ring, out)

    def __neg__(self) -> "CoeffElement":
        return CoeffElement(self.ring, {e: -a for e, a in self.c.items()})

    def __sub__(self, other: "CoeffElement") -> "CoeffElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CoeffElement(self.ring, {e: a * other for e, a in self.c.items()})
        self._check(other)
        out: dict[int, int] = {}
        for e1, a1 in self.c.items():
            for e2, a2 in other.c.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + a1 * a2
        return CoeffElement(self.ring, out)

    __rmul__ = __mul__

    def _check(self, other: "CoeffElement"):
        if self.ring != other.ring:
            raise ValueError("coefficient ring mismatch")

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, other):
        return (
            isinstance(other, CoeffElement)
            and self.ring == other.ring
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self.c.items())))

    def __bool__(self):
        return bool(self.c)

    def mod2(self) -> "CoeffElement":
        """Reduction to the mod-p ring with the same height and mode."""
        tgt = CoeffRing(self.ring.p, 1, self.ring.height, self.ring.mode,
                        self.ring.connective)
        return CoeffElement(tgt, dict(self.c))

    def is_unit(self) -> bool:
        """True when invertible in ``Z/p^M [v, v^-1]``.

        An element is a unit exactly when its mod-p reduction is a single
        monomial with nonzero coefficient (the rest is then nilpotent).
        """
        odd = [e for e, a in self.c.items() if a % self.ring.p]
        return len(odd) == 1

    def inverse(self) -> "CoeffElement":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        ring = self.ring
        (e0,) = [e for e, a in self.c.items() if a % ring.p]
        a0 = self.c[e0]
        u_inv = CoeffElement(ring, {-e0: pow(a0, -1, ring.modulus)})
        eps = u_inv * self - ring.one()
        # eps has p-divisible coefficients, hence is nilpotent mod p^M and
        # (1 + eps)^-1 = 1 - eps + eps^2 - ... terminates.
        acc, term, sign = ring.one(), ring.one(), -1
        while True:
            term = term * eps
            if term.is_zero():
                break
            acc = acc + sign * term
            sign = -sign
        return acc * u_inv

    def __repr__(self):
        if not self.c:
            return "0"
        bits = []
        for e in sorted(self.c):
            a = self.c[e]
            if e == 0:
                bits.append(f"{a}")
            elif e == 1:
                bits.append(f"{a}*v" if a != 1 else "v")
            else:
                bits.append(f"{a}*v^{e}" if a != 1 else f"v^{e}")
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# Rational construction layer: numbers a / p^e with a mod p^(M + guard)
# ---------------------------------------------------------------------------


class PadicContext:
    def __init__(self, p: int, precision: int, guard: int):
        self.p = p
        self.precision = precision
        self.guard = guard
        self.big = p ** (precision + guard)


class PadicFraction:
    """``num / p^den`` with ``num`` tracked modulo ``p^(M + guard)``.

    Denominator exponents never exceed the guard, so the value modulo
    ``p^M`` stays exactly determined; overflow raises instead of losing
    precision silently.
    """

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: PadicContext, num: int, den: int = 0):
        if den > ctx.guard:
            raise PrecisionError(
                f"denominator exponent {den} exceeds guard {ctx.guard}")
        self.ctx = ctx
        self.num = num % ctx.big
        self.den = den

    @classmethod
    def from_rational(cls, ctx: PadicContext, num: int, den: int) -> "PadicFraction":
        """Embed ``num/den``; the prime-to-p part of ``den`` is inverted."""
        e = 0
        while den % ctx.p == 0:
            den //= ctx.p
            e += 1
        num = num * pow(den, -1, ctx.big)
        return cls(ctx, num, e)

    def __add__(self, other: "PadicFraction") -> "PadicFraction":
        d = max(self.den, other.den)
        p = self.ctx.p
        num = (self.num * p ** (d - self.den)
               + other.num * p ** (d - other.den))
        return PadicFraction(self.ctx, num, d)

    def __neg__(self):
        return PadicFraction(self.ctx, -self.num, self.den)

    def __mul__(self, other: "PadicFraction") -> "PadicFraction":
        return PadicFraction(self.ctx, self.num * other.num,
                             self.den + other.den)

    def is_zero(self) -> bool:
        return self.num == 0

    def integral_residue(self) -> int:
        """Value modulo ``p^M``; raises if the denominator does not cancel."""
        q = self.ctx.p ** self.den
        if self.num % q:
            raise NonIntegralError(
                f"denominator p^{self.den} does not cancel")
        return (self.num // q) % (self.ctx.p ** self.ctx.precision)

    def __repr__(self):
        return f"{self.num}/p^{self.den}" if self.den else f"{self.num}"


# v-Laurent polynomials over PadicFraction, as {v_exp: PadicFraction}.

def _vl_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, x in b.items():
        out[e] = out[e] + x if e in out else x
    return {e: x for e, x in out.items() if not x.is_zero()}


def _vl_mul(a: dict, b: dict) -> dict:
    out: dict[int, PadicFraction] = {}
    for e1, x in a.items():
        for e2, y in b.items():
            e = e1 + e2
            z = x * y
            out[e] = out[e] + z if e in out else z
    return {e: x for e, x in out.items() if not x.is_zero()}


def _vl_to_element(vl: dict, ring: CoeffRing) -> CoeffElement:
    return CoeffElement(ring, {e: x.integral_residue() for e, x in vl.items()})


# Truncated series with v-Laurent coefficients: {degree: vlaurent} for one
# variable, {(i, j): vlaurent} for two.

def _ser_mul(a: dict, b: dict, n_max: int) -> dict:
    out: dict = {}
    for da, ca in a.items():
        for db, cb in b.items():
            d = da + db
            if d > n_max:
                continue
            prod = _vl_mul(ca, cb)
            out[d] = _vl_add(out[d], prod) if d in out else prod
    return {d: c for d, c in out.items() if c}


def _ser_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for d, c in b.items():
        out[d] = _vl_add(out[d], c) if d in out else c
    return {d: c for d, c in out.items() if c}


def _bi_mul(a: dict, b: dict, n_max: int) -> dict:
    out: dict = {}
    for (i1, j1), ca in a.items():
        for (i2, j2), cb in b.items():
            i, j = i1 + i2, j1 + j2
            if i + j > n_max:
                continue
            prod = _vl_mul(ca, cb)
            key = (i, j)
            out[key] = _vl_add(out[key], prod) if key in out else prod
    return {k: c for k, c in out.items() if c}


def _bi_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = _vl_add(out[k], c) if k in out else c
    return {k: c for k, c in out.items() if c}


# ---------------------------------------------------------------------------
# Logarithms, exponentials, formal group laws
# ---------------------------------------------------------------------------


def morava_log(n: int, ring: CoeffRing, n_trunc: int,
               guard: int | None = None) -> dict[int, dict]:
    """Logarithm of the height-n law, truncated at degree ``n_trunc``.

    The coefficient of ``t^(p^(n*k))`` is ``p^-k v^((p^(nk)-1)/(p^n-1))``
    and every other coefficient vanishes.
    """
    if n < 1 or n_trunc < 1:
        raise ValueError("need n >= 1 and truncation >= 1")
    p = ring.p
    ctx = PadicContext(p, ring.precision, n_trunc if guard is None else guard)
    log: dict[int, dict] = {}
    k = 0
    while p ** (n * k) <= n_trunc:
        deg = p ** (n * k)
        vexp = (p ** (n * k) - 1) // (p ** n - 1)
        log[deg] = {vexp: PadicFraction(ctx, 1, k)}
        k += 1
    return log


def additive_log(ring: CoeffRing, n_trunc: int,
                 guard: int | None = None) -> dict[int, dict]:
    ctx = PadicContext(ring.p, ring.precision, n_trunc if guard is None else guard)
    return {1: {0: PadicFraction(ctx, 1, 0)}}


def multiplicative_log(ring: CoeffRing, n_trunc: int,
                       guard: int | None = None) -> dict[int, dict]:
    """Logarithm ``sum v^(k-1) t^k / k`` of ``x + y - v x y``."""
    ctx = PadicContext(ring.p, ring.precision, n_trunc if guard is None else guard)
    return {k: {k - 1: PadicFraction.from_rational(ctx, 1, k)}
            for k in range(1, n_trunc + 1)}


def exp_from_log(log: dict[int, dict], n_trunc: int) -> dict[int, dict]:
    """Compositional inverse of a logarithm with unit linear term."""
    if 1 not in log or 0 not in log[1] or log[1][0].den != 0:
        raise ValueError("logarithm must start with t")
    one = log[1][0]
    if one.num % one.ctx.big != 1:
        raise ValueError("logarithm must have unit linear coefficient")
    exp: dict[int, dict] = {1: {0: one}}
    for _ in range(n_trunc):
        # e(t) := t - sum_{k>=2} l_k e(t)^k, iterated to the fixed point.
        acc: dict[int, dict] = {1: {0: one}}
        power = dict(exp)
        for k in range(2, n_trunc + 1):
            power = _ser_mul(power, exp, n_trunc)
            if k in log:
                neg = {d: {e: -x for e, x in c.items()} for d, c in
                       _ser_mul({0: log[k]}, power, n_trunc).items()}
                acc = _ser_add(acc, neg)
        if acc == exp:
            break
        exp = acc
    return exp


@dataclass
class FormalGroupLaw:
    """Bivariate truncated law with its logarithm and 2-series.

    ``coeffs`` maps exponent pairs to p-integral ring elements; the
    logarithm keeps rational (denominator-tracked) coefficients.
    """

    ring: CoeffRing
    truncation: int
    log: dict[int, dict]
    coeffs: dict[tuple[int, int], CoeffElement]
    two_series: dict[int, CoeffElement]

    def coefficient(self, i: int, j: int) -> CoeffElement:
        if i + j > self.truncation:
            raise TruncationError(f"({i},{j}) beyond truncation {self.truncation}")
        return self.coeffs.get((i, j), self.ring.zero())

    def b(self, k: int) -> CoeffElement:
        """2-series coefficient b_k of ``[2](t) = F(t, t) = sum b_k t^k``."""
        if k > self.truncation:
            raise TruncationError(f"b_{k} beyond truncation {self.truncation}")
        return self.two_series.get(k, self.ring.zero())

    def n_series(self, m: int) -> dict[int, CoeffElement]:
        """``[m](t)`` by iterating ``[m](t) = F(t, [m-1](t))``."""
        if m < 0:
            raise ValueError("m must be >= 0")
        series: dict[int, CoeffElement] = {}
        for _ in range(m):
            series = self.substitute_t(series)
        return series

    def substitute_t(self, g: dict[int, CoeffElement]) -> dict[int, CoeffElement]:
        """``F(t, g(t))`` for a series g without constant term."""
        n_max = self.truncation
        out: dict[int, CoeffElement] = {}
        powers: dict[int, dict[int, CoeffElement]] = {0: {0: self.ring.one()}}
        top_j = max((j for (_, j) in self.coeffs), default=0)
        for j in range(1, top_j + 1):
            powers[j] = _elem_ser_mul(powers[j - 1], g, n_max)
        for (i, j), c in self.coeffs.items():
            for d, a in powers.get(j, {}).items():
                if i + d > n_max:
                    continue
                out[i + d] = out.get(i + d, self.ring.zero()) + c * a
        return {d: a for d, a in out.items() if not a.is_zero()}

    def projective_space_class(self, i: int) -> CoeffElement:
        """Class of i-dimensional projective space, ``(i+1) * log_(i+1)``."""
        if i < 0:
            raise ValueError("i must be >= 0")
        if i + 1 > self.truncation:
            raise TruncationError(f"[P^{i}] needs truncation >= {i + 1}")
        vl = self.log.get(i + 1, {})
        scaled = {e: PadicFraction(x.ctx, x.num * (i + 1), x.den)
                  for e, x in vl.items()}
        return _vl_to_element(scaled, self.ring)


def _elem_ser_mul(a: dict[int, CoeffElement], b: dict[int, CoeffElement],
                  n_max: int) -> dict[int, CoeffElement]:
    out: dict[int, CoeffElement] = {}
    for da, ca in a.items():
        for db, cb in b.items():
            d = da + db
            if d > n_max:
                continue
            prod = ca * cb
            out[d] = out[d] + prod if d in out else prod
    return {d: c for d, c in out.items() if not c.is_zero()}


def fgl_from_log(log: dict[int, dict], n_trunc: int,
                 ring: CoeffRing) -> FormalGroupLaw:
    """Build ``F(x, y) = exp(log x + log y)`` and check p-integrality."""
    exp = exp_from_log(log, n_trunc)
    lx = {(d, 0): c for d, c in log.items() if d <= n_trunc}
    ly = {(0, d): c for d, c in log.items() if d <= n_trunc}
    s = _bi_add(lx, ly)
    f_rat: dict[tuple[int, int], dict] = {}
    power: dict[tuple[int, int], dict] = {
        (0, 0): {0: PadicFraction(exp[1][0].ctx, 1, 0)}}
    for m in range(1, n_trunc + 1):
        power = _bi_mul(power, s, n_trunc)
        if m in exp:
            term = _bi_mul({(0, 0): exp[m]}, power, n_trunc)
            f_rat = _bi_add(f_rat, term)
    coeffs: dict[tuple[int, int], CoeffElement] = {}
    for key, vl in f_rat.items():
        try:
            elem = _vl_to_element(vl, ring)
        except NonIntegralError as err:
            raise NonIntegralError(
                f"law coefficient at {key} is not p-integral: {err}") from err
        if not elem.is_zero():
            coeffs[key] = elem
    two: dict[int, CoeffElement] = {}
    for (i, j), c in coeffs.items():
        k = i + j
        two[k] = two.get(k, ring.zero()) + c
    two = {k: c for k, c in two.items() if not c.is_zero()}
    return FormalGroupLaw(ring, n_trunc, log, coeffs, two)


# ---------------------------------------------------------------------------
# Theories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Theory:
    """A coefficient ring together with its formal group law."""

    name: str
    ring: CoeffRing
    fgl: FormalGroupLaw

    def b(self, k: int) -> CoeffElement:
        return self.fgl.b(k)

    def pclass(self, i: int) -> CoeffElement:
        return self.fgl.projective_space_class(i)

    def split_quadric_class(self, m: int) -> CoeffElement:
        """Class of a split m-dimensional quadric: ``sum_k b_k [P^(m+1-k)]``.

        This is the pushforward to the point of the 2-series evaluated on
        the hyperplane class of the ambient projective space.
        """
        out = self.ring.zero()
        for k in range(1, m + 2):
            bk = self.b(k)
            if not bk.is_zero():
                out = out + bk * self.pclass(m + 1 - k)
        return out

    @property
    def mod2(self) -> bool:
        return self.ring.precision == 1

    def __repr__(self):
        return f"Theory({self.name})"


def _default_trunc(n: int) -> int:
    return 2 ** (n + 1) + 2


@lru_cache(maxsize=None)
def chow(precision: int = 8, n_trunc: int = 26) -> Theory:
    ring = CoeffRing(2, precision, None, MODE_INTEGRAL)
    fgl = fgl_from_log(additive_log(ring, n_trunc), n_trunc, ring)
    return Theory(f"CH/2^{precision}", ring, fgl)


@lru_cache(maxsize=None)
def chow_mod2(n_trunc: int = 26) -> Theory:
    ring = CoeffRing(2, 1, None, MODE_MOD_P)
    fgl = fgl_from_log(additive_log(ring, n_trunc), n_trunc, ring)
    return Theory("Ch", ring, fgl)


@lru_cache(maxsize=None)
def multiplicative(precision: int = 8, n_trunc: int = 26) -> Theory:
    ring = CoeffRing(2, precision, 1, MODE_INTEGRAL)
    fgl = fgl_from_log(multiplicative_log(ring, n_trunc), n_trunc, ring)
    return Theory("K0-type", ring, fgl)


@lru_cache(maxsize=None)
def morava(n: int, precision: int = 8, n_trunc: int | None = None,
           guard: int | None = None) -> Theory:
    """Integral height-n theory over ``Z/2^M [v, v^-1]``."""
    n_trunc = _default_trunc(n) if n_trunc is None else n_trunc
    ring = CoeffRing(2, precision, n, MODE_INTEGRAL)
    fgl = fgl_from_log(morava_log(n, ring, n_trunc, guard), n_trunc, ring)
    return Theory(f"K({n})-int", ring, fgl)


@lru_cache(maxsize=None)
def morava_mod2(n: int, n_trunc: int | None = None) -> Theory:
    n_trunc = _default_trunc(n) if n_trunc is None else n_trunc
    ring = CoeffRing(2, 1, n, MODE_MOD_P)
    fgl = fgl_from_log(morava_log(n, ring, n_trunc), n_trunc, ring)
    return Theory(f"K({n})", ring, fgl)


@lru_cache(maxsize=None)
def morava_connective_mod2(n: int, n_trunc: int | None = None) -> Theory:
    """Connective variant: v is not inverted (negative powers rejected)."""
    n_trunc = _default_trunc(n) if n_trunc is None else n_trunc
    ring = CoeffRing(2, 1, n, MODE_MOD_P, connective=True)
    base = CoeffRing(2, 1, n, MODE_MOD_P)
    fgl = fgl_from_log(morava_log(n, base, n_trunc), n_trunc, base)
    conn = FormalGroupLaw(
        ring, n_trunc, fgl.log,
        {k: CoeffElement(ring, dict(c.c)) for k, c in fgl.coeffs.items()},
        {k: CoeffElement(ring, dict(c.c)) for k, c in fgl.two_series.items()},
    )
    return Theory(f"CK({n})", ring, conn)


@lru_cache(maxsize=None)
def morava_v_one(n: int, precision: int = 1, n_trunc: int | None = None) -> Theory:
    """Height-n theory with v set to 1; gradings collapse mod ``2^n - 1``."""
    n_trunc = _default_trunc(n) if n_trunc is None else n_trunc
    ring = CoeffRing(2, precision, n, MODE_V_ONE)
    base = CoeffRing(2, precision, n, MODE_INTEGRAL)
    fgl = fgl_from_log(morava_log(n, base, n_trunc), n_trunc, base)
    folded = FormalGroupLaw(
        ring, n_trunc, fgl.log,
        {k: CoeffElement(ring, dict(c.c)) for k, c in fgl.coeffs.items()},
        {k: CoeffElement(ring, dict(c.c)) for k, c in fgl.two_series.items()},
    )
    return Theory(f"K({n})/(v-1)", ring, folded)
