"""Total Steenrod operation on split quadrics mod 2, binomials by digit
products, the coefficient homomorphism on the positive-degree monomial
basis, and the Chow traces of the symmetric operations.

On the standard basis of a split quadric of dimension D (mod 2 Chow
theory) the total operation acts by

    St(h^i) = h^i (t + h)^i
    St(l_i) = l_i (t + h)^(D + 1 - i) t^-1

and extends additively; on products of quadrics it is the product of the
factors.  The mod-2 binomial coefficients in these expansions are digit
products (Lucas).  The traces phi^{t^r} of the symmetric operation act on
monomial multiples ``u * c`` of Chow classes by

    phi^{t^r}(u * c) = eta(u) * st^{t^(r - 2 deg)}(c)

where eta kills 2-multiples and monomials with two or more v-factors, and
st-extraction reads a coefficient of St(c); at r = 0 a 2-divisible part
contributes the square correction -pr(.)^2 instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import coefficients
from .corr import Correspondence, external
from .quadring import H, L, LT, QuadClass, SplitQuadric


def lucas_binom_mod2(a, b):
    """``binom(a, b) mod 2`` as the product of per-digit binomials.

    Accepts nonnegative ints or integer ndarrays (elementwise).  Each
    binary digit pair contributes ``binom(a_i, b_i)``, which vanishes only
    for the pair (0, 1).
    """
    arr = isinstance(a, np.ndarray) or isinstance(b, np.ndarray)
    if arr:
        a = np.asarray(a)
        b = np.asarray(b)
        if (a < 0).any() or (b < 0).any():
            raise ValueError("arguments must be nonnegative")
        out = np.ones(np.broadcast(a, b).shape, dtype=np.uint8)
        a = a.copy()
        b = b.copy()
        while b.any():
            out &= ((a & 1) | ((b & 1) ^ 1)).astype(np.uint8)
            a >>= 1
            b >>= 1
        return out
    if a < 0 or b < 0:
        raise ValueError("arguments must be nonnegative")
    while b:
        if b & 1 and not a & 1:
            return 0
        a >>= 1
        b >>= 1
    return 1


class LaurentClassPoly:
    """Finite Laurent polynomial in t with class-valued coefficients.

    Values are quadric classes or correspondences; anything supporting
    ``+``, ``*`` and ``is_zero`` works.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = {e: v for e, v in terms.items() if not v.is_zero()}

    def __add__(self, other: "LaurentClassPoly") -> "LaurentClassPoly":
        out = dict(self.terms)
        for e, v in other.terms.items():
            out[e] = out[e] + v if e in out else v
        return LaurentClassPoly(out)

    def __mul__(self, other: "LaurentClassPoly") -> "LaurentClassPoly":
        out: dict = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = e1 + e2
                p = v1 * v2
                out[e] = out[e] + p if e in out else p
        return LaurentClassPoly(out)

    def coefficient(self, e: int):
        return self.terms.get(e)

    def min_exponent(self) -> int | None:
        return min(self.terms) if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, LaurentClassPoly) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[e]!r})*t^{e}"
                          for e in sorted(self.terms))


def _require_chow_mod2(quad: SplitQuadric):
    ring = quad.theory.ring
    if ring.p != 2 or ring.precision != 1 or ring.height is not None:
        raise ValueError("the total operation is defined on mod-2 Chow rings")


def _st_h_formula(quad: SplitQuadric, idx: int) -> LaurentClassPoly:
    """``h^idx (t + h)^idx`` expanded through the power reduction."""
    out: dict[int, QuadClass] = {}
    for j in range(idx + 1):
        if lucas_binom_mod2(idx, j):
            cls = quad._h_power_unchecked(idx + j)
            if not cls.is_zero():
                out[idx - j] = out.get(idx - j, quad.zero()) + cls
    return LaurentClassPoly(out)


def _st_basis(quad: SplitQuadric, key: tuple) -> LaurentClassPoly:
    kind, idx = key
    if kind == H:
        return _st_h_formula(quad, idx)
    if kind == L:
        e = quad.D + 1 - idx
        out: dict[int, QuadClass] = {}
        for j in range(min(idx, e - 1) + 1):
            if lucas_binom_mod2(e, j):
                cls = quad.l(idx - j)
                texp = e - j - 1
                out[texp] = out.get(texp, quad.zero()) + cls
        return LaurentClassPoly(out)
    # lt = h^d + l_d mod 2; the h-formula applies at exponent d even when
    # h^d itself is a reducible class.
    return _st_h_formula(quad, quad.d) + _st_basis(quad, (L, quad.d))


def _st_expand(quad: SplitQuadric, x: QuadClass) -> LaurentClassPoly:
    out = LaurentClassPoly({})
    for key, c in x.terms.items():
        out = out + LaurentClassPoly(
            {e: v.scale(c) for e, v in _st_basis(quad, key).terms.items()})
    return out


def steenrod_total(quad: SplitQuadric, x: QuadClass) -> LaurentClassPoly:
    """Total operation on a class of a split quadric, additively extended."""
    _require_chow_mod2(quad)
    if x.quad != quad:
        raise ValueError("class does not live on the given quadric")
    # St(h^d) for even D goes through the middle expansion of h^d.
    return _st_expand(quad, x)


def steenrod_total_product(corr: Correspondence) -> LaurentClassPoly:
    """Total operation on a class of a product, factorwise."""
    _require_chow_mod2(corr.src)
    _require_chow_mod2(corr.tgt)
    out = LaurentClassPoly({})
    for (k1, k2), c in corr.terms.items():
        s1 = _st_basis(corr.src, k1)
        s2 = _st_basis(corr.tgt, k2)
        cross: dict[int, Correspondence] = {}
        for e1, v1 in s1.terms.items():
            for e2, v2 in s2.terms.items():
                e = e1 + e2
                p = external(v1, v2).scale(c)
                cross[e] = cross[e] + p if e in cross else p
        out = out + LaurentClassPoly(cross)
    return out


# ---------------------------------------------------------------------------
# Structure of St(l_i) on quadrics in the critical window
# ---------------------------------------------------------------------------


@dataclass
class SteenrodLemmaReport:
    """Expansion facts about St(l_(2^n - 2^m)) on a split quadric of
    dimension 2^n - 1 + r."""

    n: int
    r: int
    dim: int
    st_l0_exponent: int
    predicted_m: int | None
    predicted_x: int | None
    l0_summands: dict[int, list[int]]
    special_summand_ok: bool | None
    exclusive_ok: bool | None

    def l0_carriers(self) -> list[int]:
        return sorted(m for m, exps in self.l0_summands.items() if exps)


def _highest_zero_digit(r: int, n: int) -> tuple[int, int] | None:
    """Position m of the highest 0 digit among the n low digits of r, and
    the residue x below it, when r < 2^n - 1."""
    for m in range(n - 1, -1, -1):
        if not (r >> m) & 1:
            return m, r & ((1 << m) - 1)
    return None


def steenrod_lemma_predicates(n: int, r: int) -> SteenrodLemmaReport:
    """Check the l_0 / special-summand structure of St on l_(2^n - 2^m).

    For the split quadric of dimension D = 2^n - 1 + r (0 < r < 2^n):
    at r = 2^n - 1 no St(l_(2^n - 2^m)) with m < n carries an l_0 t^c
    summand; for r < 2^n - 1 exactly one m does, the position of the
    highest 0 digit among the n low digits of r, and that St carries the
    summand l_(2^m - x) t^(2^m - 1) which no other St(l_(2^n - 2^q)) sees.
    """
    if not 0 < r < 2 ** n:
        raise ValueError("need 0 < r < 2^n")
    dim = 2 ** n - 1 + r
    quad = SplitQuadric(dim, coefficients.chow_mod2())
    l0_summands: dict[int, list[int]] = {}
    expansions: dict[int, LaurentClassPoly] = {}
    for m in range(n):
        idx = 2 ** n - 2 ** m
        if idx > quad.d:
            continue
        st = steenrod_total(quad, quad.l(idx))
        expansions[m] = st
        l0_summands[m] = sorted(
            e for e, v in st.terms.items() if (L, 0) in v.terms)

    if r == 2 ** n - 1:
        pred_m = pred_x = None
        special_ok = exclusive_ok = None
    else:
        pred_m, pred_x = _highest_zero_digit(r, n)
        special_ok = None
        exclusive_ok = True
        target = (L, 2 ** pred_m - pred_x)
        if pred_m in expansions:
            st = expansions[pred_m]
            coeff = st.coefficient(2 ** pred_m - 1)
            special_ok = coeff is not None and target in coeff.terms
        for q, st in expansions.items():
            if q == pred_m:
                continue
            if any(target in v.terms for v in st.terms.values()):
                exclusive_ok = False
        # q = n (the class l_0 itself) is covered by sched (1): St(l_0) has
        # only the summand l_0 t^D, in particular never l_(2^m - x).
        st0 = steenrod_total(quad, quad.l(0))
        if any(target in v.terms for v in st0.terms.values()) and target != (L, 0):
            exclusive_ok = False

    st_l0 = steenrod_total(quad, quad.l(0))
    if list(st_l0.terms) != [dim] or (L, 0) not in st_l0.terms[dim].terms:
        raise AssertionError("St(l_0) must be exactly l_0 t^D")

    return SteenrodLemmaReport(n, r, dim, dim, pred_m, pred_x,
                               l0_summands, special_ok, exclusive_ok)


# ---------------------------------------------------------------------------
# Positive-degree monomials and the traces of the symmetric operation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BPMonomial:
    """Monomial ``2^a * prod v_r^(e_r)`` in the coefficient ring of the
    2-typical theory; degree is ``-sum e_r (2^r - 1)``."""

    p_exponent: int = 0
    v_exponents: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.p_exponent < 0:
            raise ValueError("p-exponent must be >= 0")
        clean = tuple(sorted((r, e) for r, e in self.v_exponents
                             if e > 0))
        if any(r < 1 or e < 0 for r, e in clean):
            raise ValueError("bad v-exponents")
        object.__setattr__(self, "v_exponents", clean)

    @classmethod
    def unit(cls) -> "BPMonomial":
        return cls()

    @classmethod
    def v(cls, r: int, e: int = 1) -> "BPMonomial":
        return cls(0, ((r, e),))

    def times_p(self, a: int = 1) -> "BPMonomial":
        return BPMonomial(self.p_exponent + a, self.v_exponents)

    @property
    def degree(self) -> int:
        return -sum(e * (2 ** r - 1) for r, e in self.v_exponents)

    @property
    def v_weight(self) -> int:
        return sum(e for _, e in self.v_exponents)


def eta(m: BPMonomial) -> int:
    """Coefficient homomorphism to Z/2: 1 on the unit and on each v_r,
    zero on 2-multiples and on monomials with two or more v-factors."""
    if m.p_exponent >= 1:
        return 0
    return 1 if m.v_weight <= 1 else 0


def _project_chow(value):
    """pr: drop v-terms; identity on mod-2 Chow classes."""
    return value


def phi_trace(z: list[tuple[BPMonomial, object]], r: int):
    """Trace of the symmetric operation on a sum of monomial multiples.

    ``z`` is a list of (monomial, mod-2 Chow class) pairs, the classes all
    on one split quadric or one product.  For r > 0 the trace is applied
    termwise:  eta(u) times the coefficient of ``t^(2 deg - r)`` in the
    total operation of the class, with 2-multiples contributing zero.  At
    r = 0 every term must be 2-divisible or v-divisible (raises
    otherwise); the 2-divisible part contributes the square of its
    projection.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if not z:
        raise ValueError("empty sum")
    sample = z[0][1]
    if isinstance(sample, Correspondence):
        zero = sample.zero_like()
        st = steenrod_total_product
    else:
        zero = sample.quad.zero()
        st = lambda c: steenrod_total(c.quad, c)  # noqa: E731

    out = zero
    squares = zero
    for mono, cls in z:
        if r == 0 and mono.p_exponent == 0 and mono.v_weight == 0:
            raise ValueError(
                "phi^{t^0} on a term that is neither 2- nor v-divisible "
                "is not computable by traces alone")
        if mono.p_exponent >= 1:
            if r == 0:
                half = BPMonomial(mono.p_exponent - 1, mono.v_exponents)
                if half.p_exponent == 0 and half.v_weight == 0:
                    squares = squares + _project_chow(cls)
                # v-divisible halves project to zero in Chow.
            continue
        if eta(mono) == 0:
            continue
        d = -mono.degree
        texp = 2 * d - r
        coeff = st(cls).coefficient(texp)
        if coeff is not None:
            out = out + coeff
    if r == 0 and not squares.is_zero():
        out = out + squares * squares
    return out
