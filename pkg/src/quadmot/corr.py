"""Correspondences between split quadrics: composition, projector families,
reflections, and normal forms of isomorphisms.

An element of the group attached to a pair of split quadrics is stored in
Kunneth form, as a finite sum of basis pairs ``e1 x e2`` with coefficients
in the theory.  Composition of ``u`` from Q1 to Q2 with ``v`` from Q2 to
Q3 is the bilinear extension of

    (c x d) o (a x b) = deg(b * c) * (a x d),

the pushforward-pullback formula evaluated through the pair-degree table
of the middle quadric.

Projector families (all with v inverted, height n >= 2, mod 2):

    pi_i    = v^-1 h^i x h^(D'-i),                    0 <= i <= D'
    varpi_j = (h^j + v l_(D'-j)) x (l_j + v^-1 h^(D'-j)),  d' <= j <= d

with D' = D - 2^n + 1, d' = D' - d; for D = 0 mod 4 the top member uses
lt in the second factor.  Their mod-2 Chow shadows are

    omega_ch_j = h^j x l_j + l_(D'-j) x h^(D'-j)

(with lt for D = 0 mod 4), and the connective lifts add ``v l_(D'-j) x l_j``.
"""

from __future__ import annotations

from .coefficients import CoeffElement, Theory
from .quadring import H, L, LT, QuadClass, SplitQuadric, degree


class Correspondence:
    """Element of the correspondence group of a pair of split quadrics."""

    __slots__ = ("src", "tgt", "terms")

    def __init__(self, src: SplitQuadric, tgt: SplitQuadric,
                 terms: dict[tuple, CoeffElement]):
        if src.theory is not tgt.theory:
            raise ValueError("source and target use different theories")
        self.src = src
        self.tgt = tgt
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    def _check(self, other: "Correspondence"):
        if self.src != other.src or self.tgt != other.tgt:
            raise ValueError("correspondences between different quadrics")

    def __add__(self, other: "Correspondence") -> "Correspondence":
        self._check(other)
        ring = self.src.theory.ring
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ring.zero()) + c
        return Correspondence(self.src, self.tgt, out)

    def __neg__(self):
        return Correspondence(self.src, self.tgt,
                              {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Correspondence":
        return Correspondence(self.src, self.tgt,
                              {k: a * c for k, a in self.terms.items()})

    def __mul__(self, other):
        """Pointwise (intersection) product in the ring of the product."""
        if isinstance(other, (int, CoeffElement)):
            return self.scale(other)
        self._check(other)
        out = self.zero_like()
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                x = self.src._basis_mul(a1, a2)
                y = self.tgt._basis_mul(b1, b2)
                out = out + external(x, y).scale(c1 * c2)
        return out

    __rmul__ = __mul__

    def zero_like(self) -> "Correspondence":
        return Correspondence(self.src, self.tgt, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, Correspondence) and self.src == other.src
                and self.tgt == other.tgt and self.terms == other.terms)

    def __hash__(self):
        return hash((self.src, self.tgt, frozenset(self.terms.items())))

    def transpose(self) -> "Correspondence":
        return Correspondence(self.tgt, self.src,
                              {(b, a): c for (a, b), c in self.terms.items()})

    def apply(self, x: QuadClass) -> QuadClass:
        """Action on classes of the source: sum deg(x * a) * b."""
        if x.quad != self.src:
            raise ValueError("class does not live on the source quadric")
        out = self.tgt.zero()
        for (a, b), c in self.terms.items():
            w = self.tgt.theory.ring.zero()
            for k, xc in x.terms.items():
                w = w + xc * self.src.pair_degree(k, a)
            if not w.is_zero():
                out = out + self.tgt.basis_class(b).scale(w * c)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        def nm(key):
            return "lt" if key[0] == LT else f"{key[0]}{key[1]}"
        bits = []
        for (a, b) in sorted(self.terms, key=lambda t: (t[0], t[1])):
            c = self.terms[(a, b)]
            cs = repr(c)
            pre = "" if cs == "1" else f"({cs})*"
            bits.append(f"{pre}{nm(a)}x{nm(b)}")
        return " + ".join(bits)


def external(x: QuadClass, y: QuadClass) -> Correspondence:
    """External product ``x x y``."""
    terms: dict[tuple, CoeffElement] = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            key = (k1, k2)
            terms[key] = terms.get(key, x.quad.theory.ring.zero()) + c1 * c2
    return Correspondence(x.quad, y.quad, terms)


def compose(v: Correspondence, u: Correspondence) -> Correspondence:
    """``v o u`` for u: Q1 -> Q2 and v: Q2 -> Q3."""
    if u.tgt != v.src:
        raise ValueError("composition mismatch: u.target != v.source")
    mid = u.tgt
    ring = mid.theory.ring
    out: dict[tuple, CoeffElement] = {}
    for (a, b), cu in u.terms.items():
        for (c, d), cv in v.terms.items():
            w = mid.pair_degree(b, c)
            if w.is_zero():
                continue
            key = (a, d)
            out[key] = out.get(key, ring.zero()) + cu * cv * w
    return Correspondence(u.src, v.tgt, out)


# ---------------------------------------------------------------------------
# Dual basis, diagonal, reflection
# ---------------------------------------------------------------------------


def _dual_orders(quad: SplitQuadric) -> tuple[list, list]:
    cols = [(H, k) for k in range(quad.h_top + 1)]
    ls = [(L, i) for i in range(quad.d, -1, -1)]
    if quad.even:
        if quad.D % 4 == 0:
            cols += [(LT, quad.d), (L, quad.d)] + ls[1:]
            rows = ([(L, i) for i in range(quad.d)] + [(LT, quad.d), (L, quad.d)]
                    + [(H, k) for k in range(quad.h_top, -1, -1)])
        else:
            cols += [(LT, quad.d)] + ls
            rows = ([(L, i) for i in range(quad.d + 1)] + [(LT, quad.d)]
                    + [(H, k) for k in range(quad.h_top, -1, -1)])
    else:
        cols += ls
        rows = ([(L, i) for i in range(quad.d + 1)]
                + [(H, k) for k in range(quad.h_top, -1, -1)])
    return rows, cols


def dual_basis(quad: SplitQuadric) -> dict[tuple, QuadClass]:
    """Poincare-dual basis: deg(dual[e] * f) = delta_{e,f}.

    The pairing matrix in the orders below is lower triangular with unit
    diagonal, so the inverse is a forward substitution without division.
    """
    rows, cols = _dual_orders(quad)
    m = len(rows)
    ring = quad.theory.ring
    g = [[quad.pair_degree(rows[i], cols[j]) for j in range(m)] for i in range(m)]
    inv = [[ring.zero() for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1):
            acc = ring.one() if i == j else ring.zero()
            for t in range(j, i):
                acc = acc - g[i][t] * inv[t][j]
            if not g[i][i].is_unit():
                raise ArithmeticError("pairing matrix is not unit-triangular")
            inv[i][j] = acc * g[i][i].inverse()
    duals: dict[tuple, QuadClass] = {}
    for k in range(m):
        terms: dict[tuple, CoeffElement] = {}
        for j in range(m):
            if not inv[k][j].is_zero():
                key = rows[j]
                terms[key] = terms.get(key, ring.zero()) + inv[k][j]
        duals[cols[k]] = QuadClass(quad, terms)
    return duals


def identity(quad: SplitQuadric) -> Correspondence:
    """Kunneth diagonal: the two-sided unit of the correspondence ring."""
    duals = dual_basis(quad)
    out = Correspondence(quad, quad, {})
    for key, dual in duals.items():
        out = out + external(quad.basis_class(key), dual)
    return out


def reflection(quad: SplitQuadric) -> Correspondence:
    """Graph of a reflection: fixes h-powers and l_i for i < d, swaps the
    two middle families in even dimension.  Self-inverse."""
    duals = dual_basis(quad)

    def flip(key: tuple) -> QuadClass:
        if quad.even and key == (L, quad.d):
            return quad.lt()
        if quad.even and key == (LT, quad.d):
            return quad.l(quad.d)
        return quad.basis_class(key)

    out = Correspondence(quad, quad, {})
    for key, dual in duals.items():
        out = out + external(dual, flip(key))
    return out


# ---------------------------------------------------------------------------
# Projector families
# ---------------------------------------------------------------------------


def window_bounds(quad: SplitQuadric, n: int) -> tuple[int, int]:
    """(d', D') for the height-n projector families."""
    d_pr = quad.D - 2 ** n + 1
    return d_pr - quad.d, d_pr


def _h_or_zero(quad: SplitQuadric, k: int) -> QuadClass:
    return quad._h_power_unchecked(k) if 0 <= k <= quad.D else quad.zero()


def _l_or_zero(quad: SplitQuadric, i: int) -> QuadClass:
    return quad.l(i) if 0 <= i <= quad.d else quad.zero()


def a_class(quad: SplitQuadric, n: int, i: int) -> QuadClass:
    """``h^i + v l_(D'-i)``, the isomorphism building block."""
    v = quad.theory.ring.v()
    _, d_pr = window_bounds(quad, n)
    return _h_or_zero(quad, i) + _l_or_zero(quad, d_pr - i).scale(v)


def pi_family(quad: SplitQuadric, n: int) -> list[Correspondence]:
    """Rank-one projectors ``v^-1 h^i x h^(D'-i)``, i = 0..D'.

    Mutually orthogonal for n >= 2; for n = 1 they are idempotent but not
    orthogonal, and no orthogonality is claimed.
    """
    _, d_pr = window_bounds(quad, n)
    if d_pr < 0:
        raise ValueError(f"D={quad.D} below the height-{n} window")
    v_inv = quad.theory.ring.v(-1)
    return [external(_h_or_zero(quad, i), _h_or_zero(quad, d_pr - i)).scale(v_inv)
            for i in range(d_pr + 1)]


def varpi_family(quad: SplitQuadric, n: int) -> list[Correspondence]:
    """Kernel projectors ``varpi_j`` for j = d'..d (middle per D mod 4)."""
    d_lo, d_pr = window_bounds(quad, n)
    ring = quad.theory.ring
    v, v_inv = ring.v(), ring.v(-1)
    out = []
    for j in range(d_lo, quad.d + 1):
        left = _h_or_zero(quad, j) + _l_or_zero(quad, d_pr - j).scale(v)
        if j == quad.d and quad.D % 4 == 0:
            right = quad.lt() + _h_or_zero(quad, d_pr - j).scale(v_inv)
        else:
            right = _l_or_zero(quad, j) + _h_or_zero(quad, d_pr - j).scale(v_inv)
        out.append(external(left, right))
    return out


def omega_ch_family(quad: SplitQuadric, n: int) -> list[Correspondence]:
    """Chow projector pairs ``h^j x l_j + l_(D'-j) x h^(D'-j)``."""
    d_lo, d_pr = window_bounds(quad, n)
    out = []
    for j in range(d_lo, quad.d + 1):
        if j == quad.d and quad.D % 4 == 0:
            first = external(_h_or_zero(quad, j), quad.lt())
        else:
            first = external(_h_or_zero(quad, j), _l_or_zero(quad, j))
        second = external(_l_or_zero(quad, d_pr - j), _h_or_zero(quad, d_pr - j))
        out.append(first + second)
    return out


def omega_ckn_family(quad: SplitQuadric, n: int) -> list[Correspondence]:
    """Connective lifts: the Chow pairs plus ``v l_(D'-j) x l_j`` (lt in the
    top member when D = 0 mod 4)."""
    d_lo, d_pr = window_bounds(quad, n)
    v = quad.theory.ring.v()
    out = []
    for j in range(d_lo, quad.d + 1):
        if j == quad.d and quad.D % 4 == 0:
            first = external(_h_or_zero(quad, j), quad.lt())
            extra = external(_l_or_zero(quad, d_pr - j), quad.lt()).scale(v)
        else:
            first = external(_h_or_zero(quad, j), _l_or_zero(quad, j))
            extra = external(_l_or_zero(quad, d_pr - j), _l_or_zero(quad, j)).scale(v)
        second = external(_l_or_zero(quad, d_pr - j), _h_or_zero(quad, d_pr - j))
        out.append(first + second + extra)
    return out


def diagonal(quad: SplitQuadric, kind: str, n: int | None = None):
    """Diagonal decomposition as a projector list.

    ``kind='chow'``: the classical mod-2 list ``l_i x h^i``, ``h^i x l_i``
    with the middle correction ``deg(l_d^2) h^d x h^d`` in even dimension;
    requires a mod-2 additive theory (integrally the even middle carries
    extra correction terms).
    ``kind='morava'``: ``pi + varpi`` for the given height n >= 2; requires
    D >= 2^n - 1 so the pi range is nonempty.
    """
    if kind == "chow":
        ring = quad.theory.ring
        if quad.even and (ring.precision != 1 or ring.height is not None):
            raise ValueError("the even-dimensional projector list is a "
                             "mod-2 Chow statement")
        out = [external(quad.l(i), quad.h_power(i)) for i in range(quad.d + 1)]
        out += [external(quad.h_power(i), quad.l(i))
                for i in range(0, (quad.D + 1) // 2)]
        if quad.even:
            mid = external(quad.h_power(quad.d), quad.l(quad.d))
            c = degree(quad.l(quad.d) * quad.l(quad.d))
            if not c.is_zero():
                mid = mid + external(quad.h_power(quad.d),
                                     quad.h_power(quad.d)).scale(c)
            out.append(mid)
        return out
    if kind == "morava":
        if n is None or n < 2:
            raise ValueError("morava diagonal needs a height n >= 2")
        if quad.D < 2 ** n - 1:
            raise ValueError(
                f"D={quad.D} below the height-{n} window {2**n - 1}")
        return pi_family(quad, n) + varpi_family(quad, n)
    raise ValueError(f"unknown diagonal kind {kind!r}")


# ---------------------------------------------------------------------------
# Normal forms of isomorphisms between kernel summands
# ---------------------------------------------------------------------------


def shift_bijection(i_set1, i_set2, s: int, n: int) -> dict[int, int]:
    """The bijection ``f(i) = i - s mod (2^n - 1)`` from I1 onto I2."""
    period = 2 ** n - 1
    i1 = sorted(i_set1)
    i2 = set(i_set2)
    if len(i1) != len(i2):
        raise ValueError("index sets of different size")
    f = {}
    for i in i1:
        matches = [j for j in i2 if (i - s - j) % period == 0]
        if len(matches) != 1:
            raise ValueError(
                f"no unique image for index {i} under shift {s}")
        f[i] = matches[0]
        i2.discard(matches[0])
    return f


def iso_normal_form(q1: SplitQuadric, q2: SplitQuadric, n: int,
                    i_set1, i_set2, s: int = 0,
                    variant: str = "generic") -> Correspondence:
    """Normal form of an isomorphism between kernel summands.

    Generic variant: ``sum_i v^-1 a_i x b_(D2'-f(i))`` with f the shift
    bijection.  For even dimensions with both middle indices present and
    s = 0 the special variants 'middle-swap' and 'middle-diag' build the
    two possible middle blocks.  The returned map composes with
    ``iso_inverse`` to the varpi-sums on either side; this is checked.
    """
    i1, i2 = sorted(i_set1), sorted(i_set2)
    if len(i1) != len(i2):
        raise ValueError("index sets of different size")
    if not i1:
        return Correspondence(q1, q2, {})
    _, d1_pr = window_bounds(q1, n)
    _, d2_pr = window_bounds(q2, n)
    v_inv = q1.theory.ring.v(-1)
    if variant == "generic":
        if q1.D % 4 == 0 and q1.d in i1 or q2.D % 4 == 0 and q2.d in i2:
            raise ValueError("generic variant excludes middle indices in "
                             "dimension 0 mod 4")
        f = shift_bijection(i1, i2, s, n)
        psi = Correspondence(q1, q2, {})
        for i in i1:
            psi = psi + external(a_class(q1, n, i),
                                 a_class(q2, n, d2_pr - f[i])).scale(v_inv)
    elif variant in ("middle-swap", "middle-diag"):
        if s != 0 or q1.even is False or q2.even is False:
            raise ValueError("middle variants need even dimensions and s=0")
        d1_lo, _ = window_bounds(q1, n)
        d2_lo, _ = window_bounds(q2, n)
        need1, need2 = {d1_lo, q1.d}, {d2_lo, q2.d}
        if not (need1 <= set(i1) and need2 <= set(i2)):
            raise ValueError("middle variants need both middle indices")
        if variant == "middle-swap":
            psi = (external(a_class(q1, n, d1_lo), a_class(q2, n, q2.d))
                   + external(a_class(q1, n, q1.d), a_class(q2, n, d2_lo))
                   ).scale(v_inv)
        else:
            v_inv2 = q1.theory.ring.v(-2)
            psi = (external(a_class(q1, n, d1_lo), a_class(q2, n, d2_lo))
                   .scale(v_inv2)
                   + external(a_class(q1, n, q1.d), a_class(q2, n, q2.d)))
        for i in i1:
            if i in (d1_lo, q1.d):
                continue
            psi = psi + external(a_class(q1, n, i),
                                 a_class(q2, n, d2_pr - i)).scale(v_inv)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    _check_iso(psi, q1, q2, n, i1, i2, s, variant)
    return psi


def iso_inverse(q1: SplitQuadric, q2: SplitQuadric, n: int,
                i_set1, i_set2, s: int = 0,
                variant: str = "generic") -> Correspondence:
    """The stated inverse, from Q2 back to Q1."""
    i1, i2 = sorted(i_set1), sorted(i_set2)
    if not i1:
        return Correspondence(q2, q1, {})
    _, d1_pr = window_bounds(q1, n)
    v_inv = q1.theory.ring.v(-1)
    if variant == "generic":
        f = shift_bijection(i1, i2, s, n)
        out = Correspondence(q2, q1, {})
        for i in i1:
            out = out + external(a_class(q2, n, f[i]),
                                 a_class(q1, n, d1_pr - i)).scale(v_inv)
        return out
    d1_lo, _ = window_bounds(q1, n)
    d2_lo, _ = window_bounds(q2, n)
    if variant == "middle-swap":
        out = (external(a_class(q2, n, d2_lo), a_class(q1, n, q1.d))
               + external(a_class(q2, n, q2.d), a_class(q1, n, d1_lo))
               ).scale(v_inv)
    elif variant == "middle-diag":
        v_inv2 = q1.theory.ring.v(-2)
        out = (external(a_class(q2, n, d2_lo), a_class(q1, n, d1_lo))
               .scale(v_inv2)
               + external(a_class(q2, n, q2.d), a_class(q1, n, q1.d)))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    for i in i1:
        if i in (d1_lo, q1.d):
            continue
        out = out + external(a_class(q2, n, i),
                             a_class(q1, n, d1_pr - i)).scale(v_inv)
    return out


def _varpi_sum(quad: SplitQuadric, n: int, idx) -> Correspondence:
    d_lo, _ = window_bounds(quad, n)
    fam = varpi_family(quad, n)
    out = Correspondence(quad, quad, {})
    for i in idx:
        out = out + fam[i - d_lo]
    return out


def _check_iso(psi, q1, q2, n, i1, i2, s, variant):
    inv = iso_inverse(q1, q2, n, i1, i2, s, variant)
    if compose(inv, psi) != _varpi_sum(q1, n, i1):
        raise ArithmeticError("normal form does not invert to the source "
                              "projector sum")
    if compose(psi, inv) != _varpi_sum(q2, n, i2):
        raise ArithmeticError("normal form does not invert to the target "
                              "projector sum")


# ---------------------------------------------------------------------------
# Declared rationality
# ---------------------------------------------------------------------------


class RationalFamily:
    """A set of correspondences declared rational by the caller.

    Actual rationality over a ground field is not decidable here; this
    container only certifies closure of the declared span (over F_2, for
    mod-2 theories) under composition, transpose, and multiplication by
    powers of the hyperplane class on either side.
    """

    def __init__(self, members: list[Correspondence]):
        if not members:
            raise ValueError("family must be nonempty")
        self.members = list(members)
        self.src = members[0].src
        self.tgt = members[0].tgt
        if any(m.src != self.src or m.tgt != self.tgt for m in members):
            raise ValueError("family members between different quadrics")
        if self.src.theory.ring.precision != 1:
            raise ValueError("declared rationality is tracked mod 2")

    def _coords(self, corr: Correspondence) -> dict[tuple, int]:
        out = {}
        for (a, b), c in corr.terms.items():
            for e, r in c.c.items():
                out[(a, b, e)] = r % 2
        return {k: v for k, v in out.items() if v}

    def _span(self) -> tuple[list[dict], list[tuple]]:
        basis: list[dict] = []
        pivots: list[tuple] = []
        for m in self.members:
            vec = self._coords(m)
            vec = self._reduce(vec, basis, pivots)
            if vec:
                piv = min(vec)
                basis.append(vec)
                pivots.append(piv)
        return basis, pivots

    @staticmethod
    def _reduce(vec, basis, pivots):
        vec = dict(vec)
        changed = True
        while changed:
            changed = False
            for b, p in zip(basis, pivots):
                if p in vec:
                    for k, v in b.items():
                        nv = (vec.get(k, 0) + v) % 2
                        if nv:
                            vec[k] = nv
                        else:
                            vec.pop(k, None)
                    changed = True
        return vec

    def contains(self, corr: Correspondence) -> bool:
        basis, pivots = self._span()
        return not self._reduce(self._coords(corr), basis, pivots)

    def verify_closed(self) -> list[str]:
        """Closure violations (empty when the declared set is closed)."""
        issues = []
        if self.src == self.tgt:
            for i, u in enumerate(self.members):
                for j, v in enumerate(self.members):
                    if not self.contains(compose(v, u)):
                        issues.append(f"composition {j} o {i} leaves the span")
        for i, u in enumerate(self.members):
            if u.src == u.tgt and not self.contains(u.transpose()):
                issues.append(f"transpose of member {i} leaves the span")
            h_src = external(u.src.h_power(1), u.tgt.one())
            h_tgt = external(u.src.one(), u.tgt.h_power(1))
            for tag, mult in (("h x 1", h_src), ("1 x h", h_tgt)):
                if not self.contains(u * mult):
                    issues.append(f"{tag} * member {i} leaves the span")
        return issues
