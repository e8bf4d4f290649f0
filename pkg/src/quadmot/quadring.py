"""Free standard-basis module of a split quadric with its ring structure.

For a split quadric of dimension D (d = floor(D/2)) the module has basis
``h^0..h^d, l_0..l_d`` when D is odd and ``h^0..h^(d-1), l_0..l_d, lt``
when D is even, where ``lt`` is the class of the second family of middle
linear subspaces.  The even middle relation expresses h^d through the
l-classes,

    h^d = l_d + lt + sum_{i>=1} b_{i+1} l_{d-i},

with b_k the 2-series coefficients of the theory, so h^d is reduced
rather than stored.  Multiplication is the bilinear extension of

    h * h^k      (reduce at the top via the relations below)
    h * l_i  = l_{i-1},   h * lt = l_{d-1},   l_{-1} = 0
    l_i * l_j = l_0 if i = j = d and D = 0 mod 4, else 0
    l_i * lt  = l_0 if i = d and D = 2 mod 4, else 0
    lt  * lt  = l_0 if D = 0 mod 4, else 0

and, for powers above the middle,

    h^k = sum_{i>=1} b_i l_{2d+2-k-i}              (D odd, k > d)
    h^k = 2 l_{2d-k} + sum_{i>=1} b_{i+1} l_{2d-k-i}  (D even, k > d).

The pushforward to the point sends l_i to the class of projective
i-space and h^k to the class of a split quadric of dimension D - k.
"""

from __future__ import annotations

from .coefficients import CoeffElement, Theory

H = "h"
L = "l"
LT = "lt"


class SplitQuadric:
    """A split quadric of dimension D over a fixed theory."""

    def __init__(self, dim: int, theory: Theory):
        if dim < 1:
            raise ValueError("quadric dimension must be >= 1")
        self.D = dim
        self.d = dim // 2
        self.theory = theory
        self.even = dim % 2 == 0
        self.h_top = self.d - 1 if self.even else self.d
        self._deg_cache: dict[tuple, CoeffElement] = {}
        self._pair_deg: dict[tuple, CoeffElement] = {}

    # -- basis ----------------------------------------------------------------

    def basis_keys(self) -> list[tuple]:
        keys = [(H, k) for k in range(self.h_top + 1)]
        if self.even:
            keys.append((LT, self.d))
        keys += [(L, i) for i in range(self.d, -1, -1)]
        return keys

    def codim(self, key: tuple) -> int:
        kind, idx = key
        return idx if kind == H else self.D - idx

    def zero(self) -> "QuadClass":
        return QuadClass(self, {})

    def one(self) -> "QuadClass":
        return QuadClass(self, {(H, 0): self.theory.ring.one()})

    def h(self, k: int = 1) -> "QuadClass":
        return self.h_power(k)

    def l(self, i: int) -> "QuadClass":
        if not 0 <= i <= self.d:
            raise ValueError(f"l_{i} out of range")
        return QuadClass(self, {(L, i): self.theory.ring.one()})

    def lt(self) -> "QuadClass":
        if not self.even:
            raise ValueError("lt exists only in even dimension")
        return QuadClass(self, {(LT, self.d): self.theory.ring.one()})

    def basis_class(self, key: tuple) -> "QuadClass":
        return QuadClass(self, {key: self.theory.ring.one()})

    def __eq__(self, other):
        return (isinstance(other, SplitQuadric) and self.D == other.D
                and self.theory is other.theory)

    def __hash__(self):
        return hash((self.D, id(self.theory)))

    def __repr__(self):
        return f"SplitQuadric(D={self.D}, {self.theory.name})"

    # -- reduction ------------------------------------------------------------

    def h_power(self, k: int) -> "QuadClass":
        """Canonical expansion of h^k, 0 <= k <= D."""
        if not 0 <= k <= self.D:
            raise ValueError(f"h^{k} out of range for D={self.D}")
        return self._h_power_unchecked(k)

    def _h_power_unchecked(self, k: int) -> "QuadClass":
        if k > self.D:
            return self.zero()
        if k <= self.h_top:
            return self.basis_class((H, k))
        th, d = self.theory, self.d
        terms: dict[tuple, CoeffElement] = {}
        if self.even and k == d:
            terms[(L, d)] = th.ring.one()
            terms[(LT, d)] = th.ring.one()
            for i in range(1, d + 1):
                b = th.b(i + 1)
                if not b.is_zero():
                    terms[(L, d - i)] = b
            return QuadClass(self, terms)
        if self.even:
            # k > d: h^k = 2 l_{2d-k} + sum b_{i+1} l_{2d-k-i}
            top = 2 * self.d - k
            if top >= 0:
                terms[(L, top)] = th.ring.integer(2)
            for i in range(1, top + 1):
                b = th.b(i + 1)
                if not b.is_zero():
                    key = (L, top - i)
                    terms[key] = terms.get(key, th.ring.zero()) + b
        else:
            # k > d: h^k = sum b_i l_{2d+2-k-i}
            for i in range(1, 2 * d + 3 - k):
                idx = 2 * d + 2 - k - i
                if idx < 0:
                    break
                b = th.b(i)
                if not b.is_zero():
                    terms[(L, idx)] = b
        return QuadClass(self, terms)

    def _basis_mul(self, k1: tuple, k2: tuple) -> "QuadClass":
        if k1[0] == L or (k1[0] == LT and k2[0] == H):
            k1, k2 = k2, k1
        kind1, a = k1
        kind2, b = k2
        ring, d = self.theory.ring, self.d
        if kind1 == H and kind2 == H:
            return self._h_power_unchecked(a + b)
        if kind1 == H and kind2 == L:
            return self.l(b - a) if b - a >= 0 else self.zero()
        if kind1 == H and kind2 == LT:
            if a == 0:
                return self.basis_class((LT, d))
            return self.l(d - a) if d - a >= 0 else self.zero()
        if kind1 == L and kind2 == L:
            if self.D % 4 == 0 and a == d and b == d:
                return self.l(0)
            return self.zero()
        if kind1 == LT and kind2 == L or kind1 == L and kind2 == LT:
            i = a if kind1 == L else b
            if self.D % 4 == 2 and i == d:
                return self.l(0)
            return self.zero()
        # lt * lt
        if self.D % 4 == 0:
            return self.l(0)
        return self.zero()

    # -- pushforward to the point ----------------------------------------------

    def degree_of_key(self, key: tuple) -> CoeffElement:
        if key in self._deg_cache:
            return self._deg_cache[key]
        kind, idx = key
        if kind == H:
            out = self.theory.split_quadric_class(self.D - idx)
        else:
            out = self.theory.pclass(idx)
        self._deg_cache[key] = out
        return out

    def pair_degree(self, key1: tuple, key2: tuple) -> CoeffElement:
        """deg(e1 * e2) for basis elements, cached."""
        k = (key1, key2) if key1 <= key2 else (key2, key1)
        if k not in self._pair_deg:
            self._pair_deg[k] = degree(self._basis_mul(*k))
        return self._pair_deg[k]


class QuadClass:
    """Element of the standard-basis module, stored sparsely."""

    __slots__ = ("quad", "terms")

    def __init__(self, quad: SplitQuadric, terms: dict[tuple, CoeffElement]):
        self.quad = quad
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    def _check(self, other: "QuadClass"):
        if self.quad != other.quad:
            raise ValueError("classes live on different quadrics or theories")

    def __add__(self, other: "QuadClass") -> "QuadClass":
        self._check(other)
        out = dict(self.terms)
        ring = self.quad.theory.ring
        for k, c in other.terms.items():
            out[k] = out.get(k, ring.zero()) + c
        return QuadClass(self.quad, out)

    def __neg__(self):
        return QuadClass(self.quad, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, CoeffElement)):
            return self.scale(other)
        self._check(other)
        out = self.quad.zero()
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out = out + self.quad._basis_mul(k1, k2).scale(c1 * c2)
        return out

    __rmul__ = __mul__

    def scale(self, c) -> "QuadClass":
        return QuadClass(self.quad, {k: a * c for k, a in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, QuadClass) and self.quad == other.quad
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.quad, frozenset(self.terms.items())))

    def coefficient(self, key: tuple) -> CoeffElement:
        return self.terms.get(key, self.quad.theory.ring.zero())

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for key in sorted(self.terms, key=lambda k: (k[0], k[1])):
            c = self.terms[key]
            name = f"{key[0]}{key[1]}" if key[0] != LT else "lt"
            cs = repr(c)
            bits.append(name if cs == "1" else f"({cs})*{name}")
        return " + ".join(bits)


def mul(quad: SplitQuadric, x: QuadClass, y: QuadClass) -> QuadClass:
    if x.quad != quad or y.quad != quad:
        raise ValueError("classes live on different quadrics or theories")
    return x * y


def h_power(quad: SplitQuadric, k: int) -> QuadClass:
    return quad.h_power(k)


def degree(x: QuadClass) -> CoeffElement:
    """Pushforward to the point, linearly over the basis degrees."""
    out = x.quad.theory.ring.zero()
    for key, c in x.terms.items():
        out = out + c * x.quad.degree_of_key(key)
    return out
