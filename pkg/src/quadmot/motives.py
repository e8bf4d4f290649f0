"""Formal motive expressions: Tate twists, the invertible summands
attached to degree-(n+1) classes, binary tensor factors, and opaque
kernel summands.

Symbols live in an abstract F_2-vector space with named generators; an
element is a frozenset of generator names (symmetric-difference sums).
The invertible summands obey ``L(a) (x) L(b) = L(a+b)`` with ``L(0)`` the
Tate motive, so twists and symbols form an abelian group.  In periodic
mode twists are reduced modulo ``2^n - 1``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .forms import FormProfile, declared_symbol_name

Symbol = frozenset


def symbol(*gens: str) -> Symbol:
    """F_2-sum of named generators ('a', 'b' -> a + b)."""
    out: set[str] = set()
    for g in gens:
        out ^= {g}
    return frozenset(out)


ZERO = symbol()

KIND_INVERTIBLE = "L"
KIND_ROST = "R"
KIND_KERNEL = "Mker"


@dataclass(frozen=True)
class Summand:
    kind: str
    sym: Symbol
    twist: int
    label: str | None = None

    def is_tate(self) -> bool:
        return self.kind == KIND_INVERTIBLE and not self.sym

    def render(self) -> str:
        if self.kind == KIND_INVERTIBLE:
            if not self.sym:
                return f"1({self.twist})"
            return f"L[{_sym_str(self.sym)}]({self.twist})"
        core = f"{self.kind}[{self.label}]"
        if self.sym:
            core += f"*L[{_sym_str(self.sym)}]"
        return f"{core}({self.twist})"


def _sym_str(sym: Symbol) -> str:
    return "+".join(sorted(sym)) if sym else "0"


def _sort_key(s: Summand):
    rank = {KIND_INVERTIBLE: 0 if not s.sym else 1,
            KIND_ROST: 2, KIND_KERNEL: 3}[s.kind]
    return (rank, _sym_str(s.sym), s.label or "", s.twist)


class MotiveExpr:
    """Multiset of summands, optionally with periodic twists."""

    __slots__ = ("summands", "period")

    def __init__(self, summands, period: int | None = None):
        self.period = period
        counted: Counter = Counter()
        for s in summands:
            if isinstance(s, tuple):
                s = Summand(*s)
            if period is not None:
                s = Summand(s.kind, s.sym, s.twist % period, s.label)
            counted[s] += 1
        self.summands = counted

    @classmethod
    def tate(cls, twist: int = 0, period: int | None = None) -> "MotiveExpr":
        return cls([Summand(KIND_INVERTIBLE, ZERO, twist)], period)

    @classmethod
    def invertible(cls, sym: Symbol, twist: int = 0,
                   period: int | None = None) -> "MotiveExpr":
        return cls([Summand(KIND_INVERTIBLE, sym, twist)], period)

    def __add__(self, other: "MotiveExpr") -> "MotiveExpr":
        self._check(other)
        out = MotiveExpr([], self.period)
        out.summands = self.summands + other.summands
        return out

    def _check(self, other: "MotiveExpr"):
        if self.period != other.period:
            raise ValueError("periodicity mode mismatch")

    def twist(self, i: int) -> "MotiveExpr":
        return MotiveExpr(
            [Summand(s.kind, s.sym, s.twist + i, s.label)
             for s in self.summands.elements()], self.period)

    def __eq__(self, other):
        return (isinstance(other, MotiveExpr) and self.period == other.period
                and self.summands == other.summands)

    def __iter__(self):
        return iter(sorted(self.summands.elements(), key=_sort_key))

    def rank(self) -> int:
        return sum(self.summands.values())

    def tate_count(self, twist: int | None = None) -> int:
        total = 0
        for s, m in self.summands.items():
            if not s.is_tate():
                continue
            if twist is None or s.twist == self._norm(twist):
                total += m
        return total

    def _norm(self, twist: int) -> int:
        return twist % self.period if self.period is not None else twist

    def render(self) -> str:
        return " + ".join(s.render() for s in self) if self.summands else "0"

    __repr__ = render


def tensor(a: MotiveExpr, b: MotiveExpr) -> MotiveExpr:
    """Tensor product, distributed over the summands.

    Invertibles multiply by adding symbols and twists; an invertible
    against a binary or kernel factor twists it and adds to its symbol
    slot.  Products of two non-invertible summands are outside the
    expression algebra and raise.
    """
    a._check(b)
    out: list[Summand] = []
    for s1, m1 in a.summands.items():
        for s2, m2 in b.summands.items():
            if s1.kind != KIND_INVERTIBLE and s2.kind != KIND_INVERTIBLE:
                raise ValueError(
                    "tensor of two non-invertible summands is not a formal "
                    "motive expression")
            if s1.kind != KIND_INVERTIBLE:
                s1, s2 = s2, s1
            merged = Summand(s2.kind, s1.sym ^ s2.sym, s1.twist + s2.twist,
                             s2.label)
            out.extend([merged] * (m1 * m2))
    return MotiveExpr(out, a.period)


def pfister_motive(n: int, sym: Symbol,
                   period: int | None = None) -> MotiveExpr:
    """Motive of the 2^n-cell quadric attached to a nonzero symbol:
    Tates in twists 0..2^n-1 plus the invertible family in the same
    twists; the invertibles collapse to Tates when the symbol vanishes."""
    out = []
    for i in range(2 ** n):
        out.append(Summand(KIND_INVERTIBLE, ZERO, i))
        out.append(Summand(KIND_INVERTIBLE, sym, i))
    return MotiveExpr(out, period)


def base_change_kill(m: MotiveExpr, alpha: Symbol) -> MotiveExpr:
    """Quotient of the symbol space by alpha: every symbol containing the
    pivot generator of alpha gets alpha added (so alpha itself dies)."""
    if not alpha:
        return m
    pivot = max(alpha)
    out = []
    for s in m.summands.elements():
        sym = s.sym ^ alpha if pivot in s.sym else s.sym
        out.append(Summand(s.kind, sym, s.twist, s.label))
    return MotiveExpr(out, m.period)


def detect_count(m: MotiveExpr, alpha: Symbol, twist: int) -> int:
    """Multiplicity of the invertible summand with symbol exactly alpha at
    the given twist, detected by counting Tate summands before and after
    killing alpha."""
    if m.period is None:
        raise ValueError("detection requires periodic mode")
    after = base_change_kill(m, alpha)
    return after.tate_count(twist) - m.tate_count(twist)


# ---------------------------------------------------------------------------
# Small Kahn dimension decompositions
# ---------------------------------------------------------------------------


def kernel_window_twists(dim: int, n: int) -> list[int]:
    """Twists of the kernel cells of a quadric of form dimension ``dim``:
    the central window around d = floor((dim-2)/2), with the middle twist
    doubled in even dimension."""
    d = (dim - 2) // 2
    half = 2 ** (n - 1)
    if dim % 2 == 0:
        return list(range(d - half + 1, d + half)) + [d]
    return list(range(d, d + 2 ** n - 1))


def small_kahn_decomposition(profile: FormProfile, n: int) -> MotiveExpr:
    """Kernel decomposition for forms of Kahn dimension at most 2^n:
    a twist of the small-form motive tensored by the invertible summand
    of the associated class, plus ``2^n - dim_n`` twists of that summand.

    The small-form factor is rendered by cases: empty in dimension <= 1,
    the discriminant binary in dimension 2, the even-Clifford binary in
    dimension 3, two Clifford binaries in dimension 4 with trivial
    discriminant, and an opaque kernel otherwise.
    """
    period = 2 ** n - 1
    if n not in profile.kahn_dims:
        raise ValueError(f"profile lacks the kahn dimension at n={n}")
    dim_n = profile.kahn_dims[n]
    if profile.dim < 2 ** n:
        raise ValueError("small-kahn decomposition needs dim >= 2^n")
    if dim_n > 2 ** n:
        raise ValueError("kahn dimension exceeds 2^n")
    name = declared_symbol_name(profile, n)
    alpha = symbol(name) if name else ZERO
    d = profile.quadric_dim() // 2

    window = kernel_window_twists(profile.dim, n)
    factor: list[Summand] = []
    factor_cells: list[int] = []
    if dim_n >= 2:
        qdim = dim_n - 2
        t0 = d - qdim // 2
        if dim_n == 2:
            factor = [Summand(KIND_ROST, alpha, t0, "disc(q)")]
            factor_cells = [t0, t0]
        elif dim_n == 3:
            factor = [Summand(KIND_ROST, alpha, t0, "C0(q)")]
            factor_cells = [t0, t0 + 1]
        elif dim_n == 4 and profile.kahn_dims.get(1) == 0:
            factor = [Summand(KIND_ROST, alpha, t0, "C(q)"),
                      Summand(KIND_ROST, alpha, t0 + 1, "C(q)")]
            factor_cells = [t0, t0 + 1, t0 + 1, t0 + 2]
        else:
            factor = [Summand(KIND_KERNEL, alpha, t0, "Q'")]
            factor_cells = [t0 + k for k in range(qdim + 1)]
            if qdim % 2 == 0:
                factor_cells.append(t0 + qdim // 2)
    occupied = Counter(t % period for t in factor_cells)
    singles = []
    for t in window:
        cls = t % period
        if occupied[cls]:
            occupied[cls] -= 1
            continue
        singles.append(Summand(KIND_INVERTIBLE, alpha, cls))
    if len(singles) != 2 ** n - dim_n or occupied.total():
        raise AssertionError("window bookkeeping is off")
    return MotiveExpr(factor + singles, period)
