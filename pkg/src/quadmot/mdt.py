"""Motivic decomposition type diagrams and their transformations.

A diagram records the Tate cells of a quadric's motive and their
partition into connected components.  Cells are pairs ``(position,
role)`` with role ``'p'`` (plain), ``'u'`` / ``'l'`` (the two middle
cells in even dimension).  Chow diagrams carry every position 0..D;
height-n diagrams keep only the central window

    even D:  positions d-2^(n-1)+1 .. d+2^(n-1)-1 with the middle doubled,
    odd  D:  positions d .. d+2^n-2,

one cell per twist class modulo 2^n - 1 (the odd window places the extra
complementary cell on the left).  The remaining positions are the
complementary cells (grey dots).

Transformations: an anisotropic Chow diagram in the window collapses to
the height-n diagram by intersecting components with the window; the
inverse adjoins to every window cell its outer partners at distance
2^n - 1, the upper middle pairing downward and the lower upward.  The
partners of distinct window cells are distinct, which makes the two maps
mutually inverse on diagrams with all outer connections present.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import motives
from .forms import (FormProfile, declared_symbol_name, kn_kernel_index,
                    validate)
from .motives import (KIND_INVERTIBLE, KIND_KERNEL, KIND_ROST, MotiveExpr,
                      Summand, ZERO, symbol)

PLAIN = "p"
UPPER = "u"
LOWER = "l"

Cell = tuple[int, str]


class OuterConnectionError(ValueError):
    """A required outer connection is missing from a Chow diagram."""


def chow_cells(dim_q: int) -> frozenset[Cell]:
    """All Tate cells of a split quadric of dimension ``dim_q``."""
    d = dim_q // 2
    cells = {(p, PLAIN) for p in range(dim_q + 1)}
    if dim_q % 2 == 0:
        cells.discard((d, PLAIN))
        cells |= {(d, UPPER), (d, LOWER)}
    return frozenset(cells)


def window_cells(dim_q: int, n: int) -> frozenset[Cell]:
    """Cells of the height-n kernel window."""
    d = dim_q // 2
    half = 2 ** (n - 1)
    if dim_q % 2 == 0:
        cells = {(p, PLAIN) for p in range(d - half + 1, d + half)}
        cells.discard((d, PLAIN))
        cells |= {(d, UPPER), (d, LOWER)}
    else:
        # 2^n - 1 consecutive positions with the extra complementary cell
        # on the left
        cells = {(p, PLAIN) for p in range(d - half + 2, d + half + 1)}
    return frozenset(c for c in cells if 0 <= c[0] <= dim_q)


def outer_pairs(dim_q: int, n: int) -> list[tuple[Cell, Cell]]:
    """Pairs of cells at distance 2^n - 1 that must be connected."""
    period = 2 ** n - 1
    d = dim_q // 2
    even = dim_q % 2 == 0
    pairs = []
    for j in range(dim_q - period + 1):
        a: Cell = (j, PLAIN)
        b: Cell = (j + period, PLAIN)
        if even and j == d:
            a = (d, LOWER)
        if even and j + period == d:
            b = (d, UPPER)
        pairs.append((a, b))
    return pairs


@dataclass(frozen=True)
class MDTDiagram:
    """Partitioned cell diagram, Chow flavor or height-n flavor."""

    flavor: str                      # "chow" | "morava"
    dim_q: int
    components: frozenset[frozenset]
    n: int | None = None
    complementary: frozenset = frozenset()
    anisotropic: bool = True
    labels: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.flavor not in ("chow", "morava"):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.flavor == "morava" and self.n is None:
            raise ValueError("height-n flavor needs n")
        object.__setattr__(
            self, "components",
            frozenset(frozenset(c) for c in self.components))
        object.__setattr__(self, "complementary",
                           frozenset(self.complementary))
        got = set()
        for comp in self.components:
            if not comp:
                raise ValueError("empty component")
            if got & comp:
                raise ValueError("components overlap")
            got |= comp
        expected = (chow_cells(self.dim_q) if self.flavor == "chow"
                    else window_cells(self.dim_q, self.n))
        if got != set(expected):
            raise ValueError(
                f"components must partition the cell set exactly; "
                f"missing {set(expected) - got}, extra {got - set(expected)}")
        if self.flavor == "morava":
            full = chow_cells(self.dim_q)
            if self.complementary != full - expected:
                raise ValueError("complementary cells must be the "
                                 "positions outside the window")

    def cells(self) -> frozenset[Cell]:
        out: set[Cell] = set()
        for comp in self.components:
            out |= comp
        return frozenset(out)

    def component_of(self, cell: Cell) -> frozenset:
        for comp in self.components:
            if cell in comp:
                return comp
        raise KeyError(cell)


def chow_diagram(dim_q: int, components, anisotropic: bool = True,
                 labels: dict | None = None) -> MDTDiagram:
    return MDTDiagram("chow", dim_q, frozenset(frozenset(c) for c in components),
                      None, frozenset(), anisotropic, labels or {})


def morava_diagram(dim_q: int, n: int, components, anisotropic: bool = True,
                   labels: dict | None = None) -> MDTDiagram:
    comp = frozenset(frozenset(c) for c in components)
    grey = chow_cells(dim_q) - window_cells(dim_q, n)
    return MDTDiagram("morava", dim_q, comp, n, grey, anisotropic,
                      labels or {})


def split_chow_diagram(dim_q: int) -> MDTDiagram:
    return chow_diagram(dim_q, [{c} for c in chow_cells(dim_q)],
                        anisotropic=False)


# ---------------------------------------------------------------------------
# Outer connections and the two transformations
# ---------------------------------------------------------------------------


def check_outer_excellent(diagram: MDTDiagram, n: int) -> list[str]:
    """Violations of the forced distance-(2^n - 1) connections."""
    if diagram.flavor != "chow":
        raise ValueError("outer connections are checked on Chow diagrams")
    if not diagram.anisotropic:
        raise ValueError("outer connections require the anisotropic flag")
    if not 2 ** n - 1 <= diagram.dim_q <= 2 ** (n + 1) - 2:
        raise ValueError(
            f"dimension {diagram.dim_q} outside the height-{n} range")
    issues = []
    for a, b in outer_pairs(diagram.dim_q, n):
        if diagram.component_of(a) is not diagram.component_of(b):
            issues.append(f"cells {cell_str(a)} and {cell_str(b)} must be "
                          "connected")
    return issues


def chow_to_morava(diagram: MDTDiagram, n: int) -> MDTDiagram:
    """Collapse a Chow diagram to the height-n window.

    Cells outside the window become complementary; each component
    survives as its intersection with the window (equivalently, the
    outer connections are contracted).  The outer connections are a
    precondition only for anisotropic diagrams; isotropic ones (already
    reduced) are restricted as they stand."""
    if diagram.anisotropic:
        issues = check_outer_excellent(diagram, n)
        if issues:
            raise OuterConnectionError("; ".join(issues))
    elif not 2 ** n - 1 <= diagram.dim_q <= 2 ** (n + 1) - 2:
        raise ValueError(
            f"dimension {diagram.dim_q} outside the height-{n} range")
    window = window_cells(diagram.dim_q, n)
    comps = []
    labels = {}
    for comp in diagram.components:
        inner = frozenset(comp & window)
        if inner:
            comps.append(inner)
            if comp in diagram.labels:
                labels[inner] = diagram.labels[comp]
    return morava_diagram(diagram.dim_q, n, comps, diagram.anisotropic,
                          labels)


def _partners(cell: Cell, dim_q: int, n: int) -> set[Cell]:
    period = 2 ** n - 1
    pos, role = cell
    d = dim_q // 2
    even = dim_q % 2 == 0
    if role == UPPER:
        return {(pos - period, PLAIN)} if pos - period >= 0 else set()
    if role == LOWER:
        return {(pos + period, PLAIN)} if pos + period <= dim_q else set()
    out: set[Cell] = set()
    for q in (pos - period, pos + period):
        if 0 <= q <= dim_q:
            # a plain window cell never pairs with the middle (only the
            # middle cells themselves reach distance 2^n - 1 from it)
            out.add((q, PLAIN))
    return out


def morava_to_chow(diagram: MDTDiagram, n: int) -> MDTDiagram:
    """Adjoin the outer partners of every window cell.

    Inverse to ``chow_to_morava`` on diagrams with all outer connections
    present; the result always passes the outer-connection check."""
    if diagram.flavor != "morava" or diagram.n != n:
        raise ValueError("expected a height-n diagram")
    if not diagram.anisotropic:
        raise ValueError("the reconstruction is stated for anisotropic "
                         "diagrams")
    adjoined: set[Cell] = set()
    comps = []
    labels = {}
    for comp in diagram.components:
        grown = set(comp)
        for cell in comp:
            extra = _partners(cell, diagram.dim_q, n)
            if extra & adjoined:
                raise AssertionError("outer partner adjoined twice")
            adjoined |= extra
            grown |= extra
        grown_f = frozenset(grown)
        comps.append(grown_f)
        if comp in diagram.labels:
            labels[grown_f] = diagram.labels[comp]
    out = chow_diagram(diagram.dim_q, comps, diagram.anisotropic, labels)
    if check_outer_excellent(out, n):
        raise AssertionError("reconstructed diagram misses outer "
                             "connections")
    return out


# ---------------------------------------------------------------------------
# Stable reduction along the splitting tower
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StableReduction:
    """Tower level of the height-n kernel form with its twist offset."""

    level: int
    twist: int
    kernel_dim: int

    @property
    def split(self) -> bool:
        return self.kernel_dim <= 1

    def window_positions(self, dim_q_total: int, n: int) -> frozenset[Cell]:
        return window_cells(dim_q_total - 2, n) if not self.split \
            else frozenset()


def stable_reduce(profile: FormProfile, n: int) -> StableReduction:
    """Strip the Tate summands above the height-n kernel level.

    Returns the kernel level j, the twist offset
    ``r = (dim q - dim q_j) / 2``, and the kernel dimension; r Tates split
    off at twists 0..r-1 and r at the top, and the kernel's own window
    sits at the central positions of the original quadric.
    """
    level, kdim = kn_kernel_index(profile, n)
    r = (profile.dim - kdim) // 2
    return StableReduction(level, r, kdim)


def kernel_shift_equiv(p1: FormProfile, p2: FormProfile, n: int,
                       declared_similar_mod_i: bool) -> int | None:
    """Twist s with kernel(Q2) = kernel(Q1)(s), for forms declared similar
    modulo the (n+2)-nd power of the fundamental ideal."""
    if not declared_similar_mod_i:
        return None
    if p1.dim < 2 ** n or p2.dim < 2 ** n:
        raise ValueError(f"both dimensions must be at least 2^{n}")
    if (p2.dim - p1.dim) % 2:
        raise ValueError("dimensions of forms similar modulo a power of "
                         "the fundamental ideal must agree modulo 2")
    return (p2.dim - p1.dim) // 2


# ---------------------------------------------------------------------------
# The K(2) classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassifiedMDT:
    row: str
    diagram: MDTDiagram
    expr: MotiveExpr
    reduction: StableReduction

    @property
    def labels(self) -> dict:
        return self.diagram.labels


def classify_k2(profile: FormProfile) -> ClassifiedMDT:
    """The K(2) decomposition type of the kernel motive, by table row.

    Requires ``dim q >= 4`` and the Kahn dimension at n=2 (plus the n=1
    one to split the dimension-4 case).  In the periodic twist classes
    (mod 3) the rows are:

    odd dim:   1 -> three invertible singletons; 3 -> a singleton and the
    even-Clifford binary; >3 -> indecomposable.
    even dim:  0 -> four singletons; 2 -> two singletons and the middle
    discriminant binary; 4 with trivial discriminant -> two Clifford
    binaries; otherwise indecomposable.
    """
    issues = validate(profile)
    if issues:
        raise ValueError("profile fails validation: " + "; ".join(issues))
    if profile.dim < 4:
        raise ValueError("classification needs quadric dimension >= 2")
    if 2 not in profile.kahn_dims:
        raise ValueError("missing required Kahn data: kahn_dims[2]")
    dim2 = profile.kahn_dims[2]
    even = profile.dim % 2 == 0
    if even and dim2 == 4 and 1 not in profile.kahn_dims:
        raise ValueError("missing required Kahn data: kahn_dims[1]")
    dim_q = profile.quadric_dim()
    d = dim_q // 2
    name = declared_symbol_name(profile, 2)
    alpha = symbol(name) if name else ZERO
    reduction = stable_reduce(profile, 2)
    period = 3

    def lab_l(t):
        return Summand(KIND_INVERTIBLE, alpha, t % period).render()

    def lab_r(tag, t):
        return Summand(KIND_ROST, alpha, t % period, tag).render()

    cells = window_cells(dim_q, 2)
    labels: dict[frozenset, str] = {}
    if not even:
        c0, c1, c2 = (d, PLAIN), (d + 1, PLAIN), (d + 2, PLAIN)
        if dim2 == 1:
            comps = [{c0}, {c1}, {c2}]
            for c in comps:
                labels[frozenset(c)] = lab_l(next(iter(c))[0])
            row = "odd dim2=1"
        elif dim2 == 3:
            comps = [{c0, c1}, {c2}]
            labels[frozenset({c0, c1})] = lab_r("C0(q)", d)
            labels[frozenset({c2})] = lab_l(d + 2)
            row = "odd dim2=3"
        else:
            comps = [set(cells)]
            labels[frozenset(cells)] = "Mker[Q]"
            row = "odd dim2>3"
    else:
        left, up, low, right = ((d - 1, PLAIN), (d, UPPER), (d, LOWER),
                                (d + 1, PLAIN))
        if dim2 == 0:
            comps = [{left}, {up}, {low}, {right}]
            for c in comps:
                labels[frozenset(c)] = lab_l(next(iter(c))[0])
            row = "even dim2=0"
        elif dim2 == 2:
            comps = [{left}, {up, low}, {right}]
            labels[frozenset({left})] = lab_l(d - 1)
            labels[frozenset({up, low})] = lab_r("disc(q)", d)
            labels[frozenset({right})] = lab_l(d + 1)
            row = "even dim2=2"
        elif dim2 == 4 and profile.kahn_dims.get(1) == 0:
            # upper middle joins the component with the lowest window
            # position, the canonical pairing convention
            comps = [{left, up}, {low, right}]
            labels[frozenset({left, up})] = lab_r("C(q)", d - 1)
            labels[frozenset({low, right})] = lab_r("C(q)", d)
            row = "even dim2=4 dim1=0"
        else:
            comps = [set(cells)]
            labels[frozenset(cells)] = "Mker[Q]"
            row = "even dim2=4 dim1>0 or dim2>4"
    diagram = morava_diagram(dim_q, 2, comps, profile.anisotropic, labels)
    expr = _row_expr(row, alpha, d, period)
    return ClassifiedMDT(row, diagram, expr, reduction)


def _row_expr(row: str, alpha, d: int, period: int) -> MotiveExpr:
    inv = lambda t: Summand(KIND_INVERTIBLE, alpha, t % period)  # noqa: E731
    rost = lambda tag, t: Summand(KIND_ROST, alpha, t % period, tag)  # noqa: E731
    if row == "odd dim2=1":
        return MotiveExpr([inv(d), inv(d + 1), inv(d + 2)], period)
    if row == "odd dim2=3":
        return MotiveExpr([rost("C0(q)", d), inv(d + 2)], period)
    if row == "even dim2=0":
        return MotiveExpr([inv(d - 1), inv(d), inv(d), inv(d + 1)], period)
    if row == "even dim2=2":
        return MotiveExpr([inv(d - 1), rost("disc(q)", d), inv(d + 1)],
                          period)
    if row == "even dim2=4 dim1=0":
        return MotiveExpr([rost("C(q)", d - 1), rost("C(q)", d)], period)
    return MotiveExpr([Summand(KIND_KERNEL, ZERO, d % period, "Q")], period)


# ---------------------------------------------------------------------------
# Serialization and rendering hooks
# ---------------------------------------------------------------------------


def cell_str(cell: Cell) -> str:
    pos, role = cell
    return f"{pos}{role if role != PLAIN else ''}"


def parse_cell(text: str) -> Cell:
    text = str(text)
    if text.endswith(("u", "l")):
        return int(text[:-1]), text[-1]
    return int(text), PLAIN


def diagram_to_dict(diagram: MDTDiagram) -> dict:
    comps = sorted(
        (sorted(map(cell_str, comp)) for comp in diagram.components),
        key=lambda c: c[0])
    out = {
        "flavor": diagram.flavor,
        "dim_quadric": diagram.dim_q,
        "anisotropic": diagram.anisotropic,
        "cells": sorted(map(cell_str, diagram.cells())),
        "components": comps,
    }
    if diagram.flavor == "morava":
        out["n"] = diagram.n
        out["complementary"] = sorted(map(cell_str, diagram.complementary))
    if diagram.labels:
        out["labels"] = {
            " ".join(sorted(map(cell_str, comp))): lab
            for comp, lab in sorted(diagram.labels.items(),
                                    key=lambda kv: sorted(kv[0]))}
    return out


def diagram_from_dict(data: dict) -> MDTDiagram:
    comps = [frozenset(parse_cell(c) for c in comp)
             for comp in data["components"]]
    labels = {}
    for key, lab in data.get("labels", {}).items():
        labels[frozenset(parse_cell(c) for c in key.split())] = lab
    if data["flavor"] == "chow":
        return chow_diagram(data["dim_quadric"], comps,
                            data.get("anisotropic", True), labels)
    return morava_diagram(data["dim_quadric"], data["n"], comps,
                          data.get("anisotropic", True), labels)
