"""Symbolic profiles of quadratic forms.

A profile declares the invariants of a form: its dimension, the sequence
of higher Witt indices (the splitting pattern), Kahn dimensions, and a
few flags.  Field-theoretic facts are declared, never computed; the
validator only enforces implications between declarations (parity,
Arason-Pfister bounds, definedness of the associated degree-(n+1) class,
and the splitting-pattern preconditions of the K(2) classification).
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class FormProfile:
    dim: int
    splitting_pattern: tuple[int, ...] = ()
    kahn_dims: dict[int, int] = field(default_factory=dict)
    disc_trivial: bool = False
    clifford_index: int | None = None
    i_power: int | None = None
    symbols: dict[int, str] = field(default_factory=dict)
    anisotropic: bool = True

    def __post_init__(self):
        object.__setattr__(self, "splitting_pattern",
                           tuple(self.splitting_pattern))
        object.__setattr__(self, "kahn_dims", dict(self.kahn_dims))
        object.__setattr__(self, "symbols", dict(self.symbols))

    def anisotropic_dims(self) -> list[int]:
        """Dimensions of the anisotropic kernels along the tower."""
        dims = [self.dim]
        for i in self.splitting_pattern:
            dims.append(dims[-1] - 2 * i)
        return dims

    def quadric_dim(self) -> int:
        return self.dim - 2


@dataclass(frozen=True)
class SplittingTower:
    """Bookkeeping for the generic splitting tower of a profile."""

    levels: tuple[tuple[str, int, tuple[int, ...]], ...]

    def anisotropic_dims(self) -> list[int]:
        return [lvl[1] for lvl in self.levels]


def build_tower(profile: FormProfile) -> SplittingTower:
    """Enumerate the tower levels K_0 .. K_h with their kernel dimensions."""
    issues = pattern_issues(profile)
    if issues:
        raise ValueError("inconsistent pattern: " + "; ".join(issues))
    dims = profile.anisotropic_dims()
    pattern = profile.splitting_pattern
    levels = tuple(
        (f"K{j}", dims[j], tuple(pattern[j:])) for j in range(len(dims)))
    return SplittingTower(levels)


def kn_kernel_index(profile: FormProfile, n: int) -> tuple[int, int]:
    """First tower level whose kernel has dimension at most 2^(n+1),
    returned with that dimension."""
    dims = profile.anisotropic_dims()
    bound = 2 ** (n + 1)
    for j, dim in enumerate(dims):
        if dim <= bound:
            return j, dim
    raise ValueError("tower does not reach the kernel bound "
                     f"2^{n + 1} = {bound}")


def pattern_issues(p: FormProfile) -> list[str]:
    """Arithmetic consistency of the splitting pattern alone."""
    issues: list[str] = []
    if p.dim < 1:
        return ["dim must be >= 1"]
    if any(i < 1 for i in p.splitting_pattern):
        return ["higher Witt indices must be >= 1"]
    dims = p.anisotropic_dims()
    for j, dim in enumerate(dims):
        if dim < 0:
            issues.append(f"tower level {j} has negative dimension {dim}")
    if not issues and dims[-1] > 1:
        issues.append(f"pattern does not exhaust the form "
                      f"(last kernel has dimension {dims[-1]})")
    for j, dim in enumerate(dims[:-1]):
        if dim <= 1:
            issues.append(f"tower level {j} already split but pattern "
                          "continues")
    return issues


def validate(profile: FormProfile) -> list[str]:
    """All violated invariants, empty when the profile is consistent."""
    p = profile
    issues = pattern_issues(p)
    if issues and (p.dim < 1 or any(i < 1 for i in p.splitting_pattern)):
        return issues

    if p.i_power is not None and p.i_power >= 1 and p.anisotropic:
        if 0 < p.dim < 2 ** p.i_power:
            issues.append(
                f"anisotropic form in I^{p.i_power} must have dimension "
                f">= {2 ** p.i_power}")

    for n, dn in p.kahn_dims.items():
        if dn < 0 or dn > p.dim:
            issues.append(f"kahn dimension at n={n} out of range")
        elif (dn - p.dim) % 2:
            issues.append(f"kahn dimension at n={n} has wrong parity")
        if dn < 2 ** n and n not in p.symbols:
            issues.append(
                f"kahn dimension {dn} < 2^{n} requires a declared symbol "
                f"at n={n}")

    issues += _k2_preconditions(p)
    return issues


def _k2_preconditions(p: FormProfile) -> list[str]:
    """Pattern constraints needed by the K(2) classification of large
    Kahn dimension (even dimension, kernel of dimension 6 or 8)."""
    issues: list[str] = []
    d2 = p.kahn_dims.get(2)
    if d2 is None:
        return issues
    if p.dim % 2 == 0 and d2 == 4 and 1 not in p.kahn_dims:
        issues.append("kahn dimension 4 at n=2 on an even form requires "
                      "the n=1 kahn dimension")
    if p.dim % 2 or d2 <= 4:
        return issues
    try:
        j, kdim = kn_kernel_index(p, 2)
    except ValueError:
        return issues
    tail = p.splitting_pattern[j:]
    if kdim == 6 and (not tail or tail[0] != 1):
        issues.append("kernel of dimension 6 with kahn dimension > 4 "
                      "must have splitting pattern starting (1, ...)")
    if kdim == 8 and tuple(tail[:2]) != (1, 1):
        issues.append("kernel of dimension 8 with kahn dimension > 4 "
                      "must have splitting pattern starting (1, 1, ...)")
    return issues


def declared_symbol_name(profile: FormProfile, n: int) -> str | None:
    """Declared name of the degree-(n+1) class; '0' declares the zero
    class and reads as absent."""
    name = profile.symbols.get(n)
    return None if name in (None, "0") else name


def kernel_kahn_consistent(dim_n_over_kernel_field: int, n: int) -> bool:
    """Consistency rule: a kahn dimension below 2^n over the kernel field
    forces the same bound over the base.  Exposed as a predicate, not an
    inference engine."""
    return dim_n_over_kernel_field < 2 ** n
