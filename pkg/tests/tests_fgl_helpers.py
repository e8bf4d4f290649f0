"""Shared checks for formal group law axioms, kept out of the library so
the tests exercise the public coefficient API only."""

from quadmot import coefficients as coeff


def assoc_holds(fgl) -> bool:
    """F(F(x,y),z) = F(x,F(y,z)) up to the truncation degree."""
    ring = fgl.ring
    n_max = fgl.truncation
    zero = ring.zero()

    def tri_mul(a, b):
        out = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                key = tuple(x + y for x, y in zip(ka, kb))
                if sum(key) > n_max:
                    continue
                out[key] = out.get(key, zero) + ca * cb
        return {k: c for k, c in out.items() if not c.is_zero()}

    def tri_add(a, b):
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, zero) + c
        return {k: c for k, c in out.items() if not c.is_zero()}

    def substitute(u, v):
        powers_u = {0: {(0, 0, 0): ring.one()}}
        powers_v = {0: {(0, 0, 0): ring.one()}}
        top = max(max(i for i, _ in fgl.coeffs),
                  max(j for _, j in fgl.coeffs))
        for k in range(1, top + 1):
            powers_u[k] = tri_mul(powers_u[k - 1], u)
            powers_v[k] = tri_mul(powers_v[k - 1], v)
        out = {}
        for (i, j), c in fgl.coeffs.items():
            term = tri_mul(powers_u[i], powers_v[j])
            out = tri_add(out, {k: cc * c for k, cc in term.items()})
        return out

    x = {(1, 0, 0): ring.one()}
    y = {(0, 1, 0): ring.one()}
    z = {(0, 0, 1): ring.one()}
    return substitute(substitute(x, y), z) == substitute(x, substitute(y, z))


def compose_univariate(outer, inner, n_max):
    out = {}
    power = {0: {0: coeff.PadicFraction(inner[1][0].ctx, 1, 0)}}
    for m in range(1, n_max + 1):
        power = coeff._ser_mul(power, inner, n_max)
        if m in outer:
            out = coeff._ser_add(out, coeff._ser_mul({0: outer[m]}, power,
                                                     n_max))
    return out


def is_identity_series(series) -> bool:
    for deg, vl in series.items():
        for e, x in vl.items():
            want = 1 if (deg, e) == (1, 0) else 0
            if (x.num - want * x.ctx.p ** x.den) % x.ctx.big:
                return False
    return True


def exp_log_identity(n, ring, n_max) -> bool:
    log = coeff.morava_log(n, ring, n_max)
    exp = coeff.exp_from_log(log, n_max)
    return (is_identity_series(compose_univariate(log, exp, n_max))
            and is_identity_series(compose_univariate(exp, log, n_max)))
