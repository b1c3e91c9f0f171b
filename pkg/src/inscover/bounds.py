"""Closed-form bounds on optimal code densities, evaluated with directed rounding.

Lower bounds are rounded towards minus infinity and upper bounds towards plus
infinity, so every float returned here is itself a valid bound. Irrational
quantities go through :mod:`decimal` at 60 digits with the rounding mode
chosen per operation, then to the nearest float on the safe side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from typing import Iterable, Mapping

PREC = 60
REPORT_PLACES = 7
BISECTION_TOL = 1e-9
BISECTION_MAX_ITER = 200

# best known lower bound on the Turán density t(4,3) (flag algebras)
KNOWN_T43_LOWER = Fraction("0.438334")

UPPER_CONSTANTS = (
    ("7/(r+1)", Fraction(7), True, "covering-code recursion, all r"),
    ("6.239/(r+1)", Fraction("6.239"), True, "via Turán density, all r"),
    ("4.911/(r+1)", Fraction("4.911"), False,
     "asymptotic: valid only for sufficiently large r (threshold unspecified)"),
)

_FLOOR = Context(prec=PREC, rounding=ROUND_FLOOR)
_CEIL = Context(prec=PREC, rounding=ROUND_CEILING)


def _dec(x: Fraction, ctx: Context) -> Decimal:
    return ctx.divide(Decimal(x.numerator), Decimal(x.denominator))


def float_down(x) -> float:
    """Largest float not exceeding ``x`` (a Fraction or Decimal)."""
    x = Fraction(x)
    f = float(x)
    if Fraction(f) > x:
        f = math.nextafter(f, -math.inf)
    return f


def float_up(x) -> float:
    x = Fraction(x)
    f = float(x)
    if Fraction(f) < x:
        f = math.nextafter(f, math.inf)
    return f


def _sqrt(x: Fraction, ctx: Context) -> Decimal:
    return ctx.sqrt(_dec(x, ctx))


def volume_lower(n: int, r: int) -> int:
    """ceil(n^(r+1) / ((r+1)(n-1)+1)), the sphere-covering bound on S(n, r+1, r)."""
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    return -(-(n ** (r + 1)) // ((r + 1) * (n - 1) + 1))


def density_lower_1r(r: int) -> Fraction:
    if r < 1:
        raise ValueError("need r >= 1")
    return Fraction(1, r)


def size_lower_1r(n: int, r: int) -> int:
    """ceil(n^r / r), the integer form of the 1/r density bound on S(n, r+1, r)."""
    return -(-(n**r) // r)


@dataclass(frozen=True)
class Bound:
    name: str
    value: float
    unconditional: bool = True
    note: str = ""


def upper_bounds(r: int) -> list[Bound]:
    if r < 2:
        raise ValueError("need r >= 2")
    return [Bound(name, float_up(const / (r + 1)), uncond, note)
            for name, const, uncond, note in UPPER_CONSTANTS]


def chung_lu_odd(r: int) -> float:
    """(5r - sqrt(9r^2 + 24r) + 12) / (2r(r+3)), rounded down; odd r >= 3."""
    if r < 3 or r % 2 == 0:
        raise ValueError(f"defined for odd r >= 3, got {r}")
    root = _CEIL.sqrt(Decimal(9 * r * r + 24 * r))
    num = _FLOOR.subtract(Decimal(5 * r + 12), root)
    return float_down(_FLOOR.divide(num, Decimal(2 * r * (r + 3))))


def least_prime_factor(m: int) -> int:
    if m < 2:
        raise ValueError(f"{m} has no prime factor")
    p = 2
    while p * p <= m:
        if m % p == 0:
            return p
        p += 1
    return m


def lu_zhao_even(r: int, exact: bool = False):
    """1/r + (1 - r^(1-p)) (r-1)^2 / (2 r^p (C(r+p, p-1) + C(r+1, 2))).

    ``p`` is the least prime factor of ``r - 1``. Exact rational with
    ``exact=True``, otherwise a float rounded down.
    """
    if r < 4 or r % 2:
        raise ValueError(f"defined for even r >= 4, got {r}")
    p = least_prime_factor(r - 1)
    excess = (1 - Fraction(1, r ** (p - 1))) * (r - 1) ** 2 / (
        2 * r**p * (math.comb(r + p, p - 1) + math.comb(r + 1, 2)))
    val = Fraction(1, r) + excess
    return val if exact else float_down(val)


def turan_lower(r: int) -> float | None:
    """Parity-appropriate general lower bound on t(r+1, r), if one applies."""
    if r >= 3 and r % 2:
        return chung_lu_odd(r)
    if r >= 4:
        return lu_zhao_even(r)
    return None


def _radicand(s: Fraction, r: int) -> Fraction:
    return r * (r + 1) * (1 - s) * (s - Fraction(1, r))


def _float_noise(r: int) -> Fraction:
    """Half an ulp at 1/r: the most the float 1/r can differ from the true value."""
    return Fraction(math.ulp(1 / r)) / 2


def _check_domain(s: Fraction, r: int) -> Fraction:
    """Read the float nearest 1/r as exactly 1/r; reject anything outside [1/r, 1]."""
    lo = Fraction(1, r)
    if abs(s - lo) <= _float_noise(r):
        return lo
    if s < lo:
        raise ValueError(f"s = {float(s)} below 1/r")
    if s > 1:
        raise ValueError(f"s = {float(s)} above 1")
    return s


def tr_sr_rhs(s_value, r: int) -> float:
    """s + 2 r! sqrt(r(r+1)(1-s)(s-1/r)), rounded up.

    An upper bound on t(r+1, r) in terms of s = s(r+1, r).
    """
    if r < 3:
        raise ValueError("need r >= 3")
    s = Fraction(s_value)
    rad = _radicand(_check_domain(s, r), r)
    if rad <= 0:
        return float(s_value)
    val = _dec(s, _CEIL) + _CEIL.multiply(Decimal(2 * math.factorial(r)), _sqrt(rad, _CEIL))
    return float_up(_CEIL.plus(val))


def _rhs_exact(s: Fraction, r: int) -> Decimal:
    rad = _radicand(s, r)
    if rad <= 0:
        return _dec(s, _FLOOR)
    ctx = Context(prec=PREC)
    return ctx.add(_dec(s, ctx), ctx.multiply(Decimal(2 * math.factorial(r)), ctx.sqrt(_dec(rad, ctx))))


def invert_tr_sr(t_lower, r: int) -> float:
    """Least s >= 1/r with tr_sr_rhs(s, r) >= t_lower, rounded down.

    A lower bound on s(r+1, r) from a lower bound on t(r+1, r). The right-hand
    side increases on [1/r, (1 + 1/r)/2] and already exceeds 1 at the right
    end, so bisection there is valid. The search runs to float resolution,
    well inside :data:`BISECTION_TOL`, and returns the left end.
    """
    if r < 3:
        raise ValueError("need r >= 3")
    t = Fraction(t_lower)
    one_r = Fraction(1, r)
    if t <= one_r or abs(t - one_r) <= _float_noise(r):
        return 1 / r
    if t > 1:
        raise ValueError("t_lower must not exceed 1")
    lo = float_down(one_r)
    hi = float_up(min(t, (1 + one_r) / 2))
    for _ in range(BISECTION_MAX_ITER):
        mid = (lo + hi) / 2
        if not lo < mid < hi:
            break
        if _rhs_exact(max(Fraction(mid), one_r), r) >= _dec(t, _FLOOR):
            hi = mid
        else:
            lo = mid
    assert hi - lo <= BISECTION_TOL
    # a crossing inside the float noise of 1/r is reported as 1/r itself
    return max(lo, 1 / r)


def s_lower_closed(t_lower, r: int) -> float:
    """1/r + (sqrt(t_r + R^2) - R)^2 with t_r = t_lower - 1/r and R = r * r!.

    Weaker than :func:`invert_tr_sr` but in closed form. Evaluated as
    ``(t_r / (R + sqrt(R^2 + t_r)))^2`` to avoid cancellation.
    """
    one_r = Fraction(1, r)
    tr = _check_domain(Fraction(t_lower), r) - one_r
    if tr == 0:
        return float_down(one_r)
    big_r = r * math.factorial(r)
    den = _CEIL.add(Decimal(big_r), _sqrt(big_r * big_r + tr, _CEIL))
    root = _FLOOR.divide(_dec(tr, _FLOOR), den)
    return float_down(_FLOOR.add(_dec(one_r, _FLOOR), _FLOOR.multiply(root, root)))


def round_report(x, down: bool) -> float:
    """Round a float or Fraction to :data:`REPORT_PLACES` decimals in the safe direction."""
    scaled = Fraction(x) * 10**REPORT_PLACES
    q = math.floor(scaled) if down else math.ceil(scaled)
    return float(Fraction(q, 10**REPORT_PLACES))


@dataclass
class BoundReport:
    """Lower and upper bounds on s(r+1, r), plus integer bounds on S(n, r+1, r) when n is given."""

    r: int
    n: int | None = None
    lower_bounds: list[Bound] = field(default_factory=list)
    upper_bounds: list[Bound] = field(default_factory=list)
    size_lower_bounds: list[tuple[str, int]] = field(default_factory=list)

    def best_lower(self) -> Bound:
        return max((b for b in self.lower_bounds if b.unconditional), key=lambda b: b.value)

    def consistent(self) -> bool:
        lows = [b.value for b in self.lower_bounds if b.unconditional]
        ups = [b.value for b in self.upper_bounds if b.unconditional]
        return not lows or not ups or max(lows) <= min(ups)

    def as_dict(self) -> dict:
        def row(b):
            return {"name": b.name, "value": b.value, "unconditional": b.unconditional, "note": b.note}
        return {
            "r": self.r,
            "n": self.n,
            "lower_bounds": [row(b) for b in self.lower_bounds],
            "upper_bounds": [row(b) for b in self.upper_bounds],
            "size_lower_bounds": [{"name": nm, "value": v} for nm, v in self.size_lower_bounds],
        }


def bounds_report(r: int, t_lower=None, n: int | None = None) -> BoundReport:
    if r < 1:
        raise ValueError("need r >= 1")
    rep = BoundReport(r, n)

    def low(name, val, note=""):
        rep.lower_bounds.append(Bound(name, round_report(val, True), True, note))

    def up(name, val, uncond=True, note=""):
        rep.upper_bounds.append(Bound(name, round_report(val, False), uncond, note))

    low("volume 1/(r+1)", Fraction(1, r + 1))
    low("1/r", Fraction(1, r))

    t_candidates = []
    if t_lower is not None:
        t_candidates.append((Fraction(t_lower), "given t(r+1,r) lower bound"))
    elif r == 3:
        t_candidates.append((KNOWN_T43_LOWER, "known t(4,3) lower bound"))
    general = turan_lower(r)
    if general is not None:
        label = "odd-r t(r+1,r) bound" if r % 2 else "even-r t(r+1,r) bound"
        t_candidates.append((Fraction(general), label))
    if r >= 3 and t_candidates:
        t_best, source = max(t_candidates, key=lambda x: x[0])
        if t_best > Fraction(1, r):
            low("t-inversion", invert_tr_sr(t_best, r), f"from {source} {float(t_best):.7f}")
            low("t-closed-form", s_lower_closed(t_best, r), f"from {source} {float(t_best):.7f}")

    up("trivial", 1)
    if r >= 2:
        for b in upper_bounds(r):
            const = next(c for name, c, _, _ in UPPER_CONSTANTS if name == b.name)
            up(b.name, const / (r + 1), b.unconditional, b.note)
    if r == 2:
        up("half-cube 1/2", Fraction(1, 2), True, "s(3,2) <= t(3,2) = 1/2")
    if r == 3:
        up("turan43 4/9", Fraction(4, 9), True, "s(4,3) <= t(4,3) <= 4/9")

    if n is not None:
        rep.size_lower_bounds.append(("volume", volume_lower(n, r)))
        rep.size_lower_bounds.append(("n^r / r", size_lower_1r(n, r)))
        best = Fraction(rep.best_lower().value)
        rep.size_lower_bounds.append(("n^r * best density", math.ceil(n**r * best)))
    return rep


def bounds_table(r_list: Iterable[int], known_t_lowers: Mapping[int, float] | None = None,
                 n: int | None = None) -> list[BoundReport]:
    known_t_lowers = known_t_lowers or {}
    return [bounds_report(r, known_t_lowers.get(r), n) for r in r_list]
