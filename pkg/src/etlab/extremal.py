"""Explicit extremal constructions: the admissibility curve and its families.

The central object is the principal-value integral

    phi(L, R) = pv int_L^R sqrt((R^2-x^2)(x^2-L^2)) / (x^2 - 1) dx,

whose zero set defines the curve L(R) pairing the two support radii of the
kind-III line distributions; phi(0, .) has the closed form
sqrt(R^2-1) log(R + sqrt(R^2-1)) - R whose unique root R_c ~ 1.8102 separates
kind II (R >= R_c) from kind III (1 < R < R_c).  The potential of the
distribution at the origin equals pi * phi(L, R).

Also here: the circle families rho_type1/rho_type2, periodization of line
distributions onto the circle, and the 20-row reference grid of (R, H, D)
values used by the acceptance suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AtDirac, DomainError, LambdaTooLarge
from .kernels import TIGHT_SPEC, QuadratureSpec
from .measures import (
    AdmissibleDistR,
    MixedMeasureT,
    PeriodizedDensity,
    TypeITDensity,
    TypeIITDensity,
    admissible_density_line,
    d_tilde,
    h_tilde,
)

__all__ = [
    "phi",
    "r_critical",
    "l_of_r",
    "make_admissible",
    "density_R",
    "rho_type1",
    "rho_type2",
    "periodize",
    "Table1Row",
    "table1",
    "table1_csv",
    "TABLE1_R_GRID",
]


def phi(L: float, R: float, spec: QuadratureSpec = TIGHT_SPEC) -> float:
    """pv int_L^R sqrt((R^2-x^2)(x^2-L^2))/(x^2-1) dx, pole at 1, 0 <= L < 1 < R.

    Strictly increasing in both arguments; vanishes exactly on the
    admissibility curve.  The generated potential at the origin is pi times
    this value.
    """
    if not (0.0 <= L < 1.0 < R):
        raise DomainError(f"need 0 <= L < 1 < R, got L={L}, R={R}")

    def integrand(x):
        x = np.asarray(x, dtype=float)
        return np.sqrt(np.maximum((R * R - x * x) * (x * x - L * L), 0.0)) \
            / (x * x - 1.0)

    return kernels.pv_sqrt_composite(integrand, L, R, 1.0, spec)


def _phi0_closed(R: float) -> float:
    """Closed form of phi(0, R): sqrt(R^2-1) log(R + sqrt(R^2-1)) - R."""
    s = math.sqrt(R * R - 1.0)
    return s * math.log(R + s) - R


_R_CRITICAL_CACHE: float | None = None


def r_critical() -> float:
    """The unique root of sqrt(R^2-1) log(R + sqrt(R^2-1)) - R in (1, 3).

    Computed once by bisection on the closed form to 1e-12 and cached; the
    principal-value route phi(0, r_critical()) ~ 0 is a consistency test,
    not the source of truth.
    """
    global _R_CRITICAL_CACHE
    if _R_CRITICAL_CACHE is not None:
        return _R_CRITICAL_CACHE
    lo, hi = 1.0 + 1e-9, 3.0
    flo = _phi0_closed(lo)
    assert flo < 0.0 < _phi0_closed(hi)
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if _phi0_closed(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    _R_CRITICAL_CACHE = 0.5 * (lo + hi)
    return _R_CRITICAL_CACHE


def l_of_r(R: float, tol: float = 1e-9, spec: QuadratureSpec = TIGHT_SPEC) -> float:
    """The unique L in (0, 1) with phi(L, R) = 0, for 1 < R < r_critical().

    Bisection is valid because phi is strictly increasing in L; phi(0+, R) < 0
    below the critical radius and phi(L, R) -> positive as L -> 1.
    """
    rc = r_critical()
    if not (1.0 < R < rc):
        raise DomainError(f"need 1 < R < {rc:.6f}, got R={R}")
    lo, hi = 1e-6, 1.0 - 1e-6
    flo = phi(lo, R, spec)
    fhi = phi(hi, R, spec)
    if not (flo < 0.0 < fhi):
        raise DomainError(f"admissibility bracket failed at R={R}: [{flo}, {fhi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if phi(mid, R, spec) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def make_admissible(R: float | None, lam: float = 1.0,
                    spec: QuadratureSpec = TIGHT_SPEC) -> AdmissibleDistR:
    """Build the admissible distribution selected by R (None picks kind I).

    R >= r_critical() gives kind II; 1 < R < r_critical() gives kind III with
    L solved from the admissibility curve.
    """
    if R is None:
        return AdmissibleDistR("I", lam)
    if R <= 1.0:
        raise DomainError(f"need R > 1, got {R}")
    rc = r_critical()
    if R >= rc:
        return AdmissibleDistR("II", lam, R)
    return AdmissibleDistR("III", lam, R, l_of_r(R, spec=spec))


def density_R(mu: AdmissibleDistR, x: float) -> float:
    """Pointwise scaled line density (background included); raises at Diracs."""
    for pos, _ in mu.dirac_positions_masses():
        if abs(x - pos) <= 1e-15 * max(1.0, abs(pos)):
            raise AtDirac(f"x = {x} is a Dirac location")
    return float(admissible_density_line(mu, np.array([x]))[0])


def rho_type1(m: float, check_mass: bool = True) -> MixedMeasureT:
    """Circle probability measure: Dirac 2m at the origin plus the arc density
    sqrt(1 - 4m^2/sin^2(pi x)) outside the central gap.  0 < m <= 1/2."""
    if not (0.0 < m <= 0.5):
        raise DomainError(f"need 0 < m <= 1/2, got m={m}")
    density = None if m >= 0.5 else TypeITDensity(m)
    rho = MixedMeasureT(diracs=((0.0, 2.0 * m),), density=density, even=True)
    if check_mass and density is not None:
        total = rho.mass()
        if abs(total - 1.0) > 1e-8:
            raise DomainError(f"unit-mass check failed: total = {total}")
    return rho


def rho_type2(M: float, R: float, L: float, check_mass: bool = True) -> MixedMeasureT:
    """Circle probability measure with Diracs at +-M and the two-arc density
    supported on |x| in [0, L] u [R, 1/2].  Requires 0 <= L < M < R < 1/2."""
    density = TypeIITDensity(M, R, L)  # validates the ordering
    m = density.dirac_mass()
    rho = MixedMeasureT(diracs=((-M, m), (M, m)), density=density, even=True)
    if check_mass:
        total = rho.mass()
        if abs(total - 1.0) > 1e-6:
            raise DomainError(f"unit-mass check failed: total = {total}")
    return rho


def periodize(mu: AdmissibleDistR, lattice_terms: int = 400,
              scan_n: int = 4096) -> MixedMeasureT:
    """Wrap an admissible line distribution onto the circle.

    The result is 1 + (lattice sum of the scaled density) plus the wrapped
    Dirac masses: lam * delta_0 for kind I, lam*m at +-lam otherwise.  The
    scaling factor must satisfy lam <= 1 (kind I) or lam <= 1/2 with
    lam*m < 1/2 (kinds II/III).  The sign-change radii of the wrapped density
    (where it crosses 0 inside and outside the Dirac window) are reported in
    ``meta`` as ``l_ring`` and ``r_ring``.
    """
    if mu.kind == "I":
        if mu.lam > 1.0:
            raise LambdaTooLarge(f"kind I needs lam <= 1, got {mu.lam}")
    else:
        if mu.lam > 0.5 or mu.lam * mu.m >= 0.5:
            raise LambdaTooLarge(
                f"kinds II/III need lam <= 1/2 and lam*m < 1/2, got lam={mu.lam}, "
                f"lam*m={mu.lam * mu.m}")
    density = PeriodizedDensity(mu, lattice_terms=lattice_terms)
    diracs = tuple((pos, mass) for pos, mass in mu.dirac_positions_masses())
    meta = {}
    if mu.kind in ("II", "III"):
        meta["l_ring"], meta["r_ring"] = _sign_change_radii(density, mu, scan_n)
    return MixedMeasureT(diracs=diracs, density=density, even=True, meta=meta)


def _sign_change_radii(density: PeriodizedDensity, mu: AdmissibleDistR,
                       scan_n: int) -> tuple[float | None, float | None]:
    """Radii of {wrapped density >= 0} inside (-lam, lam) and (lam, 1-lam)."""
    lam, R, L = mu.lam, mu.R, mu.L or 0.0
    l_ring = None
    if L > 0.0:
        if density.evaluate(np.array([0.0]))[0] >= 0.0:
            lo, hi = 0.0, lam * L
            if density.evaluate(np.array([hi - 1e-12]))[0] < 0.0:
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    if density.evaluate(np.array([mid]))[0] >= 0.0:
                        lo = mid
                    else:
                        hi = mid
            l_ring = 0.5 * (lo + hi)
    r_ring = None
    if lam * R < 0.5 and density.evaluate(np.array([0.5]))[0] >= 0.0:
        lo, hi = lam * R, 0.5
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if density.evaluate(np.array([mid]))[0] >= 0.0:
                hi = mid
            else:
                lo = mid
        r_ring = 0.5 * (lo + hi)
    return l_ring, r_ring


# Printed R grid of the reference table; inputs are data, the spacing rule is
# not derived.  The last entry is the critical radius to the printed digits.
TABLE1_R_GRID = (
    1.1000, 1.1292, 1.1592, 1.1900, 1.2216, 1.2541, 1.2874, 1.3216, 1.3567,
    1.3927, 1.4297, 1.4677, 1.5067, 1.5467, 1.5878, 1.6300, 1.6733, 1.7177,
    1.7633, 1.8102,
)


@dataclass(frozen=True)
class Table1Row:
    k: int
    R: float
    H: float
    D: float
    ratio: float | None  # H_k / D_{k+1}^2; None on the last row


def table1(spec: QuadratureSpec = TIGHT_SPEC) -> list[Table1Row]:
    """The 20-row verification grid: (R_k, H_k, D_k) and the staggered ratios
    H_k / D_{k+1}^2, all computed from the kind-III family (the last row sits
    at the critical radius, where the curve parameter L reaches 0)."""
    rc = r_critical()
    rows_hd = []
    for k, R in enumerate(TABLE1_R_GRID):
        if R >= rc:
            mu = AdmissibleDistR("II", 1.0, R)
        else:
            mu = make_admissible(R, 1.0, spec)
        rows_hd.append((k, R, h_tilde(mu, spec), d_tilde(mu, spec)))
    rows = []
    for k, R, H, D in rows_hd:
        ratio = None
        if k + 1 < len(rows_hd):
            ratio = H / rows_hd[k + 1][3] ** 2
        rows.append(Table1Row(k, R, H, D, ratio))
    return rows


def table1_csv(rows: list[Table1Row] | None = None, precision: int = 6) -> str:
    """CSV rendering with header k,R,H,D,ratio; '.' decimal, fixed digits."""
    rows = table1() if rows is None else rows
    out = ["k,R,H,D,ratio"]
    for r in rows:
        ratio = "" if r.ratio is None else f"{r.ratio:.{precision}g}"
        out.append(f"{r.k},{r.R:.{precision}g},{r.H:.{precision}g},"
                   f"{r.D:.{precision}g},{ratio}")
    return "\n".join(out) + "\n"
