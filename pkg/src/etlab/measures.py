"""Measures on the circle and the line, and their discrepancy/height functionals.

Circle measures come in two flavors: ``EmpiricalMeasure`` (weighted atoms,
the root-angle distributions of polynomials) and ``MixedMeasureT`` (closed
form density families plus Dirac masses).  Line-side signed distributions are
``AdmissibleDistR`` (the one-parameter extremal families with a scaling
factor).  Angles are reals mod 1, canonicalized to [-1/2, 1/2).

The functionals:

* ``discrepancy_*``   sup over closed arcs of (mass in arc - arc length)
* ``height_T``        -min of the log-kernel potential W * rho
* ``g_ratio``         height / discrepancy**alpha
* ``h_tilde/d_tilde/g_tilde``   the line-side analogues on AdmissibleDistR
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import polygamma

from . import kernels
from .errors import (
    DomainError,
    EmptyMeasure,
    NotEven,
    ZeroDiscrepancy,
)
from .kernels import DEFAULT_SPEC, TIGHT_SPEC, QuadratureSpec, kernel_T

__all__ = [
    "Angle",
    "canonical_angle",
    "IntervalT",
    "EmpiricalMeasure",
    "MixedMeasureT",
    "AdmissibleDistR",
    "TypeITDensity",
    "TypeIITDensity",
    "PeriodizedDensity",
    "GridBackedDensity",
    "UniformPlusDensity",
    "discrepancy_empirical",
    "discrepancy_empirical_bruteforce",
    "discrepancy_mixed",
    "height_T",
    "g_ratio",
    "h_tilde",
    "d_tilde",
    "g_tilde",
    "h_tilde_quadrature",
    "d_tilde_quadrature",
    "admissible_density_line",
    "measure_to_json",
    "measure_from_json",
]

Angle = float  # a point of R/Z, stored canonically in [-1/2, 1/2)


def canonical_angle(x: float) -> float:
    """Reduce mod 1 to the representative in [-1/2, 1/2).  Idempotent."""
    y = (float(x) + 0.5) % 1.0 - 0.5
    return 0.0 if y == 0.0 else y  # normalize -0.0


def _canonical_array(x: np.ndarray) -> np.ndarray:
    return (np.asarray(x, dtype=float) + 0.5) % 1.0 - 0.5


@dataclass(frozen=True)
class IntervalT:
    """Closed arc [start, start + length] on the circle, length in [0, 1)."""

    start: Angle
    length: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", canonical_angle(self.start))
        if not (0.0 <= self.length < 1.0):
            raise DomainError(f"arc length must lie in [0, 1), got {self.length}")

    @property
    def end(self) -> Angle:
        return canonical_angle(self.start + self.length)


# ---------------------------------------------------------------------------
# Empirical measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EmpiricalMeasure:
    """Weighted Dirac atoms on the circle, sorted by angle, duplicates merged."""

    angles: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_pairs(cls, pairs) -> "EmpiricalMeasure":
        if len(pairs) == 0:
            return cls(np.empty(0), np.empty(0))
        ang = _canonical_array(np.array([p[0] for p in pairs], dtype=float))
        wts = np.array([p[1] for p in pairs], dtype=float)
        return cls(ang, wts)

    def __post_init__(self) -> None:
        ang = _canonical_array(self.angles)
        wts = np.asarray(self.weights, dtype=float)
        if ang.shape != wts.shape or ang.ndim != 1:
            raise ValueError("angles and weights must be 1-d arrays of equal length")
        if np.any(wts <= 0.0):
            raise DomainError("atom weights must be strictly positive")
        order = np.argsort(ang, kind="stable")
        ang, wts = ang[order], wts[order]
        if ang.size:
            # merge exactly coincident atoms
            keep = np.empty(ang.size, dtype=bool)
            keep[0] = True
            keep[1:] = ang[1:] != ang[:-1]
            idx = np.cumsum(keep) - 1
            merged_w = np.zeros(int(idx[-1]) + 1)
            np.add.at(merged_w, idx, wts)
            ang, wts = ang[keep], merged_w
        object.__setattr__(self, "angles", ang)
        object.__setattr__(self, "weights", wts)

    @property
    def total(self) -> float:
        return float(math.fsum(self.weights.tolist()))

    @property
    def n_atoms(self) -> int:
        return int(self.angles.size)

    def is_probability(self, tol: float = 1e-12) -> bool:
        return abs(self.total - 1.0) <= tol

    def rotated(self, phi: float) -> "EmpiricalMeasure":
        return EmpiricalMeasure(_canonical_array(self.angles + phi), self.weights.copy())

    def potential(self, x) -> np.ndarray | float:
        """(W * rho)(x) as an exact kernel sum; +inf at the atoms."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(xs)
        # chunk the outer product to bound memory on large atom sets
        block = max(1, int(4e6 // max(self.n_atoms, 1)))
        for i in range(0, xs.size, block):
            diff = xs[i:i + block, None] - self.angles[None, :]
            out[i:i + block] = kernel_T(diff) @ self.weights
        return float(out[0]) if np.isscalar(x) or np.asarray(x).ndim == 0 else out


def _check_probability(rho: EmpiricalMeasure) -> None:
    if rho.n_atoms == 0:
        raise EmptyMeasure("measure has no atoms")
    if not rho.is_probability(1e-9):
        raise DomainError(f"expected a probability measure, total mass = {rho.total}")


def discrepancy_empirical(rho: EmpiricalMeasure) -> tuple[float, IntervalT]:
    """Exact sup over closed arcs of (mass - length), with a maximizing arc.

    Optimal arcs have both endpoints at atoms (shrinking an endpoint onto the
    nearest atom keeps the mass and reduces the length), so with prefix sums
    A_j = W_j - theta_j and B_i = W_{i-1} - theta_i every closed atom-to-atom
    arc value is A_j - B_i, and the sup is max A - min B.  O(n log n) overall.
    """
    _check_probability(rho)
    theta = rho.angles
    w = rho.weights
    prefix = np.cumsum(w)
    a_vals = prefix - theta
    b_vals = np.concatenate(([0.0], prefix[:-1])) - theta
    j = int(np.argmax(a_vals))
    i = int(np.argmin(b_vals))
    value = float(a_vals[j] - b_vals[i])
    length = (theta[j] - theta[i]) % 1.0 if i != j else 0.0
    return value, IntervalT(theta[i], length)


def discrepancy_empirical_bruteforce(rho: EmpiricalMeasure) -> float:
    """O(n^2) sweep over all closed atom-to-atom arcs; the testing oracle."""
    _check_probability(rho)
    theta = rho.angles
    w = rho.weights
    prefix = np.cumsum(w)
    total = float(prefix[-1])
    n = theta.size
    best = -np.inf
    for i in range(n):
        before_i = prefix[i] - w[i]
        mass = prefix - before_i
        mass[:i] = total - (before_i - prefix[:i])  # arcs wrapping past the seam
        length = (theta - theta[i]) % 1.0
        best = max(best, float(np.max(mass - length)))
    return best


# ---------------------------------------------------------------------------
# Density families on the circle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeITDensity:
    """sqrt(1 - 4 m^2 / sin^2(pi x)) outside the central gap |x| < asin(2m)/pi."""

    m: float

    def __post_init__(self) -> None:
        if not (0.0 < self.m <= 0.5):
            raise DomainError(f"need 0 < m <= 1/2, got {self.m}")

    @property
    def gap(self) -> float:
        return math.asin(2.0 * self.m) / math.pi

    @property
    def even(self) -> bool:
        return True

    def evaluate(self, x) -> np.ndarray:
        xs = _canonical_array(x)
        s2 = np.sin(np.pi * xs) ** 2
        out = np.zeros_like(xs)
        mask = np.abs(xs) >= self.gap
        out[mask] = np.sqrt(np.maximum(1.0 - 4.0 * self.m**2 / s2[mask], 0.0))
        return out

    def pieces(self) -> list[tuple[float, float]]:
        if self.m >= 0.5:
            return []
        return [(self.gap, 1.0 - self.gap)]


@dataclass(frozen=True)
class TypeIITDensity:
    """Two-arc density with Dirac positions at +-M; support |x| in [0,L] u [R,1/2]."""

    M: float
    R: float
    L: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.L < self.M < self.R < 0.5):
            raise DomainError(
                f"need 0 <= L < M < R < 1/2, got L={self.L}, M={self.M}, R={self.R}")

    @property
    def even(self) -> bool:
        return True

    def dirac_mass(self) -> float:
        M, R, L = self.M, self.R, self.L
        prod = (-math.sin(math.pi * (M - R)) * math.sin(math.pi * (M + R))
                * math.sin(math.pi * (M - L)) * math.sin(math.pi * (M + L)))
        return math.sqrt(prod) / math.sin(2.0 * math.pi * M)

    def evaluate(self, x) -> np.ndarray:
        xs = _canonical_array(x)
        M, R, L = self.M, self.R, self.L
        num = (np.sin(np.pi * (xs - R)) * np.sin(np.pi * (xs + R))
               * np.sin(np.pi * (xs - L)) * np.sin(np.pi * (xs + L)))
        den = np.abs(np.sin(np.pi * (xs - M)) * np.sin(np.pi * (xs + M)))
        out = np.zeros_like(xs)
        mask = (np.abs(xs) <= L) | (np.abs(xs) >= R)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.sqrt(np.maximum(num, 0.0)) / den
        out[mask] = vals[mask]
        return out

    def pieces(self) -> list[tuple[float, float]]:
        out = []
        if self.L > 0.0:
            out.append((-self.L, self.L))
        out.append((self.R, 1.0 - self.R))
        return out


@dataclass(frozen=True)
class GridBackedDensity:
    """Piecewise-constant cell-averaged density; cell k covers [k/n, (k+1)/n)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    @property
    def n_cells(self) -> int:
        return int(self.values.size)

    @property
    def even(self) -> bool:
        v = self.values
        return bool(np.allclose(v, np.roll(v[::-1], 1), atol=1e-12))

    def evaluate(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=float) % 1.0
        idx = np.minimum((xs * self.n_cells).astype(int), self.n_cells - 1)
        return self.values[idx]

    def pieces(self) -> list[tuple[float, float]]:
        n = self.n_cells
        return [(k / n, (k + 1) / n) for k in range(n)]


@dataclass(frozen=True)
class UniformPlusDensity:
    """1 + sum_k a_k cos(2 pi k x) + b_k sin(2 pi k x)."""

    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray | None = None

    def __post_init__(self) -> None:
        c = np.asarray(self.cos_coeffs, dtype=float)
        s = (np.zeros_like(c) if self.sin_coeffs is None
             else np.asarray(self.sin_coeffs, dtype=float))
        if c.shape != s.shape:
            raise ValueError("cos and sin coefficient arrays must have equal length")
        object.__setattr__(self, "cos_coeffs", c)
        object.__setattr__(self, "sin_coeffs", s)

    @property
    def even(self) -> bool:
        return bool(np.all(self.sin_coeffs == 0.0))

    def evaluate(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        k = np.arange(1, self.cos_coeffs.size + 1)
        phase = 2.0 * np.pi * np.multiply.outer(xs, k)
        return 1.0 + np.cos(phase) @ self.cos_coeffs + np.sin(phase) @ self.sin_coeffs

    def potential_exact(self, x) -> np.ndarray:
        """Closed-form W * rho using the cosine expansion of the kernel."""
        xs = np.asarray(x, dtype=float)
        k = np.arange(1, self.cos_coeffs.size + 1)
        phase = 2.0 * np.pi * np.multiply.outer(xs, k)
        return np.cos(phase) @ (self.cos_coeffs / (2.0 * k)) \
            + np.sin(phase) @ (self.sin_coeffs / (2.0 * k))

    def pieces(self) -> list[tuple[float, float]]:
        return [(-0.5, 0.5)]


# ---------------------------------------------------------------------------
# Admissible distributions on the line
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibleDistR:
    """Signed extremal distribution on the line with scaling factor lam.

    kind "I":   -1 + sqrt(x^2 - pi^-2)/|x| outside |x| < 1/pi, unit Dirac at 0
    kind "II":  -1 + |x| sqrt(x^2-R^2)/|x^2-1| outside |x| < R, mass m at +-1
    kind "III": -1 + sqrt((x^2-R^2)(x^2-L^2))/|x^2-1| on |x| in [0,L] u [R,oo),
                mass m at +-1
    All are even, mean zero, and O(1/x^2) at infinity; the unscaled potential
    -log|.| * mu vanishes identically outside the support ring.
    """

    kind: str
    lam: float = 1.0
    R: float | None = None
    L: float | None = None
    m: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("I", "II", "III"):
            raise DomainError(f"kind must be 'I', 'II' or 'III', got {self.kind!r}")
        if not self.lam > 0.0:
            raise DomainError("scaling factor must be positive")
        if self.kind == "I":
            if self.R is not None or self.L is not None:
                raise DomainError("kind I takes no R or L")
            object.__setattr__(self, "m", 1.0)
            return
        if self.R is None or self.R <= 1.0:
            raise DomainError("kinds II/III require R > 1")
        L = 0.0 if self.kind == "II" else self.L
        if self.kind == "III" and (L is None or not (0.0 < L < 1.0)):
            raise DomainError("kind III requires 0 < L < 1")
        object.__setattr__(self, "L", L)
        m = math.pi * math.sqrt((self.R**2 - 1.0) * (1.0 - L**2)) / 2.0
        if self.m is not None and abs(self.m - m) > 1e-9 * max(1.0, m):
            raise DomainError("Dirac mass inconsistent with (R, L)")
        object.__setattr__(self, "m", m)

    def with_lam(self, lam: float) -> "AdmissibleDistR":
        return AdmissibleDistR(self.kind, lam, self.R, self.L)

    def dirac_positions_masses(self) -> list[tuple[float, float]]:
        """Scaled Dirac atoms: (position, mass)."""
        if self.kind == "I":
            return [(0.0, self.lam)]
        return [(-self.lam, self.lam * self.m), (self.lam, self.lam * self.m)]

    def support_edges(self) -> list[float]:
        """Positive radii where the scaled density has sqrt-type kinks."""
        if self.kind == "I":
            return [self.lam / math.pi]
        if self.kind == "II":
            return [self.lam * self.R]
        return [self.lam * self.L, self.lam * self.R]

    def tail_coefficients(self) -> tuple[float, float]:
        """(c, d) with unscaled density(u) = c/u^2 + d/u^4 + O(u^-6) at infinity."""
        if self.kind == "I":
            p2 = math.pi**-2
            return -p2 / 2.0, -p2**2 / 8.0
        a, b = self.R**2, (self.L or 0.0) ** 2
        c = 1.0 - (a + b) / 2.0
        d = 1.0 - (a + b) / 2.0 + a * b / 4.0 - (a * a + b * b) / 8.0
        return c, d


def admissible_density_line(mu: AdmissibleDistR, t) -> np.ndarray:
    """Pointwise scaled density (background -1 included, Diracs excluded).

    Vectorized and silent about Dirac locations; the scalar, raising variant
    is ``extremal.density_R``.
    """
    u = np.asarray(t, dtype=float) / mu.lam
    au = np.abs(u)
    out = np.full_like(u, -1.0)
    if mu.kind == "I":
        mask = au >= 1.0 / math.pi
        with np.errstate(invalid="ignore", divide="ignore"):
            vals = np.sqrt(np.maximum(u * u - math.pi**-2, 0.0)) / au
        out[mask] += vals[mask]
        return out
    R, L = mu.R, mu.L
    mask = (au >= R) if mu.kind == "II" else ((au >= R) | (au <= L))
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.sqrt(np.maximum((u * u - R * R) * (u * u - L * L), 0.0)) \
            / np.abs(u * u - 1.0)
    out[mask] += vals[mask]
    return out


# ---------------------------------------------------------------------------
# Periodization density (lattice sum with analytic tail)
# ---------------------------------------------------------------------------


def _cheb_nodes(n: int) -> np.ndarray:
    return np.cos(np.pi * (2.0 * np.arange(n) + 1.0) / (2.0 * n))


def _cheb_fit(values: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients from values at first-kind nodes."""
    n = values.size
    j = np.arange(n)
    k = np.arange(n)
    basis = np.cos(np.pi * np.outer(k, 2.0 * j + 1.0) / (2.0 * n))
    coeffs = (2.0 / n) * basis @ values
    coeffs[0] /= 2.0
    return coeffs


class PeriodizedDensity:
    """1 + sum_j mu(x - j) for an admissible line distribution (Diracs excluded).

    The lattice sum is truncated at ``lattice_terms`` translates with the tail
    restored from the 1/x^2 + 1/x^4 asymptotics via polygamma sums, then
    compressed into per-arc Chebyshev interpolants under the sin^2 change of
    variable that absorbs the sqrt kinks at the support edges.
    """

    def __init__(self, mu: AdmissibleDistR, lattice_terms: int = 400,
                 cheb_nodes: int = 200):
        self.mu = mu
        self.lattice_terms = int(lattice_terms)
        kinks = sorted({canonical_angle(s * e) for e in mu.support_edges() for s in (1, -1)})
        self._kinks = kinks
        arcs = []
        for i, lo in enumerate(kinks):
            hi = kinks[i + 1] if i + 1 < len(kinks) else kinks[0] + 1.0
            if hi - lo > 1e-13:
                arcs.append((lo, hi))
        self._arcs = arcs
        self._coeffs = []
        for lo, hi in arcs:
            phi = (np.pi / 4.0) * (_cheb_nodes(cheb_nodes) + 1.0)
            x = lo + (hi - lo) * np.sin(phi) ** 2
            self._coeffs.append(_cheb_fit(self.evaluate_direct(x)))

    @property
    def even(self) -> bool:
        return True

    def evaluate_direct(self, x) -> np.ndarray:
        """Truncated lattice sum plus polygamma tail (no interpolation)."""
        xs = np.atleast_1d(_canonical_array(x))
        J = self.lattice_terms
        shifts = np.arange(-J, J + 1)
        total = np.ones_like(xs)
        block = max(1, int(2e6 // (2 * J + 1)))
        for i in range(0, xs.size, block):
            pts = xs[i:i + block, None] - shifts[None, :]
            total[i:i + block] += admissible_density_line(self.mu, pts).sum(axis=1)
        c, d = self.mu.tail_coefficients()
        lam = self.mu.lam
        zp, zm = J + 1.0 + xs, J + 1.0 - xs
        tail = c * lam**2 * (polygamma(1, zp) + polygamma(1, zm))
        tail += d * lam**4 * (polygamma(3, zp) + polygamma(3, zm)) / 6.0
        return total + tail

    def evaluate(self, x) -> np.ndarray:
        xs = np.atleast_1d(_canonical_array(x))
        base = self._arcs[0][0]
        rel = (xs - base) % 1.0 + base
        out = np.empty_like(rel)
        for (lo, hi), coeffs in zip(self._arcs, self._coeffs):
            mask = (rel >= lo) & (rel <= hi)
            if not mask.any():
                continue
            ratio = np.clip((rel[mask] - lo) / (hi - lo), 0.0, 1.0)
            phi = np.arcsin(np.sqrt(ratio))
            u = 4.0 * phi / np.pi - 1.0
            out[mask] = np.polynomial.chebyshev.chebval(u, coeffs)
        return out

    def pieces(self) -> list[tuple[float, float]]:
        return list(self._arcs)


# ---------------------------------------------------------------------------
# Mixed measures on the circle
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MixedMeasureT:
    """Dirac masses plus a closed-form density family on the circle."""

    diracs: tuple[tuple[Angle, float], ...]
    density: object | None
    even: bool = True
    total: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = tuple((canonical_angle(a), float(m)) for a, m in self.diracs)
        if any(m <= 0.0 for _, m in clean):
            raise DomainError("Dirac masses must be strictly positive")
        object.__setattr__(self, "diracs", tuple(sorted(clean)))

    @property
    def dirac_total(self) -> float:
        return float(math.fsum(m for _, m in self.diracs))

    def density_eval(self, x) -> np.ndarray:
        if self.density is None:
            return np.zeros_like(np.asarray(x, dtype=float))
        return self.density.evaluate(x)

    def density_mass(self, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
        if self.density is None:
            return 0.0
        vals = [kernels.integrate_piece(self.density.evaluate, lo, hi, spec,
                                        grade_ends=True)
                for lo, hi in self.density.pieces()]
        return math.fsum(vals)

    def mass(self, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
        return self.dirac_total + self.density_mass(spec)

    def potential(self, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
        """(W * rho)(x); +inf exactly at a Dirac."""
        x = float(x)
        acc = [m * kernel_T(x - a) for a, m in self.diracs]
        if self.density is not None:
            if isinstance(self.density, GridBackedDensity):
                acc.append(_potential_grid_density(self.density, x))
            else:
                dens = self.density.evaluate
                for lo, hi in self.density.pieces():
                    acc.append(_potential_piece(dens, lo, hi, x, spec))
        return math.fsum(acc)


def _potential_piece(dens, lo: float, hi: float, x: float,
                     spec: QuadratureSpec) -> float:
    """Integral of dens(y) * W(x - y) over one arc, splitting at y = x mod 1."""
    def integrand(y):
        return dens(y) * kernel_T(x - np.asarray(y, dtype=float))

    if hi - lo >= 1.0 - 1e-12:
        return kernels.integrate_piece(integrand, x - 0.5, x + 0.5, spec,
                                       log_at=x, grade_ends=False)
    mid = 0.5 * (lo + hi)
    rep = mid + canonical_angle(x - mid)
    log_at = rep if lo <= rep <= hi else None
    return kernels.integrate_piece(integrand, lo, hi, spec, log_at=log_at,
                                   grade_ends=True)


def _potential_grid_density(grid: GridBackedDensity, x: float) -> float:
    """Potential of a piecewise-constant density: per-cell Gauss-Legendre.

    The cell containing x gets the graded log treatment; all other cells are
    smooth and take a single 32-node panel.
    """
    n = grid.n_cells
    nodes, weights = kernels._gl_rule(32)
    k = np.arange(n)
    lo = k / n
    xs = lo[:, None] + nodes[None, :] / n
    vals = kernel_T(x - xs) @ weights / n
    own = int(np.floor((x % 1.0) * n)) % n
    vals[own] = 0.0
    base = float(grid.values @ vals)
    cell_lo = own / n

    def integrand(y):
        return kernel_T(x - np.asarray(y, dtype=float))

    rep = cell_lo + ((x - cell_lo) % 1.0)
    own_val = grid.values[own] * kernels.integrate_piece(
        integrand, cell_lo, cell_lo + 1.0 / n, DEFAULT_SPEC,
        log_at=rep, grade_ends=False)
    return base + own_val


# ---------------------------------------------------------------------------
# Discrepancy and height for mixed measures
# ---------------------------------------------------------------------------


def _even_window_value(rho: MixedMeasureT, a: float, cum: float) -> float:
    """F(a) = mass of closed [-a, a] minus its length, given the density cumulative."""
    dmass = math.fsum(m for pos, m in rho.diracs if abs(pos) <= a + 1e-15)
    return dmass + cum - 2.0 * a


def discrepancy_mixed(rho: MixedMeasureT, grid: int = 2048,
                      spec: QuadratureSpec | None = None) -> tuple[float, IntervalT]:
    """Sup of (mass - length) over closed arcs for an even mixed measure.

    Even measures admit a symmetric maximizing arc [-a, a], so the scan is
    one-dimensional in the half-width a; the grid is refined by bisecting
    F'(a) = rho(a) + rho(-a) - 2 between candidates.  Grid-backed densities
    take the generic two-endpoint prefix scan instead.
    """
    if isinstance(rho.density, GridBackedDensity):
        return _discrepancy_grid(rho)  # generic scan, no parity needed
    if not rho.even:
        raise NotEven("discrepancy_mixed requires the even-parity flag")
    spec = spec or QuadratureSpec(panels=4, nodes_per_panel=16, abs_tol=1e-10,
                                  max_refinements=40)
    if isinstance(rho.density, TypeITDensity):
        m = rho.density.m
        return 2.0 * m, IntervalT(0.0, 0.0)

    # candidate half-widths: piece edges, dirac radii, uniform fill
    radii = {0.0, 0.5}
    for pos, _ in rho.diracs:
        radii.add(abs(pos))
    if rho.density is not None:
        for lo, hi in rho.density.pieces():
            for e in (lo, hi):
                radii.add(min(abs(e), abs(1.0 - abs(e))))
    radii.update(np.linspace(0.0, 0.5, grid // 2 + 1).tolist())
    avals = np.array(sorted(r for r in radii if 0.0 <= r <= 0.5))

    dens = rho.density_eval

    def ring(y):
        y = np.asarray(y, dtype=float)
        return dens(y) + dens(-y)

    # cumulative of the density over [-a, a], accumulated segment by segment
    cums = np.zeros_like(avals)
    nodes, weights = kernels._gl_rule(16)
    seg_lo = avals[:-1]
    seg_hi = avals[1:]
    xs = seg_lo[:, None] + (seg_hi - seg_lo)[:, None] * nodes[None, :]
    seg_vals = (ring(xs.ravel()).reshape(xs.shape) @ weights) * (seg_hi - seg_lo)
    cums[1:] = np.cumsum(seg_vals)

    best = int(np.argmax([_even_window_value(rho, a, c) for a, c in zip(avals, cums)]))
    best_a, best_f = avals[best], _even_window_value(rho, avals[best], cums[best])

    # refine inside the neighboring segments: F'(a) = ring(a) - 2
    for k in (best - 1, best):
        if k < 0 or k + 1 >= avals.size:
            continue
        lo, hi = avals[k], avals[k + 1]
        flo, fhi = ring(np.array([lo + 1e-13]))[0] - 2.0, ring(np.array([hi - 1e-13]))[0] - 2.0
        if flo > 0.0 > fhi and hi - lo > 1e-13:
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if ring(np.array([mid]))[0] - 2.0 > 0.0:
                    lo = mid
                else:
                    hi = mid
            a_star = 0.5 * (lo + hi)
            extra = kernels.integrate_piece(ring, avals[k], a_star, spec,
                                            grade_ends=True) if a_star > avals[k] else 0.0
            f_star = _even_window_value(rho, a_star, cums[k] + extra)
            if f_star > best_f:
                best_a, best_f = a_star, f_star
    return best_f, IntervalT(-best_a, min(2.0 * best_a, 1.0 - 1e-15))


def _discrepancy_grid(rho: MixedMeasureT) -> tuple[float, IntervalT]:
    """Generic closed-arc scan for piecewise-constant densities.

    Candidate endpoints are the cell boundaries and Dirac positions; with
    cumulative mass A_j/B_i bookkeeping the scan is linear, mirroring the
    empirical fast path.
    """
    grid = rho.density
    n = grid.n_cells
    bounds = np.arange(n + 1) / n
    masses = np.concatenate(([0.0], np.cumsum(grid.values / n)))

    def cum_mass(t: float, include_diracs_at: bool) -> float:
        k = int(np.floor(t * n))
        frac = masses[k] + grid.values[min(k, n - 1)] * (t - bounds[k]) if k < n else masses[-1]
        for pos, m in rho.diracs:
            p = pos % 1.0
            if p < t or (include_diracs_at and abs(p - t) <= 1e-15):
                frac += m
        return frac

    cands = sorted({float(b) for b in bounds} | {pos % 1.0 for pos, _ in rho.diracs})
    a_vals = np.array([cum_mass(t, True) - t for t in cands])
    b_vals = np.array([cum_mass(t, False) - t for t in cands])
    j = int(np.argmax(a_vals))
    i = int(np.argmin(b_vals))
    value = float(a_vals[j] - b_vals[i])
    start = cands[i]
    length = (cands[j] - cands[i]) % 1.0
    return value, IntervalT(start, min(length, 1.0 - 1e-15))


def height_T(rho, grid_n: int = 1024,
             spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, Angle]:
    """-(min of W * rho) over the circle, with the minimizing angle.

    The potential is sampled on a half-cell-shifted uniform grid (plus the
    atom-gap midpoints for purely atomic measures), skipping Dirac locations,
    then the best bracket is polished by ternary search; the potential is
    strictly convex between atoms, and the constructed families have flat or
    smooth bottoms, so the local search is reliable.
    """
    if grid_n < 256:
        raise DomainError("grid_n must be at least 256")
    if isinstance(rho, EmpiricalMeasure):
        return _height_empirical(rho, grid_n)
    xs = (np.arange(grid_n) + 0.5) / grid_n - 0.5
    dirac_pos = np.array([a for a, _ in rho.diracs]) if rho.diracs else np.empty(0)
    if dirac_pos.size:
        dist = np.abs(_canonical_array(xs[:, None] - dirac_pos[None, :]))
        xs = xs[dist.min(axis=1) > 1e-12]
    vals = np.array([rho.potential(x, spec) for x in xs])
    k = int(np.argmin(vals))
    lo, hi = xs[k] - 1.0 / grid_n, xs[k] + 1.0 / grid_n
    flo, fhi = rho.potential(lo, spec), rho.potential(hi, spec)
    best_x, best_v = xs[k], vals[k]
    for _ in range(80):
        if hi - lo < 1e-10:
            break
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        f1, f2 = rho.potential(m1, spec), rho.potential(m2, spec)
        if f1 < best_v:
            best_x, best_v = m1, f1
        if f2 < best_v:
            best_x, best_v = m2, f2
        if f1 <= f2:
            hi = m2
        else:
            lo = m1
    return -best_v, canonical_angle(best_x)


def _height_empirical(rho: EmpiricalMeasure, grid_n: int) -> tuple[float, Angle]:
    _check_probability(rho)
    theta = rho.angles
    cands = (np.arange(grid_n) + 0.5) / grid_n - 0.5
    if theta.size:
        gaps_mid = theta + 0.5 * ((np.roll(theta, -1) - theta) % 1.0)
        cands = np.concatenate([cands, _canonical_array(gaps_mid)])
    dist = np.abs(_canonical_array(cands[:, None] - theta[None, :])).min(axis=1) \
        if theta.size else np.ones_like(cands)
    cands = cands[dist > 1e-12]
    vals = rho.potential(cands)
    k = int(np.argmin(vals))
    x0 = cands[k]
    # bracket within the atom gap containing x0
    rel = (theta - x0) % 1.0
    up = float(np.min(rel[rel > 0])) if np.any(rel > 0) else 1.0
    down = float(np.min((-rel) % 1.0)) if theta.size else 1.0
    lo, hi = x0 - down + 1e-13, x0 + up - 1e-13
    for _ in range(200):
        if hi - lo < 1e-10:
            break
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if rho.potential(m1) <= rho.potential(m2):
            hi = m2
        else:
            lo = m1
    x_star = 0.5 * (lo + hi)
    v_star = float(rho.potential(x_star))
    if vals[k] < v_star:
        x_star, v_star = x0, float(vals[k])
    return -v_star, canonical_angle(x_star)


def g_ratio(rho, alpha: float = 2.0, grid_n: int = 1024,
            spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """height / discrepancy**alpha for a circle probability measure."""
    if isinstance(rho, EmpiricalMeasure):
        d, _ = discrepancy_empirical(rho)
    else:
        d, _ = discrepancy_mixed(rho)
    if d <= 0.0:
        raise ZeroDiscrepancy("discrepancy vanishes; ratio undefined")
    h, _ = height_T(rho, grid_n, spec)
    return h / d**alpha


# ---------------------------------------------------------------------------
# Line-side functionals
# ---------------------------------------------------------------------------


def h_tilde(mu: AdmissibleDistR, spec: QuadratureSpec = TIGHT_SPEC) -> float:
    """Integral of the generated potential over the line; scales as lam^2.

    Kinds I and II have closed forms (1/2 and pi^2 (R^2 - 2)/2); kind III
    reduces to a pole-free integral with sqrt endpoints on [L, R].
    """
    lam2 = mu.lam**2
    if mu.kind == "I":
        return 0.5 * lam2
    if mu.kind == "II":
        return lam2 * math.pi**2 * (mu.R**2 - 2.0) / 2.0
    R, L = mu.R, mu.L

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.sqrt(np.maximum((R * R - x * x) * (x * x - L * L), 0.0)) / (x + 1.0)

    return lam2 * 2.0 * math.pi * kernels.integrate_sqrt_endpoints(f, L, R, spec)


def d_tilde(mu: AdmissibleDistR, spec: QuadratureSpec = TIGHT_SPEC) -> float:
    """Signed mass of the closed window [-lam, lam]; scales as lam."""
    if mu.kind == "I":
        return mu.lam
    if mu.kind == "II":
        return mu.lam * (math.pi * math.sqrt(mu.R**2 - 1.0) - 2.0)
    R, L = mu.R, mu.L

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.sqrt(np.maximum((R * R - x * x) * (L * L - x * x), 0.0)) / (1.0 - x * x)

    inner = kernels.integrate_sqrt_endpoints(f, -L, L, spec)
    return mu.lam * (2.0 * mu.m - 2.0 + inner)


def g_tilde(mu: AdmissibleDistR, spec: QuadratureSpec = TIGHT_SPEC) -> float:
    """h_tilde / d_tilde^2; invariant under the scaling factor."""
    return h_tilde(mu, spec) / d_tilde(mu, spec) ** 2


def h_tilde_quadrature(mu: AdmissibleDistR, spec: QuadratureSpec = TIGHT_SPEC) -> float:
    """h_tilde through the principal-value moment integral (no closed forms).

    Kind I integrates the semicircle profile directly; kinds II/III integrate
    -2 x (potential)' across the support gap, which carries a pole at 1.
    """
    lam2 = mu.lam**2
    if mu.kind == "I":
        invpi = 1.0 / math.pi

        def f(y):
            y = np.asarray(y, dtype=float)
            return np.sqrt(np.maximum(invpi**2 - y * y, 0.0))

        return lam2 * math.pi * kernels.integrate_sqrt_endpoints(f, -invpi, invpi, spec)
    R, L = mu.R, mu.L or 0.0

    def g(x):
        x = np.asarray(x, dtype=float)
        return x * np.sqrt(np.maximum((R * R - x * x) * (x * x - L * L), 0.0)) \
            / (x * x - 1.0)

    return lam2 * 2.0 * math.pi * kernels.pv_sqrt_composite(g, L, R, 1.0, spec)


def d_tilde_quadrature(mu: AdmissibleDistR, spec: QuadratureSpec = TIGHT_SPEC) -> float:
    """d_tilde by integrating the density over the closed unit window."""
    if mu.kind == "I":
        return mu.lam
    unscaled = mu.with_lam(1.0)

    def dens(x):
        return admissible_density_line(unscaled, x)

    L = unscaled.L or 0.0
    parts = [2.0 * unscaled.m]
    if L > 0.0:
        parts.append(kernels.integrate_piece(dens, -L, L, spec, grade_ends=True))
        parts.append(kernels.integrate_piece(dens, L, 1.0, spec, grade_ends=True))
        parts.append(kernels.integrate_piece(dens, -1.0, -L, spec, grade_ends=True))
    else:
        parts.append(kernels.integrate_piece(dens, -1.0, 1.0, spec, grade_ends=True))
    return mu.lam * math.fsum(parts)


# ---------------------------------------------------------------------------
# JSON round-trip
# ---------------------------------------------------------------------------


def measure_to_json(rho) -> dict:
    """Serialize either measure flavor to the shared document schema.

    Angles are in turns (full revolutions); masses dimensionless.
    """
    if isinstance(rho, EmpiricalMeasure):
        return {"atoms": [[float(a), float(w)] for a, w in zip(rho.angles, rho.weights)]}
    fam = None
    d = rho.density
    if isinstance(d, TypeITDensity):
        fam = {"tag": "TypeI_T", "params": {"m": d.m}}
    elif isinstance(d, TypeIITDensity):
        fam = {"tag": "TypeII_T", "params": {"M": d.M, "R": d.R, "L": d.L}}
    elif isinstance(d, PeriodizedDensity):
        mu = d.mu
        fam = {"tag": "Periodized",
               "params": {"kind": mu.kind, "lambda": mu.lam, "R": mu.R, "L": mu.L}}
    elif isinstance(d, GridBackedDensity):
        fam = {"tag": "GridBacked", "params": {"values": d.values.tolist()}}
    elif isinstance(d, UniformPlusDensity):
        fam = {"tag": "UniformPlus",
               "params": {"cos": d.cos_coeffs.tolist(), "sin": d.sin_coeffs.tolist()}}
    elif d is not None:
        raise TypeError(f"unknown density family {type(d).__name__}")
    return {
        "diracs": [[float(a), float(m)] for a, m in rho.diracs],
        "family": fam,
        "even": rho.even,
        "total": rho.total,
    }


def measure_from_json(doc: dict):
    """Inverse of measure_to_json."""
    if "atoms" in doc and doc.get("atoms") is not None and "family" not in doc:
        return EmpiricalMeasure.from_pairs(doc["atoms"])
    fam = doc.get("family")
    density = None
    if fam is not None:
        tag, params = fam["tag"], fam.get("params", {})
        if tag == "TypeI_T":
            density = TypeITDensity(params["m"])
        elif tag == "TypeII_T":
            density = TypeIITDensity(params["M"], params["R"], params["L"])
        elif tag == "Periodized":
            mu = AdmissibleDistR(params["kind"], params["lambda"],
                                 params.get("R"), params.get("L"))
            density = PeriodizedDensity(mu)
        elif tag == "GridBacked":
            density = GridBackedDensity(np.asarray(params["values"], dtype=float))
        elif tag == "UniformPlus":
            density = UniformPlusDensity(np.asarray(params["cos"], dtype=float),
                                         np.asarray(params.get("sin"), dtype=float)
                                         if params.get("sin") is not None else None)
        else:
            raise ValueError(f"unknown family tag {tag!r}")
    return MixedMeasureT(
        diracs=tuple((a, m) for a, m in doc.get("diracs", [])),
        density=density,
        even=bool(doc.get("even", True)),
        total=float(doc.get("total", 1.0)),
    )
