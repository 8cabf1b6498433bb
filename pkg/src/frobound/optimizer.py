"""Search for good auxiliary polynomials with an exact linear program.

The constraint f >= 0 on Theta is discretized on a grid of x-values; the LP
runs exactly over Q(sqrt(d)) with Bland's rule.  Candidates are then checked
on all of Theta, and any point where f < 0 is appended to the grid.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bounds_engine import (
    BoundCertificate,
    Regime,
    bound_for_regime,
    sqrt_q,
)
from .cosine_poly import MAX_EXACT_DEGREE, CosinePoly, chebyshev_T, is_nonneg_on, p_eval
from .errors import (
    ConditionFailure,
    DomainError,
    InfeasibleError,
    InternalAssertionError,
    NonConvergenceError,
    UnboundedError,
    UnusablePolynomialError,
)
from .exactnum import QField
from .theta_sets import ThetaSet

log = logging.getLogger(__name__)

ZERO = QField(0)
ONE = QField(1)

GRID_NODES = 31
GRID_MAX_DENOMINATOR = 10**4
MAX_ITERATIONS = 50


# ---------------------------------------------------------------------------
# exact simplex


def _solve_square(M: list[list[QField]], rhs: list[QField]) -> list[QField]:
    n = len(M)
    A = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            raise InternalAssertionError("singular basis")
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inverse()
        A[col] = [v * inv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                factor = A[r][col]
                A[r] = [a - factor * b for a, b in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


class _Tableau:
    """min cost.w  s.t.  A w = rhs, w >= 0, starting from a given basis."""

    def __init__(self, A, rhs, basis):
        self.A = [list(r) for r in A]
        self.rhs = list(rhs)
        self.basis = list(basis)

    def pivot(self, row: int, col: int):
        A = self.A
        inv = A[row][col].inverse()
        A[row] = [v * inv for v in A[row]]
        self.rhs[row] = self.rhs[row] * inv
        for r in range(len(A)):
            if r != row and A[r][col]:
                factor = A[r][col]
                A[r] = [a - factor * b if b else a for a, b in zip(A[r], A[row])]
                self.rhs[r] = self.rhs[r] - factor * self.rhs[row]
        self.basis[row] = col

    def run(self, cost: Sequence[QField], allowed: Sequence[bool]) -> str:
        """Bland's rule.  Returns "optimal" or "unbounded"."""
        A = self.A
        ncols = len(cost)
        while True:
            cb = [cost[b] for b in self.basis]
            entering = None
            for j in range(ncols):
                if not allowed[j] or j in self.basis:
                    continue
                red = cost[j] - sum((cb[i] * A[i][j] for i in range(len(A)) if A[i][j]), ZERO)
                if red.sign() < 0:
                    entering = j
                    break
            if entering is None:
                return "optimal"
            best = None
            for i in range(len(A)):
                a = A[i][entering]
                if a.sign() > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)


@dataclass
class LPResult:
    z: list[QField]
    value: QField


def lp_minimize(
    c: Sequence[QField],
    G: Sequence[Sequence[QField]],
    h: Sequence[QField],
    E: Sequence[Sequence[QField]],
    e: Sequence[QField],
    nonneg: Sequence[bool],
) -> LPResult:
    """min c.z  s.t.  G z >= h,  E z = e,  z_j >= 0 where nonneg[j].

    Solved through the dual  max h.l + e.mu  s.t.  G^T l + E^T mu (<= or =) c,
    l >= 0; the primal is recovered from the optimal simplex multipliers.
    """
    k = len(c)
    c = [QField.coerce(v) for v in c]
    cols: list[list[QField]] = []
    obj: list[QField] = []
    for gi, hi in zip(G, h):
        cols.append([QField.coerce(v) for v in gi])
        obj.append(QField.coerce(hi))
    for ei, el in zip(E, e):
        col = [QField.coerce(v) for v in ei]
        cols.append(col)
        obj.append(QField.coerce(el))
        cols.append([-v for v in col])
        obj.append(-QField.coerce(el))
    for j in range(k):
        if nonneg[j]:
            col = [ZERO] * k
            col[j] = ONE
            cols.append(col)
            obj.append(ZERO)
    n = len(cols)
    A = [[cols[j][i] for j in range(n)] for i in range(k)]
    rhs = list(c)
    flip = [False] * k
    for i in range(k):
        if rhs[i].sign() < 0:
            flip[i] = True
            A[i] = [-v for v in A[i]]
            rhs[i] = -rhs[i]
    # phase 1 with artificials n .. n+k-1
    for i in range(k):
        A[i] = A[i] + [ONE if r == i else ZERO for r in range(k)]
    tab = _Tableau(A, rhs, list(range(n, n + k)))
    cost1 = [ZERO] * n + [ONE] * k
    tab.run(cost1, [True] * (n + k))
    if any(tab.rhs[i] for i in range(k) if tab.basis[i] >= n):
        # dual infeasible: the primal is unbounded or infeasible
        if any(c):
            try:
                lp_minimize([ZERO] * k, G, h, E, e, nonneg)
            except InfeasibleError:
                raise
            raise UnboundedError("the linear program is unbounded")
        raise InternalAssertionError("zero-cost dual must be feasible")
    for i in range(k):
        if tab.basis[i] >= n:
            j = next((j for j in range(n) if tab.A[i][j] and j not in tab.basis), None)
            if j is not None:
                tab.pivot(i, j)
    cost2 = [-v for v in obj] + [ZERO] * k
    allowed = [True] * n + [False] * k
    if tab.run(cost2, allowed) == "unbounded":
        raise InfeasibleError("the discretized constraints are infeasible")
    # simplex multipliers pi solve B^T pi = obj_B on the unflipped system
    Bt = []
    obj_b = []
    for b in tab.basis:
        if b < n:
            Bt.append(list(cols[b]))
            obj_b.append(obj[b])
        else:
            r = b - n
            Bt.append([(-ONE if flip[r] else ONE) if i == r else ZERO for i in range(k)])
            obj_b.append(ZERO)
    z = _solve_square(Bt, obj_b)
    dual_value = sum((obj[b] * tab.rhs[i] for i, b in enumerate(tab.basis) if b < n), ZERO)
    value = sum((ci * zi for ci, zi in zip(c, z)), ZERO)
    _check_primal(z, G, h, E, e, nonneg)
    if value != dual_value:
        raise InternalAssertionError(f"duality gap {value} != {dual_value}")
    return LPResult(z, value)


def _check_primal(z, G, h, E, e, nonneg):
    for gi, hi in zip(G, h):
        if sum((QField.coerce(a) * b for a, b in zip(gi, z)), ZERO) < hi:
            raise InternalAssertionError("recovered primal violates an inequality")
    for ei, el in zip(E, e):
        if sum((QField.coerce(a) * b for a, b in zip(ei, z)), ZERO) != el:
            raise InternalAssertionError("recovered primal violates an equality")
    for zj, nn in zip(z, nonneg):
        if nn and zj.sign() < 0:
            raise InternalAssertionError("recovered primal violates a sign constraint")


# ---------------------------------------------------------------------------


def initial_grid(theta: ThetaSet, nodes: int = GRID_NODES, max_den: int = GRID_MAX_DENOMINATOR) -> list[QField]:
    """Theta's points and endpoints plus rounded Chebyshev nodes in each interval."""
    grid: list[QField] = list(theta.points)
    for lo, hi in theta.intervals:
        grid.extend([lo, hi])
        flo, fhi = float(lo), float(hi)
        for k in range(nodes):
            x = (flo + fhi) / 2 + (fhi - flo) / 2 * math.cos((2 * k + 1) * math.pi / (2 * nodes))
            cand = QField(Fraction(x).limit_denominator(max_den))
            if lo <= cand <= hi:
                grid.append(cand)
    out: list[QField] = []
    for x in sorted(grid):
        if not out or out[-1] != x:
            out.append(x)
    return out


@dataclass
class LPProblem:
    regime: Regime
    q: int
    theta: ThetaSet
    degree: int
    grid: list[QField] = field(default_factory=list)
    genus: int | None = None

    def __post_init__(self):
        self.regime = Regime(self.regime)
        if self.degree < 2 or self.degree > MAX_EXACT_DEGREE:
            raise DomainError(f"degree {self.degree} must lie in [2, {MAX_EXACT_DEGREE}]")
        if self.regime in (Regime.U0_ONE, Regime.U0_ONE_RESTRICTED) and self.genus is None:
            raise DomainError("regime u0_one needs a reference genus")
        if not self.grid:
            self.grid = initial_grid(self.theta)
        for x in self.grid:
            if x not in self.theta:
                raise DomainError(f"grid point {x} lies outside Theta")

    def describe(self) -> str:
        if self.regime in (Regime.U0_ONE, Regime.U0_ONE_RESTRICTED):
            return f"minimize the bound on N at g = {self.genus}"
        if self.regime is Regime.U0_ZERO:
            return "minimize psi(r) subject to psi(1/r) = 1"
        return "minimize psi(r) subject to psi(1/r) = 0"


@dataclass
class Candidate:
    f: CosinePoly
    objective: QField


def solve_lp(p: LPProblem) -> Candidate:
    D = p.degree
    r, rinv = sqrt_q(p.q)
    cheb = [chebyshev_T(n) for n in range(D + 1)]
    tvals = [[p_eval(cheb[n], x) for n in range(1, D + 1)] for x in p.grid]
    rpow = [r**n for n in range(1, D + 1)]
    ipow = [rinv**n for n in range(1, D + 1)]
    first_nonneg = 1 if p.regime is Regime.U0_ONE else 2
    sign_u = [n >= first_nonneg for n in range(1, D + 1)]
    if p.regime in (Regime.U0_ONE, Regime.U0_ONE_RESTRICTED):
        # Charnes-Cooper: t = 1/psi(1/r), y = t*u
        c = [QField(2 * p.genus)] + rpow
        G = [[ONE] + row for row in tvals]
        h = [ZERO] * len(G)
        E = [[ZERO] + ipow]
        e = [ONE]
        res = lp_minimize(c, G, h, E, e, [True] + sign_u)
        t = res.z[0]
        if not t:
            raise UnusablePolynomialError("optimum has u_0 = 0; a genus-free bound is available")
        u = [ONE] + [y / t for y in res.z[1:]]
        return Candidate(CosinePoly(u), res.value + 1)
    u0 = QField(0 if p.regime is Regime.U0_ZERO else -1)
    G = tvals
    h = [-u0] * len(G)
    E = [ipow]
    e = [ONE if p.regime is Regime.U0_ZERO else ZERO]
    res = lp_minimize(rpow, G, h, E, e, sign_u)
    return Candidate(CosinePoly([u0] + res.z), res.value)


@dataclass
class Refinement:
    witness: QField


def certify(candidate: Candidate, p: LPProblem) -> BoundCertificate | Refinement:
    check = is_nonneg_on(candidate.f, p.theta)
    if not check.ok:
        return Refinement(check.witness)
    kw = {}
    if p.regime is Regime.U0_MINUS_ONE:
        kw["allow_combined"] = False
    return bound_for_regime(candidate.f, p.theta, p.q, p.regime, **kw)


@dataclass
class OptimizeResult:
    certificate: BoundCertificate
    objective: QField
    iterations: int
    problem: LPProblem


def lift_candidate(f: CosinePoly, p: LPProblem, witness: QField, attempts: int = 30) -> BoundCertificate | None:
    """Certify (f + eps) / (1 + eps) for a small rational eps, regime u0_one only.

    The LP optimum usually dips slightly below zero near double roots; raising
    the constant term restores nonnegativity at a small cost in the bound.
    """
    if p.regime not in (Regime.U0_ONE, Regime.U0_ONE_RESTRICTED):
        return None
    dip = -float(f(witness))
    eps = Fraction(max(dip, 1e-12) * 2).limit_denominator(10**15) or Fraction(1, 10**12)
    for _ in range(attempts):
        shifted = CosinePoly([f.u0 + eps] + list(f.u[1:]))
        if is_nonneg_on(shifted, p.theta):
            g = shifted.scale(QField(1) / (1 + eps))
            try:
                return bound_for_regime(g, p.theta, p.q, p.regime)
            except (ConditionFailure, UnusablePolynomialError):
                return None
        eps *= 4
    return None


def optimize(p: LPProblem, max_iterations: int = MAX_ITERATIONS) -> OptimizeResult:
    """LP solve plus cutting-plane refinement until the candidate certifies."""
    witnesses = []
    cand = None
    for it in range(1, max_iterations + 1):
        cand = solve_lp(p)
        out = certify(cand, p)
        if isinstance(out, BoundCertificate):
            return OptimizeResult(out, cand.objective, it, p)
        log.debug("iteration %d: f < 0 at x = %s, refining grid", it, out.witness)
        witnesses.append(out.witness)
        p.grid = sorted(p.grid + [out.witness])
    best = lift_candidate(cand.f, p, witnesses[-1]) if cand is not None and witnesses else None
    raise NonConvergenceError(
        f"no certified candidate after {max_iterations} iterations", best=best, witnesses=witnesses
    )


def minimal_degree_search(
    q: int,
    theta: ThetaSet,
    regime: Regime | str,
    D_max: int,
    genus: int | None = None,
) -> tuple[int, OptimizeResult]:
    if D_max > MAX_EXACT_DEGREE:
        raise DomainError(f"D_max must be at most {MAX_EXACT_DEGREE}")
    for D in range(2, D_max + 1):
        p = LPProblem(regime, q, theta, D, genus=genus)
        try:
            return D, optimize(p)
        except (InfeasibleError, UnboundedError, NonConvergenceError, UnusablePolynomialError, ConditionFailure) as exc:
            log.debug("degree %d: %s", D, exc)
    raise InfeasibleError(f"no certified polynomial of degree <= {D_max}")
