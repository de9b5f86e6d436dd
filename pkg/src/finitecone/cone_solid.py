"""The finite orthogonal families on the solid cone, plus the Laguerre cone
family they degenerate to: bases, norms, Gram matrices, operator residuals,
recurrences, and limit relations.

Every cone element factorizes as radial(t) times the homogenization
t^m P(x/t) of a ball basis element of degree m.  All operator and
recurrence checks are coefficient-wise polynomial identities via polyalg;
quadrature enters only through the Gram matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ball import BallElement, ball_basis, ball_normalization
from .errors import (
    DegenerateParamError,
    DomainError,
    QNotZeroError,
    ValidityError,
)
from .polyalg import MultiPoly, OperatorSpec, apply_operator, homogenize
from .quadrature import WeightGammaExp, WeightInvExp, WeightMPQ, cone_rule
from .scalars import factorial_real, gamma_ratio, pochhammer
from .unipoly import UniPoly
from .univariate import (
    MParams,
    NParams,
    coeffs_laguerre,
    coeffs_m,
    coeffs_m_rodrigues,
    coeffs_n,
    coeffs_n_rodrigues,
    eval_laguerre,
    eval_m,
    eval_n,
    norm_m,
    norm_n,
)

FAMILIES = ("M", "N", "L")


@dataclass(frozen=True)
class ConeFamilyParams:
    """Validated parameter bundle for a solid-cone family.

    family "M": weight (t^2-|x|^2)^(mu-1/2) t^q (1+t)^-(p+q), finite.
    family "N": weight (t^2-|x|^2)^(mu-1/2) t^-p exp(-1/t), finite.
    family "L": weight (t^2-|x|^2)^(mu-1/2) t^beta exp(-t), infinite.
    """

    d: int
    mu: float
    family: str
    p: Optional[float] = None
    q: Optional[float] = None
    beta: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        if self.family == "M" and (self.p is None or self.q is None):
            raise DomainError("M family needs p and q")
        if self.family == "N" and self.p is None:
            raise DomainError("N family needs p")
        if self.family == "L" and self.beta is None:
            raise DomainError("L family needs beta")

    @property
    def alpha(self) -> float:
        return self.mu + (self.d - 1) / 2.0

    def require_valid(self, n: int) -> None:
        """Validity window for orthogonality up to degree n."""
        if self.mu <= -0.5:
            raise ValidityError("mu > -1/2", f"mu = {self.mu}")
        if self.family == "M":
            if self.p <= 2 * n + 2 * self.mu + self.d:
                raise ValidityError(
                    "p > 2N + 2*mu + d",
                    f"p = {self.p}, N = {n}, mu = {self.mu}, d = {self.d}",
                )
            if self.q <= -2 * self.mu - self.d:
                raise ValidityError(
                    "q > -2*mu - d", f"q = {self.q}, mu = {self.mu}, d = {self.d}"
                )
        elif self.family == "N":
            if self.p <= 2 * n + 2 * self.mu + self.d:
                raise ValidityError(
                    "p > 2N + 2*mu + d",
                    f"p = {self.p}, N = {n}, mu = {self.mu}, d = {self.d}",
                )
        else:
            if self.beta <= -self.d:
                raise ValidityError("beta > -d", f"beta = {self.beta}, d = {self.d}")

    @property
    def max_degree(self) -> Optional[int]:
        """Finite-orthogonality ceiling; None when unbounded (L family)."""
        if self.family == "L":
            return None
        n = math.ceil((self.p - 2 * self.mu - self.d) / 2) - 1
        while self.p <= 2 * n + 2 * self.mu + self.d:
            n -= 1
        return n

    def radial_weight(self):
        if self.family == "M":
            return WeightMPQ(self.p, self.q)
        if self.family == "N":
            return WeightInvExp(self.p)
        return WeightGammaExp(self.beta)

    def normalization(self) -> float:
        """Constant b making <1,1> = 1 for the cone inner product."""
        two_a = 2 * self.alpha
        b_ball = ball_normalization(self.d, self.mu)
        if self.family == "M":
            return b_ball * gamma_ratio(
                [self.p + self.q], [self.p - two_a - 1, self.q + two_a + 1]
            )
        if self.family == "N":
            return b_ball / math.gamma(self.p - two_a - 1)
        return b_ball / math.gamma(self.beta + two_a + 1)


@dataclass(frozen=True)
class ConeBasisElement:
    n: int
    m: int
    k: int  # index within the degree-m ball basis
    radial: UniPoly
    ball: BallElement
    angular: MultiPoly  # homogenized: t^m P(x/t)
    poly: MultiPoly

    @property
    def label(self) -> str:
        return f"n{self.n}.m{self.m}.k{self.k}"


def cone_dimension(d: int, n: int) -> int:
    """Number of degree-n basis elements on the solid cone."""
    return math.comb(n + d, n)


def _radial(params: ConeFamilyParams, n: int, m: int, source: str) -> UniPoly:
    two_a = 2 * params.alpha
    if params.family == "M":
        sub = MParams(params.p - two_a - 2 * m, params.q + two_a + 2 * m)
        return (coeffs_m if source == "recurrence" else coeffs_m_rodrigues)(n - m, sub)
    if params.family == "N":
        sub = NParams(params.p - two_a - 2 * m)
        return (coeffs_n if source == "recurrence" else coeffs_n_rodrigues)(n - m, sub)
    return coeffs_laguerre(n - m, 2 * m + 2 * params.mu + params.beta + params.d - 1)


def cone_basis(
    params: ConeFamilyParams,
    n: int,
    convention: str = "orthonormal",
    radial_source: str = "recurrence",
):
    """All degree-n basis elements, one per (m, ball index), 0 <= m <= n."""
    params.require_valid(n)
    out = []
    for m in range(n + 1):
        radial = _radial(params, n, m, radial_source)
        bb = ball_basis(params.d, params.mu, m, convention)
        rad_mp = MultiPoly.from_unipoly_t(radial, params.d)
        for k, belem in enumerate(bb.elements):
            ang = homogenize(belem.poly, m)
            out.append(ConeBasisElement(n, m, k, radial, belem, ang, rad_mp * ang))
    if len(out) != cone_dimension(params.d, n):
        raise DomainError(
            f"internal: built {len(out)} elements, expected {cone_dimension(params.d, n)}"
        )
    return tuple(out)


def cone_norm(params: ConeFamilyParams, m: int, n: int) -> float:
    """Norm square of a degree-n element with angular degree m, assuming an
    orthonormal angular basis."""
    params.require_valid(n)
    two_a = 2 * params.alpha
    if params.family == "M":
        p, q = params.p, params.q
        ratio = gamma_ratio(
            [p - two_a - 2 * m - 1, q + two_a + 2 * m + 1],
            [p - two_a - 1, q + two_a + 1],
        )
        return ratio * norm_m(n - m, MParams(p - two_a - 2 * m, q + two_a + 2 * m))
    if params.family == "N":
        p = params.p
        ratio = gamma_ratio([p - two_a - 2 * m - 1], [p - two_a - 1])
        return ratio * norm_n(n - m, NParams(p - two_a - 2 * m))
    alpha_l = 2 * m + 2 * params.mu + params.beta + params.d - 1
    ratio = gamma_ratio([alpha_l + 1], [alpha_l + 1 - 2 * m])
    return ratio * pochhammer(alpha_l + 1, n - m) / factorial_real(n - m)


def expected_sq_norm(params: ConeFamilyParams, element: ConeBasisElement) -> float:
    """Predicted Gram diagonal; picks up the angular norm when the angular
    basis is not orthonormal (paper-gegenbauer convention)."""
    return cone_norm(params, element.m, element.n) * element.ball.sq_norm


@dataclass(frozen=True)
class GramResult:
    elements: tuple
    matrix: np.ndarray
    expected_diag: np.ndarray
    max_offdiag: float  # normalized by sqrt of expected diagonal products
    max_diag_rel: float
    unit_norm_dev: float  # |<1,1> - 1|


def _radial_values(params: ConeFamilyParams, n: int, m: int, ts: np.ndarray) -> np.ndarray:
    """Radial factor evaluated by the forward recurrence, which stays
    accurate where the coefficient form cancels (large p, small t)."""
    two_a = 2 * params.alpha
    if params.family == "M":
        return eval_m(n - m, MParams(params.p - two_a - 2 * m, params.q + two_a + 2 * m), ts)
    if params.family == "N":
        return eval_n(n - m, NParams(params.p - two_a - 2 * m), ts)
    return eval_laguerre(n - m, 2 * m + 2 * params.mu + params.beta + params.d - 1, ts)


def cone_gram(
    params: ConeFamilyParams, n_max: int, convention: str = "orthonormal"
) -> GramResult:
    """Full Gram matrix of all basis elements of degree <= n_max under the
    normalized cone inner product, by exact separated quadrature.

    Elements are evaluated in factorized form: the radial factor through
    the three-term recurrence, the homogenized angular factor from its
    coefficients; both are well conditioned on the rule's nodes."""
    params.require_valid(n_max)
    elements = [
        e for n in range(n_max + 1) for e in cone_basis(params, n, convention)
    ]
    rule = cone_rule(params.d, params.mu, params.radial_weight(), 2 * n_max, normalized=True)
    ts = rule.points[:, -1]
    vals = np.vstack(
        [
            _radial_values(params, e.n, e.m, ts) * e.angular.evaluate_many(rule.points)
            for e in elements
        ]
    )
    gram = (vals * rule.weights) @ vals.T
    expected = np.array([expected_sq_norm(params, e) for e in elements])
    scale = np.sqrt(np.outer(expected, expected))
    normalized = gram / scale
    off = normalized - np.diag(np.diag(normalized))
    max_off = float(np.max(np.abs(off))) if len(elements) > 1 else 0.0
    max_diag_rel = float(np.max(np.abs(np.diag(gram) - expected) / expected))
    unit_dev = abs(float(rule.total_weight) - 1.0)
    return GramResult(tuple(elements), gram, expected, max_off, max_diag_rel, unit_dev)


# ---------------------------------------------------------------------------
# differential / difference-differential operators
# ---------------------------------------------------------------------------


def solid_m_operator(d: int, mu: float, p: float) -> OperatorSpec:
    """Second-order operator whose eigenfunctions the first family is at
    q = 0, with eigenvalue n(n - p + 2mu + d)."""
    t = MultiPoly.var_t(d)
    one = MultiPoly.const(d, 1.0)
    t_one_plus_t = t * (one + t)
    return OperatorSpec.from_pseudo(
        d,
        [
            (t_one_plus_t, "id", 2),
            ((one + t).scale(2.0), "euler", 1),
            (MultiPoly.const(d, d + 2 * mu) + t.scale(-p + 2 * mu + d + 1), "id", 1),
            (t_one_plus_t, "laplace", 0),
            ((t * t).scale(-1.0), "laplace", 0),
            (1.0, "euler2", 0),
            (2 * mu + d - p, "euler", 0),
        ],
    )


def operator_residual_m(params: ConeFamilyParams, element: ConeBasisElement) -> MultiPoly:
    """Residual of the q = 0 cone operator minus n(n - p + 2mu + d) times
    the element; coefficient-wise zero up to rounding."""
    if params.family != "M":
        raise DomainError("operator applies to the M family")
    if params.q != 0:
        raise QNotZeroError(
            "the second-order operator has degree-only eigenvalues just for q = 0"
        )
    op = solid_m_operator(params.d, params.mu, params.p)
    eig = element.n * (element.n - params.p + 2 * params.mu + params.d)
    return apply_operator(op, element.poly) - element.poly.scale(eig)


def diffdiff_operator(d: int, mu: float, p: float) -> OperatorSpec:
    """The mixed operator acting on the second cone family."""
    t = MultiPoly.var_t(d)
    return OperatorSpec.from_pseudo(
        d,
        [
            (t * t, "id", 2),
            (t.scale(2.0), "euler", 1),
            (t.scale(1 + 2 * mu + d - p), "id", 1),
            (2 * mu + d - p, "euler", 0),
            (1.0, "euler2", 0),
        ],
    )


def companion_element_n(params: ConeFamilyParams, element: ConeBasisElement) -> MultiPoly:
    """The shifted companion: same angular part, degree n-1, parameter p-2."""
    shifted = ConeFamilyParams(params.d, params.mu, "N", p=params.p - 2.0)
    shifted.require_valid(element.n - 1)
    radial = _radial(shifted, element.n - 1, element.m, "recurrence")
    return MultiPoly.from_unipoly_t(radial, params.d) * element.angular


def diffdiff_residual_n(params: ConeFamilyParams, element: ConeBasisElement) -> MultiPoly:
    """Residual of the difference-differential identity for the second cone
    family, including the parameter-shifted companion term."""
    if params.family != "N":
        raise DomainError("difference-differential identity applies to the N family")
    n, m = element.n, element.m
    d, mu, p = params.d, params.mu, params.p
    lhs = apply_operator(diffdiff_operator(d, mu, p), element.poly)
    rhs = element.poly.scale(n * (n + 2 * mu + d - p))
    if n > m:
        comp = companion_element_n(params, element)
        rhs = rhs - comp.scale((n - m) * (p - 2 * mu - m - n - d))
    return lhs - rhs


# ---------------------------------------------------------------------------
# three-term recurrences in the total degree
# ---------------------------------------------------------------------------


def recurrence_coefficients(params: ConeFamilyParams, n: int, m: int, variant: str = "derived"):
    """Coefficients (A, B, C) with element_{n+1} = (A t + B) element_n - C element_{n-1}.

    variant "stated" is the closed form as printed; variant "derived" is the
    same coefficients re-derived by parameter substitution in the univariate
    recurrence.  For the M family the two differ in B by the factor
    (p - 2n - 2mu - d) / (p - m - n - 2mu - d); the derived variant is the
    one validated against the Rodrigues oracle (see the repository notes on
    known-discrepancies).  For the N family both variants coincide.
    """
    d, mu = params.d, params.mu
    if params.family == "M":
        p, q = params.p, params.q
        for den in (p - m - n - 2 * mu - d, p - 2 * mu - d - 2 * n + 1):
            if den == 0.0:
                raise DegenerateParamError(f"vanishing recurrence denominator at (n,m)=({n},{m})")
        a = (p - 2 * n - 2 * mu - d) * (p - 2 * n - 2 * mu - d - 1) / (p - m - n - 2 * mu - d)
        b = (
            2 * (n - m) * (n - m + 1) - (p - 2 * m - 2 * mu - d + 1) * (d + q + 2 * mu + 2 * n)
        ) / (p - 2 * mu - d - 2 * n + 1)
        if variant == "derived":
            b *= (p - 2 * n - 2 * mu - d) / (p - m - n - 2 * mu - d)
        elif variant != "stated":
            raise DomainError(f"unknown variant {variant!r}")
        c = (
            (n - m) * (p - 2 * mu - d - 2 * n - 1) / (p - m - 2 * mu - d - n)
            * (p + q - n + m) * (d + q + 2 * mu + m + n - 1) / (p - 2 * mu - d - 2 * n + 1)
        )
        return a, b, c
    if params.family == "N":
        p = params.p
        for den in (p - 2 * mu - m - n - d, p - 2 * mu - 2 * n - d + 1):
            if den == 0.0:
                raise DegenerateParamError(f"vanishing recurrence denominator at (n,m)=({n},{m})")
        a = (p - 2 * mu - 2 * n - d - 1) * (p - 2 * mu - 2 * n - d) / (p - 2 * mu - m - n - d)
        b = -(
            (p - 2 * mu - 2 * m - d + 1) * (p - 2 * mu - 2 * n - d)
        ) / ((p - 2 * mu - m - n - d) * (p - 2 * mu - 2 * n - d + 1))
        c = (n - m) * (p - 2 * mu - 2 * n - d - 1) / (
            (p - 2 * mu - m - n - d) * (p - 2 * mu - 2 * n - d + 1)
        )
        return a, b, c
    raise DomainError("recurrence coefficients exist for the M and N families")


def recurrence_residual(
    params: ConeFamilyParams,
    n: int,
    m: int,
    ball_index: int = 0,
    variant: str = "derived",
) -> float:
    """Max-abs residual of the total-degree three-term recurrence, relative
    to the degree-(n+1) element, with Rodrigues-built radial parts."""
    if n < m + 1:
        raise DomainError("recurrence check needs n >= m + 1")
    params.require_valid(n + 1)
    bb = ball_basis(params.d, params.mu, m, "orthonormal")
    ang = homogenize(bb.elements[ball_index].poly, m)
    d = params.d

    def elem(k: int) -> MultiPoly:
        radial = _radial(params, k, m, "rodrigues" if params.family in ("M", "N") else "recurrence")
        return MultiPoly.from_unipoly_t(radial, d) * ang

    e_prev, e_cur, e_next = elem(n - 1), elem(n), elem(n + 1)
    t = MultiPoly.var_t(d)
    if params.family == "L":
        mu, beta = params.mu, params.beta
        lhs = e_next.scale(n - m + 1)
        rhs = e_cur.scale(d + beta + 2 * mu + 2 * n) - t * e_cur - e_prev.scale(
            d + beta + 2 * mu + m + n - 1
        )
        residual = lhs - rhs
        return residual.rel_residual_against(e_next.scale(n - m + 1))
    a, b, c = recurrence_coefficients(params, n, m, variant)
    residual = e_next - (t.scale(a) * e_cur + e_cur.scale(b)) + e_prev.scale(c)
    return residual.rel_residual_against(e_next)


# ---------------------------------------------------------------------------
# Laguerre cone family: limit target and its own identities
# ---------------------------------------------------------------------------


def laguerre_operator(d: int, mu: float) -> OperatorSpec:
    """Second-order operator with eigenvalue -n on the Laguerre cone family
    at beta = 0."""
    t = MultiPoly.var_t(d)
    return OperatorSpec.from_pseudo(
        d,
        [
            (t, "laplace", 0),
            (t, "id", 2),
            (2.0, "euler", 1),
            (-1.0, "euler", 0),
            (MultiPoly.const(d, 2 * mu + d) - t, "id", 1),
        ],
    )


def laguerre_pde_residual(params: ConeFamilyParams, element: ConeBasisElement) -> MultiPoly:
    if params.family != "L" or params.beta != 0.0:
        raise DomainError("the degree-only eigenvalue holds at beta = 0")
    op = laguerre_operator(params.d, params.mu)
    return apply_operator(op, element.poly) + element.poly.scale(element.n)


def _directions(d: int):
    if d == 1:
        return [(1.0,), (-1.0,), (1.0,), (-1.0,), (1.0,)]
    if d == 2:
        return [
            (math.cos(2 * math.pi * k / 5 + 0.37), math.sin(2 * math.pi * k / 5 + 0.37))
            for k in range(5)
        ]
    out = []
    for k in range(5):
        z = -0.8 + 0.4 * k
        s = math.sqrt(1.0 - z * z)
        phi = 2.39996322972865332 * (k + 1)
        out.append((s * math.cos(phi), s * math.sin(phi), z))
    return out


def cone_sample_grid(d: int) -> np.ndarray:
    """Deterministic evaluation grid: interior and near-boundary points of
    the cone over five heights."""
    pts = []
    for t in (0.4, 0.8, 1.2, 1.6, 2.0):
        for xi in _directions(d):
            for c in (0.3, 0.9):
                pts.append([c * t * x for x in xi] + [t])
    return np.asarray(pts)


def _p_scaled(poly: MultiPoly, p: float, m: int) -> MultiPoly:
    """p^m f(x/p, t/p): every term of total degree g picks up p^(m-g)."""
    return MultiPoly(
        poly.dim_x, {e: c * p ** (m - sum(e)) for e, c in poly.terms.items()}
    )


@dataclass(frozen=True)
class LimitReport:
    n: int
    m: int
    p_values: tuple
    deviations: tuple
    exponent: object  # float, or the string "exact"


def limit_to_laguerre(
    params: ConeFamilyParams, n: int, m: int, ball_index: int = 0, p_grid=(1e2, 1e3, 1e4)
) -> LimitReport:
    """Deviation between the rescaled M-family element and its Laguerre cone
    target across a grid of p values, with the fitted 1/p decay exponent."""
    from .verifier import convergence_fit

    if params.family != "M":
        raise DomainError("the limit relation starts from the M family")
    d, mu, q = params.d, params.mu, params.q
    two_a = 2 * params.mu + d - 1
    bb = ball_basis(d, mu, m, "orthonormal")
    ang = homogenize(bb.elements[ball_index].poly, m)
    target_radial = coeffs_laguerre(n - m, q + 2 * m + two_a)
    sign = -1.0 if (n - m) % 2 else 1.0
    target = (MultiPoly.from_unipoly_t(target_radial, d) * ang).scale(
        sign * factorial_real(n - m)
    )
    grid = cone_sample_grid(d)
    target_vals = target.evaluate_many(grid)
    deviations = []
    for p in p_grid:
        trial = ConeFamilyParams(d, mu, "M", p=float(p), q=q)
        trial.require_valid(n)
        radial = _radial(trial, n, m, "recurrence")
        poly = MultiPoly.from_unipoly_t(radial, d) * ang
        scaled = _p_scaled(poly, float(p), m)
        deviations.append(float(np.max(np.abs(scaled.evaluate_many(grid) - target_vals))))
    exponent = convergence_fit(list(zip(p_grid, deviations)))
    return LimitReport(n, m, tuple(float(p) for p in p_grid), tuple(deviations), exponent)


def laguerre_cone_checks(d: int, mu: float, n_max: int, beta: float = 0.0):
    """Operator and recurrence residuals for the Laguerre cone family.

    Returns a list of (name, relative residual) pairs; all should sit at
    rounding level.
    """
    params = ConeFamilyParams(d, mu, "L", beta=beta)
    out = []
    if beta == 0.0:
        for n in range(n_max + 1):
            for el in cone_basis(params, n):
                res = laguerre_pde_residual(params, el)
                out.append((f"laguerre-pde/{el.label}", res.rel_residual_against(el.poly)))
    for m in range(n_max):
        for n in range(m + 1, n_max):
            out.append(
                (f"laguerre-recurrence/n{n}.m{m}", recurrence_residual(params, n, m))
            )
    return out
