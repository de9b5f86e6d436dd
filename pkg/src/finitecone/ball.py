"""Orthogonal bases on the unit ball for the weight (1-|x|^2)^(mu-1/2).

Elements combine a Jacobi polynomial in 2|x|^2 - 1 with a solid harmonic;
for d = 1 the basis is the Gegenbauer family, which is the convention the
cone samples use.  Norms come in closed form, so the quadrature Gram check
stays an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UnsupportedDimension, ValidityError
from .harmonics import harmonic_basis, surface_area
from .polyalg import MultiPoly, OperatorSpec, apply_operator
from .quadrature import ball_mass_normalization
from .scalars import gamma_ratio
from .univariate import coeffs_gegenbauer, coeffs_jacobi, norm_gegenbauer, norm_jacobi

CONVENTIONS = ("orthonormal", "paper-gegenbauer")


def ball_normalization(d: int, mu: float) -> float:
    """Constant making the weighted ball integral of 1 equal to 1."""
    if mu <= -0.5:
        raise ValidityError("mu > -1/2", f"mu = {mu}")
    return ball_mass_normalization(d, mu)


@dataclass(frozen=True)
class BallElement:
    degree: int
    label: str
    poly: MultiPoly
    sq_norm: float  # under the normalized inner product; 1 for orthonormal


@dataclass(frozen=True)
class BallBasis:
    d: int
    mu: float
    n: int
    convention: str
    elements: tuple


def _compose_radial(coeffs, d: int) -> MultiPoly:
    """Jacobi radial factor composed symbolically with 2|x|^2 - 1."""
    s = MultiPoly.const(d, -1.0)
    for i in range(d):
        xi = MultiPoly.var_x(d, i)
        s = s + (xi * xi).scale(2.0)
    out = MultiPoly.zero(d)
    power = MultiPoly.const(d, 1.0)
    for k, c in enumerate(coeffs.coeffs):
        if k > 0:
            power = power * s
        if c != 0.0:
            out = out + power.scale(c)
    return out


def ball_basis(d: int, mu: float, n: int, convention: str = "orthonormal") -> BallBasis:
    """Orthogonal basis of the degree-n orthogonal polynomials on the ball.

    The orthonormal convention rescales every element by its closed-form
    norm; the paper-gegenbauer convention (d = 1 only) keeps the raw
    Gegenbauer polynomials and reports their norms instead.
    """
    if d not in (1, 2, 3):
        raise UnsupportedDimension(f"d = {d}, supported: (1, 2, 3)")
    if mu <= -0.5:
        raise ValidityError("mu > -1/2", f"mu = {mu}")
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}")
    if convention == "paper-gegenbauer" and d != 1:
        raise DomainError("paper-gegenbauer convention applies to d = 1 only")
    elements = []
    if d == 1:
        coeffs = coeffs_gegenbauer(n, mu)  # rejects mu = 0 for n >= 1
        poly = MultiPoly.from_unipoly_x(coeffs, 1)
        sq = ball_normalization(1, mu) * norm_gegenbauer(n, mu)
        if convention == "orthonormal":
            elements.append(BallElement(n, f"C{n}", poly.scale(1.0 / math.sqrt(sq)), 1.0))
        else:
            elements.append(BallElement(n, f"C{n}", poly, sq))
    else:
        b_mu = ball_normalization(d, mu)
        omega = surface_area(d)
        for j in range(n // 2 + 1):
            k = n - 2 * j
            a = mu - 0.5
            b = k + (d - 2) / 2.0
            radial = _compose_radial(coeffs_jacobi(j, a, b), d)
            # norm of jacobi(2r^2-1) x harmonic under the normalized measure
            c_ab = gamma_ratio([a + b + 2], [a + 1, b + 1])
            sq = b_mu * omega * norm_jacobi(j, a, b) / (2.0 * c_ab)
            scale = 1.0 / math.sqrt(sq)
            for l, harm in enumerate(harmonic_basis(d, k).elements, start=1):
                poly = radial * harm
                if convention == "orthonormal":
                    elements.append(BallElement(n, f"j{j}Y{k},{l}", poly.scale(scale), 1.0))
                else:
                    elements.append(BallElement(n, f"j{j}Y{k},{l}", poly, sq))
    basis = BallBasis(d, mu, n, convention, tuple(elements))
    expected = math.comb(n + d - 1, n)
    if len(elements) != expected:
        raise DomainError(
            f"internal: built {len(elements)} elements, expected {expected}"
        )
    return basis


def ball_dimension(d: int, n: int) -> int:
    """dim of the space of degree-n ball orthogonal polynomials."""
    return math.comb(n + d - 1, n)


def ball_operator_spec(d: int, mu: float) -> OperatorSpec:
    """Second-order operator whose eigenfunctions the ball basis is."""
    return OperatorSpec.from_pseudo(
        d,
        [
            (1.0, "laplace", 0),
            (-1.0, "euler2", 0),
            (-(2 * mu + d - 1), "euler", 0),
        ],
    )


def ball_operator_residual(d: int, mu: float, element: BallElement) -> MultiPoly:
    """Residual of the ball operator applied to a basis element minus its
    eigenvalue -n(n + 2mu + d - 1); zero up to rounding."""
    n = element.degree
    op = ball_operator_spec(d, mu)
    return apply_operator(op, element.poly) + element.poly.scale(n * (n + 2 * mu + d - 1))
