"""Sparse multivariate polynomial algebra over (x_1..x_d, t).

MultiPoly is the universal carrier for basis elements and operator
residuals: a map from exponent vectors (e_1..e_d, e_t) to real
coefficients, with exact formal differentiation.  OperatorSpec expands the
composite operators <x,grad_x>, <x,grad_x>^2 and Delta_x into elementary
(coefficient, derivative multi-index) terms, so applying a differential
operator is exact polynomial arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DomainError, ParityError
from .unipoly import UniPoly

VAR_T = "t"


def _normalize(terms: dict) -> dict:
    return {e: c for e, c in terms.items() if c != 0.0}


@dataclass(frozen=True)
class MultiPoly:
    """Polynomial in (x_1..x_d, t); exponent tuples have length dim_x + 1
    with the t exponent last."""

    dim_x: int
    terms: dict = field(default_factory=dict)

    @staticmethod
    def zero(dim_x: int) -> "MultiPoly":
        return MultiPoly(dim_x, {})

    @staticmethod
    def const(dim_x: int, c: float) -> "MultiPoly":
        if c == 0.0:
            return MultiPoly.zero(dim_x)
        return MultiPoly(dim_x, {(0,) * (dim_x + 1): float(c)})

    @staticmethod
    def var_x(dim_x: int, i: int) -> "MultiPoly":
        e = [0] * (dim_x + 1)
        e[i] = 1
        return MultiPoly(dim_x, {tuple(e): 1.0})

    @staticmethod
    def var_t(dim_x: int) -> "MultiPoly":
        e = [0] * dim_x + [1]
        return MultiPoly(dim_x, {tuple(e): 1.0})

    @staticmethod
    def from_unipoly_t(u: UniPoly, dim_x: int) -> "MultiPoly":
        """Lift a univariate polynomial in t into (x, t) space."""
        terms = {}
        for k, c in enumerate(u.coeffs):
            if c != 0.0:
                terms[(0,) * dim_x + (k,)] = c
        return MultiPoly(dim_x, terms)

    @staticmethod
    def from_unipoly_x(u: UniPoly, dim_x: int, i: int = 0) -> "MultiPoly":
        terms = {}
        for k, c in enumerate(u.coeffs):
            if c != 0.0:
                e = [0] * (dim_x + 1)
                e[i] = k
                terms[tuple(e)] = c
        return MultiPoly(dim_x, terms)

    def _check(self, other: "MultiPoly") -> None:
        if self.dim_x != other.dim_x:
            raise DimensionMismatch(f"dim_x {self.dim_x} vs {other.dim_x}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0.0) + c
        return MultiPoly(self.dim_x, _normalize(out))

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + other.scale(-1.0)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return MultiPoly(self.dim_x, _normalize(out))

    def scale(self, s: float) -> "MultiPoly":
        if s == 0.0:
            return MultiPoly.zero(self.dim_x)
        return MultiPoly(self.dim_x, {e: s * c for e, c in self.terms.items()})

    def _var_slot(self, var) -> int:
        if var == VAR_T:
            return self.dim_x
        if isinstance(var, int) and 0 <= var < self.dim_x:
            return var
        raise DomainError(f"unknown variable {var!r} for dim_x = {self.dim_x}")

    def partial(self, var) -> "MultiPoly":
        """Exact formal derivative with respect to x_i (var = i) or t."""
        slot = self._var_slot(var)
        out: dict = {}
        for e, c in self.terms.items():
            if e[slot] == 0:
                continue
            ne = list(e)
            ne[slot] -= 1
            out[tuple(ne)] = out.get(tuple(ne), 0.0) + c * e[slot]
        return MultiPoly(self.dim_x, _normalize(out))

    def evaluate(self, point) -> float:
        """Evaluate at a point (x_1..x_d, t)."""
        if len(point) != self.dim_x + 1:
            raise DimensionMismatch(f"point length {len(point)}, need {self.dim_x + 1}")
        total = 0.0
        for e, c in self.terms.items():
            v = c
            for xj, ej in zip(point, e):
                if ej:
                    v *= xj ** ej
            total += v
        return total

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an array of points, shape (K, dim_x+1)."""
        pts = np.asarray(points, dtype=float)
        out = np.zeros(pts.shape[0])
        for e, c in self.terms.items():
            v = np.full(pts.shape[0], c)
            for j, ej in enumerate(e):
                if ej:
                    v = v * pts[:, j] ** ej
            out += v
        return out

    @property
    def degree(self) -> int:
        """Maximal total exponent; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def rel_residual_against(self, reference: "MultiPoly") -> float:
        ref = reference.max_abs_coeff()
        if ref == 0.0:
            return self.max_abs_coeff()
        return self.max_abs_coeff() / ref

    def is_zero(self) -> bool:
        return not self.terms

    def render(self, names=None) -> str:
        """Text form in sorted graded-lexicographic monomial order."""
        if not self.terms:
            return "0"
        if names is None:
            if self.dim_x == 1:
                names = ["x", "t"]
            else:
                names = [f"x{i+1}" for i in range(self.dim_x)] + ["t"]
        keys = sorted(self.terms, key=lambda e: (sum(e), tuple(-v for v in e)))
        parts = []
        for e in keys:
            c = self.terms[e]
            factors = []
            for name, ej in zip(names, e):
                if ej == 1:
                    factors.append(name)
                elif ej > 1:
                    factors.append(f"{name}^{ej}")
            mono = "*".join(factors)
            if not mono:
                parts.append(f"{c:.10g}")
            elif c == 1.0:
                parts.append(mono)
            elif c == -1.0:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c:.10g}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()})"


def homogenize(p_ball: MultiPoly, m: int) -> MultiPoly:
    """Map a ball polynomial P(x) of degree <= m to t^m P(x/t).

    Every degree-j term gains the factor t^(m-j); j must not exceed m and
    must share its parity, otherwise the result would not be a polynomial.
    """
    out = {}
    for e, c in p_ball.terms.items():
        if e[-1] != 0:
            raise DomainError("homogenize expects a polynomial in x only")
        j = sum(e)
        if j > m:
            raise ParityError(f"term of degree {j} exceeds homogenization degree {m}")
        if (m - j) % 2 != 0:
            raise ParityError(f"term of degree {j} has wrong parity for degree {m}")
        out[e[:-1] + (m - j,)] = c
    return MultiPoly(p_ball.dim_x, out)


_PSEUDO_KINDS = ("id", "euler", "euler2", "laplace")


@dataclass(frozen=True)
class OperatorSpec:
    """Linear differential operator as elementary (coefficient, multi-index)
    terms; built from pseudo-terms which expand symbolically and exactly."""

    dim_x: int
    terms: tuple  # of (MultiPoly coefficient, derivative multi-index)

    @staticmethod
    def from_pseudo(dim_x: int, pseudo_terms) -> "OperatorSpec":
        """pseudo_terms: iterable of (coeff, kind, dt_order) where coeff is a
        scalar or MultiPoly, kind one of id|euler|euler2|laplace."""
        elementary = []
        for coeff, kind, dt in pseudo_terms:
            if kind not in _PSEUDO_KINDS:
                raise DomainError(f"unknown operator kind {kind!r}")
            if not isinstance(coeff, MultiPoly):
                coeff = MultiPoly.const(dim_x, coeff)
            if coeff.is_zero():
                continue
            base_t = (0,) * dim_x + (dt,)
            if kind == "id":
                elementary.append((coeff, base_t))
            elif kind == "euler":
                for i in range(dim_x):
                    d = list(base_t)
                    d[i] += 1
                    elementary.append((coeff * MultiPoly.var_x(dim_x, i), tuple(d)))
            elif kind == "euler2":
                # <x,grad>^2 = sum_ij x_i x_j d_i d_j + sum_i x_i d_i
                for i in range(dim_x):
                    for j in range(dim_x):
                        d = list(base_t)
                        d[i] += 1
                        d[j] += 1
                        xij = MultiPoly.var_x(dim_x, i) * MultiPoly.var_x(dim_x, j)
                        elementary.append((coeff * xij, tuple(d)))
                for i in range(dim_x):
                    d = list(base_t)
                    d[i] += 1
                    elementary.append((coeff * MultiPoly.var_x(dim_x, i), tuple(d)))
            elif kind == "laplace":
                for i in range(dim_x):
                    d = list(base_t)
                    d[i] += 2
                    elementary.append((coeff, tuple(d)))
        return OperatorSpec(dim_x, tuple(elementary))


def apply_operator(op: OperatorSpec, p: MultiPoly) -> MultiPoly:
    """Apply the expanded linear differential operator; exact."""
    if op.dim_x != p.dim_x:
        raise DimensionMismatch(f"operator dim_x {op.dim_x} vs polynomial {p.dim_x}")
    out = MultiPoly.zero(p.dim_x)
    for coeff, deriv in op.terms:
        q = p
        for slot, order in enumerate(deriv):
            var = VAR_T if slot == p.dim_x else slot
            for _ in range(order):
                q = q.partial(var)
                if q.is_zero():
                    break
            if q.is_zero():
                break
        if q.is_zero():
            continue
        out = out + coeff * q
    return out


def euler_operator(dim_x: int) -> OperatorSpec:
    """t d/dt + <x, grad_x>; multiplies any homogeneous polynomial of degree
    m in (x, t) jointly by m."""
    t = MultiPoly.var_t(dim_x)
    return OperatorSpec.from_pseudo(dim_x, [(t, "id", 1), (1.0, "euler", 0)])


def laplacian_x(dim_x: int) -> OperatorSpec:
    return OperatorSpec.from_pseudo(dim_x, [(1.0, "laplace", 0)])
