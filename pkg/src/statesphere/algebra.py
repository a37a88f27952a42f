"""States as complex combinations of Gaussian-type primitives, and their
inner products in closed form.

Every inner product compiles, primitive pair by primitive pair, into one
canonical complex Gaussian integral

    integral of exp(-z^T A z / 2 + b^T z + c) dz
        = (2 pi)^(n/2) det(A)^(-1/2) exp(b^T A^{-1} b / 2 + c),

where A is complex symmetric with positive-definite real part.  Dirac deltas
are substituted exactly, which lowers the integration dimension instead of
approximating a spike.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DivergenceError, DomainError, NumericalFailureError
from .kernels import KernelSpec, kernel_coefficients

Vec = tuple[float, ...]

MAX_DIMENSION = 3
IMAG_RESIDUE_TOL = 1e-10
CONDITION_CAP = 1e12


def as_vec(value) -> Vec:
    """Coerce a scalar or an iterable of reals to a validated coordinate tuple."""
    if isinstance(value, (int, float)):
        value = (value,)
    vec = tuple(float(c) for c in value)
    if not 1 <= len(vec) <= MAX_DIMENSION:
        raise DomainError(f"dimension must be between 1 and {MAX_DIMENSION}, got {len(vec)}")
    if not all(math.isfinite(c) for c in vec):
        raise DomainError(f"non-finite component in {vec!r}")
    return vec


def _finite_complex(z, name: str) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class Delta:
    """Position eigenstate concentrated at a single point."""

    center: Vec

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec(self.center))

    @property
    def dimension(self) -> int:
        return len(self.center)


@dataclass(frozen=True)
class PlaneWave:
    """Momentum eigenstate exp(i p.x); square-summable only under confined kernels."""

    momentum: Vec

    def __post_init__(self):
        object.__setattr__(self, "momentum", as_vec(self.momentum))

    @property
    def dimension(self) -> int:
        return len(self.momentum)


@dataclass(frozen=True)
class Packet:
    """Gaussian packet exp(-|x - center|^2 / (4 width^2)) exp(i momentum.x).

    Unnormalized; the squared amplitude has standard deviation `width`.
    """

    center: Vec
    width: float
    momentum: Vec = None

    def __post_init__(self):
        center = as_vec(self.center)
        object.__setattr__(self, "center", center)
        width = float(self.width)
        if not math.isfinite(width) or width <= 0.0:
            raise DomainError(f"packet width must be positive, got {width!r}")
        object.__setattr__(self, "width", width)
        momentum = as_vec(self.momentum) if self.momentum is not None else (0.0,) * len(center)
        if len(momentum) != len(center):
            raise DomainError("packet momentum and center dimensions differ")
        object.__setattr__(self, "momentum", momentum)

    @property
    def dimension(self) -> int:
        return len(self.center)


Primitive = Union[Delta, PlaneWave, Packet]


def _check_terms(terms, arity: int):
    if not terms:
        raise DomainError("state expression needs at least one term")
    dim = None
    any_nonzero = False
    out = []
    for term in terms:
        if len(term) != 1 + arity:
            raise DomainError(f"term {term!r} does not have {1 + arity} entries")
        coeff = _finite_complex(term[0], "coefficient")
        prims = term[1:]
        for prim in prims:
            if not isinstance(prim, (Delta, PlaneWave, Packet)):
                raise DomainError(f"not a primitive: {prim!r}")
            if dim is None:
                dim = prim.dimension
            elif prim.dimension != dim:
                raise DomainError("all primitives in a state must share one dimension")
        any_nonzero = any_nonzero or coeff != 0
        out.append((coeff, *prims))
    if not any_nonzero:
        raise DomainError("state expression must have a nonzero coefficient")
    return tuple(out), dim


@dataclass(frozen=True)
class StateExpr:
    """Finite complex combination of primitives describing one particle."""

    terms: tuple

    def __post_init__(self):
        terms, dim = _check_terms(self.terms, arity=1)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_dim", dim)

    @property
    def dimension(self) -> int:
        return self._dim

    @classmethod
    def single(cls, prim: Primitive, coeff=1.0) -> "StateExpr":
        return cls(((coeff, prim),))

    def scaled(self, z) -> "StateExpr":
        z = _finite_complex(z, "scale")
        return StateExpr(tuple((c * z, p) for c, p in self.terms))


@dataclass(frozen=True)
class PairStateExpr:
    """Finite complex combination of product primitives for a particle pair."""

    terms: tuple

    def __post_init__(self):
        terms, dim = _check_terms(self.terms, arity=2)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_dim", dim)

    @property
    def dimension(self) -> int:
        return self._dim

    @classmethod
    def single(cls, left: Primitive, right: Primitive, coeff=1.0) -> "PairStateExpr":
        return cls(((coeff, left, right),))

    def scaled(self, z) -> "PairStateExpr":
        z = _finite_complex(z, "scale")
        return PairStateExpr(tuple((c * z, l, r) for c, l, r in self.terms))


AnyState = Union[StateExpr, PairStateExpr]


def blend(wa, a: AnyState, wb, b: AnyState) -> AnyState:
    """Linear combination wa*a + wb*b of two expressions of equal arity."""
    if type(a) is not type(b):
        raise DomainError("cannot blend a single-particle state with a pair state")
    if a.dimension != b.dimension:
        raise DomainError("cannot blend states of different dimensions")
    wa = _finite_complex(wa, "weight")
    wb = _finite_complex(wb, "weight")
    terms = tuple((wa * t[0], *t[1:]) for t in a.terms)
    terms += tuple((wb * t[0], *t[1:]) for t in b.terms)
    return type(a)(terms)


@dataclass
class QuadForm:
    """Canonical complex Gaussian exponent: integrand exp(-z^T A z / 2 + b^T z + c)."""

    matrix: np.ndarray
    linear: np.ndarray
    constant: complex

    @property
    def n(self) -> int:
        return len(self.linear)


def gaussian_integral(form: QuadForm, cond_cap: float = CONDITION_CAP) -> complex:
    """Closed-form value of the canonical Gaussian integral.

    The determinant square root multiplies the principal square roots of the
    eigenvalues of A.  With Re(A) positive definite every eigenvalue lies in
    the right half plane, so this branch is continuous with the real case.

    Raises
    ------
    DomainError
        If the real part of A is not positive definite.
    NumericalFailureError
        If the condition number of A exceeds `cond_cap`.
    """
    n = form.n
    if n == 0:
        return complex(np.exp(form.constant))
    a = np.asarray(form.matrix, dtype=complex)
    b = np.asarray(form.linear, dtype=complex)
    if np.linalg.eigvalsh(a.real).min() <= 0.0:
        raise DomainError("real part of the quadratic form is not positive definite")
    if np.linalg.cond(a) > cond_cap:
        raise NumericalFailureError(
            f"quadratic form is near singular (condition number above {cond_cap:g})")
    sqrt_det = complex(np.prod(np.sqrt(np.linalg.eigvals(a))))
    x = np.linalg.solve(a, b)
    exponent = 0.5 * complex(np.dot(b, x)) + form.constant
    return complex((2.0 * math.pi) ** (n / 2.0) / sqrt_det * np.exp(exponent))


def _profile(prim: Primitive, conjugate: bool):
    """Quadratic coefficient, linear vector and constant of exp(...) for one
    free factor; `conjugate` selects the complex-conjugated side."""
    sign = -1.0 if conjugate else 1.0
    if isinstance(prim, Packet):
        s = 1.0 / (4.0 * prim.width**2)
        mu = np.array(prim.center)
        p = np.array(prim.momentum)
        return s, 2.0 * s * mu + 1j * sign * p, -s * float(np.dot(mu, mu))
    if isinstance(prim, PlaneWave):
        p = np.array(prim.momentum)
        return 0.0, 1j * sign * p, 0.0
    raise DomainError(f"primitive has no free-variable profile: {prim!r}")


def compile_pair(f: Primitive, g: Primitive, kernel: KernelSpec) -> QuadForm:
    """Compile the inner-product integrand k(x,y) f(x) conj(g(y)) to canonical form.

    Deltas substitute their centers exactly: the form has dimension 2d when
    both factors are free, d when one is a delta, and 0 when both are.
    """
    if f.dimension != g.dimension:
        raise DomainError(f"dimension mismatch between {f!r} and {g!r}")
    d = f.dimension
    conf, pair = kernel_coefficients(kernel)
    eye = np.eye(d)

    if isinstance(f, Delta) and isinstance(g, Delta):
        u = np.array(f.center)
        v = np.array(g.center)
        du = u - v
        c = -conf * float(np.dot(u, u) + np.dot(v, v)) - pair * float(np.dot(du, du))
        return QuadForm(np.empty((0, 0), dtype=complex), np.empty(0, dtype=complex), complex(c))

    if isinstance(f, Delta) or isinstance(g, Delta):
        if isinstance(f, Delta):
            anchor = np.array(f.center)
            s, lin, const = _profile(g, conjugate=True)
        else:
            anchor = np.array(g.center)
            s, lin, const = _profile(f, conjugate=False)
        a = 2.0 * (conf + pair + s) * eye
        b = 2.0 * pair * anchor + lin
        c = -(conf + pair) * float(np.dot(anchor, anchor)) + const
        return QuadForm(a.astype(complex), b.astype(complex), complex(c))

    s_f, lin_f, const_f = _profile(f, conjugate=False)
    s_g, lin_g, const_g = _profile(g, conjugate=True)
    margin = (conf + pair + s_f) * (conf + pair + s_g) - pair**2
    if margin <= 0.0:
        raise DivergenceError(
            f"inner product of {type(f).__name__} and {type(g).__name__} diverges "
            f"under {type(kernel).__name__}")
    a = np.zeros((2 * d, 2 * d), dtype=complex)
    a[:d, :d] = 2.0 * (conf + pair + s_f) * eye
    a[d:, d:] = 2.0 * (conf + pair + s_g) * eye
    a[:d, d:] = -2.0 * pair * eye
    a[d:, :d] = -2.0 * pair * eye
    b = np.concatenate([lin_f, lin_g]).astype(complex)
    return QuadForm(a, b, complex(const_f + const_g))


def primitive_overlap(f: Primitive, g: Primitive, kernel: KernelSpec) -> complex:
    """<f, g> under the kernel, linear in f and conjugate-linear in g."""
    return gaussian_integral(compile_pair(f, g, kernel))


def _clamp_norm(total: complex) -> complex:
    tol = IMAG_RESIDUE_TOL * max(1.0, abs(total))
    if abs(total.imag) > tol:
        raise NumericalFailureError(
            f"norm has imaginary residue {total.imag:.3e} beyond tolerance")
    re = total.real
    if re < 0.0:
        if re < -tol:
            raise NumericalFailureError(f"norm came out negative: {re:.3e}")
        re = 0.0
    return complex(re, 0.0)


def inner_product(phi: StateExpr, psi: StateExpr, kernel: KernelSpec) -> complex:
    """Sesquilinear inner product, linear in `phi` and conjugate-linear in `psi`.

    For phi == psi the value is real nonnegative; an imaginary residue within
    1e-10 (relative) is clamped to zero, anything larger raises.
    """
    if not isinstance(phi, StateExpr) or not isinstance(psi, StateExpr):
        raise DomainError("inner_product expects single-particle states")
    if phi.dimension != psi.dimension:
        raise DomainError("states have different dimensions")
    total = 0j
    for ci, fi in phi.terms:
        if ci == 0:
            continue
        for dj, gj in psi.terms:
            if dj == 0:
                continue
            total += ci * dj.conjugate() * primitive_overlap(fi, gj, kernel)
    if phi == psi:
        total = _clamp_norm(total)
    return total


def pair_inner_product(phi: PairStateExpr, psi: PairStateExpr, kernel: KernelSpec) -> complex:
    """Inner product on the tensor-product space: factors multiply per term pair."""
    if not isinstance(phi, PairStateExpr) or not isinstance(psi, PairStateExpr):
        raise DomainError("pair_inner_product expects pair states")
    if phi.dimension != psi.dimension:
        raise DomainError("states have different dimensions")
    total = 0j
    for ci, fl, fr in phi.terms:
        if ci == 0:
            continue
        for dj, gl, gr in psi.terms:
            if dj == 0:
                continue
            total += (ci * dj.conjugate()
                      * primitive_overlap(fl, gl, kernel)
                      * primitive_overlap(fr, gr, kernel))
    if phi == psi:
        total = _clamp_norm(total)
    return total


def overlap(phi: AnyState, psi: AnyState, kernel: KernelSpec) -> complex:
    """Inner product dispatching on single-particle vs pair states."""
    if isinstance(phi, PairStateExpr):
        return pair_inner_product(phi, psi, kernel)
    return inner_product(phi, psi, kernel)


def norm_sq(expr: AnyState, kernel: KernelSpec) -> float:
    """Squared kernel norm of a state (real, nonnegative)."""
    return overlap(expr, expr, kernel).real


def hilbert_norm(expr: AnyState, kernel: KernelSpec) -> float:
    return math.sqrt(norm_sq(expr, kernel))


def _l2_pair(f: Packet, g: Packet) -> complex:
    s_f, lin_f, const_f = _profile(f, conjugate=False)
    s_g, lin_g, const_g = _profile(g, conjugate=True)
    d = f.dimension
    a = 2.0 * (s_f + s_g) * np.eye(d, dtype=complex)
    return gaussian_integral(QuadForm(a, lin_f + lin_g, complex(const_f + const_g)))


def l2_inner_product(phi: StateExpr, psi: StateExpr) -> complex:
    """Ordinary L2 inner product; defined for packet-only states.

    Deltas and plane waves are rejected since they are not square-integrable.
    """
    if phi.dimension != psi.dimension:
        raise DomainError("states have different dimensions")
    for expr in (phi, psi):
        for _, prim in expr.terms:
            if not isinstance(prim, Packet):
                raise DomainError(
                    f"L2 inner product requires packets only, got {type(prim).__name__}")
    total = 0j
    for ci, fi in phi.terms:
        if ci == 0:
            continue
        for dj, gj in psi.terms:
            if dj == 0:
                continue
            total += ci * dj.conjugate() * _l2_pair(fi, gj)
    if phi == psi:
        total = _clamp_norm(total)
    return total
