"""Orthogonally additive operators between finite-dimensional vector lattices.

An operator is an m x n matrix of scalar kernels acting coordinatewise:
T(x)_i = sum_j kernels[i][j](x_j).  Because every kernel vanishes at 0, the
action is orthogonally additive by construction: T(y + z) = T(y) + T(z)
whenever y and z are disjoint.  Functionals are operators with m = 1.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import C0Violation, DimensionMismatch, NegativeU
from .kernels import (
    DEFAULT_TOL,
    FuncKernel,
    PwlKernel,
    ScalarKernel,
    ZERO_KERNEL,
    kernel_add,
    kernel_diff_nonneg,
    kernel_neg_part,
    kernel_pos_part,
)
from .lattice import Vector


@dataclass(frozen=True)
class KernelOperator:
    """m x n matrix of scalar kernels; rows index output coordinates."""

    kernels: tuple[tuple[ScalarKernel, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.kernels)
        object.__setattr__(self, "kernels", rows)
        if not rows or not rows[0]:
            raise ValueError("operator needs at least one kernel")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("kernel matrix rows must have equal length")

    @property
    def m(self) -> int:
        return len(self.kernels)

    @property
    def n(self) -> int:
        return len(self.kernels[0])

    def __call__(self, x: Vector) -> Vector:
        if x.dim != self.n:
            raise DimensionMismatch(f"operator expects dim {self.n}, got {x.dim}")
        return Vector(
            tuple(
                math.fsum(k(c) for k, c in zip(row, x.coords))
                for row in self.kernels
            )
        )

    def kernel_values(self, x: Vector) -> list[list[float]]:
        """The addend table kernels[i][j](x_j); row sums give the evaluation."""
        if x.dim != self.n:
            raise DimensionMismatch(f"operator expects dim {self.n}, got {x.dim}")
        return [[k(c) for k, c in zip(row, x.coords)] for row in self.kernels]

    def descriptor(self) -> dict:
        return {
            "rows": self.m,
            "cols": self.n,
            "kernels": [[k.descriptor() for k in row] for row in self.kernels],
        }


def evaluate(T: KernelOperator, x: Vector) -> Vector:
    return T(x)


def functional_value(phi: KernelOperator, x: Vector) -> float:
    if phi.m != 1:
        raise DimensionMismatch("functional must have a single output coordinate")
    return phi(x).coords[0]


def zero_operator(m: int, n: int) -> KernelOperator:
    return KernelOperator(tuple(tuple(ZERO_KERNEL for _ in range(n)) for _ in range(m)))


def rank_one(
    phi: KernelOperator,
    u: Vector,
    require_nonneg_u: bool = True,
    tol: float = DEFAULT_TOL,
) -> KernelOperator:
    """Operator x -> phi(x) * u built as the kernel matrix u_i * phi-kernels.

    With require_nonneg_u (the default, as positivity-based calculus assumes),
    a negative coordinate of u raises NegativeU.
    """
    if phi.m != 1:
        raise DimensionMismatch("rank-one factor phi must be a functional (one row)")
    if require_nonneg_u and any(c < -tol for c in u.coords):
        raise NegativeU("direction u must be nonnegative")
    row = phi.kernels[0]
    return KernelOperator(tuple(tuple(k.scaled(ui) for k in row) for ui in u.coords))


@dataclass(frozen=True)
class IntegralKernelSpec:
    """Data for quadrature discretization of an integral operator.

    kernel_fn(s, t, r) is the integrand kernel; s_grid are output nodes,
    t_grid input nodes, weights the (strictly positive) quadrature weights,
    one per input node.
    """

    kernel_fn: Callable[[float, float, float], float]
    s_grid: tuple[float, ...]
    t_grid: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "s_grid", tuple(float(v) for v in self.s_grid))
        object.__setattr__(self, "t_grid", tuple(float(v) for v in self.t_grid))
        object.__setattr__(self, "weights", tuple(float(v) for v in self.weights))
        if not self.s_grid or not self.t_grid:
            raise ValueError("grids must be nonempty")
        if len(self.weights) != len(self.t_grid):
            raise DimensionMismatch("one weight per input node required")
        if any(w <= 0.0 for w in self.weights):
            raise ValueError("quadrature weights must be strictly positive")


def discretize_integral(spec: IntegralKernelSpec, tol: float = DEFAULT_TOL) -> KernelOperator:
    """Kernel matrix with entries r -> w_j * K(s_i, t_j, r).

    Raises C0Violation if K(s_i, t_j, 0) != 0 (within tol) at any grid node.
    """
    K = spec.kernel_fn
    for s in spec.s_grid:
        for t in spec.t_grid:
            v0 = float(K(s, t, 0.0))
            if abs(v0) > tol:
                raise C0Violation(
                    f"kernel does not vanish at 0 at node (s={s:g}, t={t:g}): {v0!r}"
                )
    rows = []
    for s in spec.s_grid:
        row = []
        for t, w in zip(spec.t_grid, spec.weights):
            def fn(r: float, s=s, t=t, w=w) -> float:
                return w * float(K(s, t, r))

            row.append(FuncKernel(fn, label=f"{w:g}*K({s:g},{t:g},.)"))
        rows.append(tuple(row))
    return KernelOperator(tuple(rows))


@dataclass(frozen=True)
class ValidationReport:
    positive: bool
    order_bounded_witness: tuple[Vector, Vector]
    orthogonally_additive_ok: bool


def validate(
    T: KernelOperator,
    box: tuple[Vector, Vector],
    samples: int = 64,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> ValidationReport:
    """Check T over the order interval box = [lo, hi].

    positive: every kernel nonnegative at breakpoint/endpoint/sampled
    arguments inside the box projections (exact for pwl kernels).
    order_bounded_witness: coordinatewise [min, max] of T over the box,
    exact for pwl kernels (they attain extrema at breakpoints/endpoints).
    orthogonally_additive_ok: T(x) = T(y) + T(x - y) on sampled disjoint splits.
    """
    lo, hi = box
    if lo.dim != T.n or hi.dim != T.n:
        raise DimensionMismatch("box must match the operator input dimension")
    if not lo.leq(hi, 0.0):
        raise ValueError("box must satisfy lo <= hi")
    rng = random.Random(seed)

    col_args: list[list[float]] = []
    for j in range(T.n):
        a, b = lo.coords[j], hi.coords[j]
        args = {a, b}
        for i in range(T.m):
            args.update(x for x in T.kernels[i][j].breakpoint_args() if a < x < b)
        args.update(rng.uniform(a, b) for _ in range(samples))
        col_args.append(sorted(args))

    positive = True
    mins = [0.0] * T.m
    maxs = [0.0] * T.m
    for i in range(T.m):
        lo_sum = 0.0
        hi_sum = 0.0
        for j in range(T.n):
            vals = [T.kernels[i][j](r) for r in col_args[j]]
            if any(v < -tol for v in vals):
                positive = False
            lo_sum += min(vals)
            hi_sum += max(vals)
        mins[i], maxs[i] = lo_sum, hi_sum

    oa_ok = True
    for _ in range(samples):
        x = Vector(tuple(rng.uniform(a, b) for a, b in zip(lo.coords, hi.coords)))
        keep = [rng.random() < 0.5 for _ in range(T.n)]
        y = Vector(tuple(c if k else 0.0 for c, k in zip(x.coords, keep)))
        delta = T(x) - (T(y) + T(x - y))
        if any(abs(d) > tol for d in delta.coords):
            oa_ok = False
            break

    return ValidationReport(
        positive=positive,
        order_bounded_witness=(Vector(tuple(mins)), Vector(tuple(maxs))),
        orthogonally_additive_ok=oa_ok,
    )


def operator_is_positive(T: KernelOperator, tol: float = DEFAULT_TOL) -> bool:
    """Every kernel nonnegative on all of R (exact for pwl/builtin kernels)."""
    return all(k.nonneg_everywhere(tol) for row in T.kernels for k in row)


def operator_leq(S: KernelOperator, T: KernelOperator, tol: float = DEFAULT_TOL) -> bool:
    """S <= T in the operator order, i.e. T - S positive, decided kernelwise."""
    if (S.m, S.n) != (T.m, T.n):
        raise DimensionMismatch("operators must share shape")
    return all(
        kernel_diff_nonneg(sk, tk, tol)
        for srow, trow in zip(S.kernels, T.kernels)
        for sk, tk in zip(srow, trow)
    )


def operator_add(S: KernelOperator, T: KernelOperator) -> KernelOperator:
    if (S.m, S.n) != (T.m, T.n):
        raise DimensionMismatch("operators must share shape")
    return KernelOperator(
        tuple(
            tuple(kernel_add(sk, tk) for sk, tk in zip(srow, trow))
            for srow, trow in zip(S.kernels, T.kernels)
        )
    )


def operator_scale(T: KernelOperator, a: float) -> KernelOperator:
    return KernelOperator(tuple(tuple(k.scaled(a) for k in row) for row in T.kernels))


def positive_part(T: KernelOperator) -> KernelOperator:
    """Kernelwise positive part; equals the lattice positive part of T because
    the fragment supremum splits over input coordinates."""
    return KernelOperator(
        tuple(tuple(kernel_pos_part(k) for k in row) for row in T.kernels)
    )


def negative_part(T: KernelOperator) -> KernelOperator:
    return KernelOperator(
        tuple(tuple(kernel_neg_part(k) for k in row) for row in T.kernels)
    )


def modulus(T: KernelOperator) -> KernelOperator:
    return operator_add(positive_part(T), negative_part(T))
