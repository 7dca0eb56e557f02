"""Order projections of positive operators onto bands generated by operator sets.

Band values are computed from the epsilon-quantified fragment/mask programs:

  band(A, T)(x)       = sup_{eps, S in A} inf { rho*T(y) + rho'*T(x) :
                          y fragment of x, rho a mask, rho*S(x-y) <= eps*S(x) }
  complement(A, T)(x) = inf_{eps, S in A} sup { rho*T(y) : rho*S(y) <= eps*S(x) }

with rho' the complementary mask.  Feasible sets are finite and shrink as eps
decreases, so the eps limit is attained: the schedule stops at the first eps
whose feasible set equals the directly computed eps->0 limit set (from that
step on the set can never change again), and NoStabilization is raised when
max_steps halvings are not enough.  Specializations: principal band of a
single operator (with an alternative complement route through the principal
mask of S(x)), rank-one bands phi(.)*u, and functional targets.  An
independent support-masking oracle cross-checks the principal case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .errors import (
    DimensionMismatch,
    NegativeU,
    NoStabilization,
    NotIncreasing,
    NotPositive,
    SupportTooLarge,
)
from .kernels import DEFAULT_TOL
from .lattice import (
    DEFAULT_SUPPORT_CAP,
    Mask,
    Vector,
    all_masks,
    fragments,
    principal_mask,
)
from .operators import (
    KernelOperator,
    negative_part,
    operator_is_positive,
    operator_leq,
    positive_part,
)

DEFAULT_MASK_CAP = 12


@dataclass(frozen=True)
class EpsSchedule:
    """Geometric epsilon schedule eps0 * factor^k, k = 0..max_steps-1."""

    eps0: float = 1.0
    factor: float = 0.5
    max_steps: int = 40

    def __post_init__(self):
        if self.eps0 <= 0.0:
            raise ValueError("eps0 must be positive")
        if not (0.0 < self.factor < 1.0):
            raise ValueError("factor must lie strictly between 0 and 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")

    def values(self) -> Iterator[float]:
        eps = self.eps0
        for _ in range(self.max_steps):
            yield eps
            eps *= self.factor


@dataclass(frozen=True)
class IncreasingSet:
    """Finite set of positive operators, upward directed: every pair has an
    upper bound inside the set (checked kernelwise, exact for pwl kernels)."""

    ops: tuple[KernelOperator, ...]

    def __post_init__(self):
        ops = tuple(self.ops)
        object.__setattr__(self, "ops", ops)
        if not ops:
            raise ValueError("increasing set must be nonempty")
        shape = (ops[0].m, ops[0].n)
        for op in ops:
            if (op.m, op.n) != shape:
                raise DimensionMismatch("increasing set members must share shape")
            if not operator_is_positive(op):
                raise NotPositive("increasing set members must be positive")
        for a_idx, a in enumerate(ops):
            for b in ops[a_idx + 1:]:
                if not any(
                    operator_leq(a, v) and operator_leq(b, v) for v in ops
                ):
                    raise NotIncreasing(
                        "no internal upper bound for a pair of members"
                    )


@dataclass(frozen=True)
class ProjectionResult:
    """Stabilized projection value with diagnostics.

    stabilized_at: schedule eps at which every member's feasible set reached
    its limit.  feasible_count[i]: fragments satisfying the coordinate-i
    constraint at the limit (for the member selected at coordinate i).
    witness[i]: a (fragment, mask) pair attaining the value at coordinate i.
    """

    value: Vector
    stabilized_at: float
    feasible_count: tuple[int, ...]
    witness: tuple[tuple[Vector, Mask], ...]


def _as_increasing(A: IncreasingSet | Sequence[KernelOperator]) -> IncreasingSet:
    return A if isinstance(A, IncreasingSet) else IncreasingSet(tuple(A))


def _require_positive(name: str, T: KernelOperator, tol: float) -> None:
    if not operator_is_positive(T, tol):
        raise NotPositive(f"operator {name} must be positive")


def _check_caps(x: Vector, m: int, cap_support: int, cap_masks: int, tol: float) -> None:
    if len(x.support(tol)) > cap_support:
        raise SupportTooLarge(
            f"|supp(x)| = {len(x.support(tol))} exceeds cap {cap_support}"
        )
    if m > cap_masks:
        raise SupportTooLarge(f"output dim {m} exceeds mask cap {cap_masks}")


def _stabilize(
    feasible_at: Callable[[float], frozenset],
    limit_set: frozenset,
    sched: EpsSchedule,
) -> float:
    """First schedule eps whose feasible set equals the eps->0 limit set.

    Feasible sets shrink monotonically toward the limit as eps decreases, so
    once equal they stay equal; running out of steps means the program kept
    distinguishing epsilons and the value has not stabilized.
    """
    for eps in sched.values():
        if feasible_at(eps) == limit_set:
            return eps
    raise NoStabilization(
        f"feasible set still above its limit after {sched.max_steps} steps"
    )


def _masked_constraint_ok(
    values: Vector, mask: Mask, bound: Vector, eps: float, tol: float
) -> bool:
    return all(
        values.coords[i] <= eps * bound.coords[i] + tol for i in mask.indices()
    )


class _MemberProgram:
    """Feasibility/value engine for one member S of the generating set.

    sense "band": constraint rho*S(x-y) <= eps*S(x), objective
    rho*T(y) + rho'*T(x), inner inf.  sense "complement": constraint
    rho*S(y) <= eps*S(x), objective rho*T(y), inner sup.  Masks may be
    restricted (principal-complement route).
    """

    def __init__(
        self,
        S: KernelOperator,
        T: KernelOperator,
        x: Vector,
        sense: str,
        masks: list[Mask],
        frags: list[Vector],
        tol: float,
    ):
        self.sense = sense
        self.masks = masks
        self.frags = frags
        self.tol = tol
        self.sx = S(x)
        self.tx = T(x)
        cons_arg = (lambda y: S(x - y)) if sense == "band" else (lambda y: S(y))
        self.cons = [cons_arg(y) for y in frags]
        self.tys = [T(y) for y in frags]
        self.m = T.m

    def feasible(self, eps: float) -> frozenset:
        out = []
        for yi, c in enumerate(self.cons):
            for mi, mask in enumerate(self.masks):
                if _masked_constraint_ok(c, mask, self.sx, eps, self.tol):
                    out.append((yi, mi))
        return frozenset(out)

    def limit_feasible(self) -> frozenset:
        out = []
        for yi, c in enumerate(self.cons):
            for mi, mask in enumerate(self.masks):
                if all(c.coords[i] <= self.tol for i in mask.indices()):
                    out.append((yi, mi))
        return frozenset(out)

    def value_on(self, feas: frozenset) -> tuple[list[float], list[tuple[Vector, Mask]], list[int]]:
        """Componentwise extremum over the feasible pairs, with witnesses and
        per-coordinate feasible-fragment counts."""
        minimize = self.sense == "band"
        vals: list[float] = [math.inf if minimize else -math.inf] * self.m
        wit: list[tuple[Vector, Mask] | None] = [None] * self.m
        for yi, mi in sorted(feas):
            mask = self.masks[mi]
            ty = self.tys[yi]
            for i in range(self.m):
                if self.sense == "band":
                    v = ty.coords[i] if mask.bits[i] else self.tx.coords[i]
                else:
                    v = ty.coords[i] if mask.bits[i] else 0.0
                better = (v < vals[i]) if minimize else (v > vals[i])
                if better:
                    vals[i] = v
                    wit[i] = (self.frags[yi], mask)
        counts = [
            sum(1 for c in self.cons if c.coords[i] <= self.tol)
            for i in range(self.m)
        ]
        return vals, [w for w in wit], counts


def _run_member(
    S: KernelOperator,
    T: KernelOperator,
    x: Vector,
    sense: str,
    masks: list[Mask],
    frags: list[Vector],
    sched: EpsSchedule,
    tol: float,
):
    prog = _MemberProgram(S, T, x, sense, masks, frags, tol)
    limit = prog.limit_feasible()
    eps_at = _stabilize(prog.feasible, limit, sched)
    vals, wit, counts = prog.value_on(limit)
    return vals, wit, counts, eps_at


def project_band_set(
    A: IncreasingSet | Sequence[KernelOperator],
    T: KernelOperator,
    x: Vector,
    sched: EpsSchedule = EpsSchedule(),
    cap_support: int = DEFAULT_SUPPORT_CAP,
    cap_masks: int = DEFAULT_MASK_CAP,
    tol: float = DEFAULT_TOL,
) -> ProjectionResult:
    """Projection of T onto the band generated by the increasing set A, at x."""
    A = _as_increasing(A)
    _require_positive("T", T, tol)
    ref = A.ops[0]
    if (ref.m, ref.n) != (T.m, T.n):
        raise DimensionMismatch("generating set must share the target's shape")
    if T.n != x.dim:
        raise DimensionMismatch(f"operator expects dim {T.n}, got {x.dim}")
    _check_caps(x, T.m, cap_support, cap_masks, tol)

    frags = fragments(x, cap=cap_support, tol=tol)
    masks = all_masks(T.m)
    best: list[float] | None = None
    best_wit: list = []
    best_counts: list[int] = []
    stab = math.inf
    for S in A.ops:
        vals, wit, counts, eps_at = _run_member(
            S, T, x, "band", masks, frags, sched, tol
        )
        stab = min(stab, eps_at)
        if best is None:
            best, best_wit, best_counts = list(vals), list(wit), list(counts)
            continue
        for i in range(T.m):
            if vals[i] > best[i]:
                best[i] = vals[i]
                best_wit[i] = wit[i]
                best_counts[i] = counts[i]
    return ProjectionResult(
        value=Vector(tuple(best)),
        stabilized_at=stab,
        feasible_count=tuple(best_counts),
        witness=tuple(best_wit),
    )


def project_band_set_complement(
    A: IncreasingSet | Sequence[KernelOperator],
    T: KernelOperator,
    x: Vector,
    sched: EpsSchedule = EpsSchedule(),
    cap_support: int = DEFAULT_SUPPORT_CAP,
    cap_masks: int = DEFAULT_MASK_CAP,
    tol: float = DEFAULT_TOL,
) -> ProjectionResult:
    """Disjoint-complement part of T relative to the band of A, at x.

    Contract: band + complement reproduces T(x) (within 1e-7 in tests)."""
    A = _as_increasing(A)
    _require_positive("T", T, tol)
    ref = A.ops[0]
    if (ref.m, ref.n) != (T.m, T.n):
        raise DimensionMismatch("generating set must share the target's shape")
    if T.n != x.dim:
        raise DimensionMismatch(f"operator expects dim {T.n}, got {x.dim}")
    _check_caps(x, T.m, cap_support, cap_masks, tol)

    frags = fragments(x, cap=cap_support, tol=tol)
    masks = all_masks(T.m)
    best: list[float] | None = None
    best_wit: list = []
    best_counts: list[int] = []
    stab = math.inf
    for S in A.ops:
        vals, wit, counts, eps_at = _run_member(
            S, T, x, "complement", masks, frags, sched, tol
        )
        stab = min(stab, eps_at)
        if best is None:
            best, best_wit, best_counts = list(vals), list(wit), list(counts)
            continue
        for i in range(T.m):
            if vals[i] < best[i]:
                best[i] = vals[i]
                best_wit[i] = wit[i]
                best_counts[i] = counts[i]
    return ProjectionResult(
        value=Vector(tuple(best)),
        stabilized_at=stab,
        feasible_count=tuple(best_counts),
        witness=tuple(best_wit),
    )


@dataclass(frozen=True)
class PrincipalProjection:
    band: ProjectionResult
    complement: ProjectionResult
    complement_alt: ProjectionResult


def project_principal(
    S: KernelOperator,
    T: KernelOperator,
    x: Vector,
    sched: EpsSchedule = EpsSchedule(),
    cap_support: int = DEFAULT_SUPPORT_CAP,
    cap_masks: int = DEFAULT_MASK_CAP,
    tol: float = DEFAULT_TOL,
) -> PrincipalProjection:
    """Projection onto the principal band of a single positive S, at x.

    complement_alt recomputes the complement by the second route: the part of
    T(x) outside the principal mask of S(x), plus a sup over masks below that
    principal mask.  Contract: complement_alt matches complement within 1e-7.
    """
    band = project_band_set((S,), T, x, sched, cap_support, cap_masks, tol)
    complement = project_band_set_complement(
        (S,), T, x, sched, cap_support, cap_masks, tol
    )

    rho_sx = principal_mask(S(x), tol)
    outside = rho_sx.complement().apply(T(x))
    frags = fragments(x, cap=cap_support, tol=tol)
    sub_masks = [m for m in all_masks(T.m) if m.leq(rho_sx)]
    vals, wit, counts, eps_at = _run_member(
        S, T, x, "complement", sub_masks, frags, sched, tol
    )
    alt = ProjectionResult(
        value=outside + Vector(tuple(vals)),
        stabilized_at=eps_at,
        feasible_count=tuple(counts),
        witness=tuple(wit),
    )
    return PrincipalProjection(band=band, complement=complement, complement_alt=alt)


@dataclass(frozen=True)
class RankOneProjection:
    band: Vector
    complement: Vector
    band_stabilized_at: float
    complement_stabilized_at: float


def _scalar_stabilize(
    feasible_at: Callable[[float], frozenset],
    limit: frozenset,
    sched: EpsSchedule,
) -> float:
    return _stabilize(feasible_at, limit, sched)


def project_rank_one(
    phi: KernelOperator,
    u: Vector,
    T: KernelOperator,
    x: Vector,
    sched: EpsSchedule = EpsSchedule(),
    cap_support: int = DEFAULT_SUPPORT_CAP,
    tol: float = DEFAULT_TOL,
) -> RankOneProjection:
    """Projection of positive T onto the band of the rank-one operator
    phi(.) * u (phi a positive functional, u >= 0), at x.

    band       = sup_eps inf { mask_u * T(y) : phi(x - y) <= eps * phi(x) }
    complement = mask_u' * T(x)
                 + inf_eps sup { mask_u * T(y) : phi(y) <= eps * phi(x) }
    """
    if phi.m != 1:
        raise DimensionMismatch("phi must be a functional (one row)")
    _require_positive("phi", phi, tol)
    _require_positive("T", T, tol)
    if any(c < -tol for c in u.coords):
        raise NegativeU("direction u must be nonnegative")
    if u.dim != T.m:
        raise DimensionMismatch(f"direction dim {u.dim} vs output dim {T.m}")
    if phi.n != T.n or T.n != x.dim:
        raise DimensionMismatch("phi, T, x must share the input dimension")
    if len(x.support(tol)) > cap_support:
        raise SupportTooLarge("probe support exceeds cap")

    rho_u = principal_mask(u, tol)
    frags = fragments(x, cap=cap_support, tol=tol)
    phix = phi(x).coords[0]
    phi_xy = [phi(x - y).coords[0] for y in frags]
    phi_y = [phi(y).coords[0] for y in frags]
    tys = [T(y) for y in frags]

    def feas_band(eps: float) -> frozenset:
        return frozenset(
            k for k, v in enumerate(phi_xy) if v <= eps * phix + tol
        )

    limit_band = frozenset(k for k, v in enumerate(phi_xy) if v <= tol)
    band_eps = _scalar_stabilize(feas_band, limit_band, sched)
    band = Vector(
        tuple(
            min(tys[k].coords[i] for k in sorted(limit_band)) if rho_u.bits[i] else 0.0
            for i in range(T.m)
        )
    )

    def feas_comp(eps: float) -> frozenset:
        return frozenset(
            k for k, v in enumerate(phi_y) if v <= eps * phix + tol
        )

    limit_comp = frozenset(k for k, v in enumerate(phi_y) if v <= tol)
    comp_eps = _scalar_stabilize(feas_comp, limit_comp, sched)
    sup_part = Vector(
        tuple(
            max(tys[k].coords[i] for k in sorted(limit_comp)) if rho_u.bits[i] else 0.0
            for i in range(T.m)
        )
    )
    complement = rho_u.complement().apply(T(x)) + sup_part
    return RankOneProjection(
        band=band,
        complement=complement,
        band_stabilized_at=band_eps,
        complement_stabilized_at=comp_eps,
    )


def project_functional(
    phi: KernelOperator,
    T: KernelOperator,
    x: Vector,
    sched: EpsSchedule = EpsSchedule(),
    cap_support: int = DEFAULT_SUPPORT_CAP,
    tol: float = DEFAULT_TOL,
) -> float:
    """Projection of the functional T onto the band of the positive
    functional phi, at x:  sup_eps inf { T(y) : phi(x - y) <= eps * phi(x) }.

    A signed T is split into positive and negative parts (kernelwise, which
    is the lattice split for kernel operators) and each part projected."""
    if phi.m != 1 or T.m != 1:
        raise DimensionMismatch("phi and T must be functionals (one row)")
    _require_positive("phi", phi, tol)
    if phi.n != T.n or T.n != x.dim:
        raise DimensionMismatch("phi, T, x must share the input dimension")

    if not operator_is_positive(T, tol):
        pos = project_functional(phi, positive_part(T), x, sched, cap_support, tol)
        neg = project_functional(phi, negative_part(T), x, sched, cap_support, tol)
        return pos - neg

    frags = fragments(x, cap=cap_support, tol=tol)
    phix = phi(x).coords[0]
    phi_xy = [phi(x - y).coords[0] for y in frags]
    t_y = [T(y).coords[0] for y in frags]

    def feas(eps: float) -> frozenset:
        return frozenset(k for k, v in enumerate(phi_xy) if v <= eps * phix + tol)

    limit = frozenset(k for k, v in enumerate(phi_xy) if v <= tol)
    _scalar_stabilize(feas, limit, sched)
    return min(t_y[k] for k in sorted(limit))


def masking_oracle(
    S: KernelOperator,
    T: KernelOperator,
    x: Vector,
    tol: float = DEFAULT_TOL,
) -> Vector:
    """Independent oracle for the principal band value: zero T's addends
    wherever the matching S kernel vanishes at the probe.

    Agrees with the band formula for positive pairs probed away from kernel
    zero crossings."""
    _require_positive("S", S, tol)
    _require_positive("T", T, tol)
    if (S.m, S.n) != (T.m, T.n):
        raise DimensionMismatch("operators must share shape")
    if T.n != x.dim:
        raise DimensionMismatch(f"operator expects dim {T.n}, got {x.dim}")
    sv = S.kernel_values(x)
    tv = T.kernel_values(x)
    return Vector(
        tuple(
            math.fsum(t for s, t in zip(sv[i], tv[i]) if abs(s) > tol)
            for i in range(T.m)
        )
    )


def band_set_profile(
    S: KernelOperator,
    T: KernelOperator,
    x: Vector,
    sched: EpsSchedule = EpsSchedule(),
    sense: str = "band",
    cap_support: int = DEFAULT_SUPPORT_CAP,
    cap_masks: int = DEFAULT_MASK_CAP,
    tol: float = DEFAULT_TOL,
) -> list[tuple[float, Vector]]:
    """Inner optimum at every schedule eps for a single member (diagnostic).

    Values are monotone along the schedule: nondecreasing for the band
    program, nonincreasing for the complement program."""
    if sense not in ("band", "complement"):
        raise ValueError("sense must be 'band' or 'complement'")
    _require_positive("S", S, tol)
    _require_positive("T", T, tol)
    _check_caps(x, T.m, cap_support, cap_masks, tol)
    frags = fragments(x, cap=cap_support, tol=tol)
    masks = all_masks(T.m)
    prog = _MemberProgram(S, T, x, sense, masks, frags, tol)
    out = []
    for eps in sched.values():
        vals, _, _ = prog.value_on(prog.feasible(eps))
        out.append((eps, Vector(tuple(vals))))
    return out
