"""Finite-dimensional vector lattice core.

Vectors carry the coordinatewise order, masks are the band projections of the
coordinatewise structure, and fragments of x are the vectors that agree with x
on a support subset and vanish elsewhere.  Everything is immutable; all
tolerance-based comparisons take an explicit ``tol`` (default 1e-9).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .errors import DimensionMismatch, NotConverged, NotPositiveUnit, SupportTooLarge

DEFAULT_TOL = 1e-9
DEFAULT_SUPPORT_CAP = 20

_abs = abs  # plain builtin; Vector has a method of the same name


@dataclass(frozen=True)
class Vector:
    """Element of R^d with the coordinatewise lattice order."""

    coords: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(c) for c in self.coords)
        if not pts:
            raise ValueError("vector must have at least one coordinate")
        if any(not math.isfinite(c) for c in pts):
            raise ValueError("vector coordinates must be finite")
        object.__setattr__(self, "coords", pts)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @staticmethod
    def zero(dim: int) -> "Vector":
        return Vector((0.0,) * dim)

    @staticmethod
    def ones(dim: int) -> "Vector":
        return Vector((1.0,) * dim)

    def _check_dim(self, other: "Vector") -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(f"dim {self.dim} vs {other.dim}")

    def __add__(self, other: "Vector") -> "Vector":
        self._check_dim(other)
        return Vector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check_dim(other)
        return Vector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vector":
        return Vector(tuple(-a for a in self.coords))

    def scale(self, a: float) -> "Vector":
        return Vector(tuple(a * c for c in self.coords))

    def join(self, other: "Vector") -> "Vector":
        self._check_dim(other)
        return Vector(tuple(max(a, b) for a, b in zip(self.coords, other.coords)))

    def meet(self, other: "Vector") -> "Vector":
        self._check_dim(other)
        return Vector(tuple(min(a, b) for a, b in zip(self.coords, other.coords)))

    def abs(self) -> "Vector":
        return Vector(tuple(_abs(c) for c in self.coords))

    def pos_part(self) -> "Vector":
        return Vector(tuple(c if c > 0.0 else 0.0 for c in self.coords))

    def neg_part(self) -> "Vector":
        return Vector(tuple(-c if c < 0.0 else 0.0 for c in self.coords))

    def leq(self, other: "Vector", tol: float = DEFAULT_TOL) -> bool:
        self._check_dim(other)
        return all(a <= b + tol for a, b in zip(self.coords, other.coords))

    def isclose(self, other: "Vector", tol: float = DEFAULT_TOL) -> bool:
        self._check_dim(other)
        return all(_abs(a - b) <= tol for a, b in zip(self.coords, other.coords))

    def support(self, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if _abs(c) > tol)


def vec(*coords: float) -> Vector:
    return Vector(tuple(coords))


@dataclass(frozen=True)
class LatticeOps:
    join: Vector
    meet: Vector
    abs_v: Vector
    pos_v: Vector
    neg_v: Vector


def lattice_ops(v: Vector, w: Vector) -> LatticeOps:
    """All coordinatewise lattice values for a pair: join/meet plus |v|, v+, v-."""
    return LatticeOps(
        join=v.join(w),
        meet=v.meet(w),
        abs_v=v.abs(),
        pos_v=v.pos_part(),
        neg_v=v.neg_part(),
    )


def is_disjoint(v: Vector, w: Vector, tol: float = DEFAULT_TOL) -> bool:
    """|v| ^ |w| = 0 within tol."""
    v._check_dim(w)
    return all(min(_abs(a), _abs(b)) <= tol for a, b in zip(v.coords, w.coords))


def fragments(x: Vector, cap: int = DEFAULT_SUPPORT_CAP, tol: float = DEFAULT_TOL) -> list[Vector]:
    """All 2^|supp(x)| fragments of x, by support bitmask ascending.

    Bit k of the bitmask selects the k-th support coordinate in increasing
    coordinate order.  Raises SupportTooLarge when |supp(x)| exceeds cap.
    """
    supp = x.support(tol)
    if len(supp) > cap:
        raise SupportTooLarge(f"|supp(x)| = {len(supp)} exceeds cap {cap}")
    out = []
    for bm in range(1 << len(supp)):
        coords = [0.0] * x.dim
        for k, idx in enumerate(supp):
            if bm >> k & 1:
                coords[idx] = x.coords[idx]
        out.append(Vector(tuple(coords)))
    return out


def is_fragment(z: Vector, x: Vector, tol: float = DEFAULT_TOL) -> bool:
    """True iff every coordinate of z is 0 or x_i (within tol)."""
    z._check_dim(x)
    return all(
        min(_abs(zc), _abs(zc - xc)) <= tol
        for zc, xc in zip(z.coords, x.coords)
    )


def is_partition_of(x: Vector, parts: Sequence[Vector], tol: float = DEFAULT_TOL) -> bool:
    """True iff parts are pairwise disjoint fragments of x that sum to x."""
    if not parts:
        return False
    total = Vector.zero(x.dim)
    for p in parts:
        if not is_fragment(p, x, tol):
            return False
        total = total + p
    for i, p in enumerate(parts):
        for q in parts[i + 1:]:
            if not is_disjoint(p, q, tol):
                return False
    return total.isclose(x, tol)


@dataclass(frozen=True)
class Mask:
    """Coordinate selection; applying it is the band projection for that band."""

    bits: tuple[bool, ...]

    def __post_init__(self):
        bits = tuple(bool(b) for b in self.bits)
        if not bits:
            raise ValueError("mask must have at least one coordinate")
        object.__setattr__(self, "bits", bits)

    @property
    def dim(self) -> int:
        return len(self.bits)

    @staticmethod
    def full(dim: int) -> "Mask":
        return Mask((True,) * dim)

    @staticmethod
    def empty(dim: int) -> "Mask":
        return Mask((False,) * dim)

    @staticmethod
    def from_indices(dim: int, indices: Sequence[int]) -> "Mask":
        bits = [False] * dim
        for i in indices:
            bits[i] = True
        return Mask(tuple(bits))

    def _check_dim(self, other: "Mask") -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(f"mask dim {self.dim} vs {other.dim}")

    def apply(self, v: Vector) -> Vector:
        if self.dim != v.dim:
            raise DimensionMismatch(f"mask dim {self.dim} vs vector dim {v.dim}")
        return Vector(tuple(c if b else 0.0 for b, c in zip(self.bits, v.coords)))

    def __and__(self, other: "Mask") -> "Mask":
        self._check_dim(other)
        return Mask(tuple(a and b for a, b in zip(self.bits, other.bits)))

    def __or__(self, other: "Mask") -> "Mask":
        self._check_dim(other)
        return Mask(tuple(a or b for a, b in zip(self.bits, other.bits)))

    def complement(self) -> "Mask":
        return Mask(tuple(not b for b in self.bits))

    def leq(self, other: "Mask") -> bool:
        # order of projections: rho <= rho' iff rho*rho' = rho, i.e. bits subset
        self._check_dim(other)
        return all((not a) or b for a, b in zip(self.bits, other.bits))

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bits) if b)

    @property
    def is_empty(self) -> bool:
        return not any(self.bits)

    @property
    def is_full(self) -> bool:
        return all(self.bits)

    def bitmask(self) -> int:
        return sum(1 << i for i, b in enumerate(self.bits) if b)


def all_masks(dim: int) -> list[Mask]:
    """All 2^dim masks, ascending by bitmask (bit i = coordinate i)."""
    return [
        Mask(tuple(bm >> i & 1 == 1 for i in range(dim)))
        for bm in range(1 << dim)
    ]


@dataclass(frozen=True)
class MaskAlgebra:
    meet: Mask
    join: Mask
    complement_of_first: Mask
    leq: bool


def mask_algebra(rho: Mask, rho2: Mask) -> MaskAlgebra:
    """Boolean-algebra data for a mask pair (meet = composition, join, complement, order)."""
    return MaskAlgebra(
        meet=rho & rho2,
        join=rho | rho2,
        complement_of_first=rho.complement(),
        leq=rho.leq(rho2),
    )


def principal_mask(f: Vector, tol: float = DEFAULT_TOL) -> Mask:
    """Mask of the band generated by f: coordinate i selected iff |f_i| > tol."""
    return Mask(tuple(_abs(c) > tol for c in f.coords))


def band_project(rho: Mask, v: Vector) -> Vector:
    return rho.apply(v)


def principal_projection_sup_form(
    f: Vector, g: Vector, max_n: int = 1_000_000
) -> Vector:
    """Projection of g >= 0 onto the band of f, computed as sup_n (g ^ n|f|).

    Slow reference path: iterates n until the meet stops changing (which is
    exact -- each coordinate either reaches g_i and stays, or is pinned at 0).
    """
    if not Vector.zero(g.dim).leq(g, 0.0):
        raise ValueError("sup-form projection requires g >= 0")
    af = f.abs()
    prev = g.meet(af)
    n = 1
    while n < max_n:
        n += 1
        cur = g.meet(af.scale(float(n)))
        if cur == prev:
            return cur
        prev = cur
    raise NotConverged(f"sup form did not stabilize within {max_n} steps")


IndexedItem = Union[Vector, Mask]


@dataclass(frozen=True)
class IndexedFamily:
    """Finite labeled family (labels are opaque, order gives the total order)."""

    labels: tuple[str, ...]
    items: tuple[IndexedItem, ...]

    def __post_init__(self):
        labels = tuple(str(l) for l in self.labels)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "items", tuple(self.items))
        if len(labels) != len(self.items):
            raise ValueError("labels and items must have equal length")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be unique")

    def __len__(self) -> int:
        return len(self.items)

    def pairs(self) -> Iterator[tuple[str, IndexedItem]]:
        return iter(zip(self.labels, self.items))

    def get(self, label: str) -> IndexedItem:
        return self.items[self.labels.index(label)]


def is_partition_of_unity(masks: Sequence[Mask] | IndexedFamily) -> bool:
    """True iff the masks are pairwise disjoint and join to the identity."""
    items = list(masks.items) if isinstance(masks, IndexedFamily) else list(masks)
    if not items:
        return False
    dim = items[0].dim
    union = Mask.empty(dim)
    for i, m in enumerate(items):
        if m.dim != dim:
            raise DimensionMismatch("masks must share a dimension")
        for q in items[i + 1:]:
            if not (m & q).is_empty:
                return False
        union = union | m
    return union.is_full


def order_limit_witness(
    seq: IndexedFamily,
    x: Vector,
    eps: float,
    u: Vector,
    tol: float = DEFAULT_TOL,
) -> IndexedFamily:
    """Partition of unity certifying |x_b - x| <= eps*u from each coordinate's
    earliest stable index onward.

    Coordinate i is assigned to the earliest label L such that
    |x_b - x|_i <= eps*u_i for every b >= L; labels whose mask comes out empty
    are dropped.  Raises NotConverged when some coordinate never settles and
    NotPositiveUnit when u has a zero coordinate.
    """
    if len(seq) == 0:
        raise ValueError("sequence must be nonempty")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if u.dim != x.dim:
        raise DimensionMismatch(f"unit dim {u.dim} vs {x.dim}")
    if any(c <= tol for c in u.coords):
        raise NotPositiveUnit("regulating unit must be strictly positive")

    vectors = []
    for label, item in seq.pairs():
        if not isinstance(item, Vector):
            raise ValueError("sequence items must be vectors")
        if item.dim != x.dim:
            raise DimensionMismatch(f"sequence item dim {item.dim} vs {x.dim}")
        vectors.append(item)

    n_steps = len(vectors)
    devs = [(v - x).abs() for v in vectors]
    # suffix_max[k][i] = max over b >= k of |x_b - x|_i
    suffix = [list(devs[-1].coords)]
    for k in range(n_steps - 2, -1, -1):
        suffix.append([max(a, b) for a, b in zip(devs[k].coords, suffix[-1])])
    suffix.reverse()

    assigned: list[int] = []
    for i in range(x.dim):
        bound = eps * u.coords[i] + tol
        first = next((k for k in range(n_steps) if suffix[k][i] <= bound), None)
        if first is None:
            raise NotConverged(
                f"coordinate {i} never satisfies |x_b - x| <= eps*u from any index on"
            )
        assigned.append(first)

    labels_out = []
    masks_out = []
    for k, label in enumerate(seq.labels):
        idxs = [i for i, a in enumerate(assigned) if a == k]
        if idxs:
            labels_out.append(label)
            masks_out.append(Mask.from_indices(x.dim, idxs))
    return IndexedFamily(tuple(labels_out), tuple(masks_out))
