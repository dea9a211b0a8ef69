"""Level sets, characteristic points, blocks, and reconstruction.

For a step resolution ``F`` the level set ``T_i`` collects the points where
``F`` has height ``i``.  For a point of ``T_i`` (i >= 1) the projection along
axis ``j`` is the infimum of the contiguous run of axis-``j`` cells around it
that stays in ``T_i``; the vector of projections is the characteristic point,
and cells sharing one characteristic point form a block.  Everything here is
exact cell-index arithmetic: for step functions the infima are breakpoints
(or -inf, which only pathological resolutions produce and which is flagged).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .boxgeom import (
    NEG_INF,
    ExtRat,
    Region,
    _ext_key,
    format_rational,
    is_finite,
)
from .lexalg import LexElement, group_add, meet
from .observable import DiscreteObservable, ObservableError, make_observable
from .spectral import (
    AxiomReport,
    CellIndex,
    StepResolution,
    check_axioms,
    eval_F,
    from_observable,
)


class CharPointError(ValueError):
    """Projection of a level-0 point, or an unsupported dimension."""


class ReconstructionError(ValueError):
    pass


class NotReconstructibleError(ReconstructionError):
    """Adjoined block infima do not sum to the unit."""


class PathologicalResolutionError(ReconstructionError):
    """A block infimum was undefined; only synthetic resolutions reach this."""


ExtPoint = tuple[ExtRat, ...]


def _level(F: StepResolution, idx: CellIndex) -> int:
    return F.values[idx].h


def _run_start(F: StepResolution, idx: CellIndex, axis: int) -> int:
    """Lowest axis index reachable from ``idx`` through cells of equal level."""
    i = _level(F, idx)
    r = idx[axis]
    probe = list(idx)
    while r > 0:
        probe[axis] = r - 1
        if _level(F, tuple(probe)) != i:
            break
        r -= 1
    return r


def _projection_value(F: StepResolution, axis: int, run_start: int) -> ExtRat:
    return F.breakpoints[axis][run_start - 1] if run_start >= 1 else NEG_INF


def projection(F: StepResolution, point: Sequence[Fraction], axis: int) -> ExtRat:
    """Infimum of the axis run of the level set through ``point``."""
    idx = F.cell_of_point(point)
    if _level(F, idx) == 0:
        raise CharPointError(f"point {point} lies in the level-0 set; no projection")
    if not 0 <= axis < F.n:
        raise CharPointError(f"axis {axis} out of range for dimension {F.n}")
    return _projection_value(F, axis, _run_start(F, idx, axis))


def char_point(F: StepResolution, point: Sequence[Fraction]) -> ExtPoint:
    """Vector of per-axis projections of ``point`` within its level set."""
    idx = F.cell_of_point(point)
    if _level(F, idx) == 0:
        raise CharPointError(f"point {point} lies in the level-0 set; no projection")
    return tuple(
        _projection_value(F, j, _run_start(F, idx, j)) for j in range(F.n)
    )


def format_ext_point(p: ExtPoint) -> str:
    return "(" + ", ".join("-inf" if not is_finite(c) else format_rational(c) for c in p) + ")"


@dataclass(frozen=True, slots=True)
class Block:
    """A maximal set of same-level cells sharing one characteristic point."""

    level: int
    char_point: ExtPoint
    cells: tuple[CellIndex, ...]
    region: Region
    landing_levels: tuple[int | None, ...]
    char_point_level: int | None
    t0_adjoined: bool
    infimum: LexElement | None
    flags: tuple[str, ...]

    def to_doc(self) -> dict:
        return {
            "level": self.level,
            "char_point": [
                None if not is_finite(c) else format_rational(c) for c in self.char_point
            ],
            "region": str(self.region),
            "landing_levels": list(self.landing_levels),
            "char_point_level": self.char_point_level,
            "t0_adjoined": self.t0_adjoined,
            "infimum": None if self.infimum is None else str(self.infimum),
            "flags": list(self.flags),
        }


@dataclass(frozen=True, slots=True)
class LevelDecomposition:
    """Exact region of each level 0..k; pathological inputs are flagged."""

    regions: dict[int, Region]
    axioms: AxiomReport
    pathological: bool

    def to_doc(self) -> dict:
        return {
            "pathological": self.pathological,
            "levels": {str(i): str(r) for i, r in sorted(self.regions.items())},
        }


@dataclass(frozen=True, slots=True)
class BlockReport:
    """All blocks of a resolution, grouped by level."""

    k: int
    n: int
    levels: dict[int, tuple[Block, ...]]
    axioms: AxiomReport
    pathological: bool

    def all_blocks(self) -> list[Block]:
        return [b for i in sorted(self.levels) for b in self.levels[i]]

    def char_points(self) -> list[ExtPoint]:
        """Distinct characteristic points across all levels, sorted."""
        pts = {b.char_point for b in self.all_blocks()}
        return sorted(pts, key=lambda p: tuple(_ext_key(c) for c in p))

    def level_counts(self) -> dict[int, int]:
        return {i: len(bs) for i, bs in sorted(self.levels.items())}

    def to_doc(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "pathological": self.pathological,
            "axioms_ok": self.axioms.ok,
            "levels": {
                str(i): [b.to_doc() for b in bs] for i, bs in sorted(self.levels.items())
            },
            "char_points": [format_ext_point(p) for p in self.char_points()],
            "counts": {str(i): len(bs) for i, bs in sorted(self.levels.items())},
        }


def level_regions(F: StepResolution) -> LevelDecomposition:
    """Group cells by the height of their value into exact regions."""
    axioms = check_axioms(F)
    boxes: dict[int, list] = {i: [] for i in range(F.signature.k + 1)}
    for idx in F.cells():
        boxes[_level(F, idx)].append(F.cell_box(idx))
    regions = {i: Region(F.n, bs) for i, bs in boxes.items()}
    return LevelDecomposition(regions, axioms, not axioms.ok)


def all_blocks(F: StepResolution) -> BlockReport:
    """Compute every block of every nonzero level."""
    axioms = check_axioms(F)
    groups: dict[tuple[int, ExtPoint], list[tuple[CellIndex, tuple[int, ...]]]] = {}
    for idx in F.cells():
        i = _level(F, idx)
        if i == 0:
            continue
        starts = tuple(_run_start(F, idx, j) for j in range(F.n))
        cp = tuple(_projection_value(F, j, starts[j]) for j in range(F.n))
        groups.setdefault((i, cp), []).append((idx, starts))

    levels: dict[int, list[Block]] = {}
    any_flag = False
    for (i, cp), members in sorted(
        groups.items(), key=lambda kv: (kv[0][0], tuple(_ext_key(c) for c in kv[0][1]))
    ):
        cells = tuple(sorted(idx for idx, _ in members))
        flags: list[str] = []
        if any(not is_finite(c) for c in cp):
            flags.append("minus_infinity_projection")

        # Landing level per axis: the level at the point with that coordinate
        # replaced by its projection.  Must be consistent across members and
        # strictly below the block level for well-behaved resolutions.
        landing: list[int | None] = []
        adjoined = True
        for j in range(F.n):
            seen: set[int] = set()
            for idx, starts in members:
                r0 = starts[j]
                if r0 == 0:
                    adjoined = False
                    continue
                probe = idx[:j] + (r0 - 1,) + idx[j + 1 :]
                seen.add(_level(F, probe))
            if not seen:
                landing.append(None)
                continue
            if len(seen) > 1:
                flags.append(f"inconsistent_landing_axis_{j}")
                landing.append(None)
                adjoined = False
            else:
                lv = seen.pop()
                landing.append(lv)
                if lv != 0:
                    adjoined = False
                if lv >= i:
                    flags.append(f"landing_not_below_axis_{j}")

        if all(is_finite(c) for c in cp):
            cp_level = _level(F, F.cell_of_point(cp))
        else:
            cp_level = None

        inf: LexElement | None = None
        for idx in cells:
            v = F.values[idx]
            inf = v if inf is None else meet(inf, v)
        if inf is not None and inf.h != i:
            flags.append("infimum_outside_level")
            inf = None

        region = Region(F.n, [F.cell_box(idx) for idx in cells])
        block = Block(
            level=i,
            char_point=cp,
            cells=cells,
            region=region,
            landing_levels=tuple(landing),
            char_point_level=cp_level,
            t0_adjoined=adjoined,
            infimum=inf,
            flags=tuple(flags),
        )
        any_flag = any_flag or bool(flags)
        levels.setdefault(i, []).append(block)

    return BlockReport(
        k=F.signature.k,
        n=F.n,
        levels={i: tuple(bs) for i, bs in levels.items()},
        axioms=axioms,
        pathological=(not axioms.ok) or any_flag,
    )


def blocks(F: StepResolution, level: int) -> tuple[Block, ...]:
    return all_blocks(F).levels.get(level, ())


def block_infimum(F: StepResolution, block: Block) -> LexElement | None:
    """Lattice meet of F over the block; lies in the block's level stratum."""
    inf: LexElement | None = None
    for idx in block.cells:
        v = F.values[idx]
        inf = v if inf is None else meet(inf, v)
    if inf is not None and inf.h != block.level:
        return None
    return inf


def t0_adjoined(F: StepResolution, block: Block) -> bool:
    """Whether every per-axis replaced point of every member lands in T_0."""
    for idx in block.cells:
        for j in range(F.n):
            r0 = _run_start(F, idx, j)
            if r0 == 0:
                return False
            probe = idx[:j] + (r0 - 1,) + idx[j + 1 :]
            if _level(F, probe) != 0:
                return False
    return True


# --- reconstruction -----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class MismatchReport:
    """Adjoined infima summed to the unit, yet the induced observable differs."""

    candidate: DiscreteObservable
    witness_point: tuple[Fraction, ...]
    witness_cell: str
    value_f: LexElement
    value_candidate: LexElement

    def to_doc(self) -> dict:
        return {
            "reconstructible": False,
            "witness_point": [format_rational(c) for c in self.witness_point],
            "witness_cell": self.witness_cell,
            "value": str(self.value_f),
            "candidate_value": str(self.value_candidate),
        }


def reconstruct(F: StepResolution) -> DiscreteObservable | MismatchReport:
    """Invert the resolution from its T_0-adjoined blocks, if possible.

    Places each adjoined block's infimum at its characteristic point; when the
    infima sum to the unit, the induced observable is verified cell by cell
    against ``F``.  A verified match returns the observable; a failed
    verification returns a :class:`MismatchReport` naming the first differing
    cell.  Infima that do not sum to the unit raise
    :class:`NotReconstructibleError`; undefined infima raise
    :class:`PathologicalResolutionError`.
    """
    report = all_blocks(F)
    adjoined = [b for b in report.all_blocks() if b.t0_adjoined]
    weights: list[LexElement] = []
    points: list[tuple[Fraction, ...]] = []
    for b in adjoined:
        if b.infimum is None:
            raise PathologicalResolutionError(
                f"block at {format_ext_point(b.char_point)} has an undefined infimum"
            )
        if any(not is_finite(c) for c in b.char_point):
            raise PathologicalResolutionError(
                f"adjoined block with infinite characteristic point {format_ext_point(b.char_point)}"
            )
        weights.append(b.infimum)
        points.append(tuple(b.char_point))
    total = F.signature.zero
    for w in weights:
        total = group_add(total, w)
    if total != F.signature.unit:
        raise NotReconstructibleError(
            f"adjoined block infima sum to {total}, not the unit {F.signature.unit}"
        )
    if len(set(points)) != len(points):
        raise NotReconstructibleError("two adjoined blocks share a characteristic point")
    try:
        candidate = make_observable(F.signature, F.n, list(zip(points, weights)))
    except ObservableError as exc:
        raise NotReconstructibleError(str(exc)) from exc

    F2 = from_observable(candidate)
    merged = [
        tuple(sorted(set(F.breakpoints[j]) | set(F2.breakpoints[j]))) for j in range(F.n)
    ]
    for idx in product(*[range(len(bs) + 1) for bs in merged]):
        rep = tuple(
            merged[j][idx[j]] if idx[j] < len(merged[j]) else merged[j][-1] + 1
            for j in range(F.n)
        )
        got = eval_F(F, rep)
        want = eval_F(F2, rep)
        if got != want:
            cell_text = "x".join(
                _merged_cell_text(merged[j], idx[j]) for j in range(F.n)
            )
            return MismatchReport(
                candidate=candidate,
                witness_point=rep,
                witness_cell=cell_text,
                value_f=got,
                value_candidate=want,
            )
    return candidate


def _merged_cell_text(breaks: tuple[Fraction, ...], r: int) -> str:
    lo = "-inf" if r == 0 else format_rational(breaks[r - 1])
    hi = "+inf" if r == len(breaks) else format_rational(breaks[r])
    return f"({lo},{hi}{']' if r < len(breaks) else ')'}"


# --- combinatorial checks ------------------------------------------------------


@dataclass(frozen=True, slots=True)
class BoundsCheck:
    """Per-level and total characteristic-point counts against their limits."""

    per_level: tuple[tuple[int, int, int], ...]  # (level, count, limit)
    total: int
    total_limit: int

    @property
    def ok(self) -> bool:
        return self.total <= self.total_limit and all(
            c <= lim for _, c, lim in self.per_level
        )

    def to_doc(self) -> dict:
        return {
            "ok": self.ok,
            "per_level": [
                {"level": i, "count": c, "limit": lim, "margin": lim - c}
                for i, c, lim in self.per_level
            ],
            "total": self.total,
            "total_limit": self.total_limit,
            "total_margin": self.total_limit - self.total,
        }


def bounds_check(report: BlockReport, k: int | None = None) -> BoundsCheck:
    """Check count <= min(k, k-i+1) per level and <= k(k+1)/2 in total."""
    if k is None:
        k = report.k
    per_level = tuple(
        (i, len(report.levels.get(i, ())), min(k, k - i + 1)) for i in range(1, k + 1)
    )
    total = len(report.char_points())
    return BoundsCheck(per_level, total, k * (k + 1) // 2)


@dataclass(frozen=True, slots=True)
class RaysResult:
    ok: bool
    witness: dict | None = None


def rays_check(F: StepResolution, point: ExtPoint) -> RaysResult:
    """Strict level increase across a characteristic point along far rays.

    For every grid height t above the point, each location left of (or at)
    the point's first coordinate must have strictly smaller level than each
    location right of it; symmetrically for the second coordinate.  Two
    dimensions only.
    """
    if F.n != 2:
        raise CharPointError("ray checks are defined for two dimensions only")

    def split_index(axis: int, v: ExtRat) -> int:
        if not is_finite(v):
            return 0
        breaks = F.breakpoints[axis]
        try:
            pos = breaks.index(v)
        except ValueError:
            raise CharPointError(f"{v} is not a grid value on axis {axis}") from None
        return pos + 1

    sx = split_index(0, point[0])
    sy = split_index(1, point[1])
    m0, m1 = F.shape

    # vertical rays: heights strictly above point[1]
    for t in range(sy, m1 + 1):
        lo = [F.values[(r, t)].h for r in range(0, sx)]
        hi = [F.values[(r, t)].h for r in range(sx, m0 + 1)]
        if lo and hi and max(lo) >= min(hi):
            return RaysResult(
                False,
                {
                    "direction": "vertical",
                    "t_cell": t,
                    "max_left_level": max(lo),
                    "min_right_level": min(hi),
                },
            )
    # horizontal rays: abscissas strictly right of point[0]
    for s in range(sx, m0 + 1):
        lo = [F.values[(s, c)].h for c in range(0, sy)]
        hi = [F.values[(s, c)].h for c in range(sy, m1 + 1)]
        if lo and hi and max(lo) >= min(hi):
            return RaysResult(
                False,
                {
                    "direction": "horizontal",
                    "s_cell": s,
                    "max_below_level": max(lo),
                    "min_above_level": min(hi),
                },
            )
    return RaysResult(True)


def max_antichain(report: BlockReport) -> int | None:
    """Largest pairwise-incomparable set of characteristic points (n = 2 only).

    Returns None for other dimensions.
    """
    if report.n != 2:
        return None
    pts = report.char_points()
    if not pts:
        return 0
    # sorted by (x asc, y asc); an antichain is strictly x-increasing and
    # y-decreasing, so a quadratic pass suffices at these sizes
    best = [1] * len(pts)
    for i, (xi, yi) in enumerate(pts):
        for j in range(i):
            xj, yj = pts[j]
            if _ext_key(xj) < _ext_key(xi) and _ext_key(yj) > _ext_key(yi):
                best[i] = max(best[i], best[j] + 1)
    return max(best)


def block_cube_check(F: StepResolution, report: BlockReport) -> tuple[bool, dict | None]:
    """Every grid cell strictly above a block's characteristic point and below
    some member belongs to the block."""
    for block in report.all_blocks():
        lows = []
        for j, c in enumerate(block.char_point):
            if not is_finite(c):
                lows.append(0)
            else:
                lows.append(F.breakpoints[j].index(c) + 1)
        members = set(block.cells)
        highs = [max(idx[j] for idx in members) for j in range(F.n)]
        box = list(product(*[range(lows[j], highs[j] + 1) for j in range(F.n)]))
        dominated = {
            c: any(all(mi >= ci for mi, ci in zip(m, c)) for m in members) for c in box
        }
        for c in box:
            if dominated[c] and c not in members:
                return False, {
                    "block_char_point": format_ext_point(block.char_point),
                    "level": block.level,
                    "cell": list(c),
                }
    return True, None
