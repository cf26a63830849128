"""k-level linear program instances and the exact solver.

A k-level instance is a chain of nested minimizations: player l picks its
block of variables to minimize its objective subject to its linear rows and
to the remaining players acting optimally (the optimistic convention: ties
among optimal followers resolve in the leader's favor).

The solver materializes the classic value-function reformulation bottom-up:
the last level's feasible set is a single generalized polyhedron; each level
above replaces the deeper players' optimality by "deeper objective <= deeper
value function (+ eps)", refined over the pieces of that value function. The
level-1 feasible set then comes out as a union of generalized polyhedra over
the full variable space, and optimal value, attainment, and witnesses reduce
to exact linear minimization over that union.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactnum import ZERO, Vec, dot, frac, vec, zeros
from .genpoly import NEG_INF, POS_INF, ExtReal, GenPoly
from .pwl import AFFINE, MINUS_INF, Piece, PwlFunc, lp_value_function

INFEASIBLE = "INFEASIBLE"
UNBOUNDED = "UNBOUNDED"
FINITE = "FINITE"


@dataclass(frozen=True)
class LevelRow:
    """One linear constraint, coefficients over the full variable vector."""

    coeffs: Vec
    rhs: Fraction
    strict: bool = False


@dataclass(frozen=True)
class Level:
    """One player's rows and objective (full-width, zero on earlier blocks)."""

    rows: tuple[LevelRow, ...]
    objective: Vec


@dataclass(frozen=True)
class MlpInstance:
    dims: tuple[int, ...]
    levels: tuple[Level, ...]
    eps: Fraction = ZERO

    def __post_init__(self):
        if not self.dims:
            raise ValueError("need at least one level")
        if any(n < 1 for n in self.dims):
            raise ValueError("every level needs at least one variable")
        if len(self.levels) != len(self.dims):
            raise ValueError("dims and levels disagree on the number of players")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")
        total = sum(self.dims)
        for li, level in enumerate(self.levels):
            if len(level.objective) != total:
                raise ValueError(f"level {li + 1} objective has wrong width")
            cut = sum(self.dims[:li])
            if any(q != 0 for q in level.objective[:cut]):
                raise ValueError(
                    f"level {li + 1} objective touches earlier players' variables"
                )
            for ri, row in enumerate(level.rows):
                if len(row.coeffs) != total:
                    raise ValueError(f"level {li + 1} row {ri} has wrong width")

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return sum(self.dims)

    def prefix_n(self, level: int) -> int:
        """Number of variables owned by players before ``level`` (1-based)."""
        return sum(self.dims[: level - 1])


def build_instance(dims, level_rows, objectives, eps=0) -> MlpInstance:
    """Assemble an instance from full-width row triples and objectives.

    ``level_rows[l]`` is a list of (coeffs, rhs) or (coeffs, rhs, strict);
    ``objectives[l]`` is the full-width objective of player l+1.
    """
    levels = []
    for rows, objective in zip(level_rows, objectives):
        packed = []
        for entry in rows:
            coeffs, rhs, *flag = entry
            packed.append(LevelRow(vec(coeffs), frac(rhs), bool(flag[0]) if flag else False))
        levels.append(Level(tuple(packed), vec(objective)))
    return MlpInstance(tuple(int(n) for n in dims), tuple(levels), frac(eps))


@dataclass(frozen=True)
class SolveReport:
    status: str
    value: ExtReal
    attained: bool
    witness: Vec | None


@dataclass(frozen=True)
class FeasibleSetDesc:
    level: int
    cells: tuple[GenPoly, ...]


@dataclass(frozen=True)
class _Analysis:
    cells: dict[int, tuple[GenPoly, ...]]
    vfuncs: dict[int, PwlFunc]


def _level_poly(inst: MlpInstance, level: int) -> GenPoly:
    rows = inst.levels[level - 1].rows
    return GenPoly(
        inst.total,
        weak=tuple((r.coeffs, r.rhs) for r in rows if not r.strict),
        strict=tuple((r.coeffs, r.rhs) for r in rows if r.strict),
    )


@lru_cache(maxsize=None)
def _analysis(inst: MlpInstance) -> _Analysis:
    k, n = inst.k, inst.total
    cells: dict[int, tuple[GenPoly, ...]] = {k: (_level_poly(inst, k),)}
    vfuncs: dict[int, PwlFunc] = {}
    for level in range(k, 1, -1):
        prefix = inst.prefix_n(level)
        suffix = n - prefix
        objective = inst.levels[level - 1].objective[prefix:]
        live = [c for c in cells[level] if not c.is_empty()]
        if live:
            # reorder to (own-and-deeper variables, then the parameters)
            order = list(range(prefix, n)) + list(range(prefix))
            vfuncs[level] = lp_value_function(
                [c.permuted(order) for c in live], suffix, objective
            )
        else:
            vfuncs[level] = PwlFunc.constant(prefix, Piece.plus_inf())
        cells[level - 1] = _refine_level(inst, level - 1, live, vfuncs[level])
    return _Analysis(cells, vfuncs)


def _refine_level(
    inst: MlpInstance, level: int, deeper_cells: Sequence[GenPoly], vf: PwlFunc
) -> tuple[GenPoly, ...]:
    """Feasible-graph cells of ``level`` from the next level's cells and value
    function: own rows, plus "deeper objective <= value piece + eps" on each
    piece region (+inf pieces add nothing, -inf pieces are infeasible)."""
    n = inst.total
    own = _level_poly(inst, level)
    deeper_obj = inst.levels[level].objective  # objective of player level+1
    out = []
    for cell in deeper_cells:
        base = cell.intersect(own)
        for region, piece in vf.cells:
            if piece.kind == MINUS_INF:
                continue
            refined = base.intersect(region.extended(n))
            if piece.kind == AFFINE:
                lifted = piece.coeffs + zeros(n - len(piece.coeffs))
                row = tuple(a - b for a, b in zip(lifted, deeper_obj))
                refined = refined.with_row(row, -piece.offset - inst.eps)
            if not refined.is_empty():
                out.append(refined)
    return tuple(out)


def value_functions(inst: MlpInstance) -> list[PwlFunc]:
    """Value functions of players k down to 2 (player l's is over x_1..x_{l-1})."""
    analysis = _analysis(inst)
    return [analysis.vfuncs[level] for level in range(inst.k, 1, -1)]


def feasible_set(inst: MlpInstance, level: int) -> FeasibleSetDesc:
    """Cells (over the full variable space) whose union is the graph of the
    level's feasible-set mapping."""
    if not 1 <= level <= inst.k:
        raise ValueError(f"no level {level} in a {inst.k}-level instance")
    return FeasibleSetDesc(level, _analysis(inst).cells[level])


def _leader_cells(inst: MlpInstance) -> tuple[GenPoly, ...]:
    return tuple(c for c in _analysis(inst).cells[1] if not c.is_empty())


def is_feasible(inst: MlpInstance) -> bool:
    return bool(_leader_cells(inst))


def solve(inst: MlpInstance) -> SolveReport:
    """Exact optimal value of the instance, with attainment and witness."""
    cells = _leader_cells(inst)
    c1 = inst.levels[0].objective
    value = POS_INF
    for cell in cells:
        cell_value, _ = cell.inf_linear(c1)
        value = min(value, cell_value)
    if value == POS_INF:
        return SolveReport(INFEASIBLE, POS_INF, False, None)
    if value == NEG_INF:
        return SolveReport(UNBOUNDED, NEG_INF, False, None)
    cap = GenPoly(
        inst.total, weak=((tuple(-q for q in c1), -value.finite),)
    )
    for cell in cells:
        hit = cell.intersect(cap)
        if not hit.is_empty():
            return SolveReport(FINITE, value, True, hit.witness_point())
    return SolveReport(FINITE, value, False, None)


def decide_val(inst: MlpInstance, threshold) -> bool:
    """Is there a feasible point with leader objective <= threshold?

    An infimum that equals the threshold but is not attained answers no.
    """
    t = frac(threshold)
    c1 = inst.levels[0].objective
    cap = GenPoly(inst.total, weak=((tuple(-q for q in c1), -t),))
    return any(not cell.intersect(cap).is_empty() for cell in _leader_cells(inst))


def decide_unbounded(inst: MlpInstance) -> bool:
    return solve(inst).status == UNBOUNDED


def check_feasible_point(inst: MlpInstance, x: Sequence) -> bool:
    """Membership of a point in the level-1 feasible set.

    Checks every linear row of every level, then for each deeper player l'
    that the player's objective is <= its value function at the point's
    prefix, plus eps; a +inf value bound is vacuous and a -inf bound fails.
    """
    point = vec(x)
    if len(point) != inst.total:
        raise ValueError(f"point of length {len(point)} for {inst.total} variables")
    for level in inst.levels:
        for row in level.rows:
            lhs = dot(row.coeffs, point)
            violated = lhs <= row.rhs if row.strict else lhs < row.rhs
            if violated:
                return False
    analysis = _analysis(inst)
    for lv in range(2, inst.k + 1):
        objective = dot(inst.levels[lv - 1].objective, point)
        bound = analysis.vfuncs[lv].eval(point[: inst.prefix_n(lv)]).plus(inst.eps)
        if not ExtReal.of(objective) <= bound:
            return False
    return True


def check_optimal_point(inst: MlpInstance, x: Sequence) -> bool:
    """Feasible and leader objective exactly equal to the optimal value."""
    point = vec(x)
    if not check_feasible_point(inst, point):
        return False
    return ExtReal.of(dot(inst.levels[0].objective, point)) == solve(inst).value
