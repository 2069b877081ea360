"""Set-cover solvers over the visibility matrix.

Boundary points are rows, candidates are columns; the goal is the smallest
candidate set covering every coverable row. Rows with no covering candidate
are excluded up front and reported as uncoverable — they make the instance
smaller, not infeasible.

``solve_greedy`` is the classic most-uncovered-first heuristic (ties to the
lowest candidate index) with the (1 + ln n) guarantee. ``solve_exact`` is a
branch-and-bound over candidate inclusions: preprocessing fixes essential
columns, drops dominated rows (supersets of other rows) and dominated
columns (subsets of other columns), and the search bounds each node by the
larger of a greedily built set of pairwise-disjoint uncovered rows and
ceil(uncovered / max column size). Row and column sets live in Python ints
used as bitsets. ``solve_bruteforce`` enumerates candidate subsets in
increasing size and is the oracle the exact solver is tested against.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ConfigError, OracleMisuseError, PipelineInconsistencyError
from .visibility import VisibilityMatrix


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    FEASIBLE_BOUND_GAP = "feasible_bound_gap"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolveDiagnostics:
    nodes_explored: int
    reductions_applied: dict[str, int]
    solve_time: float


@dataclass(frozen=True)
class Solution:
    """Solver result. ``chosen`` holds candidate indices in ascending order;
    ``objective`` is len(chosen). Unless status is INFEASIBLE the chosen set
    covers every coverable boundary point of the instance."""

    chosen: tuple[int, ...]
    objective: int
    status: SolveStatus
    diagnostics: SolveDiagnostics
    per_camera_coverage: dict[int, tuple[int, ...]] = field(default_factory=dict)


class CoverInstance:
    """A visibility matrix plus the derived set of uncoverable rows."""

    def __init__(self, matrix: VisibilityMatrix) -> None:
        self.matrix = matrix
        self.uncoverable: tuple[int, ...] = tuple(
            j for j, row in enumerate(matrix.rows) if not row
        )

    @property
    def coverable(self) -> tuple[int, ...]:
        return tuple(
            j for j in range(self.matrix.n_boundary) if self.matrix.rows[j]
        )


@dataclass(frozen=True)
class CoverCheck:
    covered: tuple[int, ...]
    missed: tuple[int, ...]


def verify_cover(matrix: VisibilityMatrix, chosen: Iterable[int]) -> CoverCheck:
    """Recompute coverage of a candidate set directly from matrix columns."""
    covered: set[int] = set()
    for c in chosen:
        if not 0 <= c < matrix.n_candidates:
            raise ConfigError(f"candidate index {c} out of range")
        covered.update(matrix.cols[c])
    missed = tuple(j for j in range(matrix.n_boundary) if j not in covered)
    return CoverCheck(covered=tuple(sorted(covered)), missed=missed)


def _col_masks(matrix: VisibilityMatrix) -> list[int]:
    masks = []
    for col in matrix.cols:
        m = 0
        for j in col:
            m |= 1 << j
        masks.append(m)
    return masks


def _per_camera(matrix: VisibilityMatrix, chosen: Sequence[int]) -> dict[int, tuple[int, ...]]:
    return {c: matrix.cols[c] for c in chosen}


def _check_covers(inst: CoverInstance, chosen: Sequence[int], label: str) -> None:
    check = verify_cover(inst.matrix, chosen)
    if set(check.missed) != set(inst.uncoverable):
        raise PipelineInconsistencyError(
            f"{label} returned a non-cover: missed {len(check.missed)} rows, "
            f"expected exactly the {len(inst.uncoverable)} uncoverable ones"
        )


def solve_greedy(inst: CoverInstance) -> Solution:
    """Most-new-coverage-first greedy; ties break to the lowest index.

    Status is always FEASIBLE_BOUND_GAP: the heuristic proves no bound on
    its own, even when it happens to hit the optimum.
    """
    t0 = time.perf_counter()
    matrix = inst.matrix
    masks = _col_masks(matrix)
    target = 0
    for m in masks:
        target |= m
    uncovered = target
    chosen: list[int] = []
    while uncovered:
        best_gain = 0
        best_c = -1
        for c, m in enumerate(masks):
            gain = (m & uncovered).bit_count()
            if gain > best_gain:
                best_gain = gain
                best_c = c
        chosen.append(best_c)
        uncovered &= ~masks[best_c]
    chosen.sort()
    _check_covers(inst, chosen, "solve_greedy")
    return Solution(
        chosen=tuple(chosen),
        objective=len(chosen),
        status=SolveStatus.FEASIBLE_BOUND_GAP,
        diagnostics=SolveDiagnostics(
            nodes_explored=0,
            reductions_applied={},
            solve_time=time.perf_counter() - t0,
        ),
        per_camera_coverage=_per_camera(matrix, chosen),
    )


def solve_bruteforce(inst: CoverInstance, max_candidates: int = 25) -> Solution:
    """Exhaustive oracle: try candidate subsets in increasing size; the
    first feasible subset (lexicographic order within a size) is optimal.

    Refuses instances with more than ``max_candidates`` columns — the
    enumeration is meant for cross-checking small cases, not production.
    """
    t0 = time.perf_counter()
    matrix = inst.matrix
    n = matrix.n_candidates
    if n > max_candidates:
        raise OracleMisuseError(
            f"brute force limited to {max_candidates} candidates, got {n}"
        )
    masks = _col_masks(matrix)
    target = 0
    for m in masks:
        target |= m

    def done(chosen: tuple[int, ...]) -> Solution:
        return Solution(
            chosen=chosen,
            objective=len(chosen),
            status=SolveStatus.OPTIMAL,
            diagnostics=SolveDiagnostics(
                nodes_explored=0,
                reductions_applied={},
                solve_time=time.perf_counter() - t0,
            ),
            per_camera_coverage=_per_camera(matrix, chosen),
        )

    if target == 0:
        return done(())
    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            acc = 0
            for c in combo:
                acc |= masks[c]
            if acc == target:
                return done(combo)
    raise PipelineInconsistencyError("union of all columns failed to cover itself")


_REDUCTION_KEYS = ("essential_columns", "dominated_rows", "dominated_columns")

# skip the dominance test for a column whose sparsest row still has more
# covering columns than this; bounds preprocessing effort on dense instances
_DOMINANCE_SCAN_CAP = 1500


class _Timeout(Exception):
    pass


def solve_exact(
    inst: CoverInstance,
    time_budget_s: float = 60.0,
    disable_reductions: Iterable[str] = (),
) -> Solution:
    """Branch-and-bound exact solver.

    Returns status OPTIMAL when the search space is exhausted within the
    budget, FEASIBLE_BOUND_GAP with the incumbent when the budget runs out,
    and INFEASIBLE only for the degenerate no-candidates-but-coverable-rows
    case. ``disable_reductions`` names preprocessing steps to skip (for
    testing that reductions preserve the optimum).
    """
    if time_budget_s <= 0:
        raise ConfigError("time_budget_s must be positive")
    disabled = set(disable_reductions)
    if not disabled <= set(_REDUCTION_KEYS):
        raise ConfigError(f"unknown reduction names: {disabled - set(_REDUCTION_KEYS)}")
    t0 = time.perf_counter()
    deadline = t0 + time_budget_s
    matrix = inst.matrix
    reductions = {k: 0 for k in _REDUCTION_KEYS}

    def finish(chosen: Sequence[int], status: SolveStatus, nodes: int) -> Solution:
        chosen = tuple(sorted(chosen))
        if status is not SolveStatus.INFEASIBLE:
            _check_covers(inst, chosen, "solve_exact")
        return Solution(
            chosen=chosen,
            objective=len(chosen),
            status=status,
            diagnostics=SolveDiagnostics(
                nodes_explored=nodes,
                reductions_applied=dict(reductions),
                solve_time=time.perf_counter() - t0,
            ),
            per_camera_coverage=_per_camera(matrix, chosen),
        )

    coverable = [j for j in range(matrix.n_boundary) if matrix.rows[j]]
    if not coverable:
        return finish((), SolveStatus.OPTIMAL, 0)
    if matrix.n_candidates == 0:
        return finish((), SolveStatus.INFEASIBLE, 0)

    # reindex coverable rows to …0..R-1 for compact bitsets
    row_id = {j: k for k, j in enumerate(coverable)}
    n_rows = len(coverable)
    col_mask = [0] * matrix.n_candidates
    for c, col in enumerate(matrix.cols):
        m = 0
        for j in col:
            m |= 1 << row_id[j]
        col_mask[c] = m
    row_cols = [tuple(matrix.rows[j]) for j in coverable]
    row_colmask = [0] * n_rows
    for r, cols_of_row in enumerate(row_cols):
        m = 0
        for c in cols_of_row:
            m |= 1 << c
        row_colmask[r] = m

    full = (1 << n_rows) - 1

    # ---- preprocessing ---------------------------------------------------
    forced: list[int] = []
    covered = 0
    active_cols = set(c for c in range(matrix.n_candidates) if col_mask[c])
    active_col_mask = 0
    for c in active_cols:
        active_col_mask |= 1 << c

    def row_options(r: int) -> int:
        return row_colmask[r] & active_col_mask

    changed = True
    while changed:
        changed = False
        # essential columns: a row with exactly one covering column forces it
        if "essential_columns" not in disabled:
            for r in range(n_rows):
                if covered >> r & 1:
                    continue
                opts = row_options(r)
                if opts and opts & (opts - 1) == 0:  # single bit
                    c = opts.bit_length() - 1
                    forced.append(c)
                    reductions["essential_columns"] += 1
                    covered |= col_mask[c]
                    active_cols.discard(c)
                    active_col_mask &= ~(1 << c)
                    changed = True
        if covered == full:
            break
        # dominated rows: a row whose option set contains another row's is
        # automatically covered with it — drop the superset row
        if "dominated_rows" not in disabled:
            alive = [r for r in range(n_rows) if not covered >> r & 1]
            alive.sort(key=lambda r: row_options(r).bit_count())
            eff = {r: row_options(r) for r in alive}
            for hi_i in range(len(alive) - 1, -1, -1):
                a = alive[hi_i]
                ma = eff[a]
                for b in alive:
                    if b == a:
                        continue
                    mb = eff[b]
                    if mb == ma and b > a:
                        continue  # equal sets: keep the lower row index
                    if mb & ~ma == 0:
                        covered |= 1 << a  # treat as satisfied-by-implication
                        reductions["dominated_rows"] += 1
                        changed = True
                        break
        # dominated columns: a column whose coverage is a subset of another's
        # can be dropped; on equality the lower index survives
        if "dominated_columns" not in disabled:
            uncovered_mask = full & ~covered
            removals = []
            for c in sorted(active_cols):
                mc = col_mask[c] & uncovered_mask
                if mc == 0:
                    removals.append(c)
                    continue
                # scan candidates sharing c's sparsest uncovered row
                best_row = -1
                best_n = None
                m = mc
                while m:
                    lsb = m & -m
                    r = lsb.bit_length() - 1
                    m ^= lsb
                    n_opts = row_options(r).bit_count()
                    if best_n is None or n_opts < best_n:
                        best_n = n_opts
                        best_row = r
                if best_n is None or best_n > _DOMINANCE_SCAN_CAP:
                    continue
                opts = row_options(best_row)
                while opts:
                    lsb = opts & -opts
                    k = lsb.bit_length() - 1
                    opts ^= lsb
                    if k == c:
                        continue
                    mk = col_mask[k] & uncovered_mask
                    if mc & ~mk == 0 and (mc != mk or k < c):
                        removals.append(c)
                        break
            for c in removals:
                if c in active_cols:
                    active_cols.discard(c)
                    active_col_mask &= ~(1 << c)
                    if col_mask[c] & full & ~covered:
                        reductions["dominated_columns"] += 1
                    changed = True

    if covered == full:
        return finish(forced, SolveStatus.OPTIMAL, 0)
    if not active_cols:
        # coverable rows remain but no columns are left to choose from;
        # unreachable for a consistent matrix, kept as a defensive status
        return finish(forced, SolveStatus.INFEASIBLE, 0)

    # ---- incumbent from greedy (full instance) ---------------------------
    greedy = solve_greedy(inst)
    best_set: tuple[int, ...] = greedy.chosen
    best_obj = greedy.objective

    # ---- search ----------------------------------------------------------
    residual_rows = [r for r in range(n_rows) if not covered >> r & 1]
    static_max_col = max(
        (col_mask[c] & ~covered).bit_count() for c in active_cols
    )
    # static bound order: sparse rows first makes the disjoint-row set large
    bound_order = sorted(residual_rows, key=lambda r: row_options(r).bit_count())
    INF = 1 << 30
    forced_n = len(forced)
    nodes = 0

    def lower_bound(cov: int, allowed: int) -> int:
        u = (full & ~cov).bit_count()
        if u == 0:
            return 0
        used = 0
        cnt = 0
        for r in bound_order:
            if cov >> r & 1:
                continue
            m = row_colmask[r] & allowed
            if m == 0:
                return INF  # some row can no longer be covered
            if m & used == 0:
                cnt += 1
                used |= m
        return max(cnt, -(-u // static_max_col))

    best_from_search: list[int] | None = None

    def search(cov: int, allowed: int, chosen: list[int]) -> None:
        nonlocal nodes, best_obj, best_from_search
        nodes += 1
        if time.perf_counter() > deadline:
            raise _Timeout
        if cov == full:
            best_obj = forced_n + len(chosen)
            best_from_search = chosen.copy()
            return
        # branch on the uncovered row with the fewest allowed columns
        best_r = -1
        best_m = 0
        best_cnt = None
        for r in residual_rows:
            if cov >> r & 1:
                continue
            m = row_colmask[r] & allowed
            cnt = m.bit_count()
            if cnt == 0:
                return  # dead branch
            if best_cnt is None or cnt < best_cnt:
                best_cnt = cnt
                best_r = r
                best_m = m
                if cnt == 1:
                    break
        opts = []
        m = best_m
        while m:
            lsb = m & -m
            c = lsb.bit_length() - 1
            m ^= lsb
            opts.append(c)
        opts.sort(key=lambda c: (-(col_mask[c] & ~cov).bit_count(), c))
        tried = 0
        for c in opts:
            tried |= 1 << c
            new_cov = cov | col_mask[c]
            new_allowed = allowed & ~tried
            lb = lower_bound(new_cov, new_allowed) if new_cov != full else 0
            if forced_n + len(chosen) + 1 + lb >= best_obj:
                continue
            chosen.append(c)
            search(new_cov, new_allowed, chosen)
            chosen.pop()

    status = SolveStatus.OPTIMAL
    root_lb = lower_bound(covered, active_col_mask)
    if forced_n + root_lb < best_obj:
        try:
            search(covered, active_col_mask, [])
        except _Timeout:
            status = SolveStatus.FEASIBLE_BOUND_GAP

    if best_from_search is not None:
        chosen = tuple(sorted(forced + best_from_search))
    else:
        chosen = best_set  # greedy already covers everything, forced included
    return finish(chosen, status, nodes)
