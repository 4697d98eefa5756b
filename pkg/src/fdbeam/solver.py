"""Per-beam convex subproblem: min ||M f|| + rho ||f|| under coverage + box.

The feasible set is the intersection of

* the gain disc  { f : |g_tgt - a* f| <= sigma * g_tgt }  (preimage of a
  complex disc under the linear map f -> a* f), and
* the unit box   { f : |f_n| <= 1 for all n }.

Both admit exact Euclidean projections; Dykstra's alternating scheme
combines them into the projection onto the intersection.  The solver is
first-order: plain projected gradient descent on ``||M f||^2`` with a
fixed 1/L step when rho == 0, and a projected subgradient method with
1/sqrt(k)-diminishing steps on ``||M f|| + rho ||f||`` otherwise,
tracking the best feasible iterate either way.

``oracle_solve`` is an independent brute-force check for N <= 2: a polar
grid search over the feasible set followed by local grid refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._linalg import spectral_norm

__all__ = [
    "InfeasibleProblemError",
    "BeamSubproblem",
    "SolverConfig",
    "SolverResult",
    "project_gain_disc",
    "project_box",
    "project_feasible",
    "solve_beam",
    "oracle_solve",
]

_PLATEAU_PATIENCE = 300  # iterations without a best-objective update before stopping


class InfeasibleProblemError(ValueError):
    """The coverage disc cannot be reached within the unit box."""


@dataclass(frozen=True)
class BeamSubproblem:
    """One beam's data: coupling rows, steering vector, gain target."""

    coupling: np.ndarray = field(repr=False)  # K x N
    steer: np.ndarray = field(repr=False)     # length N
    g_tgt: float = 1.0
    sigma: float = 0.0
    rho: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "coupling", np.atleast_2d(np.asarray(self.coupling, dtype=complex)))
        object.__setattr__(self, "steer", np.asarray(self.steer, dtype=complex))
        if self.g_tgt <= 0:
            raise ValueError("g_tgt must be positive")
        if self.sigma < 0 or self.rho < 0:
            raise ValueError("sigma and rho must be nonnegative")
        if self.coupling.shape[1] != self.steer.size:
            raise ValueError("coupling width must match steering length")
        if np.linalg.norm(self.steer) == 0.0:
            raise ValueError("steering vector must be nonzero")
        reach = np.sum(np.abs(self.steer))
        if self.g_tgt * (1.0 - self.sigma) > reach + 1e-9:
            raise InfeasibleProblemError(
                f"gain target {self.g_tgt:g} (1 - sigma {self.sigma:g}) exceeds the "
                f"box-reachable gain ||a||_1 = {reach:g}")

    @property
    def n(self) -> int:
        return self.steer.size

    def gain_residual(self, f: np.ndarray) -> float:
        z = np.vdot(self.steer, f)
        return max(0.0, abs(self.g_tgt - z) - self.sigma * self.g_tgt)

    def box_residual(self, f: np.ndarray) -> float:
        return max(0.0, float(np.max(np.abs(f))) - 1.0)

    def objective(self, f: np.ndarray) -> float:
        val = float(np.linalg.norm(self.coupling @ f))
        if self.rho > 0:
            val += self.rho * float(np.linalg.norm(f))
        return val


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 2000
    step_rule: str = "auto"  # auto | fixed | diminishing
    dykstra_iters: int = 50
    feas_tol: float = 1e-8
    obj_tol: float = 1e-7
    warm_start: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.max_iters < 1 or self.dykstra_iters < 1:
            raise ValueError("iteration counts must be positive")
        if self.feas_tol <= 0 or self.obj_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.step_rule not in ("auto", "fixed", "diminishing"):
            raise ValueError(f"unknown step_rule {self.step_rule!r}")


@dataclass(frozen=True)
class SolverResult:
    f: np.ndarray = field(repr=False)
    objective: float = 0.0
    gain_residual: float = 0.0
    box_residual: float = 0.0
    iterations: int = 0
    converged: bool = False


def project_gain_disc(f: np.ndarray, a: np.ndarray, g_tgt: float, sigma: float) -> np.ndarray:
    """Exact projection onto { f : |g_tgt - a* f| <= sigma g_tgt }.

    Moves ``z = a* f`` to the nearest point of the disc and applies the
    minimal-norm correction along ``a``.
    """
    a = np.asarray(a, dtype=complex)
    na2 = float(np.vdot(a, a).real)
    if na2 == 0.0:
        raise ValueError("steering vector must be nonzero")
    z = np.vdot(a, f)
    radius = sigma * g_tgt
    dev = z - g_tgt
    dist = abs(dev)
    if dist <= radius:
        return np.asarray(f, dtype=complex)
    z_new = g_tgt if radius == 0.0 else g_tgt + radius * dev / dist
    return f + a * ((z_new - z) / na2)


def project_box(f: np.ndarray) -> np.ndarray:
    """Clamp each entry's magnitude to <= 1, preserving its phase."""
    f = np.asarray(f, dtype=complex)
    mag = np.abs(f)
    over = mag > 1.0
    if not np.any(over):
        return f
    out = f.copy()
    out[over] = f[over] / mag[over]
    return out


def project_feasible(f: np.ndarray, problem: BeamSubproblem,
                     dykstra_iters: int = 50, feas_tol: float = 1e-8) -> np.ndarray:
    """Dykstra's alternating projections onto gain disc and box.

    Stops when the iterate is feasible AND has stopped moving (feasibility
    alone is reached after one cycle, well before the increments settle on
    the actual projection).  The returned point's box residual is exactly 0
    (the last projection is the box); its gain residual is at most
    ``feas_tol`` when the scheme converged within ``dykstra_iters`` cycles.
    """
    x = np.asarray(f, dtype=complex)
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    move_tol = feas_tol * (1.0 + float(np.linalg.norm(x)))
    for _ in range(dykstra_iters):
        y = project_gain_disc(x + p, problem.steer, problem.g_tgt, problem.sigma)
        p = x + p - y
        x_new = project_box(y + q)
        q = y + q - x_new
        moved = float(np.linalg.norm(x_new - x))
        x = x_new
        if moved <= move_tol and problem.gain_residual(x) <= feas_tol:
            break
    return x


def _start_point(problem: BeamSubproblem, config: SolverConfig) -> np.ndarray:
    if config.warm_start is not None:
        return np.asarray(config.warm_start, dtype=complex)
    # minimal-norm point hitting the gain target exactly
    a = problem.steer
    return a * (problem.g_tgt / float(np.vdot(a, a).real))


def solve_beam(problem: BeamSubproblem, config: SolverConfig | None = None) -> SolverResult:
    """First-order solve with exact feasibility projections each step.

    Iterates are projected onto a hair-shrunk gain disc (margin slightly
    larger than the Dykstra stopping tolerance) so returned beams satisfy
    the true constraint strictly, not just to tolerance.
    """
    config = config or SolverConfig()
    m = problem.coupling
    mh = m.conj().T
    rho = problem.rho
    sig = spectral_norm(m)
    lips = sig * sig if sig > 1e-15 else 1.0
    base_step = 1.0 / lips
    if config.step_rule == "auto":
        diminishing = rho > 0
    else:
        diminishing = config.step_rule == "diminishing"
    work = problem
    if problem.sigma > 0:
        radius = problem.sigma * problem.g_tgt
        shrunk = max(0.0, radius * (1.0 - 1e-6) - 2.0 * config.feas_tol)
        try:
            work = BeamSubproblem(coupling=m, steer=problem.steer, g_tgt=problem.g_tgt,
                                  sigma=shrunk / problem.g_tgt, rho=rho)
        except InfeasibleProblemError:
            work = problem  # boundary-feasible case: no room to shrink

    best_f: np.ndarray | None = None
    best_obj = np.inf
    # a feasible warm start is always a candidate, so the result cannot
    # come out worse than it
    if config.warm_start is not None:
        w = np.asarray(config.warm_start, dtype=complex)
        if (problem.gain_residual(w) <= config.feas_tol
                and problem.box_residual(w) <= config.feas_tol):
            best_f = w
            best_obj = problem.objective(w)

    x = project_feasible(_start_point(problem, config), work,
                         config.dykstra_iters, config.feas_tol)
    plateau = 0
    converged = False
    iterations = 0
    for k in range(1, config.max_iters + 1):
        iterations = k
        y = m @ x
        ny = float(np.linalg.norm(y))
        obj = ny + (rho * float(np.linalg.norm(x)) if rho > 0 else 0.0)
        if problem.gain_residual(x) <= config.feas_tol:
            if obj < best_obj - config.obj_tol:
                best_obj = obj
                best_f = x
                plateau = 0
            else:
                plateau += 1
        else:
            plateau += 1
        if plateau > _PLATEAU_PATIENCE and best_f is not None:
            converged = True
            break
        if diminishing:
            grad = np.zeros_like(x)
            if ny > 0.0:
                grad += mh @ (y / ny)
            nx = float(np.linalg.norm(x))
            if rho > 0 and nx > 0.0:
                grad += (rho / nx) * x
            step = base_step / np.sqrt(k)
        else:
            grad = mh @ y
            step = base_step
        if float(np.linalg.norm(grad)) <= 1e-15:
            converged = best_f is not None
            break
        x = project_feasible(x - step * grad, work,
                             config.dykstra_iters, config.feas_tol)
    if best_f is None:
        # no feasible candidate found (Dykstra never reached tolerance)
        best_f = x
        converged = False
    return SolverResult(
        f=best_f,
        objective=problem.objective(best_f),
        gain_residual=problem.gain_residual(best_f),
        box_residual=problem.box_residual(best_f),
        iterations=iterations,
        converged=converged,
    )


def _polar_grid(mag_step: float, phase_step_rad: float) -> np.ndarray:
    mags = np.arange(0.0, 1.0 + 1e-12, mag_step)
    phases = np.arange(0.0, 2.0 * np.pi - 1e-12, phase_step_rad)
    pts = np.concatenate(([0.0 + 0.0j],
                          (mags[1:, None] * np.exp(1j * phases[None, :])).ravel()))
    return pts


def _local_grid(center: complex, mag_half: float, mag_step: float,
                phase_half: float, phase_step: float) -> np.ndarray:
    c_mag, c_ph = abs(center), np.angle(center)
    mags = np.clip(np.arange(c_mag - mag_half, c_mag + mag_half + 1e-15, mag_step), 0.0, 1.0)
    phases = np.arange(c_ph - phase_half, c_ph + phase_half + 1e-15, phase_step)
    return (mags[:, None] * np.exp(1j * phases[None, :])).ravel()


def oracle_solve(problem: BeamSubproblem, grid_resolution: tuple[float, float] = (0.01, 2.0),
                 refinements: int = 3) -> SolverResult:
    """Brute-force oracle for N <= 2: feasible-set grid search + refinement.

    ``grid_resolution`` is (magnitude step, phase step in degrees) for the
    first pass; each refinement re-scans a window around the incumbent at
    10x finer pitch, keeping only truly feasible grid points.  The
    sigma = 0 equality case (whose feasible set has measure zero on any
    grid) instead enumerates the feasible slice directly: one entry is
    gridded and the other solved from the equality constraint.
    """
    if problem.n > 2:
        raise ValueError("oracle_solve only supports N <= 2")
    if problem.sigma == 0.0:
        return _oracle_solve_equality(problem, grid_resolution, refinements)
    mag_step, phase_step_deg = grid_resolution
    phase_step = np.radians(phase_step_deg)
    a = problem.steer
    m = problem.coupling
    g, srad = problem.g_tgt, problem.sigma * problem.g_tgt
    reach = float(np.sum(np.abs(a)))
    true_tol = 1e-12 * (1.0 + g)

    def scan(z1_grid: np.ndarray, z2_grid: np.ndarray | None, tol: float):
        """Best (objective, f) with |g - a* f| <= srad + tol, or None."""
        best_obj, best_f = np.inf, None
        if problem.n == 1:
            zs = z1_grid
            feas = np.abs(g - np.conj(a[0]) * zs) <= srad + tol
            if np.any(feas):
                zs = zs[feas]
                obj = np.linalg.norm(m[:, 0:1] * zs[None, :], axis=0)
                if problem.rho > 0:
                    obj = obj + problem.rho * np.abs(zs)
                i = int(np.argmin(obj))
                best_obj, best_f = float(obj[i]), np.array([zs[i]])
            return best_obj, best_f
        w2 = np.conj(a[1]) * z2_grid
        m2z2 = m[:, 1][:, None] * z2_grid[None, :]
        abs_z2_sq = np.abs(z2_grid) ** 2
        for z1 in z1_grid:
            c = g - np.conj(a[0]) * z1
            feas = np.abs(c - w2) <= srad + tol
            if not np.any(feas):
                continue
            cols = m[:, 0][:, None] * z1 + m2z2[:, feas]
            obj = np.linalg.norm(cols, axis=0)
            if problem.rho > 0:
                obj = obj + problem.rho * np.sqrt(abs(z1) ** 2 + abs_z2_sq[feas])
            i = int(np.argmin(obj))
            if obj[i] < best_obj:
                best_obj, best_f = float(obj[i]), np.array([z1, z2_grid[feas][i]])
        return best_obj, best_f

    grid = _polar_grid(mag_step, phase_step)
    z2 = grid if problem.n == 2 else None
    best_obj, best_f = scan(grid, z2, true_tol)
    if best_f is None:
        raise InfeasibleProblemError("no grid point inside the feasible set")
    ms, ps = mag_step, phase_step
    for _ in range(refinements):
        ms2, ps2 = ms / 10.0, ps / 10.0
        g1 = _local_grid(best_f[0], 3 * ms, ms2, 3 * ps, ps2)
        g2 = _local_grid(best_f[1], 3 * ms, ms2, 3 * ps, ps2) if problem.n == 2 else None
        obj, f = scan(g1, g2, true_tol)
        if f is not None and obj < best_obj:
            best_obj, best_f = obj, f
        ms, ps = ms2, ps2
    return SolverResult(
        f=best_f,
        objective=problem.objective(best_f),
        gain_residual=problem.gain_residual(best_f),
        box_residual=problem.box_residual(best_f),
        iterations=0,
        converged=True,
    )


def _oracle_solve_equality(problem: BeamSubproblem, grid_resolution: tuple[float, float],
                           refinements: int) -> SolverResult:
    """Exact-constraint oracle for sigma = 0: the equality pins one entry.

    The feasible set {f : a* f = g_tgt} intersected with the unit box is a
    single point for N = 1 and, for N = 2, a one-complex-dimensional slice
    enumerated by gridding the first entry and solving the second from the
    equality in closed form.
    """
    a = problem.steer
    m = problem.coupling
    g = problem.g_tgt
    if problem.n == 1:
        f = np.array([g / np.conj(a[0])])
        return SolverResult(f=f, objective=problem.objective(f),
                            gain_residual=problem.gain_residual(f),
                            box_residual=problem.box_residual(f),
                            iterations=0, converged=True)

    def scan(z1_grid: np.ndarray):
        z2 = (g - np.conj(a[0]) * z1_grid) / np.conj(a[1])
        feas = (np.abs(z1_grid) <= 1.0 + 1e-12) & (np.abs(z2) <= 1.0 + 1e-12)
        if not np.any(feas):
            return np.inf, None
        z1s, z2s = z1_grid[feas], z2[feas]
        cols = m[:, 0][:, None] * z1s + m[:, 1][:, None] * z2s
        obj = np.linalg.norm(cols, axis=0)
        if problem.rho > 0:
            obj = obj + problem.rho * np.sqrt(np.abs(z1s) ** 2 + np.abs(z2s) ** 2)
        i = int(np.argmin(obj))
        return float(obj[i]), np.array([z1s[i], z2s[i]])

    mag_step, phase_step_deg = grid_resolution
    ms, ps = mag_step, np.radians(phase_step_deg)
    best_obj, best_f = scan(_polar_grid(ms, ps))
    if best_f is None:
        raise InfeasibleProblemError("equality target unreachable within the unit box")
    for _ in range(refinements):
        ms2, ps2 = ms / 10.0, ps / 10.0
        obj, f = scan(_local_grid(best_f[0], 3 * ms, ms2, 3 * ps, ps2))
        if f is not None and obj < best_obj:
            best_obj, best_f = obj, f
        ms, ps = ms2, ps2
    return SolverResult(f=best_f, objective=problem.objective(best_f),
                        gain_residual=problem.gain_residual(best_f),
                        box_residual=problem.box_residual(best_f),
                        iterations=0, converged=True)
