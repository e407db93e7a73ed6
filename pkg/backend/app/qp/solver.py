"""Dense operator-splitting (ADMM) solver for convex quadratic programs"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import linalg as sla

from ..errors import InvalidInputError
from .problem import QpProblem, QpSettings, QpSolution, QpStatus

logger = logging.getLogger(__name__)

RHO_MIN = 1e-6
RHO_MAX = 1e6
RHO_EQ_FACTOR = 1e3
INF_BOUND = 1e20
MIN_SCALING = 1e-4
MAX_SCALING = 1e4
DIVISION_FLOOR = 1e-30

ActiveSet = Tuple[np.ndarray, np.ndarray]


def _norm(v: np.ndarray) -> float:
    return float(np.max(np.abs(v))) if v.size else 0.0


def _same_active_set(first: Optional[ActiveSet], second: ActiveSet) -> bool:
    return first is not None and all(np.array_equal(a, b) for a, b in zip(first, second))


@dataclass
class _Scaling:
    """Diagonal Ruiz scalings D (variables), E (constraints) and cost scale c"""
    D: np.ndarray
    E: np.ndarray
    c: float


@dataclass
class _Check:
    """Residuals of an iterate in the original scaling"""
    x: np.ndarray
    y: np.ndarray
    primal: float
    dual: float
    eps_primal: float
    eps_dual: float
    violation: float
    violation_limit: float

    @property
    def converged(self) -> bool:
        return (
            self.primal <= self.eps_primal
            and self.dual <= self.eps_dual
            and self.violation <= self.violation_limit
        )

    @property
    def merit(self) -> float:
        return max(self.primal / self.eps_primal, self.dual / self.eps_dual)


class QpSolver:
    """
    ADMM solver with Ruiz equilibration, adaptive penalty and polishing

    Polishing refines the active set guessed from the ADMM iterate and
    solves the reduced KKT system until the set stops changing; a polished
    point is returned only after it passes the KKT checks.

    An instance keeps per-call workspace and must not be shared between
    threads; create one per controller.
    """

    def __init__(self, settings: Optional[QpSettings] = None):
        self.settings = settings or QpSettings()

    def solve(
        self,
        prob: QpProblem,
        warm_start: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    ) -> QpSolution:
        """
        Solve a convex QP

        Args:
            prob: Problem with PSD Hessian
            warm_start: Optional (z, y) pair from a previous solve

        Returns:
            QpSolution; non-solved statuses carry the best iterate found
        """
        factor = self._check_convex(prob)
        if prob.n_constraints == 0:
            solution = self._solve_unconstrained(prob, factor)
        else:
            solution = self._solve_admm(prob, self._warm_start(prob, warm_start))

        if not solution.solved:
            logger.info(
                "QP %s after %d iterations (primal %.3e, dual %.3e)",
                solution.status.value, solution.iterations,
                solution.primal_residual, solution.dual_residual,
            )
        return solution

    @staticmethod
    def _warm_start(
        prob: QpProblem, warm_start: Optional[Tuple[np.ndarray, np.ndarray]]
    ) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        if warm_start is None:
            return None
        x = np.asarray(warm_start[0], dtype=float).reshape(-1)
        y = np.asarray(warm_start[1], dtype=float).reshape(-1)
        if x.size != prob.dim or y.size != prob.n_constraints:
            raise InvalidInputError(
                f"warm start must have sizes ({prob.dim}, {prob.n_constraints}), "
                f"got ({x.size}, {y.size})"
            )
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidInputError("warm start contains non-finite entries")
        return x, y

    def _regularization(self, H: np.ndarray) -> float:
        return self.settings.hessian_reg * max(1.0, float(np.max(np.abs(np.diag(H)))))

    def _check_convex(self, prob: QpProblem):
        H = prob.H
        try:
            return sla.cho_factor(H + self._regularization(H) * np.eye(prob.dim))
        except np.linalg.LinAlgError as e:
            raise InvalidInputError("Hessian is not positive semidefinite") from e

    def _thresholds(
        self, prob: QpProblem, x: np.ndarray, y: np.ndarray, Mx: np.ndarray, z: np.ndarray
    ) -> Tuple[float, float]:
        s = self.settings
        eps_primal = s.eps_abs + s.eps_rel * max(_norm(Mx), _norm(z))
        eps_dual = s.eps_abs + s.eps_rel * max(
            _norm(prob.H @ x), _norm(prob.M.T @ y), _norm(prob.f)
        )
        return eps_primal, eps_dual

    def _solve_unconstrained(self, prob: QpProblem, factor) -> QpSolution:
        H, f = prob.H, prob.f
        z = sla.cho_solve(factor, -f)
        for _ in range(self.settings.polish_refine_iter):
            z = z + sla.cho_solve(factor, -f - H @ z)

        dual = _norm(H @ z + f)
        eps_dual = self.settings.eps_abs + self.settings.eps_rel * max(_norm(H @ z), _norm(f))
        status = QpStatus.SOLVED if dual <= eps_dual else QpStatus.FAILURE
        return QpSolution(
            status=status,
            z=z,
            y=np.zeros(0),
            iterations=0,
            primal_residual=0.0,
            dual_residual=dual,
            eps_primal=self.settings.eps_abs,
            eps_dual=eps_dual,
        )

    def _scale(self, prob: QpProblem) -> Tuple[_Scaling, np.ndarray, np.ndarray, np.ndarray]:
        d, c = prob.dim, prob.n_constraints
        H, M = prob.H.copy(), prob.M.copy()
        D, E = np.ones(d), np.ones(c)

        for _ in range(self.settings.scaling_iter):
            # column infinity norms of the KKT matrix [[H, M'], [M, 0]]
            col_x = np.maximum(np.max(np.abs(H), axis=0), np.max(np.abs(M), axis=0))
            col_c = np.max(np.abs(M), axis=1)
            dx = self._inv_sqrt(col_x)
            dc = self._inv_sqrt(col_c)
            H = dx[:, None] * H * dx[None, :]
            M = dc[:, None] * M * dx[None, :]
            D *= dx
            E *= dc

        f = D * prob.f
        cost = max(float(np.mean(np.max(np.abs(H), axis=0))), _norm(f))
        cost = 1.0 if cost < MIN_SCALING else 1.0 / min(cost, MAX_SCALING)
        return _Scaling(D=D, E=E, c=cost), cost * H, cost * f, M

    @staticmethod
    def _inv_sqrt(norms: np.ndarray) -> np.ndarray:
        norms = np.where(norms < MIN_SCALING, 1.0, np.minimum(norms, MAX_SCALING))
        return 1.0 / np.sqrt(norms)

    @staticmethod
    def _rho_vector(rho: float, l: np.ndarray, u: np.ndarray) -> np.ndarray:
        vec = np.full(l.size, rho)
        vec[(l <= -INF_BOUND) & (u >= INF_BOUND)] = RHO_MIN
        vec[l == u] = RHO_EQ_FACTOR * rho
        return vec

    def _factor(self, Hs: np.ndarray, Ms: np.ndarray, rho: np.ndarray):
        K = Hs + self.settings.sigma * np.eye(Hs.shape[0]) + Ms.T @ (rho[:, None] * Ms)
        return sla.cho_factor(K)

    def _solve_admm(
        self,
        prob: QpProblem,
        warm_start: Optional[Tuple[np.ndarray, np.ndarray]],
    ) -> QpSolution:
        s = self.settings
        scaling, Hs, fs, Ms = self._scale(prob)
        D, E, cost = scaling.D, scaling.E, scaling.c
        ls, us = E * prob.l, E * prob.u

        rho_bar = s.rho
        rho = self._rho_vector(rho_bar, prob.l, prob.u)
        try:
            kkt = self._factor(Hs, Ms, rho)
        except np.linalg.LinAlgError:
            return self._failed(prob, 0)

        if warm_start is not None:
            x = warm_start[0] / D
            y = warm_start[1] * cost / E
        else:
            x = np.zeros(prob.dim)
            y = np.zeros(prob.n_constraints)
        z = np.clip(Ms @ x, ls, us)

        best: Optional[_Check] = None
        polished_guess: Optional[ActiveSet] = None
        previous_residual = np.inf
        lowest_residual = np.inf
        rising_since: Optional[int] = None

        for k in range(1, s.max_iter + 1):
            rhs = s.sigma * x - fs + Ms.T @ (rho * z - y)
            x_tilde = sla.cho_solve(kkt, rhs)
            z_tilde = Ms @ x_tilde
            x_next = s.alpha * x_tilde + (1.0 - s.alpha) * x
            z_relaxed = s.alpha * z_tilde + (1.0 - s.alpha) * z
            z_next = np.clip(z_relaxed + y / rho, ls, us)
            y_next = y + rho * (z_relaxed - z_next)
            delta_y = y_next - y
            x, z, y = x_next, z_next, y_next

            if k % s.check_interval and k != s.max_iter:
                continue

            if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
                return self._failed(prob, k, best)

            check = self._residuals(prob, D * x, z / E, E * y / cost)
            if best is None or check.merit < best.merit:
                best = check

            if s.polish and (check.merit <= s.polish_merit or k == s.max_iter):
                guess = self._active_set(prob, z / E, check.y)
                if check.converged or not _same_active_set(polished_guess, guess):
                    polished_guess = guess
                    polished = self._polish(prob, guess)
                    if polished is not None:
                        return self._result(QpStatus.SOLVED, polished, k, rho_bar, polished)

            projected = self._project_box_rows(prob, check)
            if projected is not None:
                return self._result(QpStatus.SOLVED, projected, k, rho_bar)
            if check.converged:
                return self._result(QpStatus.SOLVED, check, k, rho_bar)

            if self._primal_infeasible(prob, E * delta_y / cost):
                logger.info("QP primal infeasibility certificate found at iteration %d", k)
                return self._result(QpStatus.FAILURE, best, k, rho_bar)

            residual = max(check.primal, check.dual)
            lowest_residual = min(lowest_residual, residual)
            if residual > previous_residual:
                rising_since = k - s.check_interval if rising_since is None else rising_since
            else:
                rising_since = None
            previous_residual = residual
            if rising_since is not None and k - rising_since >= s.divergence_window \
                    and residual > s.divergence_factor * lowest_residual:
                logger.info("QP residuals diverging at iteration %d", k)
                return self._result(QpStatus.FAILURE, best, k, rho_bar)

            if s.adaptive_rho and k != s.max_iter:
                new_rho = self._updated_rho(rho_bar, Hs, fs, Ms, x, z, y)
                if new_rho > rho_bar * s.adaptive_rho_tolerance \
                        or new_rho < rho_bar / s.adaptive_rho_tolerance:
                    rho_bar = new_rho
                    rho = self._rho_vector(rho_bar, prob.l, prob.u)
                    # residuals jump after a penalty change
                    rising_since = None
                    previous_residual = np.inf
                    try:
                        kkt = self._factor(Hs, Ms, rho)
                    except np.linalg.LinAlgError:
                        return self._result(QpStatus.FAILURE, best, k, rho_bar)

        return self._result(QpStatus.MAX_ITER, best, s.max_iter, rho_bar)

    def _residuals(
        self, prob: QpProblem, x: np.ndarray, z: np.ndarray, y: np.ndarray
    ) -> _Check:
        Mx = prob.M @ x
        eps_primal, eps_dual = self._thresholds(prob, x, y, Mx, z)
        return _Check(
            x=x,
            y=y,
            primal=_norm(Mx - z),
            dual=_norm(prob.H @ x + prob.f + prob.M.T @ y),
            eps_primal=eps_primal,
            eps_dual=eps_dual,
            violation=prob.violation(x),
            violation_limit=self.settings.feasibility_tol,
        )

    def _project_box_rows(self, prob: QpProblem, check: _Check) -> Optional[_Check]:
        """Clip variables bounded by single-entry rows; accepted only if it converges"""
        if check.primal > check.eps_primal or check.dual > check.eps_dual:
            return None
        x = check.x.copy()
        for row, lower, upper in zip(prob.M, prob.l, prob.u):
            nonzero = np.flatnonzero(row)
            if nonzero.size != 1:
                continue
            j, a = nonzero[0], row[nonzero[0]]
            low, high = (lower / a, upper / a) if a > 0 else (upper / a, lower / a)
            x[j] = min(max(x[j], low), high)
        projected = self._residuals(prob, x, np.clip(prob.M @ x, prob.l, prob.u), check.y)
        return projected if projected.converged else None

    def _updated_rho(self, rho_bar, Hs, fs, Ms, x, z, y) -> float:
        Mx = Ms @ x
        Mty = Ms.T @ y
        Hx = Hs @ x
        primal = _norm(Mx - z) / max(_norm(Mx), _norm(z), DIVISION_FLOOR)
        dual = _norm(Hx + fs + Mty) / max(_norm(Hx), _norm(Mty), _norm(fs), DIVISION_FLOOR)
        ratio = np.sqrt(primal / max(dual, DIVISION_FLOOR))
        return float(np.clip(rho_bar * ratio, RHO_MIN, RHO_MAX))

    def _primal_infeasible(self, prob: QpProblem, delta_y: np.ndarray) -> bool:
        eps = self.settings.eps_prim_inf
        scale = _norm(delta_y)
        if scale <= eps:
            return False
        v = delta_y / scale
        if np.any((v > eps) & (prob.u >= INF_BOUND)) or np.any((v < -eps) & (prob.l <= -INF_BOUND)):
            return False
        upper = np.where(prob.u < INF_BOUND, prob.u, 0.0)
        lower = np.where(prob.l > -INF_BOUND, prob.l, 0.0)
        support = upper @ np.maximum(v, 0.0) + lower @ np.minimum(v, 0.0)
        return bool(support < -eps and _norm(prob.M.T @ v) < eps)

    @staticmethod
    def _active_set(prob: QpProblem, Mx: np.ndarray, y: np.ndarray) -> ActiveSet:
        # y is positive at an active upper bound and negative at an active lower bound
        equality = prob.equality_rows
        with np.errstate(invalid="ignore"):
            lower = equality | (Mx - prob.l < -y)
            upper = ~lower & (prob.u - Mx < y)
        return lower, upper

    def _solve_active(
        self, prob: QpProblem, lower: np.ndarray, upper: np.ndarray
    ) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """Stationary point with the active rows held at their bounds"""
        active = np.flatnonzero(lower | upper)
        d, n_active = prob.dim, active.size

        A = prob.M[active]
        b = np.where(lower[active], prob.l[active], prob.u[active])
        delta = self._regularization(prob.H)
        K_true = np.block([[prob.H, A.T], [A, np.zeros((n_active, n_active))]])
        K = K_true + np.diag(np.concatenate([np.full(d, delta), np.full(n_active, -delta)]))
        rhs = np.concatenate([-prob.f, b])

        try:
            factor = sla.lu_factor(K, check_finite=False)
        except (np.linalg.LinAlgError, ValueError):
            return None
        solution = sla.lu_solve(factor, rhs)
        for _ in range(self.settings.polish_refine_iter):
            solution = solution + sla.lu_solve(factor, rhs - K_true @ solution)
        if not np.all(np.isfinite(solution)):
            return None

        y = np.zeros(prob.n_constraints)
        y[active] = solution[d:]
        return solution[:d], y

    def _polish(self, prob: QpProblem, guess: ActiveSet) -> Optional[_Check]:
        """Refine the guessed active set until it is stable, then verify the KKT point"""
        s = self.settings
        lower, upper = guess
        candidate = None
        for _ in range(s.polish_passes):
            candidate = self._solve_active(prob, lower, upper)
            if candidate is None:
                return None
            refined = self._active_set(prob, prob.M @ candidate[0], candidate[1])
            if _same_active_set((lower, upper), refined):
                break
            lower, upper = refined
        else:
            return None

        x, y = candidate
        sign_tol = s.eps_abs + s.eps_rel * _norm(y)
        inequality = ~prob.equality_rows
        if np.any(y[lower & inequality] > sign_tol) or np.any(y[upper] < -sign_tol):
            return None

        check = self._residuals(prob, x, np.clip(prob.M @ x, prob.l, prob.u), y)
        return check if check.converged else None

    def _result(
        self,
        status: QpStatus,
        check: Optional[_Check],
        iterations: int,
        rho_bar: float,
        polished: Optional[_Check] = None,
    ) -> QpSolution:
        return QpSolution(
            status=status,
            z=check.x,
            y=check.y,
            iterations=iterations,
            primal_residual=check.primal,
            dual_residual=check.dual,
            eps_primal=check.eps_primal,
            eps_dual=check.eps_dual,
            polished=polished is not None,
            rho=rho_bar,
        )

    def _failed(
        self, prob: QpProblem, iterations: int, best: Optional[_Check] = None
    ) -> QpSolution:
        if best is not None:
            return self._result(QpStatus.FAILURE, best, iterations, self.settings.rho)
        return QpSolution(
            status=QpStatus.FAILURE,
            z=np.zeros(prob.dim),
            y=np.zeros(prob.n_constraints),
            iterations=iterations,
            primal_residual=np.inf,
            dual_residual=np.inf,
        )


def solve(
    prob: QpProblem,
    settings: Optional[QpSettings] = None,
    warm_start: Optional[Tuple[np.ndarray, np.ndarray]] = None,
) -> QpSolution:
    """Solve prob with a fresh QpSolver"""
    return QpSolver(settings).solve(prob, warm_start)
