"""Condensing of the predictive-control problems into QpProblem form"""

from typing import Any, Optional, Tuple

import numpy as np
from scipy import linalg as sla

from ..datadriven import Predictor
from ..errors import InvalidInputError
from ..plant import LtiSystem
from .problem import QpProblem

# (lower, upper); scalars broadcast, None means unbounded on that side
Bounds = Optional[Tuple[Any, Any]]


def _bound_vectors(
    bounds: Bounds, size: int, repeat: int
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Stack per-sample bounds over `repeat` horizon steps"""
    if bounds is None:
        return None
    lower, upper = bounds
    lower = np.full(size, -np.inf) if lower is None else np.broadcast_to(
        np.asarray(lower, dtype=float).reshape(-1), (size,)
    )
    upper = np.full(size, np.inf) if upper is None else np.broadcast_to(
        np.asarray(upper, dtype=float).reshape(-1), (size,)
    )
    if np.any(lower > upper):
        raise InvalidInputError("bounds must describe nonempty intervals")
    if np.all(np.isinf(lower)) and np.all(np.isinf(upper)):
        return None
    return np.tile(lower, repeat), np.tile(upper, repeat)


def _weights(Q: Any, R: Any, p: int, m: int, N: int) -> Tuple[np.ndarray, np.ndarray]:
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    R = np.atleast_2d(np.asarray(R, dtype=float))
    if Q.shape != (p, p) or R.shape != (m, m):
        raise InvalidInputError(f"Q must be {p}x{p} and R {m}x{m}, got {Q.shape} and {R.shape}")
    return np.kron(np.eye(N), Q), np.kron(np.eye(N), R)


def _stacked_reference(r: Any, size: int) -> np.ndarray:
    r = np.asarray(r, dtype=float).reshape(-1)
    if r.size != size:
        raise InvalidInputError(f"reference must have {size} entries, got {r.size}")
    return r


def condense_tracking(
    free: Any,
    gamma: np.ndarray,
    r: Any,
    Q: Any,
    R: Any,
    horizon: int,
    input_bounds: Bounds = None,
    output_bounds: Bounds = None,
) -> QpProblem:
    """
    Tracking QP over u_seq for outputs y_seq = free + gamma @ u_seq

    Args:
        free: Free output response over the horizon (p*N)
        gamma: Forced response map (p*N x m*N)
        r: Stacked reference (p*N)
        Q: Output weight (p x p)
        R: Input weight (m x m)
        horizon: N
        input_bounds: Per-sample (u_min, u_max)
        output_bounds: Per-sample (y_min, y_max)

    Returns:
        QpProblem with H = 2(G'QG + R), f = 2G'Q(free - r)
    """
    gamma = np.atleast_2d(np.asarray(gamma, dtype=float))
    free = np.asarray(free, dtype=float).reshape(-1)
    rows, cols = gamma.shape
    if rows % horizon or cols % horizon or free.size != rows:
        raise InvalidInputError("prediction matrices are inconsistent with the horizon")
    p, m = rows // horizon, cols // horizon
    Q_bar, R_bar = _weights(Q, R, p, m, horizon)
    r = _stacked_reference(r, rows)

    H = 2.0 * (gamma.T @ Q_bar @ gamma + R_bar)
    f = 2.0 * gamma.T @ Q_bar @ (free - r)

    M_rows, lower, upper = [], [], []
    box = _bound_vectors(input_bounds, m, horizon)
    if box is not None:
        M_rows.append(np.eye(cols))
        lower.append(box[0])
        upper.append(box[1])
    out = _bound_vectors(output_bounds, p, horizon)
    if out is not None:
        M_rows.append(gamma)
        lower.append(out[0] - free)
        upper.append(out[1] - free)

    if M_rows:
        return QpProblem(
            H=H, f=f, M=np.vstack(M_rows), l=np.concatenate(lower), u=np.concatenate(upper)
        )
    return QpProblem(H=H, f=f, M=np.zeros((0, cols)), l=np.zeros(0), u=np.zeros(0))


def condense_d2pc(
    predictor: Predictor,
    chi_now: Any,
    r: Any,
    Q: Any,
    R: Any,
    input_bounds: Bounds = None,
    output_bounds: Bounds = None,
) -> QpProblem:
    """
    D2PC problem over u_seq given the stacked chi(t)

    Args:
        predictor: Predictor of the identified model
        chi_now: Stacked chi(t)
        r: Stacked reference r(t..t+N-1)

    Returns:
        QpProblem in the input sequence
    """
    chi_now = np.asarray(chi_now, dtype=float).reshape(-1)
    if chi_now.size != predictor.state_dim:
        raise InvalidInputError(
            f"chi must have dimension {predictor.state_dim}, got {chi_now.size}"
        )
    return condense_tracking(
        predictor.phi @ chi_now, predictor.gamma, r, Q, R, predictor.horizon,
        input_bounds, output_bounds,
    )


def mpc_prediction_matrices(
    A: np.ndarray, B: np.ndarray, C: np.ndarray, N: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Output prediction y(t..t+N-1) = O x(t) + Gamma u(t..t+N-1)

    Returns:
        (O, Gamma) with O = col(C A^k) and Gamma block (k, j) = C A^(k-1-j) B for j < k
    """
    if N < 1:
        raise InvalidInputError("horizon must be at least 1")
    m, p = B.shape[1], C.shape[0]
    # markov[k] = C A^k
    markov = [C]
    for _ in range(N - 1):
        markov.append(markov[-1] @ A)
    O = np.vstack(markov)
    Gamma = np.zeros((p * N, m * N))
    for k in range(1, N):
        for j in range(k):
            Gamma[k * p:(k + 1) * p, j * m:(j + 1) * m] = markov[k - 1 - j] @ B
    return O, Gamma


def condense_mpc(
    system: LtiSystem,
    x_now: Any,
    N: int,
    r: Any,
    Q: Any,
    R: Any,
    input_bounds: Bounds = None,
    output_bounds: Bounds = None,
    prediction: Optional[Tuple[np.ndarray, np.ndarray]] = None,
) -> QpProblem:
    """Model-based tracking problem from the true state"""
    O, Gamma = prediction if prediction is not None else mpc_prediction_matrices(
        system.A, system.B, system.C, N
    )
    x_now = np.asarray(x_now, dtype=float).reshape(-1)
    return condense_tracking(O @ x_now, Gamma, r, Q, R, N, input_bounds, output_bounds)


def condense_deepc(
    U_p: np.ndarray,
    Y_p: np.ndarray,
    U_f: np.ndarray,
    Y_f: np.ndarray,
    u_ini: Any,
    y_ini: Any,
    r: Any,
    Q: Any,
    R: Any,
    input_bounds: Bounds = None,
    output_bounds: Bounds = None,
    regularization: Optional[Tuple[float, Optional[float]]] = None,
) -> QpProblem:
    """
    DeePC problem over the Hankel combination g

    With regularization (lambda_g, lambda_y) the decision variable becomes
    (g, sigma_y) and the past-output rows read Y_p g - sigma_y = y_ini.
    lambda_y = None keeps sigma_y out of the problem.

    Returns:
        QpProblem; the planned inputs are U_f @ z[:g_dim]
    """
    U_p, Y_p, U_f, Y_f = (np.atleast_2d(np.asarray(X, dtype=float)) for X in (U_p, Y_p, U_f, Y_f))
    cols = U_p.shape[1]
    if any(X.shape[1] != cols for X in (Y_p, U_f, Y_f)):
        raise InvalidInputError("Hankel blocks must share a column count")
    u_ini = np.asarray(u_ini, dtype=float).reshape(-1)
    y_ini = np.asarray(y_ini, dtype=float).reshape(-1)
    if u_ini.size != U_p.shape[0] or y_ini.size != Y_p.shape[0]:
        raise InvalidInputError("initial trajectory does not match the past blocks")

    mN, pN = U_f.shape[0], Y_f.shape[0]
    t_ini_m, t_ini_p = U_p.shape[0], Y_p.shape[0]
    # infer m and p from Q and R
    p = np.atleast_2d(np.asarray(Q)).shape[0]
    m = np.atleast_2d(np.asarray(R)).shape[0]
    if mN % m or pN % p or mN // m != pN // p or t_ini_m % m or t_ini_p % p \
            or t_ini_m // m != t_ini_p // p:
        raise InvalidInputError("Hankel block sizes are inconsistent with T_ini, N, m, p")
    N = mN // m
    Q_bar, R_bar = _weights(Q, R, p, m, N)
    r = _stacked_reference(r, pN)

    lambda_g, lambda_y = regularization if regularization is not None else (0.0, None)
    if lambda_g < 0 or (lambda_y is not None and lambda_y < 0):
        raise InvalidInputError("regularization weights must be nonnegative")

    H = 2.0 * (Y_f.T @ Q_bar @ Y_f + U_f.T @ R_bar @ U_f) + 2.0 * lambda_g * np.eye(cols)
    f = -2.0 * Y_f.T @ Q_bar @ r
    M = [U_p, Y_p]
    lower = [u_ini, y_ini]
    upper = [u_ini, y_ini]

    box = _bound_vectors(input_bounds, m, N)
    if box is not None:
        M.append(U_f)
        lower.append(box[0])
        upper.append(box[1])
    out = _bound_vectors(output_bounds, p, N)
    if out is not None:
        M.append(Y_f)
        lower.append(out[0])
        upper.append(out[1])
    M = np.vstack(M)

    if lambda_y is not None:
        slack = t_ini_p
        H = sla.block_diag(H, 2.0 * lambda_y * np.eye(slack))
        f = np.concatenate([f, np.zeros(slack)])
        S = np.zeros((M.shape[0], slack))
        S[t_ini_m:t_ini_m + t_ini_p] = -np.eye(slack)
        M = np.hstack([M, S])

    return QpProblem(H=H, f=f, M=M, l=np.concatenate(lower), u=np.concatenate(upper))
