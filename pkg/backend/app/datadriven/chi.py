"""Non-minimal chi states and the shifted data matrices built from them"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..errors import InsufficientDataError, InvalidInputError
from ..numerics import hankel
from ..numerics.hankel import as_signal
from ..plant import EpisodeData


def chi_dimension(nbar: int, m: int) -> int:
    """(1+m)*nbar"""
    return (1 + m) * nbar


def build_chi(y_history: Any, u_history: Any, nbar: int) -> np.ndarray:
    """
    Flatten one channel's history into col(y_i(t-nbar..t-1), u(t-nbar..t-1))
    
    Args:
        y_history: nbar past outputs of the channel, oldest first
        u_history: nbar past input vectors, oldest first
        nbar: Order bound
        
    Returns:
        Vector of dimension (1+m)*nbar
    """
    y = np.asarray(y_history, dtype=float).reshape(-1)
    u = as_signal(u_history, "u_history") if nbar > 0 else np.zeros((0, 1))
    if y.size != nbar or u.shape[0] != nbar:
        raise InvalidInputError(
            f"expected {nbar} output and input samples, got {y.size} and {u.shape[0]}"
        )
    return np.concatenate([y, u.reshape(-1)])


@dataclass(frozen=True)
class DataMatrices:
    """X_minus = [chi(0) .. chi(T-1)], X_plus = [chi(1) .. chi(T)], U_minus = [u(0) .. u(T-1)]"""
    
    X_minus: np.ndarray
    X_plus: np.ndarray
    U_minus: np.ndarray
    channel: int
    nbar: int
    
    @property
    def T(self) -> int:
        return self.U_minus.shape[1]
    
    @property
    def J(self) -> np.ndarray:
        """Stacked col(X_minus, U_minus)"""
        return np.vstack([self.X_minus, self.U_minus])


def build_data_matrices(episode: EpisodeData, channel: int, nbar: int) -> DataMatrices:
    """
    Assemble the shifted data matrices of one output channel
    
    Time zero is the episode's initial_offset; chi(0) reaches back into the
    reserved leading samples.
    
    Args:
        episode: Recorded experiment
        channel: Output channel index i < p
        nbar: Order bound, at most initial_offset
        
    Returns:
        DataMatrices with T = total_length - initial_offset columns
    """
    if nbar < 1:
        raise InvalidInputError("nbar must be at least 1")
    if not 0 <= channel < episode.p:
        raise InvalidInputError(f"channel {channel} out of range for p = {episode.p}")
    offset = episode.initial_offset
    T = episode.length
    if offset < nbar:
        raise InsufficientDataError(
            f"episode reserves {offset} history samples, nbar = {nbar} needs at least that many"
        )
    if T < 1:
        raise InsufficientDataError("episode has no samples after its history window")
    
    start = offset - nbar
    y_windows = hankel(episode.outputs[start:, channel], nbar)
    u_windows = hankel(episode.inputs[start:], nbar)
    # column k of each window matrix is the history part of chi(k), k = 0..T
    windows = np.vstack([y_windows, u_windows])
    
    return DataMatrices(
        X_minus=windows[:, :T],
        X_plus=windows[:, 1:T + 1],
        U_minus=episode.inputs[offset:].T.copy(),
        channel=channel,
        nbar=nbar,
    )
