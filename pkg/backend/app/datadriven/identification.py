"""Per-channel identification of the data-driven state map"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import config
from ..errors import InsufficientDataError, InvalidInputError
from ..numerics import numeric_rank, pinv
from ..plant import EpisodeData
from .chi import build_data_matrices, chi_dimension

logger = logging.getLogger(__name__)

MODEL_HEADER = "# d2pc-model"

# rank diagnostics only; the pseudoinverse itself truncates at config.PINV_TOL
RANK_REL_TOL = 1e-12


@dataclass(frozen=True)
class DataDrivenModel:
    """
    Identified pairs (A_i, B_i), one per output channel
    
    Channel i evolves as chi_i(t+1) = A_i chi_i(t) + B_i u(t); y_i(t) is
    entry nbar-1 (0-based) of chi_i(t+1).
    """
    
    A_blocks: Tuple[np.ndarray, ...]
    B_blocks: Tuple[np.ndarray, ...]
    nbar: int
    m: int
    episodes_averaged: int = 1
    ranks: Tuple[int, ...] = ()
    
    def __post_init__(self):
        if self.nbar < 1 or self.m < 1:
            raise InvalidInputError("nbar and m must be at least 1")
        if self.episodes_averaged < 1:
            raise InvalidInputError("episodes_averaged must be at least 1")
        if not self.A_blocks or len(self.A_blocks) != len(self.B_blocks):
            raise InvalidInputError("need one (A, B) pair per channel")
        d = self.chi_dim
        A_blocks = tuple(np.asarray(a, dtype=float) for a in self.A_blocks)
        B_blocks = tuple(self._input_block(b, d) for b in self.B_blocks)
        for a, b in zip(A_blocks, B_blocks):
            if a.shape != (d, d) or b.shape != (d, self.m):
                raise InvalidInputError(
                    f"channel blocks must be {d}x{d} and {d}x{self.m}, got {a.shape} and {b.shape}"
                )
        object.__setattr__(self, "A_blocks", A_blocks)
        object.__setattr__(self, "B_blocks", B_blocks)
    
    def _input_block(self, b: Any, d: int) -> np.ndarray:
        # a single-input B may be passed as a vector
        b = np.asarray(b, dtype=float)
        if b.ndim == 1 and self.m == 1 and b.size == d:
            return b.reshape(d, 1)
        if b.shape != (d, self.m):
            raise InvalidInputError(f"channel B block must be {d}x{self.m}, got {b.shape}")
        return b
    
    @property
    def p(self) -> int:
        return len(self.A_blocks)
    
    @property
    def chi_dim(self) -> int:
        """Per-channel chi dimension (1+m)*nbar"""
        return chi_dimension(self.nbar, self.m)
    
    @property
    def state_dim(self) -> int:
        """Stacked chi dimension p*(1+m)*nbar"""
        return self.p * self.chi_dim
    
    def output(self, chi_next: Any) -> np.ndarray:
        """Read y(t) out of the stacked chi(t+1)"""
        chi_next = self._stacked(chi_next)
        return chi_next.reshape(self.p, self.chi_dim)[:, self.nbar - 1].copy()
    
    def _stacked(self, chi: Any) -> np.ndarray:
        chi = np.asarray(chi, dtype=float).reshape(-1)
        if chi.size != self.state_dim:
            raise InvalidInputError(
                f"stacked chi must have dimension {self.state_dim}, got {chi.size}"
            )
        return chi
    
    def to_file(self, path: Union[str, Path]) -> Path:
        """Write the model as plain-text matrix blocks"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as handle:
            handle.write(
                f"{MODEL_HEADER} nbar={self.nbar} m={self.m} p={self.p} "
                f"episodes={self.episodes_averaged}\n"
            )
            for i, (a, b) in enumerate(zip(self.A_blocks, self.B_blocks)):
                for label, block in (("A", a), ("B", b)):
                    handle.write(f"# block {label} {i} {block.shape[0]} {block.shape[1]}\n")
                    np.savetxt(handle, block, fmt="%.17g")
        return path
    
    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "DataDrivenModel":
        """Read a model written by to_file"""
        path = Path(path)
        with open(path) as handle:
            lines = [line.strip() for line in handle if line.strip()]
        if not lines or not lines[0].startswith(MODEL_HEADER):
            raise InvalidInputError(f"{path} is not a model file")
        
        meta = dict(field.split("=") for field in lines[0][len(MODEL_HEADER):].split())
        blocks = {"A": {}, "B": {}}
        k = 1
        try:
            while k < len(lines):
                _, _, label, channel, rows, cols = lines[k].split()
                rows, cols = int(rows), int(cols)
                values = [
                    [float(v) for v in line.split()] for line in lines[k + 1:k + 1 + rows]
                ]
                blocks[label][int(channel)] = np.array(values).reshape(rows, cols)
                k += 1 + rows
        except (ValueError, KeyError) as e:
            raise InvalidInputError(f"{path}: malformed block near line {k + 1}") from e
        
        p = int(meta["p"])
        return cls(
            A_blocks=tuple(blocks["A"][i] for i in range(p)),
            B_blocks=tuple(blocks["B"][i] for i in range(p)),
            nbar=int(meta["nbar"]),
            m=int(meta["m"]),
            episodes_averaged=int(meta.get("episodes", 1)),
        )


def _identify_channel(
    episodes: Sequence[EpisodeData],
    channel: int,
    nbar: int,
    pinv_tol: float,
) -> Tuple[np.ndarray, np.ndarray, int]:
    m = episodes[0].m
    d = chi_dimension(nbar, m)
    expected = d + m
    
    total = np.zeros((d, d + m))
    lowest_rank = expected
    for index, episode in enumerate(episodes):
        data = build_data_matrices(episode, channel, nbar)
        J = data.J
        rank = numeric_rank(J, max(pinv_tol, RANK_REL_TOL)).numeric_rank
        logger.debug(
            "Channel %d episode %d: data matrix rank %d of %d", channel, index, rank, expected
        )
        lowest_rank = min(lowest_rank, rank)
        total += data.X_plus @ pinv(J, pinv_tol)

    if lowest_rank < expected:
        logger.warning(
            "Channel %d: data matrix rank %d below %d (expected when nbar exceeds the plant order)",
            channel, lowest_rank, expected,
        )
    AB = total / len(episodes)
    return AB[:, :d], AB[:, d:], lowest_rank


def identify(
    episodes: Sequence[EpisodeData],
    nbar: int,
    pinv_tol: Optional[float] = None,
) -> DataDrivenModel:
    """
    Identify one (A_i, B_i) pair per output channel and average over episodes
    
    Args:
        episodes: Recorded experiments, all with the same m and p
        nbar: Order bound
        pinv_tol: Pseudoinverse tolerance (defaults to config.PINV_TOL)
        
    Returns:
        DataDrivenModel with episodes_averaged = len(episodes)
    """
    episodes = list(episodes)
    if not episodes:
        raise InsufficientDataError("at least one episode is required")
    m, p = episodes[0].m, episodes[0].p
    if any(e.m != m or e.p != p for e in episodes):
        raise InvalidInputError("episodes disagree on input/output dimensions")
    tol = pinv_tol if pinv_tol is not None else config.PINV_TOL
    
    A_blocks: List[np.ndarray] = []
    B_blocks: List[np.ndarray] = []
    ranks: List[int] = []
    for channel in range(p):
        A, B, rank = _identify_channel(episodes, channel, nbar, tol)
        A_blocks.append(A)
        B_blocks.append(B)
        ranks.append(rank)
    
    return DataDrivenModel(
        A_blocks=tuple(A_blocks),
        B_blocks=tuple(B_blocks),
        nbar=nbar,
        m=m,
        episodes_averaged=len(episodes),
        ranks=tuple(ranks),
    )


def propagate(model: DataDrivenModel, chi: Any, u: Any) -> np.ndarray:
    """
    One step of the stacked data-driven map
    
    Args:
        model: Identified model
        chi: Stacked chi(t) of dimension p*(1+m)*nbar
        u: Input u(t)
        
    Returns:
        Stacked chi(t+1)
    """
    chi = model._stacked(chi)
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.size != model.m:
        raise InvalidInputError(f"input must have dimension {model.m}, got {u.size}")
    d = model.chi_dim
    blocks = chi.reshape(model.p, d)
    return np.concatenate(
        [a @ blocks[i] + b @ u for i, (a, b) in enumerate(zip(model.A_blocks, model.B_blocks))]
    )
