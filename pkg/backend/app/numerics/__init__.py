"""Dense linear-algebra utilities: pseudoinverse, rank, Hankel matrices"""

from .linalg import RankReport, as_matrix, numeric_rank, pinv
from .hankel import hankel, is_persistently_exciting

__all__ = [
    "RankReport",
    "as_matrix",
    "numeric_rank",
    "pinv",
    "hankel",
    "is_persistently_exciting",
]
