"""Data-driven state construction, identification and prediction"""

from .chi import DataMatrices, build_chi, build_data_matrices, chi_dimension
from .identification import DataDrivenModel, identify, propagate
from .predictor import Predictor, build_predictor

__all__ = [
    "DataMatrices",
    "build_chi",
    "build_data_matrices",
    "chi_dimension",
    "DataDrivenModel",
    "identify",
    "propagate",
    "Predictor",
    "build_predictor",
]
