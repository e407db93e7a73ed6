"""Application configuration"""

import os
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Base directory for the project
BASE_DIR = Path(__file__).parent.parent.parent


class Config:
    """Application configuration"""
    
    # Output
    OUTPUT_DIR: str = os.getenv("D2PC_OUTPUT_DIR", "./results")
    LOG_LEVEL: str = os.getenv("D2PC_LOG_LEVEL", "WARNING")
    
    # Experiments
    DEFAULT_SEED: int = int(os.getenv("D2PC_SEED", "0"))
    DEFAULT_TRIALS: int = int(os.getenv("D2PC_TRIALS", "10"))
    WORKERS: int = int(os.getenv("D2PC_WORKERS", "1"))
    DIVERGENCE_LIMIT: float = float(os.getenv("D2PC_DIVERGENCE_LIMIT", "1e6"))
    
    # Identification
    PINV_TOL: float = float(os.getenv("D2PC_PINV_TOL", "2.220446049250313e-16"))
    
    # QP solver
    QP_EPS_ABS: float = float(os.getenv("D2PC_QP_EPS_ABS", "1e-6"))
    QP_EPS_REL: float = float(os.getenv("D2PC_QP_EPS_REL", "1e-6"))
    QP_MAX_ITER: int = int(os.getenv("D2PC_QP_MAX_ITER", "10000"))
    QP_RHO: float = float(os.getenv("D2PC_QP_RHO", "0.1"))
    QP_DUMP_DIR: Optional[str] = os.getenv("D2PC_QP_DUMP_DIR")


config = Config()
