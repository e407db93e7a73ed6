"""Factory for creating controllers"""

from typing import Optional, Tuple

from ..datadriven import DataDrivenModel
from ..errors import ConfigurationError
from ..plant import LtiSystem
from ..qp import QpSettings
from .base import BaseController, ControllerConfig, ControllerMethod
from .d2pc import D2pcController
from .deepc import DeepcController, DeepcData
from .mpc import MpcController


class ControllerFactory:
    """Factory for creating controller instances"""
    
    @staticmethod
    def create(
        method: ControllerMethod,
        config: ControllerConfig,
        system: Optional[LtiSystem] = None,
        model: Optional[DataDrivenModel] = None,
        data: Optional[DeepcData] = None,
        regularization: Optional[Tuple[float, Optional[float]]] = None,
        settings: Optional[QpSettings] = None,
        **kwargs
    ) -> BaseController:
        """
        Create a controller
        
        Args:
            method: Controller method
            config: Horizon, weights and bounds
            system: True plant (MPC only)
            model: Identified model (D2PC only)
            data: Hankel blocks (DeePC and rDeePC)
            regularization: (lambda_g, lambda_y), required for rDeePC
            settings: Solver settings
            **kwargs: Passed to the controller (e.g. dump_dir)
            
        Returns:
            Controller instance
        """
        if method == ControllerMethod.MPC:
            if system is None:
                raise ConfigurationError("MPC needs the plant")
            return MpcController(config, system, settings=settings, **kwargs)
        elif method == ControllerMethod.D2PC:
            if model is None:
                raise ConfigurationError("D2PC needs an identified model")
            return D2pcController(config, model, settings=settings, **kwargs)
        elif method in (ControllerMethod.DEEPC, ControllerMethod.RDEEPC):
            if data is None:
                raise ConfigurationError(f"{method.value} needs Hankel data")
            if method == ControllerMethod.RDEEPC and regularization is None:
                raise ConfigurationError("rDeePC needs (lambda_g, lambda_y)")
            if method == ControllerMethod.DEEPC:
                regularization = None
            return DeepcController(config, data, regularization, settings=settings, **kwargs)
        else:
            raise ConfigurationError(f"Unsupported method: {method}")
    
    @staticmethod
    def from_string(method_str: str) -> ControllerMethod:
        """
        Convert string to ControllerMethod
        
        Args:
            method_str: Method name as string
            
        Returns:
            ControllerMethod enum value
        """
        method_str = method_str.lower().strip()
        try:
            return ControllerMethod(method_str)
        except ValueError:
            raise ConfigurationError(
                f"Unknown method: {method_str}. "
                f"Supported methods: {[m.value for m in ControllerMethod]}"
            )
