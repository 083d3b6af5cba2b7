"""Private data transfer from one sender to two receivers over erasure channels."""

from .rates import (DomainError, InfeasibleParameters, ProtocolParams, RateBounds, SizePlan,
                    capacity_2p, rate_bounds, size_plan)

__version__ = "0.1.0"

__all__ = ["DomainError", "InfeasibleParameters", "ProtocolParams", "RateBounds", "SizePlan",
           "capacity_2p", "rate_bounds", "size_plan"]
