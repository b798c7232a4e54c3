"""Numerical verification of identities on hyperbolic surfaces."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .identities import (  # noqa: E402,F401
    IdentityReport,
    basmajian_pants,
    bridgeman_pants,
    htz,
    luo_tan_torus,
    mcshane_torus,
    mirzakhani_torus,
    polygon_bridgeman,
    twz,
)
from .moebius import Geodesic, IdealPolygon, Matrix2, cross_ratio, geodesic_distance  # noqa: E402,F401
from .numerics import QuadratureSpec, integrate, polylog, rogers  # noqa: E402,F401
from .tracetree import TraceTriple, bq_check, enumerate_primitives  # noqa: E402,F401
