"""Thompson-metric geometry on the positive-definite cone.

Distances, geodesics, barycenters, and Folner-averaged fixed points for
uniformly bounded matrix representations, backed by the C++ core.
"""

from ._conebary import (
    ConebaryError,
    barycenter,
    circumcenter,
    geodesic,
    karcher_mean,
    rep_diam,
    rep_size,
    solve_amenable,
    thompson_dist,
    tuple_diam,
    tuple_dist,
    verify_unitariser,
)

__all__ = [
    "ConebaryError",
    "barycenter",
    "circumcenter",
    "geodesic",
    "karcher_mean",
    "rep_diam",
    "rep_size",
    "solve_amenable",
    "thompson_dist",
    "tuple_diam",
    "tuple_dist",
    "verify_unitariser",
]
