"""Bodies, sphere quadrature, metrics and mollification."""
from .bodies import (
    Ball,
    Ellipsoid,
    Polytope,
    RadialSeries,
    Reflected,
    StarBody,
    TabulatedStarBody,
    convexity_certificate,
    cube,
)
from .frames import as_directions, householder_frame
from .metrics import hausdorff_and_l2, radial_metric, support, vitale_check
from .mollify import MollifiedBody, mollify
from .quadrature import SphereQuadrature, ball_volume, default_subgrid, sphere_area, sphere_grid
from .specio import body_from_spec, load_body, save_body


def radial(body, xi):
    """rho_K(xi)."""
    return body.radial(xi)


def reflect(body):
    """-K."""
    return body.reflected()


__all__ = [
    "Ball",
    "Ellipsoid",
    "MollifiedBody",
    "Polytope",
    "RadialSeries",
    "Reflected",
    "SphereQuadrature",
    "StarBody",
    "TabulatedStarBody",
    "as_directions",
    "ball_volume",
    "body_from_spec",
    "convexity_certificate",
    "cube",
    "default_subgrid",
    "hausdorff_and_l2",
    "householder_frame",
    "load_body",
    "mollify",
    "radial",
    "radial_metric",
    "reflect",
    "save_body",
    "sphere_area",
    "sphere_grid",
    "support",
    "vitale_check",
]
