"""Cold-gas de-orbit toolkit: Hohmann planning, thruster sizing, flow and trajectory simulation."""

__version__ = "0.1.0"

from .astro import EARTH, BodyConstants, KeplerianElements, StateVector, Vec3  # noqa: E402
from .transfer import plan_hohmann, propellant_mass  # noqa: E402

__all__ = [
    "EARTH",
    "BodyConstants",
    "KeplerianElements",
    "StateVector",
    "Vec3",
    "plan_hohmann",
    "propellant_mass",
]
