"""Layered exponential atmosphere density model."""

from __future__ import annotations

import bisect
import csv
import io
import math
from importlib import resources

from .errors import DomainError


class AtmosphereModel:
    """Piecewise-exponential density, ``rho_base * exp(-(h - h_base) / H)``.

    Layers are ``(base_altitude_km, base_density_kgm3, scale_height_km)``
    sorted by base altitude. Altitudes below the first base use the first
    layer; altitudes above the last base extrapolate the last layer.
    """

    def __init__(self, layers):
        layers = sorted((float(h), float(rho), float(H)) for h, rho, H in layers)
        if not layers:
            raise DomainError("atmosphere needs at least one layer")
        for h, rho, H in layers:
            if not (rho > 0 and H > 0):
                raise DomainError(f"layer at {h} km has non-positive density or scale height")
        self.layers = layers
        self._bases = [h for h, _, _ in layers]

    @classmethod
    def default(cls) -> AtmosphereModel:
        text = resources.files("coldgas").joinpath("data/atmosphere.csv").read_text()
        return cls.from_csv_text(text)

    @classmethod
    def from_csv_text(cls, text: str) -> AtmosphereModel:
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        reader = csv.DictReader(io.StringIO("\n".join(lines)))
        return cls(
            (row["base_altitude_km"], row["base_density_kgm3"], row["scale_height_km"])
            for row in reader
        )

    def density(self, altitude_km: float) -> float:
        """Mass density in kg/m^3 at geometric altitude ``altitude_km``."""
        i = max(bisect.bisect_right(self._bases, altitude_km) - 1, 0)
        h0, rho0, H = self.layers[i]
        return rho0 * math.exp(-(altitude_km - h0) / H)
