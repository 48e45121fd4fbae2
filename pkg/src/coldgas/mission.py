"""End-to-end Hohmann de-orbit mission driven by a JSON config file."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .astro import EARTH, BodyConstants, KeplerianElements, elements_to_state
from .atmosphere import AtmosphereModel
from .errors import DomainError
from .propagator import (
    APOGEE,
    PERIGEE,
    ImpulsiveBurn,
    PropagationResult,
    SpacecraftConfig,
    StopCondition,
    propagate,
)
from .transfer import PropellantBudget, TransferPlan, plan_hohmann, propellant_mass


@dataclass(frozen=True)
class DecayLeg:
    floor_km: float = 100.0
    dt_s: float = 10.0
    max_duration_s: float = 365 * 86400.0


@dataclass(frozen=True)
class MissionConfig:
    altitude_km: float
    target_altitude_km: float
    dry_mass_kg: float
    isp_s: float
    area_m2: float
    inclination_deg: float = 0.0
    raan_deg: float = 0.0
    cd: float = 2.2
    dt_s: float = 1.0
    max_duration_s: float = 10000.0
    drag: bool = False
    decay: DecayLeg | None = None

    @classmethod
    def from_dict(cls, data: dict) -> MissionConfig:
        try:
            orbit = data["initial_orbit"]
            vehicle = data["vehicle"]
            sim = data.get("sim", {})
            decay = data.get("decay")
            return cls(
                altitude_km=float(orbit["altitude_km"]),
                inclination_deg=float(orbit.get("inclination_deg", 0.0)),
                raan_deg=float(orbit.get("raan_deg", 0.0)),
                target_altitude_km=float(data["target_altitude_km"]),
                dry_mass_kg=float(vehicle["dry_mass_kg"]),
                isp_s=float(vehicle["isp_s"]),
                cd=float(vehicle.get("cd", 2.2)),
                area_m2=float(vehicle["area_m2"]),
                dt_s=float(sim.get("dt_s", 1.0)),
                max_duration_s=float(sim.get("max_duration_s", 10000.0)),
                drag=bool(sim.get("drag", False)),
                decay=None if decay is None else DecayLeg(**{k: float(v) for k, v in decay.items()}),
            )
        except KeyError as exc:
            raise DomainError(f"mission file is missing key {exc}") from None
        except (TypeError, ValueError) as exc:
            raise DomainError(f"mission file has an invalid value: {exc}") from None


def load_mission(path) -> MissionConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"mission file is not valid JSON: {exc}") from None
    return MissionConfig.from_dict(data)


def example_mission_path():
    return resources.files("coldgas").joinpath("data/mission_668_250.json")


@dataclass
class MissionResult:
    plan: TransferPlan
    budget: PropellantBudget
    transfer: PropagationResult
    decay: PropagationResult | None = None
    events: list[dict] = field(default_factory=list)

    @property
    def samples(self):
        if self.decay is None:
            return self.transfer.samples
        return self.transfer.samples + self.decay.samples[1:]

    @property
    def burns(self):
        return [e for e in self.transfer.events if e["event"] == "burn"]

    @property
    def coast_s(self) -> float:
        b = self.burns
        return b[1]["t_s"] - b[0]["t_s"]


def _apsis_event(label, t, el: KeplerianElements, body):
    return {
        "event": label,
        "t_s": t,
        "a_km": el.semi_major_axis,
        "e": el.eccentricity,
        "perigee_alt_km": el.periapsis_radius - body.radius,
        "apogee_alt_km": el.apoapsis_radius - body.radius,
    }


def simulate_deorbit(mission: MissionConfig, body: BodyConstants = EARTH) -> MissionResult:
    """Plan the Hohmann transfer, fly it with RK4, and optionally decay by drag."""
    plan = plan_hohmann(mission.altitude_km, mission.target_altitude_km, body)
    budget = propellant_mass(
        (abs(plan.dv1) + abs(plan.dv2)) * 1e3, mission.isp_s, mission.dry_mass_kg
    )
    initial = elements_to_state(
        KeplerianElements(plan.r1, 0.0, mission.inclination_deg, mission.raan_deg, 0.0, 0.0), body
    )
    vehicle = SpacecraftConfig(
        mass=budget.m_initial,
        reference_area=mission.area_m2,
        drag_coefficient=mission.cd,
        isp=mission.isp_s,
    )
    second_apsis = PERIGEE if mission.target_altitude_km < mission.altitude_km else APOGEE
    burns = [
        ImpulsiveBurn(plan.dv1, time=0.0, label="dv1"),
        ImpulsiveBurn(plan.dv2, apsis=second_apsis, label="dv2"),
    ]
    atmosphere = AtmosphereModel.default() if mission.drag else None
    transfer = propagate(
        initial,
        vehicle,
        burns,
        atmosphere=atmosphere,
        dt=mission.dt_s,
        stop=StopCondition(max_time=mission.max_duration_s),
        body=body,
    )
    fired = [e for e in transfer.events if e["event"] == "burn"]
    if len(fired) < 2:
        raise DomainError(
            f"max_duration_s={mission.max_duration_s} ends before the second burn; "
            f"the coast alone needs {plan.tof:.6g} s"
        )

    events = []
    samples = transfer.samples
    for burn in fired:
        events.append(burn)
        after = [s for s in samples if s.t == burn["t_s"]][-1]
        events.append(_apsis_event(f"orbit_after_{burn['label']}", burn["t_s"], after.elements, body))
    final = samples[-1]
    events.append(_apsis_event("final_orbit", final.t, final.elements, body))
    events.append({
        "event": "propellant",
        "planned_kg": budget.m_propellant,
        "consumed_kg": sum(b["propellant_kg"] for b in fired),
    })

    decay = None
    if mission.decay is not None:
        leg = mission.decay
        decay_vehicle = SpacecraftConfig(transfer.final_mass, mission.area_m2, mission.cd)
        decay = propagate(
            final.state,
            decay_vehicle,
            atmosphere=AtmosphereModel.default(),
            dt=leg.dt_s,
            stop=StopCondition(max_time=leg.max_duration_s, altitude_floor=leg.floor_km),
            body=body,
            decimation=max(1, int(round(600.0 / leg.dt_s))),
        )
        events.append({"event": "decay_end", "reason": decay.stop_reason, "t_s": decay.final.t,
                       "alt_km": decay.final.altitude})

    return MissionResult(plan, budget, transfer, decay, events)
