"""Command-line front end: ``coldgas {plan,tank,nozzle,flow,simulate,screen}``.

Orbital subcommands take km; engineering subcommands take SI units
(Pa, m, K). Every run produces a :class:`RunReport`; ``--json`` prints it on
stdout and moves the human-readable table to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .astro import EARTH, G0
from .errors import ColdGasError
from .flow import AreaProfile, solve_profile, write_stations_csv
from .mission import load_mission, simulate_deorbit
from .nozzle import GasModel, design_nozzle, read_geometry_profile, static_ratios, write_geometry_profile
from .propagator import read_trajectory_csv, write_elements_csv, write_trajectory_csv
from .screening import screen_all, write_events_csv
from .tank import TankSpec, lame_field, size_thickness, stored_gas_mass
from .tle import parse_epoch, parse_tle_lenient
from .transfer import plan_hohmann, propellant_mass

EXIT_USAGE = 2
EXIT_FILE = 9

UNIT_SUFFIXES = (
    "_km", "_kms", "_km2s2", "_s", "_min", "_m", "_m2", "_m3", "_ms", "_pa", "_pam2",
    "_k", "_kg", "_kgs", "_kgm3", "_n", "_deg", "_bar",
)
DIMENSIONLESS = {
    "exit_mach", "expansion_ratio", "pressure_ratio", "safety_factor", "gamma",
    "final_e", "event_count", "station_count", "skipped_count", "global_min_catalog_id",
    "throat_mach", "inlet_mach", "max_energy_drift_rel", "e", "catalog_id",
}

# Reference values printed alongside the isentropic results; not targets.
CFD_MAX_MACH = 2.22
CFD_MIN_TEMPERATURE_K = 163.1
CFD_THROAT_PRESSURE_BAR = 0.62
PAPER_ISP_S = 80.0


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    files: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    error: str | None = None

    def to_json(self) -> str:
        data = {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "files": self.files,
            "warnings": self.warnings,
        }
        if self.error is not None:
            data["error"] = self.error
        return json.dumps(data, indent=2) + "\n"

    def human(self) -> str:
        lines = [f"[{self.command}]"]
        width = max((len(k) for k in self.outputs), default=0)
        for key, val in self.outputs.items():
            if isinstance(val, float):
                shown = f"{val:.6g}"
            elif isinstance(val, list):
                shown = f"{len(val)} entries (see --json)"
            else:
                shown = str(val)
            lines.append(f"  {key:<{width}}  {shown}")
        for key, path in self.files.items():
            lines.append(f"  wrote {key}: {path}")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        return "\n".join(lines) + "\n"


def has_unit_suffix(key: str) -> bool:
    return key in DIMENSIONLESS or key.endswith(UNIT_SUFFIXES)


def _out_path(args, name: str) -> Path:
    out = Path(args.out) if args.out else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return out / name


def _positive(name):
    def conv(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not (value > 0 and math.isfinite(value)):
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {text!r}")
        return value
    return conv


def _nonneg(name):
    def conv(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not (value >= 0 and math.isfinite(value)):
            raise argparse.ArgumentTypeError(f"{name} must be non-negative, got {text!r}")
        return value
    return conv


# --- subcommands ---------------------------------------------------------

def cmd_plan(args) -> RunReport:
    if args.alt1 == args.alt2:
        raise UsageError("--alt1 and --alt2 must differ: a transfer to the same orbit is degenerate")
    rep = RunReport("plan", _echo(args))
    p = plan_hohmann(args.alt1, args.alt2, EARTH)
    rep.outputs.update({
        "r_earth_km": EARTH.radius,
        "r_orbit1_km": p.r1,
        "r_orbit2_km": p.r2,
        "a_transfer_km": p.a_transfer,
        "eps_transfer_km2s2": p.eps_transfer,
        "eps_orbit1_km2s2": p.eps_orbit1,
        "eps_orbit2_km2s2": p.eps_orbit2,
        "v_t1_kms": p.v_t1,
        "v_orbit1_kms": p.v_orbit1,
        "dv1_kms": p.dv1,
        "v_t2_kms": p.v_t2,
        "v_orbit2_kms": p.v_orbit2,
        "dv2_kms": p.dv2,
        "dv_total_kms": p.dv_total,
        "tof_s": p.tof,
        "tof_min": p.tof / 60.0,
    })
    if (args.alt1, args.alt2) == (668.0, 250.0):
        rep.warnings.append(
            "Table 1 prints dV1 = -1.1589 and dV2 = -1.176 km/s, a decimal-point typo; "
            "its own velocity rows give -0.11585 and -0.11763 km/s, summing to the printed -0.2335 km/s"
        )
        rep.warnings.append("the text quotes -223.5 m/s; Table 1 and this plan give -233.5 m/s")
    if (args.isp is None) != (args.dry_mass is None):
        raise UsageError("--isp and --dry-mass must be given together")
    if args.isp is not None:
        b = propellant_mass(abs(p.dv_total) * 1e3, args.isp, args.dry_mass)
        rep.outputs.update({
            "isp_s": b.isp,
            "u_eq_ms": b.u_eq,
            "dv_ms": b.dv,
            "m_initial_kg": b.m_initial,
            "m_final_kg": b.m_final,
            "m_propellant_kg": b.m_propellant,
        })
    return rep


def cmd_tank(args) -> RunReport:
    rep = RunReport("tank", _echo(args))
    if args.thickness is None:
        if args.allowable_stress is None:
            raise UsageError("give either --thickness or --allowable-stress")
        thickness = size_thickness(args.pressure, args.r_inner, args.allowable_stress, args.safety_factor)
    else:
        if args.allowable_stress is not None:
            raise UsageError("--thickness and --allowable-stress are mutually exclusive")
        thickness = args.thickness
    spec = TankSpec(
        p_internal=args.pressure,
        p_external=args.p_external,
        r_inner=args.r_inner,
        r_outer=args.r_inner + thickness,
        length=args.length or 0.0,
        allowable_stress=args.allowable_stress,
        safety_factor=args.safety_factor,
    )
    lf = lame_field(spec)
    rep.outputs.update({
        "thickness_m": thickness,
        "r_outer_m": spec.r_outer,
        "lame_a_pa": lf.const_a,
        "lame_b_pam2": lf.const_b,
        "hoop_inner_pa": float(lf.hoop_stress(spec.r_inner)),
        "hoop_outer_pa": float(lf.hoop_stress(spec.r_outer)),
        "radial_inner_pa": float(lf.radial_stress(spec.r_inner)),
        "radial_outer_pa": float(lf.radial_stress(spec.r_outer)),
        "axial_pa": lf.axial_stress,
    })
    if args.allowable_stress is not None:
        rep.outputs["working_stress_pa"] = args.allowable_stress / args.safety_factor
    if args.length:
        rep.outputs["volume_m3"] = spec.volume
        rep.outputs["gas_mass_kg"] = stored_gas_mass(
            args.pressure, spec.volume, args.temperature, args.gas_constant
        )
    path = _out_path(args, "tank_stress.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("r_m", "radial_pa", "hoop_pa"))
        for row in lf.profile(args.points):
            writer.writerow([repr(float(v)) for v in row])
    rep.files["stress_profile"] = str(path)
    return rep


def _gas(args) -> GasModel:
    return GasModel(args.gamma, args.gas_constant)


def _design(args):
    return design_nozzle(
        args.pc, args.tc, args.pe, args.throat_area, _gas(args),
        half_angles=(args.conv_half_angle, args.div_half_angle),
        inlet_diameter=args.inlet_diameter,
    )


def cmd_nozzle(args) -> RunReport:
    rep = RunReport("nozzle", _echo(args))
    d, g = _design(args)
    rep.outputs.update({
        "pressure_ratio": d.p_chamber / d.p_exit,
        "exit_mach": d.mach_exit,
        "expansion_ratio": d.expansion_ratio,
        "t_exit_k": d.t_exit,
        "p_exit_pa": d.p_exit,
        "throat_area_m2": d.throat_area,
        "exit_area_m2": d.exit_area,
        "inlet_area_m2": d.inlet_area,
        "throat_diameter_m": g.throat_diameter,
        "exit_diameter_m": g.exit_diameter,
        "inlet_diameter_m": g.inlet_diameter,
        "convergent_length_m": g.convergent_length,
        "divergent_length_m": g.divergent_length,
        "convergent_half_angle_deg": g.convergent_half_angle,
        "divergent_half_angle_deg": g.divergent_half_angle,
        "mass_flow_kgs": d.mass_flow,
        "exit_velocity_ms": d.exit_velocity,
        "thrust_vacuum_n": d.thrust_vacuum,
        "ideal_isp_s": d.ideal_isp(),
        "exit_velocity_isp_s": d.exit_velocity / G0,
    })
    rep.warnings.extend(g.length_discrepancies())
    rep.warnings.append(
        f"this design gives v_e/g0 = {d.exit_velocity / G0:.4g} s and vacuum Isp {d.ideal_isp():.4g} s; "
        f"propellant budgeting keeps the documented {PAPER_ISP_S:g} s unless --isp is set"
    )
    path = _out_path(args, "nozzle_profile.txt")
    write_geometry_profile(path, g, args.points)
    rep.files["geometry_profile"] = str(path)
    return rep


def cmd_flow(args) -> RunReport:
    rep = RunReport("flow", _echo(args))
    gas = _gas(args)
    if args.profile:
        rows = read_geometry_profile(args.profile)
        profile = AreaProfile.from_radii(rows[:, 0], rows[:, 1])
    else:
        missing = [f for f in ("pc", "tc", "pe", "throat_area") if getattr(args, f) is None]
        if missing:
            raise UsageError("give --profile or all of --pc --tc --pe --throat-area")
        _, geometry = _design(args)
        profile = AreaProfile.from_geometry(geometry, args.stations)
    p0 = args.pc
    t0 = args.tc
    if p0 is None or t0 is None:
        raise UsageError("stagnation state needs --pc and --tc")
    stations = solve_profile(profile, p0, t0, gas)
    throat, inlet, exit_ = stations[profile.throat_index], stations[0], stations[-1]
    flux = [s.mass_flux for s in stations]
    rep.outputs.update({
        "station_count": len(stations),
        "inlet_mach": inlet.mach,
        "throat_mach": throat.mach,
        "exit_mach": exit_.mach,
        "throat_pressure_pa": throat.pressure,
        "throat_temperature_k": throat.temperature,
        "exit_pressure_pa": exit_.pressure,
        "exit_temperature_k": exit_.temperature,
        "exit_velocity_ms": exit_.velocity,
        "mass_flow_kgs": flux[profile.throat_index],
        "mass_flow_spread_kgs": max(flux) - min(flux),
    })
    _, throat_p_ratio = static_ratios(1.0, gas)
    rep.warnings.extend([
        f"isentropic exit Mach {exit_.mach:.4g} vs CFD maximum {CFD_MAX_MACH} "
        f"({100 * (exit_.mach / CFD_MAX_MACH - 1):+.2f}%)",
        f"isentropic exit temperature {exit_.temperature:.4g} K vs CFD minimum "
        f"{CFD_MIN_TEMPERATURE_K} K (gap {exit_.temperature - CFD_MIN_TEMPERATURE_K:+.4g} K)",
        f"isentropic throat pressure {throat.pressure / 1e5:.4g} bar (P/P0 = {1 / throat_p_ratio:.4f}) "
        f"vs CFD {CFD_THROAT_PRESSURE_BAR} bar",
    ])
    path = _out_path(args, "flow_stations.csv")
    write_stations_csv(path, stations)
    rep.files["stations"] = str(path)
    return rep


def _angle_spread(values):
    ref = values[0]
    diffs = [((v - ref + 180.0) % 360.0) - 180.0 for v in values]
    return max(diffs) - min(diffs)


def cmd_simulate(args) -> RunReport:
    rep = RunReport("simulate", _echo(args))
    mission = load_mission(args.config)
    result = simulate_deorbit(mission)
    samples = result.samples
    transfer = result.transfer.samples
    final = result.transfer.final
    burns = result.burns
    rep.outputs.update({
        "dv1_kms": burns[0]["delta_v_kms"],
        "dv2_kms": burns[1]["delta_v_kms"],
        "burn1_t_s": burns[0]["t_s"],
        "burn2_t_s": burns[1]["t_s"],
        "coast_s": result.coast_s,
        "planned_tof_s": result.plan.tof,
        "final_a_km": final.elements.semi_major_axis,
        "final_e": final.elements.eccentricity,
        "final_perigee_alt_km": final.elements.periapsis_radius - EARTH.radius,
        "final_apogee_alt_km": final.elements.apoapsis_radius - EARTH.radius,
        "delta_inclination_deg": _angle_spread([s.elements.inclination for s in transfer]),
        "delta_raan_deg": _angle_spread([s.elements.raan for s in transfer]),
        "initial_mass_kg": result.budget.m_initial,
        "propellant_kg": result.budget.m_propellant,
        "max_energy_drift_rel": result.transfer.max_energy_drift,
    })
    if result.decay is not None:
        rep.outputs["decay_end_t_s"] = result.decay.final.t
        rep.outputs["decay_end_alt_km"] = result.decay.final.altitude
        rep.warnings.append(f"decay leg stopped on {result.decay.stop_reason}")
    rep.outputs["events"] = result.events
    traj = _out_path(args, "trajectory.csv")
    elems = _out_path(args, "elements.csv")
    write_trajectory_csv(traj, samples)
    write_elements_csv(elems, samples)
    rep.files.update({"trajectory": str(traj), "elements": str(elems)})
    rep.warnings.append("vehicle mass and area in the mission file are placeholders, not paper values")
    return rep


def cmd_screen(args) -> RunReport:
    rep = RunReport("screen", _echo(args))
    trajectory = [s for s in read_trajectory_csv(args.trajectory) if s.t <= args.window_s]
    if not trajectory:
        raise UsageError("screening window contains no trajectory samples")
    with open(args.catalog) as fh:
        records, skipped = parse_tle_lenient(fh.read())
    for err in skipped:
        rep.warnings.append(f"skipped TLE set: {err}")
    start = None
    if args.start_epoch is not None:
        start = parse_epoch(args.start_epoch)
    elif records:
        rep.warnings.append("no --start-epoch given; trajectory t=0 taken as the earliest catalogue epoch")
    events, closest, _ = screen_all(
        trajectory, records, dt=args.dt_s, start_epoch_days=start, threshold=args.threshold_km,
        max_workers=args.workers,
    )
    rep.outputs.update({
        "event_count": len(events),
        "skipped_count": len(skipped),
    })
    if closest is not None:
        rep.outputs.update({
            "global_min_km": closest.miss_distance,
            "global_min_t_s": closest.time,
            "global_min_catalog_id": closest.catalog_id,
        })
    rep.outputs["events"] = [
        {"t_s": e.time, "catalog_id": e.catalog_id, "miss_km": e.miss_distance,
         "rel_speed_kms": e.relative_speed}
        for e in events
    ]
    path = _out_path(args, "conjunctions.csv")
    write_events_csv(path, events, closest)
    rep.files["conjunctions"] = str(path)
    return rep


def _echo(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "json", "quiet", "out")}


# --- parser ---------------------------------------------------------------

def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="emit the run report as JSON on stdout")
    parser.add_argument("--out", default=default, metavar="DIR", help="directory for output files")
    parser.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="suppress human-readable output")


def _nozzle_flags(p, required):
    p.add_argument("--pc", type=_positive("--pc"), required=required, help="stagnation pressure [Pa]")
    p.add_argument("--tc", type=_positive("--tc"), required=required, help="stagnation temperature [K]")
    p.add_argument("--pe", type=_positive("--pe"), required=required, help="exit pressure [Pa]")
    p.add_argument("--throat-area", type=_positive("--throat-area"), required=required, help="[m^2]")
    p.add_argument("--gamma", type=_positive("--gamma"), default=1.4)
    p.add_argument("--gas-constant", type=_positive("--gas-constant"), default=296.8, help="[J/(kg K)]")
    p.add_argument("--inlet-diameter", type=_positive("--inlet-diameter"), default=10e-3, help="[m]")
    p.add_argument("--conv-half-angle", type=_positive("--conv-half-angle"), default=5.0, help="[deg]")
    p.add_argument("--div-half-angle", type=_positive("--div-half-angle"), default=5.0, help="[deg]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coldgas", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="Hohmann transfer plan (km)")
    _global_flags(p, suppress=True)
    p.add_argument("--alt1", type=_positive("--alt1"), required=True, help="initial altitude [km]")
    p.add_argument("--alt2", type=_positive("--alt2"), required=True, help="target altitude [km]")
    p.add_argument("--isp", type=_positive("--isp"), help="specific impulse [s]")
    p.add_argument("--dry-mass", type=_positive("--dry-mass"), help="final (dry) mass [kg]")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("tank", help="thick-walled tank stress field (SI)")
    _global_flags(p, suppress=True)
    p.add_argument("--pressure", type=_positive("--pressure"), required=True, help="internal pressure [Pa]")
    p.add_argument("--p-external", type=_nonneg("--p-external"), default=0.0, help="[Pa]")
    p.add_argument("--r-inner", type=_positive("--r-inner"), required=True, help="[m]")
    p.add_argument("--thickness", type=_positive("--thickness"), help="wall thickness [m]")
    p.add_argument("--allowable-stress", type=_positive("--allowable-stress"),
                   help="material allowable stress [Pa]; sizes the thickness")
    p.add_argument("--safety-factor", type=_positive("--safety-factor"), default=1.0)
    p.add_argument("--length", type=_positive("--length"), help="cylinder length [m]")
    p.add_argument("--temperature", type=_positive("--temperature"), default=290.0, help="gas temperature [K]")
    p.add_argument("--gas-constant", type=_positive("--gas-constant"), default=296.8, help="[J/(kg K)]")
    p.add_argument("--points", type=int, default=51, help="stations across the wall")
    p.set_defaults(func=cmd_tank)

    p = sub.add_parser("nozzle", help="isentropic CD nozzle design (SI)")
    _global_flags(p, suppress=True)
    _nozzle_flags(p, required=True)
    p.add_argument("--points", type=int, default=200, help="stations in the geometry profile")
    p.set_defaults(func=cmd_nozzle)

    p = sub.add_parser("flow", help="quasi-1D flow along the nozzle (SI)")
    _global_flags(p, suppress=True)
    _nozzle_flags(p, required=False)
    p.add_argument("--profile", help="geometry profile file of 'x_m radius_m' rows")
    p.add_argument("--stations", type=int, default=200)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("simulate", help="fly a de-orbit mission file (km)")
    _global_flags(p, suppress=True)
    p.add_argument("--config", required=True, help="mission JSON file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("screen", help="conjunction screening against a TLE catalogue (km)")
    _global_flags(p, suppress=True)
    p.add_argument("--trajectory", required=True, help="trajectory CSV from 'simulate'")
    p.add_argument("--catalog", required=True, help="TLE text file")
    p.add_argument("--threshold-km", type=_positive("--threshold-km"), required=True)
    p.add_argument("--window-s", type=_positive("--window-s"), required=True,
                   help="screen trajectory samples with t <= window")
    p.add_argument("--dt-s", type=_positive("--dt-s"), help="coarse step [s]; default trajectory spacing")
    p.add_argument("--start-epoch", help="trajectory t=0 as TLE epoch YYDDD.DDDDDDDD")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_screen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    def emit(rep: RunReport):
        if args.json:
            sys.stdout.write(rep.to_json())
            if not args.quiet:
                sys.stderr.write(rep.human())
        elif not args.quiet:
            sys.stdout.write(rep.human())

    try:
        rep = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"coldgas {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except ColdGasError as exc:
        sys.stderr.write(f"coldgas {args.command}: {type(exc).__name__}: {exc}\n")
        if args.json:
            sys.stdout.write(RunReport(args.command, _echo(args), error=str(exc)).to_json())
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"coldgas {args.command}: file error: {exc}\n")
        return EXIT_FILE

    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        path = Path(args.out) / f"{rep.command}_report.json"
        rep.files["report"] = str(path)
        path.write_text(rep.to_json())
    emit(rep)
    return 0


if __name__ == "__main__":
    sys.exit(main())
