"""Built-in example systems.

The three soil-transmitted-helminth (STH) presets model adult worms in
hosts (class 1) and larvae in soil (class 2), with rates per day; mass
drug administration pulses kill a fraction of the adult worms and leave
the soil class untouched, so class 2 is the weakest-controlled one. The
remaining presets are small demonstrators for each qualitative regime
plus the rotation counterexample where convexity of the radius map
fails.
"""

from __future__ import annotations

from dataclasses import dataclass

from pulsekit.errors import InvalidInputError
from pulsekit.spectral import ControlSystem, control_system

__all__ = ["Preset", "PRESETS", "get_preset", "preset_ids"]


@dataclass(frozen=True)
class Preset:
    id: str
    system: ControlSystem
    provenance: str


def _build() -> dict[str, Preset]:
    entries = [
        Preset(
            id="sth-roundworm",
            system=control_system(
                [[-0.0028, 1.3e-8], [5000.0, -0.016]],
                [0.62875, 1.0], time_unit="days"),
            provenance=(
                "Roundworm (Ascaris lumbricoides) host/soil life cycle; "
                "single-dose deworming at 37.5% effective coverage")),
        Preset(
            id="sth-whipworm",
            system=control_system(
                [[-0.0028, 2.089e-7], [1000.0, -0.05]],
                [0.8125, 1.0], time_unit="days"),
            provenance=(
                "Whipworm (Trichuris trichiura) host/soil life cycle; "
                "the deworming drug is least effective on this species")),
        Preset(
            id="sth-hookworm",
            system=control_system(
                [[-0.0014, 1.18e-7], [1500.0, -0.082]],
                [0.64375, 1.0], time_unit="days"),
            provenance=(
                "Hookworm (Ancylostoma duodenale) host/soil life cycle; "
                "single-dose deworming at 37.5% effective coverage")),
        Preset(
            id="rotation-ctrex",
            system=control_system(
                [[0.0, -1.0], [1.0, 0.0]], [1.0, 0.25]),
            provenance=(
                "Planar rotation with one pulsed class (d = 0.25): "
                "complex eigenvalues, radius map locally concave")),
        Preset(
            id="fig1-topleft",
            system=control_system(
                [[0.2, 1.0], [1.0, -0.2]], [0.5, 0.25]),
            provenance=(
                "Unstable demo, weakest-controlled class self-promoting: "
                "radius increases through 1, pulse as often as possible")),
        Preset(
            id="fig1-bottomleft",
            system=control_system(
                [[-2.0, 1.0], [1.0, 1.0]], [0.5, 0.25]),
            provenance=(
                "Unstable demo, weakest-controlled class self-limiting: "
                "radius dips below 1 with an interior optimal period")),
        Preset(
            id="fig1-stable",
            system=control_system(
                [[-2.0, 1.0], [1.0, -2.0]], [0.5, 0.25]),
            provenance=(
                "Stable demo: radius strictly decreasing, best policy "
                "is to never pulse")),
        Preset(
            id="scalar-demo",
            system=control_system([[0.1]], [0.5]),
            provenance=(
                "Scalar growth a = 0.1 with pulse factor d = 0.5; "
                "everything is closed form: r = d exp(a tau)")),
    ]
    return {p.id: p for p in entries}


PRESETS: dict[str, Preset] = _build()


def preset_ids() -> list[str]:
    return list(PRESETS)


def get_preset(preset_id: str) -> Preset:
    try:
        return PRESETS[preset_id]
    except KeyError:
        raise InvalidInputError(
            f"unknown preset {preset_id!r}; available: "
            f"{', '.join(PRESETS)}") from None
