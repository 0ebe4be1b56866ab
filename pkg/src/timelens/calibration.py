"""Hardware-facing calculators: modulation depth, fibre length and loss budgets.

Component catalog format (TOML)::

    schema_version = 1

    [fibers."HI-780"]
    loss_db_per_km = 3.4
    beta2_ps2_per_km = 38.7

    [devices."EOM-10G"]
    transmission = 0.39
    uncertainty = 0.04          # optional, absolute

    [connectors."FC/PC"]
    loss_db = 0.3

A budget chain string lists catalog entries separated by commas:
``NAME=LENGTH_M`` for fibres, ``NAME`` for devices and ``NAME*COUNT`` for
connector interfaces, e.g. ``HI-780=256,EOM-10G,FC/PC*2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigError, DomainError
from .units import bandwidth_nm_to_thz

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

#: ps^2/km, from 9.9 ps^2 delivered by 256 m of HI-780 at 830 nm
DEFAULT_BETA2 = 38.7


def modulation_depth_from_shift(dlambda_nm, wavelength_nm, f_rf):
    """Phase-modulation depth [rad] from the wavelength shift of a sheared pulse.

    The linear part of ``A sin(2 pi f t)`` shifts the angular frequency by
    ``2 pi A f``.
    """
    if not (dlambda_nm > 0 and wavelength_nm > 0 and f_rf > 0):
        raise DomainError("shift, wavelength and RF frequency must be positive")
    domega = 2.0 * math.pi * bandwidth_nm_to_thz(dlambda_nm, wavelength_nm)
    return float(domega / (2.0 * math.pi * f_rf))


def fiber_length_for_gdd(phi, beta2=DEFAULT_BETA2):
    """Fibre length [m] delivering GDD ``phi`` [ps^2] at dispersion ``beta2`` [ps^2/km]."""
    if beta2 == 0 or not math.isfinite(beta2) or not math.isfinite(phi):
        raise DomainError("beta2 must be finite and non-zero")
    if phi == 0:
        return 0.0
    if phi / beta2 < 0:
        raise DomainError(f"GDD {phi:g} ps^2 and beta2 {beta2:g} ps^2/km have opposite signs")
    return 1e3 * phi / beta2


@dataclass(frozen=True)
class FiberSpan:
    label: str
    length_m: float
    loss_db_per_km: float

    @property
    def loss_db(self):
        return self.length_m * 1e-3 * self.loss_db_per_km


@dataclass(frozen=True)
class Device:
    label: str
    transmission: float
    uncertainty: float = 0.0


@dataclass(frozen=True)
class Connectors:
    label: str
    count: int
    loss_db: float


@dataclass(frozen=True)
class LossBudget:
    fibers: tuple = field(default=())
    devices: tuple = field(default=())
    connectors: tuple = field(default=())

    def __post_init__(self):
        for f in self.fibers:
            if f.length_m < 0 or f.loss_db_per_km < 0:
                raise DomainError(f"fibre {f.label!r}: length and loss must be >= 0")
        for d in self.devices:
            if not 0 < d.transmission <= 1:
                raise DomainError(f"device {d.label!r}: transmission must lie in (0, 1]")
        for c in self.connectors:
            if c.count < 0 or c.loss_db < 0:
                raise DomainError(f"connector {c.label!r}: count and loss must be >= 0")

    @classmethod
    def simple(cls, fiber_length_m=0.0, fiber_loss_db_per_km=0.0, devices=(),
               connector_interfaces=0, connector_loss_db=0.0):
        fibers = (FiberSpan("fiber", fiber_length_m, fiber_loss_db_per_km),) if fiber_length_m else ()
        devs = tuple(d if isinstance(d, Device) else Device(*d) for d in devices)
        conns = (Connectors("connector", connector_interfaces, connector_loss_db),) \
            if connector_interfaces else ()
        return cls(fibers, devs, conns)

    def __add__(self, other):
        return LossBudget(self.fibers + other.fibers, self.devices + other.devices,
                          self.connectors + other.connectors)

    @property
    def loss_db(self):
        """Fibre plus connector loss [dB]."""
        return (sum(f.loss_db for f in self.fibers)
                + sum(c.count * c.loss_db for c in self.connectors))


def total_transmission(budget):
    """Overall power transmission of a loss budget."""
    eta = 10.0 ** (-budget.loss_db / 10.0)
    for d in budget.devices:
        eta *= d.transmission
    return eta


def transmission_uncertainty(budget):
    """Absolute uncertainty of :func:`total_transmission`.

    Linearized: relative device uncertainties add in quadrature; fibre and
    connector losses are treated as exact.
    """
    rel = math.sqrt(sum((d.uncertainty / d.transmission) ** 2 for d in budget.devices))
    return total_transmission(budget) * rel


@dataclass(frozen=True)
class Catalog:
    fibers: dict
    devices: dict
    connectors: dict

    def beta2(self, name):
        return self.fibers[name].get("beta2_ps2_per_km", DEFAULT_BETA2)


_CATALOG_SECTIONS = {
    "fibers": {"loss_db_per_km", "beta2_ps2_per_km"},
    "devices": {"transmission", "uncertainty"},
    "connectors": {"loss_db"},
}


def load_catalog(path=None):
    """Read a component catalog; ``None`` loads the one shipped with the package."""
    try:
        if path is None:
            text = resources.files("timelens").joinpath("data/catalog.toml").read_text()
            source = "built-in catalog"
        else:
            text = Path(path).read_text()
            source = str(path)
    except OSError:
        raise
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if data.get("schema_version") != 1:
        raise ConfigError(f"{source}: schema_version must be 1")
    for key in data:
        if key != "schema_version" and key not in _CATALOG_SECTIONS:
            raise ConfigError(f"{source}: unknown section {key!r}")
    for section, allowed in _CATALOG_SECTIONS.items():
        for name, entry in data.get(section, {}).items():
            unknown = set(entry) - allowed
            if unknown:
                raise ConfigError(f"{source}: {section}.{name}: unknown keys {sorted(unknown)}")
    for name, entry in data.get("fibers", {}).items():
        if "loss_db_per_km" not in entry:
            raise ConfigError(f"{source}: fibers.{name}: missing loss_db_per_km")
    for name, entry in data.get("devices", {}).items():
        if "transmission" not in entry:
            raise ConfigError(f"{source}: devices.{name}: missing transmission")
    for name, entry in data.get("connectors", {}).items():
        if "loss_db" not in entry:
            raise ConfigError(f"{source}: connectors.{name}: missing loss_db")
    return Catalog(data.get("fibers", {}), data.get("devices", {}), data.get("connectors", {}))


def parse_budget_chain(text, catalog):
    """Build a :class:`LossBudget` from a chain string such as ``HI-780=256,EOM-10G,FC/PC*2``."""
    fibers, devices, connectors = [], [], []
    for item in filter(None, (s.strip() for s in text.split(","))):
        try:
            if "=" in item:
                name, length = item.split("=", 1)
                spec = catalog.fibers[name]
                fibers.append(FiberSpan(name, float(length.rstrip("m")), spec["loss_db_per_km"]))
            elif "*" in item:
                name, count = item.rsplit("*", 1)
                connectors.append(Connectors(name, int(count), catalog.connectors[name]["loss_db"]))
            elif item in catalog.devices:
                spec = catalog.devices[item]
                devices.append(Device(item, spec["transmission"], spec.get("uncertainty", 0.0)))
            elif item in catalog.connectors:
                connectors.append(Connectors(item, 1, catalog.connectors[item]["loss_db"]))
            else:
                raise KeyError(item)
        except KeyError as exc:
            raise ConfigError(f"budget chain: {exc.args[0]!r} is not in the catalog") from None
        except ValueError:
            raise ConfigError(f"budget chain: cannot parse item {item!r}") from None
    return LossBudget(tuple(fibers), tuple(devices), tuple(connectors))
