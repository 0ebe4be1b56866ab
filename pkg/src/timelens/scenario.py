"""Scenario files and the experiment runner.

A scenario is a TOML file. Minimal example::

    schema_version = 1
    name = "compression"

    [source]
    wavelength_nm = 830.0
    fwhm_nm = 0.9

    [[chain]]
    type = "gdd"
    phi_ps2 = 9.9

    [[chain]]
    type = "sinusoidal_eom"
    amplitude_rad = 25.7
    f_rf_ghz = 10.0
    sign = "focusing"

Optional tables: ``pre_filter``, ``jitter``, ``absorber``, ``measurement``,
``grid``, ``sweep`` and ``options``; see the README for every key. Unknown
keys are rejected.
"""
from __future__ import annotations

import copy
import csv
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from . import elements as el
from .absorber import AbsorberSpec, absorption_ratio, numeric_flux
from .envelope import (
    DEFAULT_DT, DEFAULT_N_SAMPLES, TimeGrid, energy, intensity_fwhm_thz,
    spectrum_array, synthesize_gaussian, temporal_fwhm,
)
from .errors import ConfigError, DomainError, UnsupportedElementError
from .gaussian import GaussianPulse, JitterModel, jittered_bandwidth, propagate
from .jitter import McConfig, averaged_spectrum
from .measurement import InstrumentResponse, convolve_irf, poissonize
from .units import (
    bandwidth_nm_to_thz, bandwidth_thz_to_nm, fwhm_to_width_param, ghz,
    omega_to_wavelength, wavelength_to_omega,
)

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

SCHEMA_VERSION = 1
#: CSV rows are kept between the first and last sample above this fraction of the peak
CSV_FLOOR = 1e-10

_STRICT = ConfigDict(extra="forbid")


class _Model(BaseModel):
    model_config = _STRICT


def _one_width(values, names=("fwhm_nm", "fwhm_ghz")):
    given = [n for n in names if values.get(n) is not None]
    if len(given) != 1:
        raise ValueError(f"give exactly one of {', '.join(names)}")
    return values


class SourceCfg(_Model):
    wavelength_nm: float = Field(gt=0)
    fwhm_nm: float = Field(gt=0)


class FilterCfg(_Model):
    fwhm_nm: Optional[float] = Field(None, gt=0)
    fwhm_ghz: Optional[float] = Field(None, gt=0)

    @model_validator(mode="before")
    @classmethod
    def _width(cls, values):
        return _one_width(values) if isinstance(values, dict) else values

    def fwhm_thz(self, wavelength_nm):
        if self.fwhm_nm is not None:
            return float(bandwidth_nm_to_thz(self.fwhm_nm, wavelength_nm))
        return self.fwhm_ghz * 1e-3


class GddCfg(_Model):
    type: Literal["gdd"]
    phi_ps2: float

    def build(self, wavelength_nm):
        return el.Gdd(self.phi_ps2)


class LensCfg(_Model):
    type: Literal["quadratic_lens"]
    k_per_ps2: float
    t0_ps: float = 0.0

    def build(self, wavelength_nm):
        return el.QuadraticLens(self.k_per_ps2, self.t0_ps)


class EomCfg(_Model):
    type: Literal["sinusoidal_eom"]
    amplitude_rad: float = Field(ge=0)
    f_rf_ghz: float = Field(gt=0)
    t0_ps: float = 0.0
    sign: Literal["focusing", "diverging"] = "focusing"

    def build(self, wavelength_nm):
        return el.SinusoidalEom(self.amplitude_rad, float(ghz(self.f_rf_ghz)), self.t0_ps, self.sign)


class ShearCfg(_Model):
    type: Literal["linear_shear"]
    amplitude_rad: float = Field(ge=0)
    f_rf_ghz: float = Field(gt=0)
    slope: Literal["up", "down"] = "up"

    def build(self, wavelength_nm):
        return el.LinearShear(self.amplitude_rad, float(ghz(self.f_rf_ghz)), self.slope)


class ChainFilterCfg(FilterCfg):
    type: Literal["filter"]
    center_nm: Optional[float] = Field(None, gt=0)

    def build(self, wavelength_nm):
        center = None if self.center_nm is None else float(wavelength_to_omega(self.center_nm))
        return el.GaussianFilter(fwhm_to_width_param(self.fwhm_thz(wavelength_nm)), center)


class AttenuatorCfg(_Model):
    type: Literal["attenuator"]
    eta: float = Field(gt=0, le=1)

    def build(self, wavelength_nm):
        return el.Attenuator(self.eta)


ElementCfg = Annotated[
    Union[GddCfg, LensCfg, EomCfg, ShearCfg, ChainFilterCfg, AttenuatorCfg],
    Field(discriminator="type"),
]


class JitterCfg(_Model):
    T_ps: float = Field(ge=0)
    n_samples: int = Field(10_000, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)


class AbsorberCfg(FilterCfg):
    eta: Optional[float] = Field(None, gt=0, le=1)


class MeasurementCfg(_Model):
    irf_fwhm_nm: Optional[float] = Field(None, gt=0)
    irf_file: Optional[str] = None
    counts: Optional[int] = Field(None, ge=0)
    seed: int = Field(0, ge=0, lt=2**64)

    @model_validator(mode="before")
    @classmethod
    def _irf(cls, values):
        if isinstance(values, dict) and values.get("irf_fwhm_nm") is not None \
                and values.get("irf_file") is not None:
            raise ValueError("give at most one of irf_fwhm_nm and irf_file")
        return values


class GridCfg(_Model):
    n_samples: int = DEFAULT_N_SAMPLES
    dt_ps: float = Field(DEFAULT_DT, gt=0)


class SweepCfg(_Model):
    parameter: str
    values: list[float] = Field(min_length=1)


class OptionsCfg(_Model):
    ideal_lens: bool = False


class Scenario(_Model):
    schema_version: Literal[1]
    name: str = "scenario"
    description: str = ""
    notes: list[str] = []
    source: SourceCfg
    pre_filter: Optional[FilterCfg] = None
    chain: list[ElementCfg] = []
    jitter: Optional[JitterCfg] = None
    absorber: Optional[AbsorberCfg] = None
    measurement: Optional[MeasurementCfg] = None
    grid: GridCfg = GridCfg()
    sweep: Optional[SweepCfg] = None
    options: OptionsCfg = OptionsCfg()
    # directory relative paths (IRF files) are resolved against; not a file key
    base_dir: Optional[str] = Field(None, exclude=True)


def _format_validation(exc, source):
    lines = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"{source}: {loc}: {err['msg']}")
    return "\n".join(lines)


def scenario_from_dict(data, source="<scenario>", base_dir=None):
    if "base_dir" in data:
        raise ConfigError(f"{source}: base_dir: extra inputs are not permitted")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"{source}: schema_version must be {SCHEMA_VERSION}, "
                          f"got {data.get('schema_version')!r}")
    try:
        scenario = Scenario.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_format_validation(exc, source)) from None
    if base_dir is not None:
        scenario = scenario.model_copy(update={"base_dir": str(base_dir)})
    return scenario


def preset_names():
    folder = resources.files("timelens").joinpath("presets")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".toml"))


def _preset_text(name):
    return resources.files("timelens").joinpath(f"presets/{name}.toml").read_text()


def parse_scenario(path_or_preset):
    """Load and validate a scenario file, or a shipped preset by name.

    Raises
    ------
    ConfigError
        On TOML syntax errors (with line and column) and schema violations
        (with the offending key path).
    OSError
        If the file cannot be read.
    """
    path = Path(path_or_preset)
    if path.suffix != ".toml" and not path.exists() and str(path_or_preset) in preset_names():
        text, source, base = _preset_text(str(path_or_preset)), f"preset {path_or_preset}", None
    else:
        text, source, base = path.read_text(), str(path), path.parent
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return scenario_from_dict(data, source, base)


def with_overrides(scenario, seed=None, grid_points=None, ideal_lens=None):
    """Copy of ``scenario`` with command-line overrides applied."""
    data = scenario.model_dump(exclude_none=True)
    if seed is not None:
        for key in ("jitter", "measurement"):
            if key in data:
                data[key]["seed"] = seed
    if grid_points is not None:
        data["grid"]["n_samples"] = grid_points
    if ideal_lens is not None:
        data["options"]["ideal_lens"] = ideal_lens
    return scenario_from_dict(data, base_dir=scenario.base_dir)


def sweep_points(scenario):
    """Expand the sweep axis into a list of ``(value, scenario)`` pairs."""
    if scenario.sweep is None:
        return [(None, scenario)]
    keys = scenario.sweep.parameter.split(".")
    base = scenario.model_dump(exclude_none=True)
    base.pop("sweep")
    points = []
    for value in scenario.sweep.values:
        data = copy.deepcopy(base)
        node = data
        try:
            for k in keys[:-1]:
                node = node[int(k)] if isinstance(node, list) else node[k]
            leaf = int(keys[-1]) if isinstance(node, list) else keys[-1]
            if isinstance(node, dict) and leaf not in node:
                raise KeyError(leaf)
            node[leaf] = value
        except (KeyError, IndexError, ValueError, TypeError):
            raise ConfigError(
                f"sweep.parameter: {scenario.sweep.parameter!r} does not name a set value") from None
        points.append((value, scenario_from_dict(data, f"sweep point {value:g}", scenario.base_dir)))
    return points


@dataclass(eq=False)
class Spectrum:
    """A labelled spectral intensity on an absolute angular-frequency axis."""

    label: str
    carrier: float
    detuning: np.ndarray
    intensity: np.ndarray
    counts: np.ndarray | None = None
    stderr: np.ndarray | None = None

    @property
    def wavelength(self):
        return omega_to_wavelength(self.carrier + self.detuning)


@dataclass(eq=False)
class RunReport:
    name: str
    wavelength_nm: float
    fwhm_ghz: dict = field(default_factory=dict)
    compression: dict = field(default_factory=dict)
    aperture_fill: float | None = None
    absorption_ratio: dict = field(default_factory=dict)
    eta: float | None = None
    warnings: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    spectra: list = field(default_factory=list)
    sweep_value: float | None = None

    def to_dict(self):
        return {
            "name": self.name,
            "sweep_value": self.sweep_value,
            "wavelength_nm": self.wavelength_nm,
            "fwhm_ghz": self.fwhm_ghz,
            "compression_factor": self.compression,
            "aperture_fill": self.aperture_fill,
            "absorption_ratio": self.absorption_ratio,
            "eta": self.eta,
            "warnings": list(self.warnings),
            "notes": list(self.notes),
        }

    def to_text(self):
        head = f"scenario {self.name}"
        if self.sweep_value is not None:
            head += f"  (sweep value {self.sweep_value:g})"
        w = max([28] + [len(k) + 2 for k in self.fwhm_ghz])
        lines = [head, f"  centre wavelength   {self.wavelength_nm:.3f} nm", "",
                 f"  {'channel':<{w}}{'FWHM [GHz]':>12}{'FWHM [nm]':>12}{'C':>10}"]
        for key, value in self.fwhm_ghz.items():
            nm = bandwidth_thz_to_nm(value * 1e-3, self.wavelength_nm)
            c = self.compression.get(key)
            c_text = f"{c:10.3f}" if c is not None else " " * 10
            lines.append(f"  {key:<{w}}{value:12.3f}{nm:12.4f}{c_text}")
        lines.append("")
        if self.aperture_fill is not None:
            lines.append(f"  aperture fill       {self.aperture_fill:.3f}")
        if self.eta is not None:
            lines.append(f"  transmission eta    {self.eta:.4f}")
        for key, value in self.absorption_ratio.items():
            lines.append(f"  R ({key}){'':<{max(0, 12 - len(key))}}{value:.4f}")
        for w in self.warnings:
            lines.append(f"  WARNING: {w}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines) + "\n"


def _norm(intensity, domega):
    return intensity / (intensity.sum() * domega)


def _lens_index(chain):
    idx = [i for i, e in enumerate(chain) if isinstance(e, el.LENS_TYPES)]
    return idx[0] if len(idx) == 1 else None


def _lens_k(element):
    return element.chirp if isinstance(element, el.SinusoidalEom) else element.k


def _analytic(scenario, omega0, source_thz, pre, chain, T):
    """Quadratic-limit closed-form channel; ``None`` entries where not exact."""
    out = {}
    pulse = GaussianPulse.from_fwhm(omega0, source_thz)
    try:
        pulse_in = propagate(pulse, pre)
        ideal = el.idealize(chain)
        pulse_out = propagate(pulse_in, ideal)
    except UnsupportedElementError as exc:
        return out, f"analytic channel skipped: {exc}"
    out["input"] = pulse_in
    out["output"] = pulse_out
    i = _lens_index(ideal)
    if T is not None and i is not None and all(
            isinstance(e, (el.Gdd, el.Attenuator)) for e in ideal[i + 1:]):
        # offsets shift the output rigidly by K tau: Gaussian convolution in frequency
        var = 1.0 / (2.0 * pulse_out.p.real) + 0.5 * (_lens_k(ideal[i]) * T) ** 2
        out["jittered_fwhm"] = 2.0 * math.sqrt(2.0 * math.log(2.0) * var) / (2.0 * math.pi)
    return out, None


def run_point(scenario, workers=1):
    """Run one (non-sweep) scenario and return its :class:`RunReport`."""
    src = scenario.source
    lam0 = src.wavelength_nm
    omega0 = float(wavelength_to_omega(lam0))
    source_thz = float(bandwidth_nm_to_thz(src.fwhm_nm, lam0))
    grid = TimeGrid(scenario.grid.n_samples, scenario.grid.dt_ps)
    pre = ()
    if scenario.pre_filter is not None:
        pre = (el.GaussianFilter(fwhm_to_width_param(scenario.pre_filter.fwhm_thz(lam0))),)
    physical = tuple(e.build(lam0) for e in scenario.chain)
    chain = el.idealize(physical) if scenario.options.ideal_lens else physical

    report = RunReport(scenario.name, lam0, notes=list(scenario.notes))
    env_in = el.apply_chain(synthesize_gaussian(grid, omega0, source_thz), pre)
    env_out = el.apply_chain(env_in, chain)
    report.warnings.extend(env_out.warnings)
    dw = grid.domega
    i_in = np.abs(spectrum_array(env_in.samples, grid)) ** 2
    i_out = np.abs(spectrum_array(env_out.samples, grid)) ** 2

    fw = report.fwhm_ghz
    fw["input (numeric)"] = 1e3 * intensity_fwhm_thz(i_in, dw)
    fw["output (numeric)"] = 1e3 * intensity_fwhm_thz(i_out, dw)
    report.compression["output (numeric)"] = fw["input (numeric)"] / fw["output (numeric)"]

    T = scenario.jitter.T_ps if scenario.jitter is not None else None
    analytic, skipped = _analytic(scenario, omega0, source_thz, pre, chain, T)
    if skipped:
        report.notes.append(skipped)
    if analytic:
        a_in = 1e3 * analytic["input"].spectral_fwhm()
        fw["input (analytic)"] = a_in
        label = "output (analytic)" if not any(
            isinstance(e, el.SinusoidalEom) for e in chain) else "output (analytic, ideal lens)"
        fw[label] = 1e3 * analytic["output"].spectral_fwhm()
        report.compression[label] = a_in / fw[label]

    spectra = [Spectrum("input", omega0, grid.detuning, i_in),
               Spectrum("output", omega0, grid.detuning, i_out)]
    final = spectra[1]

    lens_i = _lens_index(chain)
    if scenario.jitter is not None:
        jit = scenario.jitter
        mc = averaged_spectrum(env_in, chain, McConfig(jit.n_samples, jit.seed, JitterModel(jit.T_ps)),
                               workers=workers)
        fw["output (Monte Carlo)"] = 1e3 * mc.fwhm()
        report.compression["output (Monte Carlo)"] = fw["input (numeric)"] / fw["output (Monte Carlo)"]
        if "jittered_fwhm" in analytic:
            key = "output (analytic, jittered)"
            fw[key] = 1e3 * analytic["jittered_fwhm"]
            report.compression[key] = fw["input (analytic)"] / fw[key]
        final = Spectrum("output (jitter-averaged)", omega0, mc.detuning, mc.mean, stderr=mc.stderr)
        spectra.append(final)
        if lens_i is not None:
            k = abs(_lens_k(el.idealize(chain)[lens_i]))
            if k > 0:
                closed = 1e3 * jittered_bandwidth(source_thz, k, jit.T_ps)
                report.notes.append(
                    f"closed-form collimated jittered bandwidth for T = {jit.T_ps:g} ps: "
                    f"{closed:.2f} GHz")

    eoms = [e for e in physical if isinstance(e, el.SinusoidalEom)]
    if len(eoms) == 1 and lens_i is not None:
        pre_lens = el.apply_chain(env_in, chain[:lens_i])
        report.aperture_fill = el.aperture_fill_fraction(
            temporal_fwhm(pre_lens), eoms[0].f_rf, eoms[0].amplitude)

    if scenario.absorber is not None:
        ab = scenario.absorber
        absorber = AbsorberSpec(ab.fwhm_thz(lam0), omega0)
        eta = ab.eta if ab.eta is not None else energy(env_out) / energy(env_in)
        report.eta = eta
        omega = omega0 + grid.detuning
        f0 = numeric_flux(_norm(i_in, dw), omega, absorber)
        f1 = numeric_flux(_norm(final.intensity, dw), omega, absorber)
        report.absorption_ratio["numeric"] = eta * f1 / f0
        if lens_i is not None and pre == ():
            k = abs(_lens_k(el.idealize(chain)[lens_i]))
            if k > 0:
                report.absorption_ratio["closed form"] = absorption_ratio(
                    fwhm_to_width_param(source_thz), absorber.width, k, T or 0.0, eta)

    if scenario.measurement is not None:
        m = scenario.measurement
        irf = None
        if m.irf_fwhm_nm is not None:
            irf = InstrumentResponse.gaussian(fwhm_nm=m.irf_fwhm_nm, wavelength_nm=lam0)
        elif m.irf_file is not None:
            path = Path(m.irf_file)
            if not path.is_absolute() and scenario.base_dir is not None:
                path = Path(scenario.base_dir) / path
            irf = InstrumentResponse.from_file(path)
        measured = [spectra[0], final]
        if irf is not None:
            names = ("input (apparent)", "output (apparent)")
            blurred = []
            for name, s in zip(names, measured):
                b = convolve_irf(s.intensity, dw, irf)
                fw[name] = 1e3 * intensity_fwhm_thz(b, dw)
                blurred.append(Spectrum(name, omega0, s.detuning, b))
            report.compression["output (apparent)"] = fw[names[0]] / fw[names[1]]
            measured = blurred
            spectra.extend(blurred)
        if m.counts is not None:
            for j, s in enumerate(measured):
                s.counts = poissonize(s.intensity, m.counts, (m.seed, j))
    report.spectra = spectra
    return report


def run(scenario, workers=1):
    """Run a scenario; returns a list of reports (one per sweep point)."""
    reports = []
    for value, point in sweep_points(scenario):
        try:
            report = run_point(point, workers=workers)
        except DomainError as exc:
            raise ConfigError(f"{scenario.name}: {exc}") from exc
        report.sweep_value = value
        reports.append(report)
    return reports


def _crop(intensity):
    above = np.flatnonzero(intensity >= CSV_FLOOR * intensity.max())
    return slice(above[0], above[-1] + 1)


def write_csv(spectrum, path):
    """Write one spectrum as CSV with LF line endings and a header row."""
    cols = ["detuning_rad_per_ps", "wavelength_nm", "intensity"]
    if spectrum.counts is not None:
        cols.append("counts")
    if spectrum.stderr is not None:
        cols.append("stderr")
    sl = _crop(spectrum.intensity)
    wl = spectrum.wavelength
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for i in range(sl.start, sl.stop):
            row = [f"{spectrum.detuning[i]:.10e}", f"{wl[i]:.10f}", f"{spectrum.intensity[i]:.10e}"]
            if spectrum.counts is not None:
                row.append(str(int(spectrum.counts[i])))
            if spectrum.stderr is not None:
                row.append(f"{spectrum.stderr[i]:.10e}")
            writer.writerow(row)


def _slug(label):
    return "".join(c if c.isalnum() else "_" for c in label).strip("_").replace("__", "_")


def write_outputs(reports, out_dir, plot=False):
    """Write CSV spectra, ``report.json``, ``report.txt`` and optionally ``spectra.svg``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for idx, report in enumerate(reports):
        target = out_dir if len(reports) == 1 else out_dir / f"point_{idx:02d}"
        target.mkdir(parents=True, exist_ok=True)
        for s in report.spectra:
            path = target / f"spectrum_{_slug(s.label)}.csv"
            write_csv(s, path)
            written.append(path)
        if plot:
            from .plotting import emit_plot
            path = target / "spectra.svg"
            emit_plot(report, path)
            written.append(path)
    payload = [r.to_dict() for r in reports]
    path = out_dir / "report.json"
    path.write_text(json.dumps(payload if len(payload) > 1 else payload[0], indent=2) + "\n")
    written.append(path)
    path = out_dir / "report.txt"
    path.write_text("\n".join(r.to_text() for r in reports))
    written.append(path)
    return written
