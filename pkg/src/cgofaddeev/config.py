"""Run configuration in flat ``section.key = value`` text.

Floats and complex numbers are written with ``repr`` so a dump followed by a
parse reproduces the configuration exactly.
"""

from dataclasses import dataclass, field, fields, replace

import numpy as np

from .conductivity import SMOOTH_BUMP, Bump


class ConfigError(ValueError):
    pass


def _complex(text: str) -> complex:
    return complex(text.replace(" ", ""))


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _bumps(text: str):
    t = text.strip()
    if t in ("", "none"):
        return ()
    if t == "random":
        return "random"
    out = []
    for item in t.split(";"):
        c, r, a = item.split("|")
        out.append((_complex(c), float(r), _complex(a)))
    return tuple(out)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return ";".join("|".join(repr(v) for v in b) for b in value)
        return ",".join(repr(v) for v in value) if value else "none"
    if isinstance(value, (float, complex)):
        return repr(value)
    return str(value)


_PARSERS = {"float": float, "int": int, "complex": _complex, "str": str,
            "bool": _bool, "floats": _floats, "bumps": _bumps}


def _f(default, kind):
    return field(default=default, metadata={"kind": kind})


@dataclass(frozen=True)
class GeometryConfig:
    outer_center: complex = _f(0j, "complex")
    outer_radius: float = _f(1.0, "float")
    jump_center: complex = _f(-0.5 + 0j, "complex")
    jump_radius: float = _f(0.2, "float")
    n_contour: int = _f(128, "int")
    n_boundary: int = _f(512, "int")
    n_radial: int = _f(32, "int")
    n_angular: int = _f(128, "int")


@dataclass(frozen=True)
class ModelConfig:
    kind: str = _f(SMOOTH_BUMP, "str")
    gamma_in: complex = _f(1.02 + 0.01j, "complex")
    gamma_out: complex = _f(1 + 0j, "complex")
    bumps: object = _f("random", "bumps")


@dataclass(frozen=True)
class PointConfig:
    w: complex = _f(0.7 + 0j, "complex")
    lambda_O: str = _f("auto", "str")
    n_angles: int = _f(720, "int")


@dataclass(frozen=True)
class AnnulusConfig:
    R_ladder: tuple = _f((4.0, 8.0, 16.0), "floats")
    n_radial: int = _f(8, "int")
    n_angular: int = _f(8, "int")
    normalization: str = _f("green", "str")


@dataclass(frozen=True)
class SolverConfig:
    method: str = _f("iterative", "str")
    tol: float = _f(1e-10, "float")
    max_iter: int = _f(500, "int")
    R_cut: float = _f(0.0, "float")
    certify: bool = _f(True, "bool")


@dataclass(frozen=True)
class MapConfig:
    nx: int = _f(21, "int")
    ny: int = _f(21, "int")


@dataclass(frozen=True)
class DtnConfig:
    n_max: int = _f(32, "int")
    gamma_in: complex = _f(2 + 0.5j, "complex")
    jump_radius: float = _f(0.5, "float")
    n_boundary: tuple = _f((128.0, 256.0), "floats")


@dataclass(frozen=True)
class ProbeConfig:
    truncation: float = _f(64.0, "float")
    family_size: int = _f(2, "int")


@dataclass(frozen=True)
class OutputConfig:
    dump_fields: bool = _f(False, "bool")
    dump_samples: bool = _f(True, "bool")


_SECTIONS = {
    "geometry": GeometryConfig, "model": ModelConfig, "point": PointConfig,
    "annulus": AnnulusConfig, "solver": SolverConfig, "map": MapConfig,
    "dtn": DtnConfig, "probes": ProbeConfig, "output": OutputConfig,
}


@dataclass(frozen=True)
class RunConfig:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    point: PointConfig = field(default_factory=PointConfig)
    annulus: AnnulusConfig = field(default_factory=AnnulusConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    map: MapConfig = field(default_factory=MapConfig)
    dtn: DtnConfig = field(default_factory=DtnConfig)
    probes: ProbeConfig = field(default_factory=ProbeConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    out_dir: str = "out"
    seed: int = 0
    threads: int = 1

    def override(self, **top) -> "RunConfig":
        return replace(self, **{k: v for k, v in top.items() if v is not None})

    def bumps(self):
        """Explicit bumps, or one seeded bump centred near the point w."""
        b = self.model.bumps
        if b != "random":
            return tuple(Bump(*t) for t in b)
        rng = np.random.default_rng(self.seed)
        amp = complex(rng.uniform(0.2, 0.4), rng.uniform(-0.2, 0.2))
        c = 0.45 + 0.05j * rng.uniform(-1, 1)
        return (Bump(complex(c), 0.5, amp),)


def dumps(cfg: RunConfig) -> str:
    lines = [f"seed = {cfg.seed}", f"threads = {cfg.threads}", f"out_dir = {cfg.out_dir}"]
    for name in _SECTIONS:
        sec = getattr(cfg, name)
        for f in fields(sec):
            lines.append(f"{name}.{f.name} = {_fmt(getattr(sec, f.name))}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> RunConfig:
    top = {}
    sections = {name: {} for name in _SECTIONS}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in ("seed", "threads"):
            top[key] = int(value)
        elif key == "out_dir":
            top[key] = value
        elif "." in key:
            sec, name = key.split(".", 1)
            if sec not in _SECTIONS:
                raise ConfigError(f"line {lineno}: unknown section {sec!r}")
            kinds = {f.name: f.metadata["kind"] for f in fields(_SECTIONS[sec])}
            if name not in kinds:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            try:
                sections[sec][name] = _PARSERS[kinds[name]](value)
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return RunConfig(**{n: cls(**sections[n]) for n, cls in _SECTIONS.items()}, **top)


def load(path) -> RunConfig:
    with open(path) as fh:
        return loads(fh.read())
