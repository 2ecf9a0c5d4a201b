from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import TYPE_CHECKING, Any, Final, Literal, Optional, cast

import tomlkit
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    ValidationInfo,
    field_validator,
)
from tomlkit.exceptions import ParseError

from marangoni.exceptions import (
    ConfigKeyError,
    ConfigParseError,
    ConfigValidationError,
    OutputPathError,
)
from marangoni.grid.grid import Grid
from marangoni.marangoni_types import InitialConditionName, SimulationMode
from marangoni.model.params import PhysicalParams
from marangoni.solvers.coupled import StepConfig

if TYPE_CHECKING:
    from tomlkit import TOMLDocument

CONFIG_FILE_NAME: Final = "marangoni_config.toml"


class GridSettings(BaseModel):
    """Grid section of the run config."""

    model_config = ConfigDict(frozen=True)

    nx: int = 64
    ny: int = 64
    lx: float = 1.0
    ly: float = 1.0

    @field_validator("nx", "ny")
    @classmethod
    def _check_cells(
        cls: type[GridSettings],
        value: int,
        info: ValidationInfo,
    ) -> int:
        if value < 4:  # noqa: PLR2004
            cells_err_msg: Final = f"{info.field_name} must be at least 4"
            raise ValueError(cells_err_msg)
        return value

    @field_validator("lx", "ly")
    @classmethod
    def _check_extent(
        cls: type[GridSettings],
        value: float,
        info: ValidationInfo,
    ) -> float:
        if not value > 0:
            extent_err_msg: Final = f"{info.field_name} must be positive"
            raise ValueError(extent_err_msg)
        return value

    def build(self: GridSettings) -> Grid:
        return Grid(nx=self.nx, ny=self.ny, lx=self.lx, ly=self.ly)


class InitialConditionSettings(BaseModel):
    """Initial-condition preset and its parameters.

    - `name`: preset name.
    - `amplitude`: temperature amplitude of the preset.
    - `radius`: bubble radius, or interface height fraction.
    - `seed`: RNG seed for randomized presets.
    """

    model_config = ConfigDict(frozen=True)

    name: InitialConditionName = "bubble"
    amplitude: float = 0.1
    radius: float = 0.25
    seed: int = 0


class OutputSettings(BaseModel):
    """Where and how often results are written."""

    model_config = ConfigDict(frozen=True)

    trace_path: str = "marangoni_trace.csv"
    snapshot_dir: str = "snapshots"
    snapshot_every: int = Field(default=100, ge=0)


class ToleranceSettings(BaseModel):
    """Solver and monitor tolerances."""

    model_config = ConfigDict(frozen=True)

    poisson_tol: float = 1e-10
    helmholtz_tol: float = 1e-10
    newton_tol: float = 1e-8
    tol_phi: float = 1e-3

    @field_validator("poisson_tol", "helmholtz_tol", "newton_tol", "tol_phi")
    @classmethod
    def _check_positive(
        cls: type[ToleranceSettings],
        value: float,
        info: ValidationInfo,
    ) -> float:
        if not value > 0:
            tol_err_msg: Final = f"{info.field_name} must be positive"
            raise ValueError(tol_err_msg)
        return value


class RunConfig(BaseModel):
    """Complete configuration of one run.

    It can be filled from a flat `key = value` file,
    see `FLAT_KEYS` for the published schema.
    """

    model_config = ConfigDict(frozen=True)

    grid: GridSettings = GridSettings()
    dt: float = 1e-4
    t_end: float = 0.1
    params: PhysicalParams = PhysicalParams()
    mode: SimulationMode = "full"
    ic: InitialConditionSettings = InitialConditionSettings()
    output: OutputSettings = OutputSettings()
    tolerances: ToleranceSettings = ToleranceSettings()
    stab: float = Field(default=2.0, ge=0.0)
    burn_fraction: float = Field(default=0.1, ge=0.0, lt=1.0)

    @field_validator("dt")
    @classmethod
    def _check_dt(cls: type[RunConfig], value: float) -> float:
        if not value > 0:
            dt_err_msg: Final = "dt must be positive"
            raise ValueError(dt_err_msg)
        return value

    @field_validator("t_end")
    @classmethod
    def _check_t_end(cls: type[RunConfig], value: float) -> float:
        if value < 0:
            t_end_err_msg: Final = "t_end must be nonnegative"
            raise ValueError(t_end_err_msg)
        return value

    @property
    def n_steps(self: RunConfig) -> int:
        """Number of steps, `round(t_end / dt)`."""
        return round(self.t_end / self.dt)

    def step_config(self: RunConfig) -> StepConfig:
        """Per-step solver settings."""
        return StepConfig(
            dt=self.dt,
            stab=self.stab,
            helmholtz_tol=self.tolerances.helmholtz_tol,
            poisson_tol=self.tolerances.poisson_tol,
        )

    @property
    def effective_params(self: RunConfig) -> PhysicalParams:
        """Parameters with isothermal mode applied."""
        if self.mode == "isothermal":
            return self.params.isothermal()
        return self.params

    def replace(self: RunConfig, **flat_changes: Any) -> RunConfig:
        """Return copy with some flat keys changed."""
        flat: Final = flatten_config(self)
        flat.update(flat_changes)
        return config_from_mapping(flat)


@dataclasses.dataclass(frozen=True)
class _KeySpec:
    section: str | None
    field: str


def _section_keys(
    section: str,
    model: type[BaseModel],
) -> dict[str, _KeySpec]:
    return {name: _KeySpec(section, name) for name in model.model_fields}


# flat key -> (section, field); `None` section means a top-level field
FLAT_KEYS: Final[dict[str, _KeySpec]] = {
    **_section_keys("grid", GridSettings),
    "dt": _KeySpec(None, "dt"),
    "t_end": _KeySpec(None, "t_end"),
    **_section_keys("params", PhysicalParams),
    "mode": _KeySpec(None, "mode"),
    "ic": _KeySpec("ic", "name"),
    "ic_amplitude": _KeySpec("ic", "amplitude"),
    "ic_radius": _KeySpec("ic", "radius"),
    "ic_seed": _KeySpec("ic", "seed"),
    **_section_keys("output", OutputSettings),
    **_section_keys("tolerances", ToleranceSettings),
    "stab": _KeySpec(None, "stab"),
    "burn_fraction": _KeySpec(None, "burn_fraction"),
}


def _validation_message(error: ValidationError) -> str:
    messages: Final = []
    for detail in error.errors():
        message = str(detail["msg"]).removeprefix("Value error, ")
        location = ".".join(str(part) for part in detail["loc"])
        messages.append(f"{location}: {message}")
    return "; ".join(messages)


def config_from_mapping(mapping: dict[str, Any]) -> RunConfig:
    """Build `RunConfig` from flat keys.

    ### Raises:
    - `ConfigKeyError`: on an unknown key.
    - `ConfigValidationError`: on an invalid value.
    """
    sections: Final[dict[str, dict[str, Any]]] = {}
    top_level: Final[dict[str, Any]] = {}
    for key, value in mapping.items():
        spec = FLAT_KEYS.get(key)
        if spec is None:
            key_err_msg = f"Unknown config key: {key}"
            raise ConfigKeyError(key_err_msg)
        if spec.section is None:
            top_level[spec.field] = value
        else:
            sections.setdefault(spec.section, {})[spec.field] = value

    try:
        return RunConfig(**top_level, **sections)
    except ValidationError as exc:
        raise ConfigValidationError(_validation_message(exc)) from exc


def flatten_config(cfg: RunConfig) -> dict[str, Any]:
    """Inverse of `config_from_mapping`, every key present."""
    dumped: Final = cfg.model_dump()
    flat: Final[dict[str, Any]] = {}
    for key, spec in FLAT_KEYS.items():
        source = dumped if spec.section is None else dumped[spec.section]
        flat[key] = source[spec.field]
    return flat


def parse_config(text: str) -> RunConfig:
    """Parse flat TOML text into a `RunConfig`.

    A `[settings]` table is accepted in place of top-level keys.

    ### Raises:
    - `ConfigParseError`: with the line number of the syntax error.
    """
    try:
        document: Final = tomlkit.parse(text)
    except ParseError as exc:
        parse_err_msg: Final = f"line {exc.line}: {exc}"
        raise ConfigParseError(parse_err_msg) from exc

    values = document.unwrap()
    if set(values) == {"settings"} and isinstance(values["settings"], dict):
        values = values["settings"]
    return config_from_mapping(values)


def load_config(path: str | Path) -> RunConfig:
    """Read a config file.

    Missing keys take the documented defaults.
    """
    return parse_config(Path(path).read_text(encoding="utf-8"))


def dump_config(cfg: RunConfig) -> str:
    """Serialize every key as flat TOML."""
    document: Final = tomlkit.document()
    document.add(tomlkit.comment("marangoni run configuration"))
    for key, value in flatten_config(cfg).items():
        document.add(key, value)
    return tomlkit.dumps(document)


def ensure_output_paths(cfg: RunConfig) -> None:
    """Create output directories and check they are writable.

    ### Raises:
    - `OutputPathError`: if a path cannot be written.
    """
    trace: Final = Path(cfg.output.trace_path)
    snapshots: Final = Path(cfg.output.snapshot_dir)
    try:
        trace.parent.mkdir(parents=True, exist_ok=True)
        snapshots.mkdir(parents=True, exist_ok=True)
        marker = snapshots / ".write-check"
        marker.write_text("", encoding="utf-8")
        marker.unlink()
        with trace.open("a", encoding="utf-8"):
            pass
    except OSError as exc:
        path_err_msg: Final = f"Output path not writable: {exc}"
        raise OutputPathError(path_err_msg) from exc


class MarangoniConfig:
    """Small wrapper around config discovery.

    Search runs only once per process.
    """

    _config: RunConfig | None = None
    config_type: Optional[  # noqa: UP007
        Literal["marangoni_config", "pyproject", "defaults"]
    ] = None

    @classmethod
    def config(cls: type[MarangoniConfig]) -> RunConfig:
        """Return discovered config.

        If config doesn't exist, build new one.
        If config exists, return it.
        """
        if cls._config:
            return cls._config

        cls._config = cls._build_config()
        return cls._config

    @classmethod
    def reset(cls: type[MarangoniConfig]) -> None:
        cls._config = None
        cls.config_type = None

    @classmethod
    def _build_config(cls: type[MarangoniConfig]) -> RunConfig:
        """Build config from the working directory.

        `marangoni_config.toml` has priority over `[tool.marangoni]`
        in `pyproject.toml`. Config could be not found, then
        defaults are used.
        """
        try:
            config = load_config(Path.cwd() / CONFIG_FILE_NAME)
        except OSError:
            pass
        else:
            cls.config_type = "marangoni_config"
            return config

        try:
            config = cls._process_pyproject_config()
        except (KeyError, OSError):
            pass
        else:
            cls.config_type = "pyproject"
            return config

        cls.config_type = "defaults"
        return RunConfig()

    @classmethod
    def _process_pyproject_config(cls: type[MarangoniConfig]) -> RunConfig:
        pyproject_toml: Final = cls._open_config("pyproject.toml")
        marangoni_section: Final = cast(
            dict[str, Any],
            pyproject_toml["tool"]["marangoni"],  # type: ignore[index]
        )
        return config_from_mapping(dict(marangoni_section))

    @classmethod
    def _open_config(
        cls: type[MarangoniConfig],
        file_name: str,
    ) -> TOMLDocument:
        with (Path.cwd() / file_name).open(encoding="utf-8") as config_file:
            return tomlkit.parse(config_file.read())
