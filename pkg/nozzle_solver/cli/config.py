"""Line-based run configuration: `key = value`, `#` comments, lists as comma-separated values."""
import io
import re
from pathlib import Path
from typing import Dict, List, Optional, Union

import pydantic
from dotenv import dotenv_values

from nozzle_solver.cli.models import DataConfig, DomainConfig, RunConfig
from nozzle_solver.core.errors import ParseError, ValidationError
from nozzle_solver.core.logger import setup_logger
from nozzle_solver.model.models import GasParams

logger = setup_logger(__name__)

KEY_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

SOLVER_KEYS = ("delta", "delta_e", "delta_p", "delta_v", "max_iter", "fp_tol", "eps0", "check_length")

SECTIONS: Dict[str, tuple] = {
    "gas": tuple(GasParams.model_fields),
    "domain": tuple(DomainConfig.model_fields),
    "data": tuple(DataConfig.model_fields),
    "solver": SOLVER_KEYS,
    "": ("auto_radii", "outputs"),
}
KEY_SECTION = {key: section for section, keys in SECTIONS.items() for key in keys}
LIST_KEYS = {"u_en", "E_en", "Phi_ex", "S_en", "v_en", "b", "b_profile", "outputs"}

DEFAULT_CONFIG_PATH = Path(__file__).with_name("default.cfg")


def _scan(text: str) -> None:
    seen: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(number, "expected 'key = value'")
        key = line.split("=", 1)[0].strip()
        if not KEY_PATTERN.fullmatch(key):
            raise ParseError(number, f"malformed key '{key}'")
        if key not in KEY_SECTION:
            raise ParseError(number, f"unknown key '{key}'")
        if key in seen:
            raise ParseError(number, f"duplicate key '{key}' (first set on line {seen[key]})")
        seen[key] = number


def _split(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _pydantic_message(e: pydantic.ValidationError) -> str:
    first = e.errors()[0]
    where = ".".join(str(part) for part in first["loc"])
    message = first["msg"].removeprefix("Value error, ")
    return f"{where}: {message}" if where else message


def parse_config(text: str) -> RunConfig:
    """
    Parse run-configuration text

    Args:
        text (str): `key = value` lines

    Returns:
        RunConfig: Validated configuration, missing keys at their defaults

    Raises:
        ParseError: Malformed, unknown or duplicate keys, with the offending line
        ValidationError: Values rejected by the configuration models
    """
    _scan(text)
    values = dotenv_values(stream=io.StringIO(text))
    sections: Dict[str, dict] = {name: {} for name in SECTIONS}
    for key, value in values.items():
        value = value or ""
        sections[KEY_SECTION[key]][key] = _split(value) if key in LIST_KEYS else value

    top = sections.pop("")
    try:
        cfg = RunConfig(
            gas=sections["gas"],
            domain=sections["domain"],
            data=sections["data"],
            solver=sections["solver"],
            **top,
        )
        cfg.data.boundary_data(cfg.domain.m)
    except pydantic.ValidationError as e:
        raise ValidationError(_pydantic_message(e)) from e
    logger.debug(f"Parsed run configuration with {len(values)} keys")
    return cfg


def load_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    path = Path(path) if path is not None else DEFAULT_CONFIG_PATH
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(0, f"{path} is not UTF-8 text") from e
    except OSError as e:
        raise ValidationError(f"cannot read configuration {path}: {e.strerror}") from e
    return parse_config(text)


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_format(item) for item in value)
    return str(value)


def serialize_config(cfg: RunConfig) -> str:
    """Text that `parse_config` turns back into an equal RunConfig."""
    lines: List[str] = []
    for section, keys in SECTIONS.items():
        source = getattr(cfg, section) if section else cfg
        lines.append(f"# {section or 'run'}")
        for key in keys:
            value = getattr(source, key)
            if value is None:
                continue
            lines.append(f"{key} = {_format(value)}")
        lines.append("")
    return "\n".join(lines)
