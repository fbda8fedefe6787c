from __future__ import annotations

import math
from typing import Any, Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from shared import defaults as DEFAULTS

GridKind = Literal["linear", "log"]
OutputFormat = Literal["csv", "json"]


class RunConfig(BaseModel):
    """Parameters of one CLI run: the Kepler system, the radial grid and outputs."""

    model_config = ConfigDict(extra="forbid")

    gm: float = Field(
        default=DEFAULTS.KEPLER_GM, gt=0.0, description="Product G*M of the central mass."
    )
    mass: float = Field(
        default=DEFAULTS.KEPLER_MASS, gt=0.0, description="Mass m of the orbiting body."
    )
    lambda_scale: float = Field(
        default=DEFAULTS.KEPLER_LAMBDA,
        description="Scale constant Lambda (lambda_plus = lambda_minus); must be non-zero.",
    )
    kconst: Union[float, Literal["auto"]] = Field(
        default="auto",
        description="Constant K of the wave-function change of variable; 'auto' means m*Lambda.",
    )
    eta: int = Field(
        default=DEFAULTS.KEPLER_ETA, description="Real scale parameter eta, +1 or -1."
    )
    r_min: float = Field(
        default=DEFAULTS.GRID_R_MIN, gt=0.0, description="Smallest grid radius."
    )
    r_max: float = Field(
        default=DEFAULTS.GRID_R_MAX, gt=0.0, description="Largest grid radius."
    )
    samples: int = Field(
        default=DEFAULTS.GRID_SAMPLES, ge=1, description="Number of grid radii."
    )
    grid: GridKind = Field(
        default=DEFAULTS.GRID_KIND, description="Spacing of the radial grid."
    )
    format: OutputFormat = Field(
        default=DEFAULTS.OUTPUT_FORMAT, description="Tabular output format."
    )
    output: Optional[str] = Field(
        default=None, description="Output file; standard output when unset."
    )
    plot: Optional[str] = Field(
        default=None, description="Optional SVG path for the rotation-curve figure."
    )
    c1: Optional[float] = Field(
        default=None,
        description="Ground-state constant C1; unset means m*Lambda^2.",
    )
    c2: float = Field(default=DEFAULTS.KEPLER_C2, description="Ground-state constant C2.")
    energy_factor: float = Field(
        default=DEFAULTS.RESIDUAL_ENERGY_FACTOR,
        description="Multiplier on the ground-state energy used by the residual suite.",
    )
    fd_step: float = Field(
        default=DEFAULTS.FD_ORDER4_STEP,
        gt=0.0,
        description="Step of the order-4 finite-difference stencil.",
    )

    @field_validator("eta", mode="before")
    @classmethod
    def normalize_eta(cls, value: Any) -> Any:
        if isinstance(value, str):
            text = value.strip()
            if text not in {"1", "+1", "-1"}:
                raise ValueError(f"eta must be +1 or -1, got {value!r}")
            return int(text)
        return value

    @field_validator("kconst", mode="before")
    @classmethod
    def normalize_kconst(cls, value: Any) -> Any:
        if isinstance(value, str) and value.strip().lower() == "auto":
            return "auto"
        return value

    @model_validator(mode="after")
    def validate_ranges(self) -> "RunConfig":
        assert self.eta in (1, -1), "eta must be +1 or -1"
        assert (
            self.lambda_scale != 0.0 and math.isfinite(self.lambda_scale)
        ), "lambda_scale must be non-zero and finite"
        assert self.r_min < self.r_max, "r_min must be smaller than r_max"
        assert self.kconst == "auto" or self.kconst != 0.0, "kconst must be non-zero"
        assert self.c1 is None or self.c1 > 0.0, "c1 must be positive"
        return self

    @property
    def k_value(self) -> Optional[float]:
        """Explicit K, or None when it follows m*Lambda."""
        return None if self.kconst == "auto" else float(self.kconst)

    def to_text(self) -> str:
        """Flat key=value form, one field per line, unset optionals omitted."""
        lines = []
        for name, value in self.model_dump().items():
            if value is None:
                continue
            if isinstance(value, float):
                text = repr(value)
            elif name == "eta":
                text = f"{value:+d}"
            else:
                text = str(value)
            lines.append(f"{name}={text}")
        return "\n".join(lines) + "\n"


def parse_config_text(text: str) -> Dict[str, str]:
    """Read key=value lines; blank lines and '#' comments are skipped."""
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {number}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ValueError(f"line {number}: empty key")
        if key in values:
            raise ValueError(f"line {number}: duplicate key {key!r}")
        values[key] = value.strip()
    return values
