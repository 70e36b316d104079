"""Parse configuration text into a validated `ExperimentConfig`."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

import yaml
from pydantic_core import ErrorDetails, ValidationError

from .domain.config import Diagnostic, ExperimentConfig, validate
from .yaml import ConfigLoader

__all__ = [
    "ConfigParser",
    "ParsingResult",
]


@dataclass
class ParsingResult:
    """Result of parsing an experiment configuration."""

    config: ExperimentConfig | None = None
    success: bool = False
    errors: list[ErrorDetails] = field(default_factory=list)
    line_map: dict[str, int] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @classmethod
    def with_success(cls, config: ExperimentConfig) -> ParsingResult:
        """Create a successful ParsingResult with the regime diagnostics of the config."""
        return cls(config=config, success=True, errors=[], diagnostics=validate(config))

    @classmethod
    def with_errors(cls, errors: list[ErrorDetails], line_map: dict[str, int] | None = None) -> ParsingResult:
        """Create a failed ParsingResult."""
        return cls(config=None, success=False, errors=errors, line_map=line_map or {})


class ConfigParser:
    """Parser for experiment configurations."""

    loader: ConfigLoader

    def __init__(self) -> None:
        """Initialize the parser with a configuration loader."""
        self.loader = ConfigLoader()

    def parse(
        self,
        content: str,
        *,
        flat: bool = False,
        environ: Mapping[str, str] | None = None,
        overrides: Mapping[str, Any] | None = None,
    ) -> ParsingResult:
        """Parse configuration text, then apply environment and command-line overrides.

        Args:
            content: YAML or flat ``key = value`` text.
            flat: Whether the content is in the flat format.
            environ: Environment to read ``ISOFOLIATE_*`` overrides from; the process environment by default.
            overrides: Top-level values given on the command line; ``None`` entries are ignored.

        """
        line_map = self.loader.build_line_map(content, flat=flat)

        try:
            data = self.loader.load(content, flat=flat)
            self.loader.apply_environment(data, environ)
        except yaml.YAMLError as error:
            return self._yaml_parsing_error(content, line_map, error)

        data.update({key: value for key, value in (overrides or {}).items() if value is not None})

        try:
            return ParsingResult.with_success(ExperimentConfig.model_validate(data))
        except ValidationError as error:
            return ParsingResult.with_errors(error.errors(), line_map)

    def _yaml_parsing_error(self, content: str, line_map: dict[str, int], error: Exception) -> ParsingResult:
        errors: list[ErrorDetails] = [
            {
                "type": "yaml_error",
                "loc": (),
                "msg": f"Error parsing configuration: {error}",
                "input": content,
            },
        ]

        return ParsingResult.with_errors(errors, line_map)
