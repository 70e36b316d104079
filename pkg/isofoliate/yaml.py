"""Configuration loading with line number tracking.

Two formats are read into the same nested dictionary: YAML documents and flat
``section.key = value`` text, whose values follow the YAML scalar rules. Environment
variables ``ISOFOLIATE_SECTION__KEY=value`` override both.
"""

from __future__ import annotations

import os
from collections.abc import Mapping
from typing import Any

import yaml
from yaml.nodes import MappingNode, Node, ScalarNode, SequenceNode

__all__ = [
    "ENV_PREFIX",
    "ConfigLoader",
]

ENV_PREFIX = "ISOFOLIATE_"
ENV_SEPARATOR = "__"
COMMENT = "#"


class ConfigLoader:
    """Load configuration content into a nested dictionary and map keys to lines."""

    def load(self, content: str, *, flat: bool = False) -> dict[str, Any]:
        """Load YAML or flat key = value content.

        Args:
            content: The configuration text.
            flat: Parse ``key = value`` lines instead of YAML.

        Returns:
            A nested dictionary; empty for empty content.

        Raises:
            yaml.YAMLError: If the content is invalid.

        """
        if flat:
            return self._load_flat(content)
        data = yaml.safe_load(content)
        if data is None:
            return {}
        if not isinstance(data, dict):
            msg = "The configuration must be a mapping of sections"
            raise yaml.YAMLError(msg)
        return data

    def apply_environment(self, data: dict[str, Any], environ: Mapping[str, str] | None = None) -> list[str]:
        """Merge ``ISOFOLIATE_*`` overrides into the data in place.

        Returns:
            The dotted keys that were overridden.

        """
        environ = os.environ if environ is None else environ
        applied = []
        for name in sorted(environ):
            if not name.startswith(ENV_PREFIX):
                continue
            path = [part.lower() for part in name.removeprefix(ENV_PREFIX).split(ENV_SEPARATOR)]
            self._assign(data, path, yaml.safe_load(environ[name]))
            applied.append(".".join(path))
        return applied

    def build_line_map(self, content: str, *, flat: bool = False) -> dict[str, int]:
        """Build a mapping from dotted keys to line numbers (1-indexed)."""
        try:
            if flat:
                return {key: line for line, key, _ in self._flat_lines(content)}
            node = yaml.compose(content)
            if node is None:
                return {}
            return self._traverse_node(node, [])
        except yaml.YAMLError:
            return {}

    def _flat_lines(self, content: str) -> list[tuple[int, str, str]]:
        entries = []
        for number, raw in enumerate(content.splitlines(), start=1):
            line = raw.split(COMMENT, 1)[0].strip()
            if not line:
                continue
            key, separator, value = line.partition("=")
            if not separator or not key.strip():
                msg = f"Line {number}: expected `key = value`, got `{raw.strip()}`"
                raise yaml.YAMLError(msg)
            entries.append((number, key.strip(), value.strip()))
        return entries

    def _load_flat(self, content: str) -> dict[str, Any]:
        data: dict[str, Any] = {}
        for _, key, value in self._flat_lines(content):
            self._assign(data, key.split("."), yaml.safe_load(value) if value else None)
        return data

    def _assign(self, data: dict[str, Any], path: list[str], value: object) -> None:
        target = data
        for part in path[:-1]:
            child = target.get(part)
            if not isinstance(child, dict):
                child = target[part] = {}
            target = child
        target[path[-1]] = value

    def _traverse_node(self, node: Node, path: list[str]) -> dict[str, int]:
        if isinstance(node, MappingNode):
            return self._traverse_mapping_node(node, path)
        if isinstance(node, SequenceNode):
            return self._traverse_sequence_node(node, path)
        if isinstance(node, ScalarNode) and path:
            return {".".join(path): node.start_mark.line + 1}
        return {}

    def _traverse_mapping_node(self, node: MappingNode, path: list[str]) -> dict[str, int]:
        line_map: dict[str, int] = {}
        for key_node, value_node in node.value:
            if isinstance(key_node, ScalarNode):
                new_path = [*path, str(key_node.value)]
                line_map[".".join(new_path)] = key_node.start_mark.line + 1
                line_map.update(self._traverse_node(value_node, new_path))
        return line_map

    def _traverse_sequence_node(self, node: SequenceNode, path: list[str]) -> dict[str, int]:
        line_map: dict[str, int] = {}
        for index, item_node in enumerate(node.value):
            line_map.update(self._traverse_node(item_node, [*path, str(index)]))
        return line_map
