from __future__ import annotations

import pytest
import yaml
from assertpy import assert_that

from isofoliate.yaml import ConfigLoader

YAML_CONTENT = """\
command: bray-chart
manifold:
  mass: 2.0
  translation:
    - 0.0
    - 1.5
"""

FLAT_CONTENT = """\
# Schwarzschild Hawking profile
command = hawking-profile

manifold.dimension = 4   # higher dimension
ladders.radii = [50, 100, 200]
output =
"""


class TestConfigLoader:
    loader = ConfigLoader()

    def test_build_regular_line_map(self) -> None:
        result = self.loader.build_line_map(YAML_CONTENT)

        assert_that(result).contains_entry({"command": 1}, {"manifold": 2}, {"manifold.mass": 3})
        assert_that(result).contains_entry({"manifold.translation.1": 6})

    def test_build_empty_line_map(self) -> None:
        result = self.loader.build_line_map("name")

        assert_that(result).is_empty()

    def test_build_line_map_with_empty_yaml(self) -> None:
        result = self.loader.build_line_map("")

        assert_that(result).is_empty()

    def test_build_line_map_with_broken_yaml(self) -> None:
        result = self.loader.build_line_map("manifold: [1, 2")

        assert_that(result).is_empty()

    def test_build_flat_line_map(self) -> None:
        result = self.loader.build_line_map(FLAT_CONTENT, flat=True)

        assert_that(result).is_equal_to(
            {"command": 2, "manifold.dimension": 4, "ladders.radii": 5, "output": 6},
        )

    def test_build_flat_line_map_with_malformed_line(self) -> None:
        result = self.loader.build_line_map("command\n", flat=True)

        assert_that(result).is_empty()

    def test_load_yaml(self) -> None:
        data = self.loader.load(YAML_CONTENT)

        assert_that(data).is_equal_to(
            {"command": "bray-chart", "manifold": {"mass": 2.0, "translation": [0.0, 1.5]}},
        )

    def test_load_empty_yaml(self) -> None:
        assert_that(self.loader.load("")).is_empty()

    def test_load_non_mapping_yaml(self) -> None:
        with pytest.raises(yaml.YAMLError, match="mapping of sections"):
            self.loader.load("- 1\n- 2\n")

    def test_load_flat(self) -> None:
        data = self.loader.load(FLAT_CONTENT, flat=True)

        assert_that(data).is_equal_to(
            {
                "command": "hawking-profile",
                "manifold": {"dimension": 4},
                "ladders": {"radii": [50, 100, 200]},
                "output": None,
            },
        )

    def test_load_flat_malformed_line(self) -> None:
        with pytest.raises(yaml.YAMLError, match="Line 2: expected `key = value`"):
            self.loader.load("threads = 2\nmanifold.mass\n", flat=True)

    def test_apply_environment(self) -> None:
        data = {"manifold": {"mass": 2.0}, "threads": 1}
        environ = {
            "ISOFOLIATE_MANIFOLD__MASS": "4.5",
            "ISOFOLIATE_THREADS": "3",
            "ISOFOLIATE_GRID__COLATITUDES": "32",
            "HOME": "/root",
        }

        applied = self.loader.apply_environment(data, environ)

        assert_that(applied).is_equal_to(["grid.colatitudes", "manifold.mass", "threads"])
        assert_that(data).is_equal_to({"manifold": {"mass": 4.5}, "threads": 3, "grid": {"colatitudes": 32}})

    def test_apply_environment_replaces_scalar_section(self) -> None:
        data = {"surface": 1}

        self.loader.apply_environment(data, {"ISOFOLIATE_SURFACE__RADIUS": "50"})

        assert_that(data).is_equal_to({"surface": {"radius": 50}})

    def test_apply_empty_environment(self) -> None:
        data = {"threads": 1}

        assert_that(self.loader.apply_environment(data, {})).is_empty()
        assert_that(data).is_equal_to({"threads": 1})
