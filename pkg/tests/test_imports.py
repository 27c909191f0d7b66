"""Tests to verify all imports are correct and non-conflicting."""

import importlib
from collections import defaultdict

import pytest

MODULES = [
    "tfpdiff",
    "tfpdiff.cli",
    "tfpdiff.errors",
    "tfpdiff.core",
    "tfpdiff.core.types",
    "tfpdiff.core.model",
    "tfpdiff.core.ode",
    "tfpdiff.curves",
    "tfpdiff.curves.base_curve",
    "tfpdiff.curves.closed_form",
    "tfpdiff.simulation",
    "tfpdiff.simulation.abm",
    "tfpdiff.calibration",
    "tfpdiff.calibration.lm",
    "tfpdiff.calibration.pipeline",
    "tfpdiff.logger",
    "tfpdiff.logger.fit_logger",
    "tfpdiff.logger.verbose",
    "tfpdiff.utils",
    "tfpdiff.utils.parsing",
    "tfpdiff.utils.synthetic",
    "tfpdiff.utils.tfp_utils",
]

PACKAGES_WITH_ALL = [
    "tfpdiff",
    "tfpdiff.curves",
    "tfpdiff.simulation",
    "tfpdiff.calibration",
    "tfpdiff.logger",
]


class TestTopLevelImports:
    """Test top-level package imports."""

    def test_tfpdiff_import(self):
        import tfpdiff

        assert "fit_all" in tfpdiff.__all__
        assert callable(tfpdiff.eval_a_moving)

    def test_errors_share_a_base(self):
        from tfpdiff import DomainError, NumericError, ParseError, TfpDiffusionError

        for error in (DomainError, NumericError, ParseError):
            assert issubclass(error, TfpDiffusionError)

    def test_cli_entry_point(self):
        from tfpdiff.cli import main

        assert callable(main)


class TestImportConflicts:
    """Test for import conflicts and naming issues."""

    @pytest.mark.parametrize("module_name", MODULES)
    def test_module_imports(self, module_name):
        importlib.import_module(module_name)

    @pytest.mark.parametrize("module_name", PACKAGES_WITH_ALL)
    def test_all_declarations_match_exports(self, module_name):
        module = importlib.import_module(module_name)
        assert len(module.__all__) == len(set(module.__all__)), f"Duplicate items in {module_name}.__all__"
        for name in module.__all__:
            assert hasattr(module, name), f"{module_name}.__all__ declares '{name}' but it's not exported"

    def test_no_naming_conflicts_across_subpackages(self):
        """The same public name must not mean different objects in different subpackages."""
        owners: dict[str, set[int]] = defaultdict(set)
        for module_name in PACKAGES_WITH_ALL:
            module = importlib.import_module(module_name)
            for name in module.__all__:
                owners[name].add(id(getattr(module, name)))
        conflicts = {name for name, ids in owners.items() if len(ids) > 1}
        assert not conflicts, f"Conflicting exports: {sorted(conflicts)}"
