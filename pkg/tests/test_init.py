"""Tests for cpskit package initialization."""

import cpskit


class TestPackageInit:
    """Tests for package initialization."""

    def test_version_exists(self) -> None:
        """Package should have __version__ attribute."""
        assert hasattr(cpskit, "__version__")

    def test_version_is_semver(self) -> None:
        """Version should follow semver format (x.y.z)."""
        parts = cpskit.__version__.split(".")
        assert len(parts) >= 3
        for part in parts[:3]:
            assert part.split("-")[0].isdigit(), f"Invalid version part: {part}"

    def test_all_names_resolve(self) -> None:
        """Every name in __all__ should be importable from the package."""
        for name in cpskit.__all__:
            assert hasattr(cpskit, name), name

    def test_core_operations_exported(self) -> None:
        """The main entry points are available at package level."""
        for name in ("PhaseState", "quadrature_stats", "psi_cps", "wigner_cps", "gaussianity_G"):
            assert name in cpskit.__all__
