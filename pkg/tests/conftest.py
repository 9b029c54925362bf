"""Shared pytest fixtures and high-precision reference values for cpskit tests."""

import tempfile
from pathlib import Path
from typing import Generator

import mpmath
import pytest

from cpskit.series import clear_series_cache

ORACLE_DIGITS = 50


@pytest.fixture(autouse=True)
def fresh_series_cache() -> Generator[None, None, None]:
    """Run every test against empty series caches."""
    clear_series_cache()
    yield
    clear_series_cache()


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def single_thread(monkeypatch: pytest.MonkeyPatch) -> None:
    """Disable the worker pool."""
    monkeypatch.setenv("CPSKIT_THREADS", "")


def _oracle_sum(eps_abs: float, kind: str) -> float:
    """Sum S1 or S2 in multiple precision until the geometric tail is below 1e-30."""
    with mpmath.workdps(ORACLE_DIGITS):
        eps = mpmath.mpf(eps_abs)
        x = eps * eps
        if x == 0:
            return 0.0
        tolerance = mpmath.mpf("1e-30")
        total = mpmath.mpf(0)
        power = eps if kind == "s1" else x
        n = 0
        while True:
            if kind == "s1":
                term = power * mpmath.sqrt(n + 1)
                ratio = x * mpmath.sqrt(mpmath.mpf(n + 2) / (n + 1))
            else:
                term = power * mpmath.sqrt((n + 1) * (n + 2))
                ratio = x * mpmath.sqrt(mpmath.mpf(n + 3) / (n + 1))
            total += term
            if ratio < 1 and term * ratio / (1 - ratio) < tolerance:
                break
            power *= x
            n += 1
        return float((1 - x) * total)


def s1_oracle(eps_abs: float) -> float:
    """S1 to well beyond double precision."""
    return _oracle_sum(eps_abs, "s1")


def s2_oracle(eps_abs: float) -> float:
    """S2 to well beyond double precision."""
    return _oracle_sum(eps_abs, "s2")


def eigenfunction_oracle(n: int, x: float) -> float:
    """phi_n(x) from the Hermite polynomial in multiple precision."""
    with mpmath.workdps(ORACLE_DIGITS):
        x = mpmath.mpf(x)
        norm = mpmath.sqrt(2**n * mpmath.factorial(n) * mpmath.sqrt(mpmath.pi))
        return float(mpmath.hermite(n, x) * mpmath.exp(-x * x / 2) / norm)
