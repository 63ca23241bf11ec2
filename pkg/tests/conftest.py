import pytest

from gzntlab.registry import builtin

ALL_BUILTINS = ["A-simple", "A-poly", "Btheta(pi/4)", "Btheta(pi/2)", "Btheta(3pi/4)", "B-log", "C", "D", "E"]
NORMALIZED = ["A-poly", "B-log", "C", "D", "E"]  # pole at infinity, real zero at 0


@pytest.fixture
def make_builtin():
    return builtin
