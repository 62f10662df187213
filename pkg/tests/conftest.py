import os
import sys
from pathlib import Path

import pytest
from hypothesis import settings

from qutrit_sing.catalog import build_state
from qutrit_sing.poly import MultiPoly

settings.register_profile("default", deadline=None, print_blob=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CHART_VARS = ("x0", "x1", "y0", "y1", "z0", "z1")

# rational state tangent at (1,s,0)(1,0,s)(0,1,s) for s = +-sqrt(2): two irrational A1 points
SQRT2_PAIR = [-2, 0, 0, 1, -4, 0, -1, 0, 0, 1, 0, 0, -2, 0, 2, 1, 0, 0, 1, -4, 1, 0, 1, 0, 2, -1, 2]


@pytest.fixture
def phi1():
    """The diagonal tensor |000> + |111> + |222>."""
    return build_state("F3,9", {"a": 1})


@pytest.fixture
def phi2():
    return build_state("N2")


def poly(variables, text_terms):
    """Small helper: ``poly(("x", "y"), {(2, 0): 1, (0, 1): 3})``."""
    return MultiPoly(variables, text_terms)


@pytest.fixture
def tmp_state(tmp_path):
    def write(state, name="state.json"):
        p = tmp_path / name
        p.write_text(state.to_json())
        return str(p)
    return write
