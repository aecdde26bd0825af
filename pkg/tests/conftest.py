import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from nctorus.exact_arith import FieldElement, NumberField, Poly, quadratic_field  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SQRT2 = quadratic_field(2)
SQRT3 = quadratic_field(3)
CBRT2 = NumberField((-2, 0, 0, 1), (1, 2))

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"


def rationals(bound=20, den=12):
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, den))


def field_elements(field, bound=9, den=6):
    return st.lists(rationals(bound, den), min_size=field.degree, max_size=field.degree).map(
        lambda cs: FieldElement(field, cs))


def polys(n=4, max_terms=4):
    var = st.tuples(st.integers(1, n - 1), st.integers(2, n)).filter(lambda ij: ij[0] < ij[1])
    mono = st.lists(st.tuples(var, st.integers(1, 2)), max_size=2).map(
        lambda vs: tuple(sorted(dict(vs).items())))
    return st.lists(st.tuples(mono, rationals(6, 4)), max_size=max_terms).map(Poly)


@pytest.fixture
def alpha():
    return SQRT2.gen


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title, elapsed, budget, note in sorted(RESULTS):
        line = f"criterion {number:2d} {status}  {title}  [{elapsed:.2f}s / {budget:g}s]"
        terminalreporter.write_line(line + (f"  {note}" if note else ""))
