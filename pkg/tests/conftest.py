import os
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rosetree.subtrees import SubtreeGenerator
from rosetree.tree_core import Branch

SEED = int(os.environ.get("ROSETREE_SEED", "0"))

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

nodes = st.text(alphabet="01", max_size=10)
words = st.text(alphabet="01", max_size=4)
periods = st.text(alphabet="01", min_size=1, max_size=4)
branches = st.builds(Branch, words, periods)
mixed_branches = st.builds(Branch, words, periods.filter(lambda p: "0" in p and "1" in p))


@st.composite
def generators(draw, max_cycle: int = 2, max_word: int = 3):
    root = draw(st.text(alphabet="01", max_size=2))
    pairs = []
    for _ in range(draw(st.integers(1, max_cycle))):
        n = draw(st.integers(1, max_word))
        tail0 = draw(st.text(alphabet="01", min_size=n - 1, max_size=n - 1))
        tail1 = draw(st.text(alphabet="01", min_size=n - 1, max_size=n - 1))
        pairs.append(("0" + tail0, "1" + tail1))
    return SubtreeGenerator(root, tuple(pairs))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda k: (int(k[0]), k)):
            terminalreporter.write_line(ACCEPTANCE[key])
