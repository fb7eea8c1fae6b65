import random

import pytest

from gatc.expr import App, Expr, Var

# Filled by the acceptance tests; echoed after the run so the per-criterion
# verdict lines survive pytest's capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

# Signature used by the random generators: symbol name -> argument count.
MONOID_SIG = {"u": 0, "mul": 2}
CATEGORY_LIKE_SIG = {"c0": 0, "f1": 1, "g2": 2}


def random_expr(rng: random.Random, sig: dict[str, int], vars_: list[str], depth: int) -> Expr:
    """A random first-order expression over a signature and variable pool."""
    if depth <= 0 or (vars_ and rng.random() < 0.3):
        if vars_ and rng.random() < 0.6:
            return Var(rng.choice(vars_))
        name = rng.choice([s for s, n in sig.items() if n == 0] or list(sig))
        if sig[name] == 0:
            return App(name)
    name = rng.choice(list(sig))
    return App(name, tuple(random_expr(rng, sig, vars_, depth - 1) for _ in range(sig[name])))


@pytest.fixture
def gen():
    return random_expr
