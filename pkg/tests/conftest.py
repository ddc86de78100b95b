from __future__ import annotations

from functools import lru_cache
from pathlib import Path

import pytest

from wlnovelty.bench import BUNDLED_SUITE, SYMMETRIC_SUITE, discover
from wlnovelty.ground import ground
from wlnovelty.pddl import load_domain, load_problem, parse_problem

MINI = BUNDLED_SUITE
SYMMETRIC = SYMMETRIC_SUITE

# lines collected by the acceptance module, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def load(domain: str, problem: str, suite: str = str(MINI)):
    d = Path(suite) / domain
    dom = load_domain(d / "domain.pddl")
    return ground(load_problem(d / f"{problem}.pddl", dom))


@lru_cache(maxsize=None)
def lifted(domain: str, problem: str, suite: str = str(MINI)):
    d = Path(suite) / domain
    return load_problem(d / f"{problem}.pddl", load_domain(d / "domain.pddl"))


def mini_instances():
    return discover(MINI)


SANDWICH_PROBLEM = """
(define (problem sandwich-swap)
  (:domain childsnack-lite)
  (:objects child1 child2 child3 - child sw1 sw2 sw3 sw4 sw5 sw6 - sandwich
            bread1 bread2 bread3 - bread content1 content2 content3 - content)
  (:init (bread-at-kitchen bread1) (bread-at-kitchen bread2) (bread-at-kitchen bread3)
         (content-at-kitchen content1) (content-at-kitchen content2)
         (content-at-kitchen content3) (no-gluten-bread bread1) (no-gluten-content content1)
         (notexist sw1) (notexist sw2) (notexist sw3) (notexist sw4) (notexist sw5)
         (notexist sw6) (allergic child1) (not-allergic child2) (not-allergic child3))
  (:goal (and (served child1) (served child2) (served child3))))
"""


@lru_cache(maxsize=None)
def sandwich_task():
    dom = load_domain(MINI / "childsnack" / "domain.pddl")
    return ground(parse_problem(SANDWICH_PROBLEM, dom))


def sandwich_swap_pair():
    """Two states that differ only by the renaming sw1-3 <-> sw4-6.

    The first makes sw1 gluten-free and sw2, sw3 ordinary; the second does
    the same with sw4, sw5, sw6 from the same ingredients.
    """
    task = sandwich_task()
    by = {a.display: a for a in task.actions}

    def run(names):
        s = task.init
        for n in names:
            a = by[n]
            assert a.pre <= s
            s = (s - a.delete) | a.add
        return s

    s1 = run(["(make-sandwich-no-gluten sw1 bread1 content1)",
              "(make-sandwich sw2 bread2 content2)", "(make-sandwich sw3 bread3 content3)"])
    s2 = run(["(make-sandwich-no-gluten sw4 bread1 content1)",
              "(make-sandwich sw5 bread2 content2)", "(make-sandwich sw6 bread3 content3)"])
    return task, s1, s2


@pytest.fixture
def gripper2():
    return load("gripper", "p01")


@pytest.fixture
def gripper4():
    return load("gripper", "p02")


@pytest.fixture
def blocks4():
    return load("blocksworld", "p01")


@pytest.fixture
def childsnack():
    return load("childsnack", "p01")


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def report(name: str, passed: bool, detail: str = "") -> None:
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] {name}" + (f": {detail}" if detail else ""))

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
