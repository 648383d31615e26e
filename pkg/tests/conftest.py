import random
import sys
from fractions import Fraction

import pytest

from natspec.exact import Matrix


@pytest.fixture
def rng():
    return random.Random(20260823)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion, if they ran."""
    mod = sys.modules.get("test_acceptance") or sys.modules.get(
        "tests.test_acceptance"
    )
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.CRITERIA):
        name = mod.CRITERIA[k]
        status, detail = mod.RESULTS.get(
            k, ("NOT RUN", "deselected or crashed before completion")
        )
        line = "criterion %d (%s): %s" % (k, name, status)
        if detail:
            line += " — " + detail
        terminalreporter.write_line(line)


def leibniz_char_poly(a: Matrix):
    """Independent characteristic polynomial oracle: Leibniz expansion
    of det(tI - a) with explicit polynomial arithmetic.  Only for small
    n (factorial cost)."""
    from itertools import permutations

    n = a.n

    def poly_mul(p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                out[i + j] += x * y
        return out

    total = [Fraction(0)] * (n + 1)
    for perm in permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if not seen[i]:
                j = i
                length = 0
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    length += 1
                if length % 2 == 0:
                    sign = -sign
        term = [Fraction(sign)]
        for i in range(n):
            entry = Fraction(a.rows[i][perm[i]])
            if perm[i] == i:
                term = poly_mul(term, [-entry, Fraction(1)])  # t - a_ii
            else:
                term = poly_mul(term, [-entry])
        padded = term + [Fraction(0)] * (n + 1 - len(term))
        total = [x + y for x, y in zip(total, padded)]
    # ascending -> monic descending
    return tuple(reversed(total))


def random_zero_one_symmetric(rng, n):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = rng.randint(0, 1)
    return Matrix(rows)
