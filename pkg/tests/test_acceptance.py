"""Release battery: every numbered claim runs here, one line per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the PASS/FAIL line
of each criterion alongside its one-line numeric detail.
"""

import pytest

from ising_forge import acceptance

BUDGETS = {
    "field-spectra": 1.0,
    "projected-pauli-algebra": 1.0,
    "round-trip-compiler": 10.0,
    "large-lambda-convergence": 120.0,
    "kitaev-solvable-line": 120.0,
    "phase-scan-structure": 60.0,
    "two-site-spt": 1.0,
    "potts-perturbation": 60.0,
    "rydberg-ratios": 1.0,
    "bose-hubbard-presets": 60.0,
    "symmetry-ledger": 1.0,
}


@pytest.mark.parametrize(
    "criterion",
    acceptance.CRITERIA,
    ids=[f"criterion_{k}" for k in range(1, len(acceptance.CRITERIA) + 1)],
)
def test_acceptance_criterion(criterion):
    result = criterion()
    status = "PASS" if result.passed else "FAIL"
    print(f"{status} {result.name} ({result.seconds:.2f}s): {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"
    assert result.seconds < BUDGETS[result.name]


def test_battery_covers_all_eleven():
    assert len(acceptance.CRITERIA) == 11
    names = [fn().name for fn in (acceptance.criterion_1,)]
    assert names == ["field-spectra"]
