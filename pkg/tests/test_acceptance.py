"""Acceptance battery: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the lines alone.
"""

import json
import sys

import pytest

from cliffordft import suite


@pytest.fixture(scope="module")
def corpus():
    return suite.transform_corpus()


def _report(capsys, res):
    with capsys.disabled():
        print(f"\n{res.line()}")
    assert res.passed, json.dumps(res.to_dict(), indent=1, default=str)


def test_criterion_01_algebra(capsys):
    _report(capsys, suite.criterion_algebra())


def test_criterion_02_split(capsys):
    _report(capsys, suite.criterion_split())


def test_criterion_03_gaussian_eigenfunction(capsys):
    _report(capsys, suite.criterion_gaussian())


def test_criterion_04_parseval(capsys, corpus):
    _report(capsys, suite.criterion_parseval(corpus))


def test_criterion_05_inversion(capsys, corpus):
    _report(capsys, suite.criterion_inversion(corpus))


def test_criterion_06_fast_path(capsys):
    _report(capsys, suite.criterion_fast_path())


def test_criterion_07_derivative(capsys):
    _report(capsys, suite.criterion_derivative())


def test_criterion_08_heisenberg(capsys):
    _report(capsys, suite.criterion_heisenberg())


def test_criterion_09_kernel_bound(capsys):
    _report(capsys, suite.criterion_kernel_bound())


def test_criterion_10_hardy(capsys):
    _report(capsys, suite.criterion_hardy())


def test_criterion_11_parser(capsys):
    _report(capsys, suite.criterion_parser())


def test_corpus_sizes(corpus):
    # the gaussian and 20 hermite-gaussians in each of one and two dimensions
    assert sum("n=1" in label for label, _, _ in corpus) == 21
    assert sum("n=2" in label for label, _, _ in corpus) == 21
    assert len(suite.inequality_corpus()) == 100


if __name__ == "__main__":
    results = suite.run_all(log=print)
    sys.exit(0 if all(r.passed for r in results) else 1)
