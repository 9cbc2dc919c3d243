"""Shared fixtures: classified reports for the built-in metrics."""

import pytest

from curvkit.catalog import builtin, reference_coefficient_forms
from curvkit.classify import classify_metric
from curvkit.curvature import build_bundle
from curvkit.tensor import invert_metric


def classified(metric_id):
    spec = builtin(metric_id)
    bundle = build_bundle(invert_metric(spec.g()), spec.coords)
    forms = reference_coefficient_forms(metric_id) or None
    report = classify_metric(spec, bundle, reference_forms=forms)
    return spec, bundle, report


@pytest.fixture(scope="session")
def bardeen_classified():
    return classified("bardeen")


@pytest.fixture(scope="session")
def rn_classified():
    return classified("reissner_nordstrom")


@pytest.fixture(scope="session")
def schw_classified():
    return classified("schwarzschild")


@pytest.fixture(scope="session")
def mink_classified():
    return classified("minkowski")
