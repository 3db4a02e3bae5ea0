"""The worked example models, as functions of (p, n)."""

from __future__ import annotations

import math

from .distributions import Cauchy, DiscretePowerLaw4, FinitePMF, Normal, StudentT1
from .model import ModelSpec, Periodic, RowRule, Rules

RADEMACHER2 = FinitePMF((-2.0, 2.0), (0.5, 0.5))
RADEMACHER1 = FinitePMF((-1.0, 1.0), (0.5, 0.5))


def example1(p=70, n=4900):
    """Power-law-4 integers in even columns, +-2 coin flips in odd columns."""
    return ModelSpec(p, n, (DiscretePowerLaw4(), RADEMACHER2), Periodic(((1, 0),)), name="example1")


def example2(p=70, n=900):
    """X_ki ~ N(5, i^2): one class per column."""
    dists = tuple(Normal(5.0, float(i)) for i in range(1, n + 1))
    return ModelSpec(p, n, dists, Periodic((tuple(range(n)),)), name="example2", max_classes=n)


def example3(p=70, n=4900):
    """t(1) in even columns, +-1 coin flips in odd columns."""
    return ModelSpec(p, n, (StudentT1(), RADEMACHER1), Periodic(((1, 0),)), name="example3")


def example_a(p=30, n=900):
    """Cauchy(0, s) with s = 1, 20 (k odd; i odd, even) and 30, 10 (k even)."""
    dists = (Cauchy(0, 1), Cauchy(0, 20), Cauchy(0, 30), Cauchy(0, 10))
    return ModelSpec(p, n, dists, Periodic(((0, 1), (2, 3))), name="exampleA")


def example_b(p=30, n=900):
    """Cauchy(0, sqrt(k)) rows for odd k, Bernoulli(k^(-1/4)) on {0, 1} for even k."""
    dists, rules = [], []
    for k in range(1, p + 1):
        if k % 2:
            dists.append(Cauchy(0.0, math.sqrt(k)))
        else:
            q = k ** -0.25
            dists.append(FinitePMF((0.0, 1.0), (1.0 - q, q)))
        rules.append(RowRule(cols=(k - 1,), k_min=k, k_max=k))
    return ModelSpec(p, n, tuple(dists), Rules(tuple(rules)), name="exampleB",
                     max_classes=max(p, 16))


def continuous_iid(p=30, n=900):
    return ModelSpec(p, n, (Normal(0.0, 1.0),), Periodic(((0,),)), name="continuous-iid")


def table4(p=10, n=100):
    """Independence-test model: power-law-4 in even columns, {+-1: .2, +-2: .3} in odd."""
    odd = FinitePMF((-2.0, -1.0, 1.0, 2.0), (0.3, 0.2, 0.2, 0.3))
    return ModelSpec(p, n, (DiscretePowerLaw4(), odd), Periodic(((1, 0),)), name="table4")


MODELS = {
    "example1": example1,
    "example2": example2,
    "example3": example3,
    "exampleA": example_a,
    "exampleB": example_b,
    "continuous-iid": continuous_iid,
    "table4": table4,
}


def get_model(name: str, p=None, n=None) -> ModelSpec:
    try:
        factory = MODELS[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None
    kwargs = {}
    if p is not None:
        kwargs["p"] = p
    if n is not None:
        kwargs["n"] = n
    return factory(**kwargs)
