import math

import numpy as np
import pytest

from qkdprobe import ProbeParams, SignalGeometry, mu_from_constraint
from qkdprobe.errors import InfeasibleConstraintError, SingularLambdaError

PI = math.pi


@pytest.fixture
def geom_pi8() -> SignalGeometry:
    return SignalGeometry(PI / 8)


def draw_constrained_points(
    rng: np.ndarray, geom: SignalGeometry, target_error: float, count: int
) -> list[ProbeParams]:
    """Random probe settings that induce exactly the target error rate.

    Draws (lam, theta, phi) uniformly and solves mu from the constraint,
    rejecting infeasible draws, until ``count`` points are collected.
    """
    points: list[ProbeParams] = []
    while len(points) < count:
        lam, theta, phi = rng.uniform(0.05 * PI, 0.95 * PI, 3)
        try:
            mu = mu_from_constraint(lam, theta, phi, target_error, geom)
        except (InfeasibleConstraintError, SingularLambdaError):
            continue
        points.append(ProbeParams(lam=lam, mu=mu, theta=theta, phi=phi))
    return points
