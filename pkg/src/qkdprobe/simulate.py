"""Seeded Monte Carlo realization of the four-state protocol under attack.

Each raw transmitted bit survives basis sifting with probability 1/2;
each sifted bit is flipped by the probe with the conditional error
probability of the attack.  Observed counts feed the same distillation
pipeline as the analytic path, so the empirical secret-bit rate
(n - e_T - s)/m converges to the asymptotic secrecy capacity as the
transmission grows.

By default errors are drawn per sifted bit with the scalar error rate
E(params); the full four-state sampler (equiprobable sent states with
per-state conditional flip probabilities, which differ through the skew
coefficient c) is available behind ``four_state_sampler`` and is used by
the tests to verify the scalar reduction.  The probe's own measurement
outcomes are not simulated: eavesdropper knowledge enters only through
the compression level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Literal, Union

import numpy as np

from . import distill, optimum, probe
from .errors import DegenerateRunError, DomainError, OutOfDomainError
from .optimum import FamilyTag
from .probe import ProbeParams, SignalGeometry

_SWEEP_STREAM = 7


@dataclass(frozen=True)
class QLeakModel:
    """Error-correction leakage model: none, or f * n * h2(E) bits."""

    kind: Literal["zero", "binary_entropy"]
    fraction: float = 0.0

    @staticmethod
    def zero() -> "QLeakModel":
        return QLeakModel(kind="zero")

    @staticmethod
    def binary_entropy(fraction: float) -> "QLeakModel":
        if fraction < 0.0:
            raise DomainError("leakage fraction must be non-negative")
        return QLeakModel(kind="binary_entropy", fraction=fraction)

    def leakage_bits(self, n: int, empirical_error: float) -> float:
        if self.kind == "zero":
            return 0.0
        return self.fraction * n * distill.binary_entropy(empirical_error)


@dataclass(frozen=True)
class FamilyAttack:
    """Attack specified as an optimum family at a target error rate."""

    tag: FamilyTag
    target_error: float


@dataclass(frozen=True)
class SimulationConfig:
    """Inputs of one protocol simulation."""

    m: int
    geom: SignalGeometry
    attack: Union[ProbeParams, FamilyAttack]
    p_fail: float
    q_model: QLeakModel
    seed: int
    four_state_sampler: bool = False

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DomainError("m must be a positive integer")
        if not 0.0 < self.p_fail < 1.0:
            raise DomainError("p_fail must lie in (0, 1)")


@dataclass(frozen=True)
class SimulationReport:
    """Counts and rates of one simulated transmission."""

    n: int
    e_t: int
    s: int
    final_key_len: int
    empirical_error: float
    empirical_rate: float
    analytic_capacity: float


def resolve_attack(config: SimulationConfig) -> ProbeParams:
    """Concrete probe parameters for the configured attack."""
    if isinstance(config.attack, ProbeParams):
        return config.attack
    families = optimum.optimal_parameter_families(
        config.attack.target_error, config.geom
    )
    for family in families:
        if family.tag is config.attack.tag:
            return optimum.sample_params(
                family, config.attack.target_error, config.geom
            )
    raise OutOfDomainError(
        f"family {config.attack.tag.value} does not exist at "
        f"alpha = {config.geom.alpha!r}"
    )


def run(config: SimulationConfig) -> SimulationReport:
    """Simulate m raw bits and distill a key; deterministic per seed."""
    params = resolve_attack(config)
    coeffs = probe.coefficients(params)
    analytic_error = min(max(probe.error_rate(coeffs, config.geom), 0.0), 1.0)

    rng = np.random.default_rng(config.seed)
    n = int(rng.binomial(config.m, 0.5))
    if n == 0:
        raise DegenerateRunError("no sifted bits survived basis sifting")

    if config.four_state_sampler:
        probs = probe.detection_probabilities(coeffs, config.geom)
        flip = np.array(
            [
                min(max(probs.p_u_ubar, 0.0), 1.0),
                min(max(probs.p_ubar_u, 0.0), 1.0),
            ]
        )
        sent = rng.integers(0, 2, size=n)
        e_t = int((rng.random(n) < flip[sent]).sum())
    else:
        e_t = int(rng.binomial(n, analytic_error))

    empirical_error = e_t / n
    q_leak = config.q_model.leakage_bits(n, empirical_error)
    dist_config = distill.DistillationConfig(
        n=n, e_t=e_t, p_fail=config.p_fail, q_leak=q_leak
    )
    s = distill.compression_level(dist_config, config.geom)
    return SimulationReport(
        n=n,
        e_t=e_t,
        s=s,
        final_key_len=max(0, n - e_t - s),
        empirical_error=empirical_error,
        empirical_rate=(n - e_t - s) / config.m,
        analytic_capacity=distill.asymptotic_capacity(
            analytic_error, config.geom
        ).capacity,
    )


def _derived_seed(seed: int, index: int) -> int:
    return int(
        np.random.SeedSequence([seed, _SWEEP_STREAM, index]).generate_state(1)[0]
    )


def sweep(
    config: SimulationConfig,
    variable: Literal["error_rate", "alpha"],
    values: Iterable[float],
) -> list[tuple[float, SimulationReport]]:
    """Run the simulation once per value with per-value derived seeds.

    ``error_rate`` retargets a family attack; ``alpha`` moves the signal
    geometry (re-resolving a family attack at the new angle).
    """
    results: list[tuple[float, SimulationReport]] = []
    for index, value in enumerate(values):
        value = float(value)
        derived = replace(config, seed=_derived_seed(config.seed, index))
        if variable == "error_rate":
            if not isinstance(config.attack, FamilyAttack):
                raise DomainError(
                    "sweeping the error rate requires a family attack"
                )
            derived = replace(
                derived, attack=replace(config.attack, target_error=value)
            )
        elif variable == "alpha":
            derived = replace(derived, geom=SignalGeometry(value))
        else:
            raise DomainError(f"unknown sweep variable {variable!r}")
        results.append((value, run(derived)))
    return results


def sifting_sigma(m: int) -> float:
    """Binomial standard deviation of the sifted fraction n/m."""
    return math.sqrt(m * 0.25) / m
