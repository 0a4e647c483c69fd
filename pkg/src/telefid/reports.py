"""Result records returned by the fidelity engines."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict


@dataclass
class FidelityReport:
    """Single-shot teleportation result.

    success_prob is 1 for the deterministic continuous-variable scheme and
    the post-selection probability for the probabilistic hybrid scheme.
    entropy_ebits / energy_units describe the entangled resource consumed.
    error_estimate is an a-posteriori bound on the numerical error of the
    fidelity value.
    """

    scheme: str
    fidelity: float
    success_prob: float
    entropy_ebits: float | None = None
    energy_units: float | None = None
    error_estimate: float = 0.0
    params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=float)


@dataclass
class AverageReport:
    """Ensemble-averaged fidelity over an input prior.

    mean_success_prob is 1 for deterministic schemes.  integration_error is
    the combined quadrature refinement estimate plus analytic tail bounds.
    """

    mean_fidelity: float
    mean_success_prob: float
    integration_error: float
    evaluations: int
    params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=float)
