"""Closed-form fidelity and success probability of the hybrid N-branch scheme.

The input is split over N branches, each branch truncated to the
{|0>, |1>} qubit sector and teleported through a Bell pair, and the
branches are recombined with post-selection on empty detectors.  The
surviving output is

    |Psi_out> ~ sum_{k=0}^{N} <k|psi> C(N,k) k!/N^k |k>

with success probability P = sum_k |<k|psi>|^2 [C(N,k) k!/N^k]^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .gauss import GaussianPure, fock_overlaps
from .reports import FidelityReport

__all__ = ["ArConfig", "ar_success_prob", "ar_fidelity", "ar_weights", "ar_terms"]


@dataclass(frozen=True)
class ArConfig:
    """Branch count and the Fock range of the retained output amplitudes."""

    branches: int
    overlap_cutoff: int | None = None

    def __post_init__(self):
        if self.branches < 1:
            raise ValueError("branch count must be >= 1")
        if self.overlap_cutoff is not None and self.overlap_cutoff < 0:
            raise ValueError("overlap_cutoff must be >= 0")

    @property
    def k_max(self) -> int:
        return self.branches if self.overlap_cutoff is None else self.overlap_cutoff


def ar_weights(n_branches: int) -> np.ndarray:
    """Output weights C(N,k) k!/N^k = N!/((N-k)! N^k) for k = 0..N.

    Evaluated through log-gamma so large branch counts neither overflow
    nor lose the k! against the binomial.
    """
    k = np.arange(n_branches + 1)
    logw = gammaln(n_branches + 1) - gammaln(n_branches - k + 1) - k * np.log(n_branches)
    return np.exp(logw)


def ar_terms(prob_k: np.ndarray, n_branches: int):
    """(fidelity, success probability) from |<k|psi>|^2 stacked on axis 0."""
    w = ar_weights(n_branches).reshape((-1,) + (1,) * (prob_k.ndim - 1))
    p_suc = np.sum(w**2 * prob_k, axis=0)
    amp = np.sum(w * prob_k, axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        fid = np.where(p_suc > 0.0, amp**2 / np.where(p_suc > 0.0, p_suc, 1.0), 0.0)
    return np.clip(fid, 0.0, 1.0), p_suc


def ar_success_prob(input_state: GaussianPure, n_branches: int) -> float:
    """Probability that all truncations and detector post-selections succeed."""
    cfg = ArConfig(n_branches)
    c = fock_overlaps(input_state, cfg.k_max)
    _, p = ar_terms(np.abs(c) ** 2, n_branches)
    return float(p)


def ar_fidelity(input_state: GaussianPure, n_branches: int) -> FidelityReport:
    """Post-selected teleportation fidelity of a pure Gaussian input."""
    cfg = ArConfig(n_branches)
    c = fock_overlaps(input_state, cfg.k_max)
    fid, p = ar_terms(np.abs(c) ** 2, n_branches)
    return FidelityReport(
        scheme="ar",
        fidelity=float(fid),
        success_prob=float(p),
        entropy_ebits=float(n_branches),
        energy_units=float(n_branches),
        error_estimate=1e-14,
        params={
            "alpha_re": input_state.alpha.real,
            "alpha_im": input_state.alpha.imag,
            "s": input_state.s,
            "phi": input_state.phi,
            "branches": n_branches,
        },
    )
