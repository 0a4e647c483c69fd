"""Input-state priors, classical benchmarks, and ensemble-averaged fidelities.

Two priors over pure single-mode Gaussian states are supported:

  squeezed-only  p(s, phi) = (1/2pi) beta sinh(s) / cosh(s)^{beta+1}
  general        p(alpha, s, phi) = (lam beta / 2 pi^2) sinh(s)/cosh(s)^{beta+2}
                   * exp[-lam |alpha|^2 + lam Re(e^{-i phi} alpha^2) tanh s]

The general prior factors exactly as the squeezed-only density times a
zero-mean complex Gaussian for alpha whose axes follow the squeezing
direction: with t = tanh s the precision matrix (in the frame rotated by
phi/2) is diag(lam (1 - t), lam (1 + t)) and the covariance its inverse
halved.  That conditional is both the sampler and the weight used for the
Gauss-Hermite alpha-quadratures below.

Averages are deterministic quadratures: Gauss-Legendre panels in s on
[0, 4], [4, 12], [12, 40] (the prior tail beyond s = 40 is bounded
analytically and folded into the reported integration error), the
periodic trapezoid rule in phi, and exact Gaussian reductions in alpha
(closed form for the deterministic scheme, whose alpha-dependence is
itself Gaussian; polynomial-exact Gauss-Hermite for the hybrid scheme).
Monte-Carlo estimators over the same priors provide independent
cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ar import ar_terms, ar_weights
from .errors import DivisionByZeroSuccess, QuadratureNotConverged
from .gauss import GaussianPure, fock_overlap_batch
from .reports import AverageReport
from .resource import SqueezedBellResource
from .vbk import VbkConfig, _moment_pieces, vbk_fidelity_values

__all__ = [
    "Prior",
    "benchmark_squeezed",
    "benchmark_general",
    "sample_prior",
    "mean_fidelity_vbk",
    "mean_fidelity_ar",
    "mean_fidelity_vbk_mc",
    "mean_fidelity_ar_mc",
    "resource_accounting",
]

S_MAX = 40.0
_PANELS = (0.0, 4.0, 12.0, S_MAX)
_S_LEVELS = (48, 96, 192, 384)
_PHI_LEVELS = (32, 64, 128, 256)


@dataclass(frozen=True)
class Prior:
    """Input ensemble: kind 'squeezed' (beta) or 'general' (lam, beta)."""

    kind: str
    beta: float
    lam: float | None = None

    def __post_init__(self):
        if self.kind not in ("squeezed", "general"):
            raise ValueError("prior kind must be 'squeezed' or 'general'")
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.kind == "general":
            if self.lam is None or self.lam <= 0:
                raise ValueError("general prior needs lam > 0")
        elif self.lam is not None:
            raise ValueError("squeezed-only prior takes no lam")


def benchmark_squeezed(beta: float) -> float:
    """Best classical average fidelity for the squeezed-only ensemble."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    return (1.0 + beta) / (2.0 + beta)


def benchmark_general(lam: float, beta: float) -> float:
    """Best classical average fidelity for displaced squeezed ensembles."""
    if lam < 0 or beta < 0:
        raise ValueError("widths must be >= 0")
    return ((1.0 + lam) / (2.0 + lam)) * ((1.0 + beta) / (2.0 + beta))


def benchmark(prior: Prior) -> float:
    if prior.kind == "squeezed":
        return benchmark_squeezed(prior.beta)
    return benchmark_general(prior.lam, prior.beta)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _sample_s(beta: float, u: np.ndarray) -> np.ndarray:
    """Inverse CDF of the squeezing magnitude: cosh(s) = (1-u)^{-1/beta}."""
    w = -np.log1p(-u) / beta
    with np.errstate(invalid="ignore"):
        s = w + np.log1p(np.sqrt(-np.expm1(-2.0 * w)))
    return np.where(w > 0.0, s, 0.0)


def sample_prior(prior: Prior, rng, size: int | None = None):
    """Draw from the prior.

    With size=None returns a single GaussianPure; otherwise a dict of
    arrays {alpha, s, phi}.  rng is a numpy Generator or a seed.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    n = 1 if size is None else int(size)
    s = _sample_s(prior.beta, rng.random(n))
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    if prior.kind == "squeezed":
        alpha = np.zeros(n, dtype=complex)
    else:
        t = np.tanh(s)
        sig1 = 1.0 / np.sqrt(2.0 * prior.lam * (1.0 - t))
        sig2 = 1.0 / np.sqrt(2.0 * prior.lam * (1.0 + t))
        w1 = rng.standard_normal(n) * sig1
        w2 = rng.standard_normal(n) * sig2
        half = phi / 2.0
        alpha = (np.cos(half) * w1 - np.sin(half) * w2) + 1j * (
            np.sin(half) * w1 + np.cos(half) * w2
        )
    if size is None:
        return GaussianPure(complex(alpha[0]), float(s[0]), float(phi[0]))
    return {"alpha": alpha, "s": s, "phi": phi}


# ---------------------------------------------------------------------------
# Quadrature rules
# ---------------------------------------------------------------------------

def _s_rule(beta: float, n: int):
    """Panelled Gauss-Legendre nodes in s with prior weights attached."""
    nodes, weights = [], []
    counts = (n, max(n // 2, 8), max(n // 4, 8))
    for (lo, hi), cnt in zip(zip(_PANELS, _PANELS[1:]), counts):
        x, w = np.polynomial.legendre.leggauss(cnt)
        s = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        nodes.append(s)
        weights.append(0.5 * (hi - lo) * w)
    s = np.concatenate(nodes)
    w = np.concatenate(weights)
    dens = np.exp(np.log(beta) + np.log(np.sinh(s)) - (beta + 1.0) * np.log(np.cosh(s)))
    return s, w * dens


def _s_tail_mass(beta: float) -> float:
    """Prior mass beyond S_MAX, exp(-beta log cosh S_MAX)."""
    return math.exp(-beta * (S_MAX + math.log1p(math.exp(-2.0 * S_MAX)) - math.log(2.0)))


def _phi_rule(n: int):
    phi = np.arange(n) * (2.0 * math.pi / n)
    return phi, np.full(n, 1.0 / n)


# ---------------------------------------------------------------------------
# Deterministic-scheme average
# ---------------------------------------------------------------------------

def _vbk_alpha_reduction(s, phi, lam: float, res: SqueezedBellResource, gain: float):
    """Closed-form conditional alpha-average factor for the deterministic scheme.

    The fidelity depends on the displacement only through a Gaussian
    exp(-z^T A_F z) with A_F = (1-g)^2 M / det M, so the conditional
    average is sqrt(det A_p / det(A_p + A_F)).
    """
    det_m, m11, m12, m22, *_ = _moment_pieces(
        0.0, 0.0, s, phi, res.r, res.phi_zeta, res.delta, res.theta, gain
    )
    t = np.tanh(s)
    g2 = (1.0 - gain) ** 2
    b11 = lam * (1.0 - t * np.cos(phi)) + g2 * m11 / det_m
    b22 = lam * (1.0 + t * np.cos(phi)) + g2 * m22 / det_m
    b12 = -lam * t * np.sin(phi) + g2 * m12 / det_m
    det_b = b11 * b22 - b12**2
    return lam / (np.cosh(s) * np.sqrt(det_b))


def mean_fidelity_vbk(
    prior: Prior,
    res: SqueezedBellResource,
    cfg: VbkConfig | None = None,
    tol: float = 1e-3,
) -> AverageReport:
    """Prior-averaged fidelity of the deterministic scheme at fixed resource and gain.

    The resource and gain stay fixed across the ensemble (the scheme must
    teleport unknown states).  Quadrature levels are doubled until the
    change plus the analytic s-tail bound drops below tol relative to the
    running value.
    """
    cfg = cfg or VbkConfig()
    tail_mass = _s_tail_mass(prior.beta)
    evaluations = 0
    prev = None
    result = err = None
    for n_s, n_phi in zip(_S_LEVELS, _PHI_LEVELS):
        s, ws = _s_rule(prior.beta, n_s)
        phi, wphi = _phi_rule(n_phi)
        sg, pg = s[:, None], phi[None, :]
        fid = vbk_fidelity_values(np.zeros((1, 1), dtype=complex), sg, pg, res, cfg.gain)
        if prior.kind == "general":
            fid = fid * _vbk_alpha_reduction(sg, pg, prior.lam, res, cfg.gain)
        evaluations += fid.size
        value = float(ws @ fid @ wphi)
        tail_bound = tail_mass * float(fid[-1].max())
        if prev is not None:
            err = abs(value - prev) + tail_bound
            result = value
            if err <= max(tol * abs(value), 1e-9):
                break
        prev = value
    else:
        if err is None or err > max(tol * abs(result), 1e-9):
            raise QuadratureNotConverged(
                f"mean fidelity stuck at error {err} after {evaluations} evaluations"
            )
    return AverageReport(
        mean_fidelity=result,
        mean_success_prob=1.0,
        integration_error=err,
        evaluations=evaluations,
        params=_avg_params(prior, gain=cfg.gain, resource=res),
    )


# ---------------------------------------------------------------------------
# Hybrid-scheme average
# ---------------------------------------------------------------------------

def _ar_squeezed_terms(s: np.ndarray, n_branches: int):
    amps = fock_overlap_batch(np.zeros_like(s, dtype=complex), s, np.zeros_like(s), n_branches)
    fid, p = ar_terms(np.abs(amps) ** 2, n_branches)
    return fid * p, p


def _ar_general_terms(s: np.ndarray, n_branches: int, lam: float, n_hermite: int):
    """Conditional alpha-averages (E[P F | s], E[P | s]) at phi = 0.

    Both integrands are a Gaussian times a polynomial of bounded degree in
    (Re alpha, Im alpha), so Gauss-Hermite after whitening by the product
    Gaussian is exact: the success-weighted numerator pairs the prior with
    |c_0|^4, the success probability with |c_0|^2, giving different axis
    scalings e_num/e_den below.
    """
    x, wgt = np.polynomial.hermite.hermgauss(n_hermite)
    w_eff = wgt * np.exp(x**2)
    t = np.tanh(s)

    def conditional(exponent_shift: int, combine):
        lp = lam + exponent_shift
        lm = lam - exponent_shift
        e1 = lp - lm * t
        e2 = lp + lm * t
        zx = x[None, :, None] / np.sqrt(e1)[:, None, None]
        zy = x[None, None, :] / np.sqrt(e2)[:, None, None]
        alpha = zx + 1j * zy
        amps = fock_overlap_batch(
            alpha, s[:, None, None], np.zeros_like(alpha, dtype=float), n_branches
        )
        value = combine(np.abs(amps) ** 2)
        cond = (
            lam
            / (np.cosh(s)[:, None, None] * math.pi)
            * np.exp(
                -lam * ((1.0 - t)[:, None, None] * zx**2 + (1.0 + t)[:, None, None] * zy**2)
            )
        )
        integ = cond * value
        total = np.einsum("i,j,sij->s", w_eff, w_eff, integ)
        return total / np.sqrt(e1 * e2)

    w = ar_weights(n_branches).reshape(-1, 1, 1, 1)

    def num(prob):
        return np.sum(w * prob, axis=0) ** 2

    def den(prob):
        return np.sum(w**2 * prob, axis=0)

    return conditional(2, num), conditional(1, den)


def mean_fidelity_ar(prior: Prior, n_branches: int, tol: float = 1e-3) -> AverageReport:
    """Success-weighted average fidelity of the hybrid scheme.

    F_bar = int p P F / int p P, with the mean success probability
    int p P reported alongside.  The phase integral is trivial: prior and
    scheme are covariant under a joint phase rotation, so the conditional
    averages are evaluated at phi = 0.
    """
    if n_branches < 1:
        raise ValueError("branch count must be >= 1")
    n_hermite = 2 * n_branches + 2
    tail_mass = _s_tail_mass(prior.beta)
    evaluations = 0
    prev = None
    result = p_mean = err = None
    for n_s in _S_LEVELS:
        s, ws = _s_rule(prior.beta, n_s)
        if prior.kind == "squeezed":
            num, den = _ar_squeezed_terms(s, n_branches)
            evaluations += 2 * s.size
        else:
            num, den = _ar_general_terms(s, n_branches, prior.lam, n_hermite)
            evaluations += 2 * s.size * n_hermite**2
        total_num = float(ws @ num)
        total_den = float(ws @ den)
        value = total_num / total_den
        if prev is not None:
            err = abs(value - prev) + tail_mass * float(num[-1].max() / total_den)
            result, p_mean = value, total_den
            if err <= max(tol * abs(value), 1e-9):
                break
        prev = value
    else:
        if err is None or err > max(tol * abs(result), 1e-9):
            raise QuadratureNotConverged(
                f"mean fidelity stuck at error {err} after {evaluations} evaluations"
            )
    return AverageReport(
        mean_fidelity=result,
        mean_success_prob=p_mean,
        integration_error=err,
        evaluations=evaluations,
        params=_avg_params(prior, branches=n_branches),
    )


# ---------------------------------------------------------------------------
# Monte-Carlo cross-checks
# ---------------------------------------------------------------------------

def mean_fidelity_vbk_mc(
    prior: Prior,
    res: SqueezedBellResource,
    cfg: VbkConfig | None = None,
    n_samples: int = 100_000,
    seed: int = 1234,
):
    """(mean, standard error) of the deterministic-scheme fidelity by sampling."""
    cfg = cfg or VbkConfig()
    draws = sample_prior(prior, np.random.default_rng(seed), n_samples)
    fid = vbk_fidelity_values(draws["alpha"], draws["s"], draws["phi"], res, cfg.gain)
    return float(fid.mean()), float(fid.std(ddof=1) / math.sqrt(n_samples))


def mean_fidelity_ar_mc(prior: Prior, n_branches: int, n_samples: int = 100_000, seed: int = 1234):
    """Sampled success-weighted average of the hybrid scheme.

    Returns (mean, stderr, p_mean, p_stderr); the ratio estimator error
    uses the delta method var(PF - R P) / (n <P>^2).
    """
    draws = sample_prior(prior, np.random.default_rng(seed), n_samples)
    amps = fock_overlap_batch(draws["alpha"], draws["s"], draws["phi"], n_branches)
    fid, p = ar_terms(np.abs(amps) ** 2, n_branches)
    pf = fid * p
    ratio = pf.mean() / p.mean()
    resid = pf - ratio * p
    stderr = float(resid.std(ddof=1) / (p.mean() * math.sqrt(n_samples)))
    return float(ratio), stderr, float(p.mean()), float(p.std(ddof=1) / math.sqrt(n_samples))


def resource_accounting(report: AverageReport, n_branches: int):
    """(pragmatic, naive) resource cost of an N-branch run.

    Pragmatic counts the per-run units regardless of failures; naive
    divides by the mean success probability.
    """
    if report.mean_success_prob <= 0.0:
        raise DivisionByZeroSuccess("mean success probability is zero")
    return float(n_branches), float(n_branches) / report.mean_success_prob


def _avg_params(prior: Prior, **extra) -> dict:
    params = {"prior": prior.kind, "beta": prior.beta}
    if prior.lam is not None:
        params["lam"] = prior.lam
    for key, value in extra.items():
        if isinstance(value, SqueezedBellResource):
            params.update(
                {"r": value.r, "phi_zeta": value.phi_zeta, "delta": value.delta, "theta": value.theta}
            )
        else:
            params[key] = value
    return params
