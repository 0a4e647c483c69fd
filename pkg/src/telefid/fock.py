"""Truncated Fock-space numerics.

Dense, brute-force bosonic operator application on truncated Fock bases.
This module is the trust anchor of the package: operators act through the
matrix exponential of their truncated generators, truncation adequacy is
checked after the fact (sum of |amplitude|^2 over the top 10% of each
index range must stay below the tail tolerance) and nothing is silently
renormalized.  All functions are pure; inputs are never mutated.

Conventions:
  squeeze      S(xi)     = exp[-xi/2 a^dag^2 + conj(xi)/2 a^2]
  displace     D(alpha)  = exp[alpha a^dag - conj(alpha) a]
  two-mode     S_AB(z)   = exp[-z a^dag b^dag + conj(z) a b]
  beam splitter on modes (i, j): exp[theta (a_i^dag a_j - a_i a_j^dag)]
  with cos(theta) = sqrt(transmissivity); a real rotation, so a coherent
  amplitude in mode j leaks into mode i with a plus sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import CutoffTooSmall, ModeIndexOutOfRange, TailTooLarge

__all__ = [
    "TruncationPolicy",
    "FockVector",
    "annihilation_matrix",
    "apply_squeeze_1m",
    "apply_displace_1m",
    "apply_two_mode_squeeze",
    "apply_beam_splitter",
    "project_and_renormalize",
    "displacement_matrix",
    "char_fn_1m",
    "char_fn_2m",
]


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoff and tail tolerance for truncated-basis computations."""

    cutoff: int = 60
    tail_tol: float = 1e-12

    def __post_init__(self):
        if self.cutoff < 2:
            raise CutoffTooSmall(f"cutoff must be >= 2, got {self.cutoff}")
        if self.tail_tol <= 0:
            raise ValueError("tail_tol must be positive")


@dataclass(frozen=True)
class FockVector:
    """Complex amplitude vector over a truncated Fock basis.

    amplitudes has shape (cutoff,) * modes, index order (n_1, ..., n_m).
    Sub-normalized vectors are allowed (post-selection residues); norms
    above 1 + 1e-12 are rejected.
    """

    amplitudes: np.ndarray
    modes: int
    cutoff: int

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.cutoff,) * self.modes:
            raise ValueError(
                f"amplitude shape {amps.shape} does not match "
                f"{self.modes} modes at cutoff {self.cutoff}"
            )
        if self.cutoff < 2:
            raise CutoffTooSmall("cutoff must be >= 2")
        n = np.linalg.norm(amps.ravel())
        if n > 1.0 + 1e-12:
            raise ValueError(f"norm {n} exceeds 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def vacuum(cls, modes: int, cutoff: int) -> "FockVector":
        amps = np.zeros((cutoff,) * modes, dtype=complex)
        amps[(0,) * modes] = 1.0
        return cls(amps, modes, cutoff)

    @classmethod
    def basis_state(cls, occupations, cutoff: int) -> "FockVector":
        occupations = tuple(int(n) for n in occupations)
        if any(n < 0 or n >= cutoff for n in occupations):
            raise ValueError(f"occupations {occupations} outside cutoff {cutoff}")
        amps = np.zeros((cutoff,) * len(occupations), dtype=complex)
        amps[occupations] = 1.0
        return cls(amps, len(occupations), cutoff)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes.ravel()))

    def normalized(self) -> "FockVector":
        n = self.norm()
        if n == 0.0:
            return self
        return FockVector(self.amplitudes / n, self.modes, self.cutoff)

    def overlap(self, other: "FockVector") -> complex:
        if (self.modes, self.cutoff) != (other.modes, other.cutoff):
            raise ValueError("overlap requires matching mode count and cutoff")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def number_expectation(self, mode: int) -> float:
        _check_mode(self, mode)
        n = np.arange(self.cutoff)
        p = np.abs(self.amplitudes) ** 2
        axes = tuple(ax for ax in range(self.modes) if ax != mode)
        marginal = p.sum(axis=axes) if axes else p
        return float(np.dot(n, marginal))

    def tail_mass(self) -> float:
        """Largest per-mode probability mass in the top 10% of the index range."""
        start = self.cutoff - max(1, self.cutoff // 10)
        p = np.abs(self.amplitudes) ** 2
        worst = 0.0
        for mode in range(self.modes):
            axes = tuple(ax for ax in range(self.modes) if ax != mode)
            marginal = p.sum(axis=axes) if axes else p
            worst = max(worst, float(marginal[start:].sum()))
        return worst


def _check_mode(state: FockVector, mode: int) -> None:
    if not 0 <= mode < state.modes:
        raise ModeIndexOutOfRange(f"mode {mode} not in 0..{state.modes - 1}")


def _check_tail(state: FockVector, tail_tol: float) -> FockVector:
    tail = state.tail_mass()
    if tail > tail_tol:
        raise TailTooLarge(
            f"truncation tail {tail:.3e} exceeds tolerance {tail_tol:.3e}; "
            "increase the cutoff"
        )
    return state


def annihilation_matrix(cutoff: int) -> np.ndarray:
    """Truncated annihilation operator, a[n-1, n] = sqrt(n)."""
    if cutoff < 2:
        raise CutoffTooSmall("cutoff must be >= 2")
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1)


def apply_squeeze_1m(state: FockVector, xi: complex, tail_tol: float = 1e-12) -> FockVector:
    """Apply S(xi) = exp[-xi/2 a^dag^2 + conj(xi)/2 a^2] to a single-mode state."""
    if state.modes != 1:
        raise ValueError("apply_squeeze_1m acts on single-mode states")
    a = annihilation_matrix(state.cutoff)
    gen = -0.5 * xi * (a.T @ a.T) + 0.5 * np.conj(xi) * (a @ a)
    out = FockVector(expm(gen) @ state.amplitudes, 1, state.cutoff)
    return _check_tail(out, tail_tol)


def apply_displace_1m(state: FockVector, alpha: complex, tail_tol: float = 1e-12) -> FockVector:
    """Apply D(alpha) = exp[alpha a^dag - conj(alpha) a] to a single-mode state."""
    if state.modes != 1:
        raise ValueError("apply_displace_1m acts on single-mode states")
    a = annihilation_matrix(state.cutoff)
    gen = alpha * a.T - np.conj(alpha) * a
    out = FockVector(expm(gen) @ state.amplitudes, 1, state.cutoff)
    return _check_tail(out, tail_tol)


def apply_two_mode_squeeze(state: FockVector, zeta: complex, tail_tol: float = 1e-12) -> FockVector:
    """Apply S_AB(zeta) = exp[-zeta a^dag b^dag + conj(zeta) a b] to a two-mode state.

    The generator conserves the photon-number difference n_A - n_B, so the
    exponential is taken block by block over the difference sectors; blocks
    whose input amplitudes vanish are skipped.
    """
    if state.modes != 2:
        raise ValueError("apply_two_mode_squeeze acts on two-mode states")
    d = state.cutoff
    out = np.array(state.amplitudes, dtype=complex)
    for k in range(-(d - 1), d):
        # sector basis |n, n-k> for n = max(k,0) .. d-1+min(k,0)
        n_lo, n_hi = max(k, 0), d - 1 + min(k, 0)
        n = np.arange(n_lo, n_hi + 1)
        vec = out[n, n - k]
        if not np.any(vec):
            continue
        m = len(n)
        gen = np.zeros((m, m), dtype=complex)
        # a^dag b^dag couples (n, n-k) -> (n+1, n-k+1) with sqrt((n+1)(n-k+1))
        up = np.sqrt((n[:-1] + 1.0) * (n[:-1] - k + 1.0))
        gen[np.arange(1, m), np.arange(m - 1)] = -zeta * up
        gen[np.arange(m - 1), np.arange(1, m)] = np.conj(zeta) * np.sqrt(
            n[1:] * (n[1:] - k)
        )
        out[n, n - k] = expm(gen) @ vec
    result = FockVector(out, 2, d)
    return _check_tail(result, tail_tol)


def _beam_splitter_unitary(cutoff: int, theta: float) -> np.ndarray:
    """Two-mode rotation exp[theta (a^dag b - a b^dag)] as a d^2 x d^2 matrix.

    Total photon number is conserved; the matrix is assembled block by
    block over the number sectors, each block the exponential of the
    truncated generator restricted to that sector.
    """
    d = cutoff
    u = np.zeros((d * d, d * d))
    for n_tot in range(2 * d - 1):
        m_lo, m_hi = max(0, n_tot - d + 1), min(n_tot, d - 1)
        m = np.arange(m_lo, m_hi + 1)
        size = len(m)
        gen = np.zeros((size, size))
        # a^dag b maps (m, n_tot-m) -> (m+1, n_tot-m-1), amp sqrt((m+1)(n_tot-m))
        amp = theta * np.sqrt((m[:-1] + 1.0) * (n_tot - m[:-1]))
        gen[np.arange(1, size), np.arange(size - 1)] = amp
        gen[np.arange(size - 1), np.arange(1, size)] = -amp
        block = expm(gen)
        flat = m * d + (n_tot - m)
        u[np.ix_(flat, flat)] = block
    return u


def apply_beam_splitter(
    state: FockVector, mode_i: int, mode_j: int, transmissivity: float
) -> FockVector:
    """Apply exp[theta (a_i^dag a_j - a_i a_j^dag)], cos(theta) = sqrt(t)."""
    _check_mode(state, mode_i)
    _check_mode(state, mode_j)
    if mode_i == mode_j:
        raise ModeIndexOutOfRange("beam splitter needs two distinct modes")
    if not 0.0 <= transmissivity <= 1.0:
        raise ValueError("transmissivity must lie in [0, 1]")
    theta = math.acos(math.sqrt(transmissivity))
    return _apply_two_mode_unitary(
        state, mode_i, mode_j, _beam_splitter_unitary(state.cutoff, theta)
    )


def _apply_two_mode_unitary(
    state: FockVector, mode_i: int, mode_j: int, u: np.ndarray
) -> FockVector:
    d = state.cutoff
    amps = np.moveaxis(state.amplitudes, (mode_i, mode_j), (0, 1))
    rest = amps.shape[2:]
    amps = amps.reshape(d * d, -1)
    amps = u @ amps
    amps = amps.reshape((d, d) + rest)
    amps = np.moveaxis(amps, (0, 1), (mode_i, mode_j))
    return FockVector(amps, state.modes, d)


def project_and_renormalize(state: FockVector, mode: int, outcome: int):
    """Project one mode onto a Fock outcome and drop it.

    Returns (post-measurement state on the remaining modes, outcome
    probability).  Zero-probability outcomes return the zero vector.
    Modes are indexed from 0.
    """
    _check_mode(state, mode)
    if state.modes < 2:
        raise ValueError("cannot drop the only mode of a state")
    if not 0 <= outcome < state.cutoff:
        raise ValueError(f"outcome {outcome} outside cutoff {state.cutoff}")
    sl = [slice(None)] * state.modes
    sl[mode] = outcome
    kept = np.array(state.amplitudes[tuple(sl)], dtype=complex)
    prob = float(np.sum(np.abs(kept) ** 2))
    if prob > 0.0:
        kept /= math.sqrt(prob)
    return FockVector(kept, state.modes - 1, state.cutoff), prob


# ---------------------------------------------------------------------------
# Displacement matrix elements and characteristic-function reconstruction.
# ---------------------------------------------------------------------------

def displacement_matrix(gamma: complex, cutoff: int) -> np.ndarray:
    """Exact matrix elements <m|D(gamma)|n> for m, n < cutoff.

    Column recurrence from D(gamma) a^dag = (a^dag - conj(gamma)) D(gamma):
    D[m, n] = (sqrt(m) D[m-1, n-1] - conj(gamma) D[m, n-1]) / sqrt(n),
    seeded with the coherent-state column D[m, 0] = e^{-|g|^2/2} g^m/sqrt(m!).
    Agrees with expm of the truncated generator away from the cutoff edge
    (exercised in the tests).
    """
    d = cutoff
    out = np.zeros((d, d), dtype=complex)
    m = np.arange(d)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, d)))))
    if gamma == 0:
        return np.eye(d, dtype=complex)
    out[:, 0] = np.exp(
        -0.5 * abs(gamma) ** 2 + m * np.log(complex(gamma)) - 0.5 * log_fact
    )
    sq = np.sqrt(np.arange(d, dtype=float))
    for n in range(1, d):
        prev = out[:, n - 1]
        shifted = np.zeros(d, dtype=complex)
        shifted[1:] = sq[1:] * prev[:-1]
        out[:, n] = (shifted - np.conj(gamma) * prev) / sq[n]
    return out


def _displacement_moments(psi: np.ndarray) -> np.ndarray:
    """Scaled normally ordered moments G[j,k] = <psi|a^dag^j a^k|psi>/sqrt(j! k!).

    With these, <psi|D(g)|psi> = e^{-|g|^2/2} sum_{jk} G[j,k] v_j(g) v_k(-conj(g))
    where v_j(g) = g^j/sqrt(j!); the double sum is a matrix product, so a
    batch of gamma values costs one BLAS call instead of a column loop.
    """
    d = len(psi)
    b = np.zeros((d, d), dtype=complex)
    v = np.array(psi, dtype=complex)
    b[0] = v
    for k in range(1, d):
        # one more annihilation, 1/sqrt(k!) kept multiplicatively
        v = np.sqrt(np.arange(1, d - k + 1)) * v[1:] / math.sqrt(k)
        b[k, : d - k] = v
    return np.conj(b) @ b.T


def _scaled_powers(g: np.ndarray, d: int) -> np.ndarray:
    """v[j] = g^j / sqrt(j!) built multiplicatively, shape (d, len(g))."""
    v = np.empty((d, len(g)), dtype=complex)
    v[0] = 1.0
    for j in range(1, d):
        v[j] = v[j - 1] * g / math.sqrt(j)
    return v


def _char_from_moments(gram: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """<psi|D(gamma)|psi> for a batch of gamma from precomputed moments."""
    d = len(gram)
    v = _scaled_powers(gammas, d)
    u = _scaled_powers(-np.conj(gammas), d)
    return np.exp(-0.5 * np.abs(gammas) ** 2) * np.einsum("jp,jp->p", v, gram @ u)


def _char_quadratic_stream(psi: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """<psi|D(gamma)|psi> for a batch of gamma, streaming matrix columns.

    Memory stays at O(d * batch); used on phase-space grids where building
    every displacement matrix would be prohibitive.
    """
    d = len(psi)
    g = gammas.astype(complex)
    m = np.arange(d, dtype=float)[:, None]
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, d)))))[:, None]
    col = np.exp(-0.5 * np.abs(g) ** 2 + m * np.log(np.where(g == 0, 1.0, g)) - 0.5 * log_fact)
    col[:, g == 0] = 0.0
    col[0, g == 0] = 1.0

    psi_c = np.conj(psi)
    sq = np.sqrt(np.arange(d, dtype=float))
    acc = (psi_c @ col) * psi[0]
    prev = col
    for n in range(1, d):
        cur = np.empty_like(prev)
        cur[0] = -np.conj(g) * prev[0] / sq[n]
        cur[1:] = (sq[1:, None] * prev[:-1] - np.conj(g) * prev[1:]) / sq[n]
        acc += (psi_c @ cur) * psi[n]
        prev = cur
    return acc


def char_fn_1m(state: FockVector, gammas) -> np.ndarray:
    """chi(gamma) = Tr[D(-gamma) rho] reconstructed from a single-mode Fock vector."""
    if state.modes != 1:
        raise ValueError("char_fn_1m acts on single-mode states")
    gammas = np.atleast_1d(np.asarray(gammas, dtype=complex))
    return _char_quadratic_stream(state.amplitudes, -gammas)


def _char_schmidt_stream(c: np.ndarray, g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """<phi|D(g1) x D(g2)|phi> for phi = sum_n c_n |n,n>, batched over points.

    Streams matching columns of both displacement matrices:
    chi = sum_{m,n} conj(c_m) c_n D1[m,n] D2[m,n].
    """
    d = len(c)
    m = np.arange(d, dtype=float)[:, None]
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, d)))))[:, None]
    sq = np.sqrt(np.arange(d, dtype=float))
    c_conj = np.conj(c)

    def first_col(g):
        col = np.exp(
            -0.5 * np.abs(g) ** 2
            + m * np.log(np.where(g == 0, 1.0, g))
            - 0.5 * log_fact
        )
        col[:, g == 0] = 0.0
        col[0, g == 0] = 1.0
        return col

    col1, col2 = first_col(g1), first_col(g2)
    acc = (c_conj @ (col1 * col2)) * c[0]
    for n in range(1, d):
        nxt1 = np.empty_like(col1)
        nxt1[0] = -np.conj(g1) * col1[0] / sq[n]
        nxt1[1:] = (sq[1:, None] * col1[:-1] - np.conj(g1) * col1[1:]) / sq[n]
        nxt2 = np.empty_like(col2)
        nxt2[0] = -np.conj(g2) * col2[0] / sq[n]
        nxt2[1:] = (sq[1:, None] * col2[:-1] - np.conj(g2) * col2[1:]) / sq[n]
        acc += (c_conj @ (nxt1 * nxt2)) * c[n]
        col1, col2 = nxt1, nxt2
    return acc


def char_fn_2m(state: FockVector, gamma1, gamma2) -> np.ndarray:
    """Two-mode chi(g1, g2) = Tr[D_A(-g1) D_B(-g2) rho] from a Fock vector.

    Dense double contraction; intended for validation at small cutoffs.
    """
    if state.modes != 2:
        raise ValueError("char_fn_2m acts on two-mode states")
    g1 = np.atleast_1d(np.asarray(gamma1, dtype=complex))
    g2 = np.atleast_1d(np.asarray(gamma2, dtype=complex))
    if g1.shape != g2.shape:
        raise ValueError("gamma1 and gamma2 must have matching shapes")
    out = np.empty(g1.shape, dtype=complex)
    a = state.amplitudes
    for idx in np.ndindex(g1.shape):
        d1 = displacement_matrix(-g1[idx], state.cutoff)
        d2 = displacement_matrix(-g2[idx], state.cutoff)
        out[idx] = np.einsum("mp,mn,pq,nq->", np.conj(a), d1, d2, a, optimize=True)
    return out
