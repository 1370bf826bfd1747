"""Norms, approximation-error diagnostics and Pauli-outcome estimation.

Squared norms of sparsified states are computed either exactly (pairwise
stabilizer inner products, O(k^2)) or by Monte-Carlo norm estimation
with random stabilizer states.  Probability estimation applies a
Clifford circuit to every decomposition term once and then walks a chain
of Pauli projections, so a joint outcome probability is a telescoping
product of per-measurement conditionals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import dense
from .magic import MagicModel, SparseDecomposition, dense_decomposition, dense_target, to_states
from .stabilizer import (
    CliffordOp,
    PauliOperator,
    apply_clifford,
    project_pauli,
    random_clifford,
    zero_state,
)

EXACT = "EXACT"
FASTNORM = "FASTNORM"


@dataclass(frozen=True)
class NormEstimate:
    value: float
    method: str
    samples_used: int = 0
    seed: Optional[int] = None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("squared norm cannot be negative")
        if self.method == EXACT and self.samples_used != 0:
            raise ValueError("EXACT norms use no samples")


@dataclass(frozen=True)
class ProbabilityEstimate:
    value: float
    raw_value: float
    step_values: tuple
    paulis: tuple
    norm_method: str
    clamped: bool
    decomposition_id: Optional[str] = None
    circuit_id: Optional[str] = None


def _bit_chunks(bitstrings: Sequence[int], t: int) -> np.ndarray:
    """(k, ceil(t/64)) uint64 array of the bitstrings."""
    n_chunks = max(1, (t + 63) // 64)
    out = np.zeros((len(bitstrings), n_chunks), dtype=np.uint64)
    mask64 = (1 << 64) - 1
    for i, x in enumerate(bitstrings):
        for c in range(n_chunks):
            out[i, c] = (x >> (64 * c)) & mask64
    return out


def _pairwise_overlaps(decomp: SparseDecomposition) -> np.ndarray:
    """Gram matrix of the product states: 2^(-hamming/2) entrywise."""
    chunks = _bit_chunks([x for x, _ in decomp.entries], decomp.t)
    dist = np.zeros((decomp.k, decomp.k), dtype=np.int64)
    for c in range(chunks.shape[1]):
        col = chunks[:, c]
        dist += np.bitwise_count(col[:, None] ^ col[None, :]).astype(np.int64)
    return np.exp2(-0.5 * dist)


def exact_sqnorm(decomp: SparseDecomposition) -> NormEstimate:
    """Exact <psi|psi> of a product-term decomposition in O(k^2)."""
    overlaps = _pairwise_overlaps(decomp)
    ph = decomp.phases()
    total = np.real(np.conjugate(ph) @ overlaps @ ph)
    value = float(decomp.prefactor**2 * total)
    return NormEstimate(value=max(value, 0.0), method=EXACT)


def sqnorm_terms(terms: Sequence) -> float:
    """Exact squared norm of sum_i w_i |state_i> for arbitrary states.

    Reuses each bra's zeroing word across the row, so the cost is
    O(k^2 t^3) overall.
    """
    k = len(terms)
    weights = np.array([w for w, _ in terms], dtype=np.complex128)
    gram = np.eye(k, dtype=np.complex128)
    for i in range(k):
        _, st_i = terms[i]
        ops = st_i._zeroing_word()
        bra = st_i.copy()
        bra._apply_word(ops)
        br = np.conjugate(bra.omega)
        for j in range(i + 1, k):
            ket = terms[j][1].copy()
            ket._apply_word(ops)
            val = br * ket.amplitude(0)
            gram[i, j] = val
            gram[j, i] = np.conjugate(val)
        gram[i, i] = st_i.sqnorm()
    return float(np.real(np.conjugate(weights) @ gram @ weights))


def fastnorm(decomp: SparseDecomposition, m_samples: int, rng) -> NormEstimate:
    """Monte-Carlo squared norm: (2^t / M) sum_j |<theta_j|psi>|^2.

    theta_j are uniformly random stabilizer states (random Clifford on
    |0..0>); uniformity makes E|<theta|psi>|^2 = <psi|psi>/2^t, so the
    estimator is unbiased.
    """
    if m_samples < 1:
        raise ValueError("sample count must be at least 1")
    t = decomp.t
    total = 0.0
    if t <= dense.VECTOR_CAP:
        # <theta|psi> is linear in the decomposition, so at desk scale
        # each draw is one dot against the precomputed dense vector; the
        # random stream (Clifford draws only) matches the generic path
        psi = dense_decomposition(decomp)
        for _ in range(m_samples):
            op = random_clifford(t, rng)
            theta = dense.apply_clifford_dense(dense.zero_vector(t), op)
            total += abs(np.vdot(theta, psi)) ** 2
    else:
        for _ in range(m_samples):
            theta = apply_clifford(zero_state(t), random_clifford(t, rng))
            amp = 0.0 + 0.0j
            for bits, phase in decomp.entries:
                # <theta|product(x)> = conj(<0| H^x |theta>): a few H
                # gates instead of a general inner product
                ket = theta.copy()
                q = 0
                rest = bits
                while rest:
                    if rest & 1:
                        ket._apply_h(q)
                    rest >>= 1
                    q += 1
                amp += phase * np.conjugate(ket.amplitude(0))
            total += abs(decomp.prefactor * amp) ** 2
    return NormEstimate(
        value=float(2.0**t * total / m_samples),
        method=FASTNORM,
        samples_used=m_samples,
    )


def _fastnorm_terms(terms: Sequence, t: int, m_samples: int, rng) -> float:
    total = 0.0
    for _ in range(m_samples):
        theta = apply_clifford(zero_state(t), random_clifford(t, rng))
        ops = theta._zeroing_word()
        bra = theta.copy()
        bra._apply_word(ops)
        br = np.conjugate(bra.omega)
        amp = 0.0 + 0.0j
        for w, st in terms:
            ket = st.copy()
            ket._apply_word(ops)
            amp += w * br * ket.amplitude(0)
        total += abs(amp) ** 2
    return float(2.0**t * total / m_samples)


def approx_error(decomp: SparseDecomposition, model: MagicModel) -> float:
    """Euclidean norm of the dense difference ||Psi - psi|| (t <= 12)."""
    if model.t > dense.VECTOR_CAP:
        raise ValueError(f"dense error diagnostics limited to t <= {dense.VECTOR_CAP}")
    if decomp.t != model.t:
        raise ValueError("decomposition and model disagree on t")
    diff = dense_decomposition(decomp) - dense_target(model)
    return float(np.linalg.norm(diff))


def rho1_matrix(
    model: MagicModel,
    draw: Callable,
    trials: int,
    rng,
) -> np.ndarray:
    """Average of |psi><psi| / <psi|psi> over freshly drawn decompositions."""
    if model.t > dense.DENSITY_CAP:
        raise ValueError(f"density diagnostics limited to t <= {dense.DENSITY_CAP}")
    dim = 1 << model.t
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for _ in range(trials):
        vec = dense_decomposition(draw(rng))
        acc += np.outer(vec, np.conjugate(vec)) / np.vdot(vec, vec).real
    return acc / trials


def rho1_distance(
    model: MagicModel,
    draw: Callable,
    trials: int,
    rng,
) -> float:
    """Trace-norm distance ||E[psi psi^dag / <psi psi>] - Psi Psi^dag||_1."""
    target = dense_target(model)
    rho = rho1_matrix(model, draw, trials, rng)
    return dense.trace_norm(rho - np.outer(target, np.conjugate(target)))


def pauli_prob(
    decomp: SparseDecomposition,
    circuit: Optional[CliffordOp],
    paulis: Sequence,
    method: str = EXACT,
    fastnorm_samples: int = 1000,
    rng=None,
    decomposition_id: Optional[str] = None,
    circuit_id: Optional[str] = None,
) -> ProbabilityEstimate:
    """Joint outcome probability of a chain of Pauli measurements.

    ``paulis`` is a sequence of (PauliOperator, outcome) pairs measured in
    order after the circuit.  Each step's conditional probability is a
    ratio of squared norms of the successively projected decomposition;
    their product is the joint estimate.  A fully annihilated
    decomposition yields probability zero.
    """
    for p, outcome in paulis:
        if not p.is_hermitian or outcome not in (1, -1):
            raise ValueError("measurements need Hermitian Paulis and outcomes +-1")

    def measure_norm(terms) -> float:
        if not terms:
            return 0.0
        if method == EXACT:
            return sqnorm_terms(terms)
        if method == FASTNORM:
            if rng is None:
                raise ValueError("fastnorm needs an rng")
            return _fastnorm_terms(terms, decomp.t, fastnorm_samples, rng)
        raise ValueError(f"unknown norm method {method!r}")

    terms = to_states(decomp)
    if circuit is not None:
        if circuit.n != decomp.t:
            raise ValueError("circuit and decomposition disagree on qubit count")
        terms = [(w, apply_clifford(st, circuit)) for w, st in terms]

    norm_prev = measure_norm(terms)
    steps = []
    raw = 1.0
    for p, outcome in paulis:
        projected = []
        for w, st in terms:
            res = project_pauli(st, p, outcome)
            if res is None:
                continue
            st2, factor = res
            projected.append((w * math.sqrt(factor), st2))
        terms = projected
        norm_next = measure_norm(terms)
        cond = norm_next / norm_prev if norm_prev > 0 else 0.0
        steps.append(cond)
        raw *= cond
        norm_prev = norm_next
        if norm_prev == 0.0:
            raw = 0.0
            for _ in range(len(steps), len(paulis)):
                steps.append(0.0)
            break

    value = min(1.0, max(0.0, raw))
    return ProbabilityEstimate(
        value=value,
        raw_value=raw,
        step_values=tuple(steps),
        paulis=tuple((p.to_string(), outcome) for p, outcome in paulis),
        norm_method=method,
        clamped=(value != raw),
        decomposition_id=decomposition_id,
        circuit_id=circuit_id,
    )
