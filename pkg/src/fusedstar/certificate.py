"""Analytic optimality certificate for the fastest-consensus weights.

The optimum returned by the solver is certified through a dual witness
pair (z1, z2) built from closed-form sine chains.  z1 lives in the
coupled central block, z2 in the direct sum of the two arm blocks; at
the optimum z1 is an eigenvector of the central block for -s and z2 an
eigenvector of the arm blocks for +s.  Every optimality condition
(slackness, normalization, trace matching, feasibility, chain
recurrences and the squared-coordinate proportionality between the two
chains) is evaluated numerically by ``verify_certificate``; all of them
vanish only at the optimal weights, so perturbing any weight breaks the
certificate measurably.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .optimizer import DegenerateSineError, OptimalSolution
from .spectral import build_blocks, perron_vector
from .topology import TfsParams
from .weighting import OrbitWeights, check_orbit_weights


def alpha_vectors(
    params: TfsParams,
) -> tuple[dict[int, np.ndarray], dict[int, np.ndarray]]:
    """Rank-one edge stencils of the central block and the arm blocks.

    Returns two dicts keyed by orbit label.  The first holds vectors of
    length m1 + m2 + 1 (central-block space, center at index m1), the
    second vectors of length m1 + m2 (arm-block space, first arm first).
    Subtracting the weighted outer products of these stencils from the
    identity reproduces the stratified blocks exactly.
    """
    m1 = params.m1
    dim = params.m1 + params.m2 + 1
    inv = 1.0 / math.sqrt(2.0)
    alpha: dict[int, np.ndarray] = {}
    alpha_prime: dict[int, np.ndarray] = {}
    for i in params.orbit_labels:
        u = np.zeros(dim)
        up = np.zeros(dim - 1)
        if i <= -2:
            u[i + m1] = -inv
            u[i + m1 + 1] = inv
            up[i + m1] = -inv
            up[i + m1 + 1] = inv
        elif i == -1:
            scale = 1.0 / math.sqrt(params.n1 + 1.0)
            u[m1 - 1] = -scale
            u[m1] = math.sqrt(params.n1) * scale
            up[m1 - 1] = 1.0
        elif i == 1:
            scale = 1.0 / math.sqrt(params.n2 + 1.0)
            u[m1] = -math.sqrt(params.n2) * scale
            u[m1 + 1] = scale
            up[m1] = 1.0
        else:
            u[i + m1 - 1] = -inv
            u[i + m1] = inv
            up[i + m1 - 2] = -inv
            up[i + m1 - 1] = inv
        alpha[i] = u
        alpha_prime[i] = up
    return alpha, alpha_prime


def stencil_gram_matrices(params: TfsParams) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form Gram matrices of the two stencil families.

    Rows and columns follow ``params.orbit_labels``.  Both matrices are
    unit-diagonal and tridiagonal in label order; only the three pairs
    touching the center deviate from the uniform -1/2 overlap.
    """
    labels = params.orbit_labels
    n1, n2 = float(params.n1), float(params.n2)
    k = len(labels)
    gram = np.eye(k)
    gram_prime = np.eye(k)
    for a in range(k - 1):
        pair = (labels[a], labels[a + 1])
        if pair == (-2, -1):
            g = -1.0 / math.sqrt(2.0 * (n1 + 1.0))
            gp = 1.0 / math.sqrt(2.0)
        elif pair == (-1, 1):
            g = -math.sqrt(n1 * n2 / ((n1 + 1.0) * (n2 + 1.0)))
            gp = 0.0
        elif pair == (1, 2):
            g = -1.0 / math.sqrt(2.0 * (n2 + 1.0))
            gp = -1.0 / math.sqrt(2.0)
        else:
            g = -0.5
            gp = -0.5
        gram[a, a + 1] = gram[a + 1, a] = g
        gram_prime[a, a + 1] = gram_prime[a + 1, a] = gp
    return gram, gram_prime


def _chain_ratio(params: TfsParams, s: float, psi: float) -> float:
    # ratio of the second-arm chain to the first-arm chain, fixed by the
    # coupled center equation of the +s system
    n1, n2 = float(params.n1), float(params.n2)
    num = (2.0 * s + n1 * (s - 1.0)) * math.sin(params.m1 * psi)
    num += 2.0 * math.sin((params.m1 - 1) * psi)
    den = (s - 1.0) * math.sqrt(n1 * n2) * math.sin(params.m2 * psi)
    if abs(den) < 1e-12 * max(1.0, abs(num)):
        raise DegenerateSineError(
            f"chain ratio denominator vanished at psi = {psi}"
        )
    return num / den


def _sine_chain(params: TfsParams, angle: float, rho: float) -> dict[int, float]:
    """Hatted chain coordinates; the first-arm leaf is pinned to one."""
    sa = math.sin(angle)
    if abs(sa) < 1e-12:
        raise DegenerateSineError(f"sin({angle}) too small for a sine chain")
    chain: dict[int, float] = {}
    for j in range(-params.m1, 0):
        chain[j] = math.sin((j + 1 + params.m1) * angle) / sa
    for j in range(1, params.m2 + 1):
        chain[j] = rho * math.sin((params.m2 - j + 1) * angle) / sa
    return chain


@dataclass(frozen=True)
class DualCertificate:
    """Dual witness pair with its chain coordinates.

    ``coeffs``/``coeffs_prime`` expand z1 and z2 over the stencils;
    ``coeffs_hat``/``coeffs_hat_prime`` are the same chains in hatted
    form (rescaled at the two center-adjacent labels) in which the
    three-term recurrences and the proportionality law hold.
    """

    params: TfsParams
    theta: float
    s: float
    coeffs: Mapping[int, float]
    coeffs_prime: Mapping[int, float]
    coeffs_hat: Mapping[int, float]
    coeffs_hat_prime: Mapping[int, float]
    z1: np.ndarray
    z2: np.ndarray

    def __post_init__(self) -> None:
        for name in ("coeffs", "coeffs_prime", "coeffs_hat", "coeffs_hat_prime"):
            object.__setattr__(
                self, name, MappingProxyType(dict(getattr(self, name)))
            )
        for name in ("z1", "z2"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def build_dual_certificate(solution: OptimalSolution) -> DualCertificate:
    """Closed-form dual witness for an optimal solution.

    The +s chain is evaluated at pi - theta*, the -s chain at theta*
    with the same arm ratio.  The pair is normalized so that
    ||z1||^2 = (1 - s)/2 and ||z2||^2 = (1 + s)/2, which fixes both the
    unit total norm and the duality value.
    """
    params = solution.params
    theta, s = solution.theta_star, solution.s
    psi = math.pi - theta
    rho = _chain_ratio(params, s, psi)
    hat = _sine_chain(params, psi, rho)
    hat_prime = _sine_chain(params, theta, rho)

    a = dict(hat)
    a[-1] = hat[-1] * math.sqrt((params.n1 + 1.0) / 2.0)
    a[1] = hat[1] * math.sqrt((params.n2 + 1.0) / 2.0)
    a_prime = dict(hat_prime)
    a_prime[-1] = -hat_prime[-1] / math.sqrt(2.0)
    a_prime[1] = hat_prime[1] / math.sqrt(2.0)

    alpha, alpha_prime = alpha_vectors(params)
    z1 = sum(a[i] * alpha[i] for i in params.orbit_labels)
    z2 = sum(a_prime[i] * alpha_prime[i] for i in params.orbit_labels)

    t1 = math.sqrt((1.0 - s) / 2.0) / float(np.linalg.norm(z1))
    t2 = math.sqrt((1.0 + s) / 2.0) / float(np.linalg.norm(z2))
    for coeffs, t in ((a, t1), (hat, t1), (a_prime, t2), (hat_prime, t2)):
        for i in coeffs:
            coeffs[i] *= t
    return DualCertificate(
        params=params,
        theta=theta,
        s=s,
        coeffs=a,
        coeffs_prime=a_prime,
        coeffs_hat=hat,
        coeffs_hat_prime=hat_prime,
        z1=z1 * t1,
        z2=z2 * t2,
    )


@dataclass(frozen=True)
class CertificateResiduals:
    """Numeric size of every certificate condition.

    All fields except ``feasibility_min_eig`` and ``duality_gap`` are
    absolute residuals that vanish at the optimum.
    """

    slackness_center: float
    slackness_arms: float
    perron_orthogonality: float
    norm_sum_error: float
    norm_split_error: float
    trace_mismatch: float
    feasibility_min_eig: float
    recurrence: float
    recurrence_prime: float
    proportionality_rel: float
    duality_gap: float

    def passes(
        self,
        tol: float = 1e-8,
        feasibility_tol: float = 1e-10,
        recurrence_tol: float = 1e-10,
        proportionality_tol: float = 1e-9,
    ) -> bool:
        residuals_ok = all(
            value <= tol
            for value in (
                self.slackness_center,
                self.slackness_arms,
                self.perron_orthogonality,
                self.norm_sum_error,
                self.norm_split_error,
                self.trace_mismatch,
                abs(self.duality_gap),
            )
        )
        return (
            residuals_ok
            and self.feasibility_min_eig >= -feasibility_tol
            and self.recurrence <= recurrence_tol
            and self.recurrence_prime <= recurrence_tol
            and self.proportionality_rel <= proportionality_tol
        )

    def as_dict(self) -> dict[str, float]:
        return {
            "slackness_center": self.slackness_center,
            "slackness_arms": self.slackness_arms,
            "perron_orthogonality": self.perron_orthogonality,
            "norm_sum_error": self.norm_sum_error,
            "norm_split_error": self.norm_split_error,
            "trace_mismatch": self.trace_mismatch,
            "feasibility_min_eig": self.feasibility_min_eig,
            "recurrence": self.recurrence,
            "recurrence_prime": self.recurrence_prime,
            "proportionality_rel": self.proportionality_rel,
            "duality_gap": self.duality_gap,
        }


def _recurrence_residual(
    params: TfsParams,
    weights: OrbitWeights,
    chain: Mapping[int, float],
    s: float,
    primed: bool,
) -> float:
    """Worst violation of the three-term chain relations.

    The +s system couples the two arms through the center with strength
    sqrt(n1 n2); the -s system is decoupled there.  Center-adjacent
    diagonal terms carry (n + 1) w in the coupled system and w in the
    decoupled one.
    """
    labels = params.orbit_labels
    base = (1.0 - s) if primed else (1.0 + s)
    cross = 0.0 if primed else math.sqrt(params.n1 * params.n2)
    worst = 0.0
    for k, i in enumerate(labels):
        w = weights[i]
        if i == -1:
            diag = base - (1.0 if primed else params.n1 + 1.0) * w
        elif i == 1:
            diag = base - (1.0 if primed else params.n2 + 1.0) * w
        else:
            diag = base - 2.0 * w
        acc = diag * chain[i]
        for j in (labels[k - 1] if k else None, labels[k + 1] if k < len(labels) - 1 else None):
            if j is None:
                continue
            coupling = cross if {i, j} == {-1, 1} else 1.0
            acc += coupling * w * chain[j]
        worst = max(worst, abs(acc))
    return worst


def _proportionality_residual(
    s: float,
    hat: Mapping[int, float],
    hat_prime: Mapping[int, float],
) -> float:
    worst = 0.0
    for i in hat:
        lhs = (1.0 + s) ** 2 * hat[i] ** 2
        rhs = (1.0 - s) ** 2 * hat_prime[i] ** 2
        scale = max(abs(lhs), abs(rhs))
        if scale > 0.0:
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def verify_certificate(
    certificate: DualCertificate,
    weights: OrbitWeights,
) -> CertificateResiduals:
    """Evaluate every certificate condition against the given weights.

    At the optimal weights all residuals sit at rounding level and the
    two feasibility matrices are positive semidefinite.  Any weight
    perturbation shows up in the slackness and recurrence residuals.
    """
    params = certificate.params
    check_orbit_weights(params, weights)
    blocks = build_blocks(params, weights)
    m1, m2 = params.m1, params.m2
    center = blocks.block_center
    arms = np.zeros((m1 + m2, m1 + m2))
    arms[:m1, :m1] = blocks.block_minus
    arms[m1:, m1:] = blocks.block_plus
    v = perron_vector(params)
    s, z1, z2 = certificate.s, certificate.z1, certificate.z2

    eye = np.eye(m1 + m2 + 1)
    feas_center = s * eye + center - np.outer(v, v)
    feas_arms = s * np.eye(m1 + m2) - arms

    norm1 = float(z1 @ z1)
    norm2 = float(z2 @ z2)
    perron_dot = float(v @ z1)

    alpha, alpha_prime = alpha_vectors(params)
    trace_mismatch = 0.0
    for i in params.orbit_labels:
        if i == -1:
            factor = params.n1 + 1.0
        elif i == 1:
            factor = params.n2 + 1.0
        else:
            factor = 1.0
        lhs = factor * float(alpha[i] @ z1) ** 2
        rhs = float(alpha_prime[i] @ z2) ** 2
        trace_mismatch = max(trace_mismatch, abs(lhs - rhs))

    return CertificateResiduals(
        slackness_center=float(np.linalg.norm(feas_center @ z1)),
        slackness_arms=float(np.linalg.norm(s * z2 - arms @ z2)),
        perron_orthogonality=abs(perron_dot),
        norm_sum_error=abs(norm1 + norm2 - 1.0),
        norm_split_error=abs(norm2 - norm1 - s),
        trace_mismatch=trace_mismatch,
        feasibility_min_eig=float(
            min(
                np.linalg.eigvalsh(feas_center)[0],
                np.linalg.eigvalsh(feas_arms)[0],
            )
        ),
        recurrence=_recurrence_residual(
            params, weights, certificate.coeffs_hat, s, primed=False
        ),
        recurrence_prime=_recurrence_residual(
            params, weights, certificate.coeffs_hat_prime, s, primed=True
        ),
        proportionality_rel=_proportionality_residual(
            s, certificate.coeffs_hat, certificate.coeffs_hat_prime
        ),
        duality_gap=s + norm1 - perron_dot**2 - norm2,
    )
