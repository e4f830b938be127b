"""Low-rank completion of sparse evaluation matrices.

Stochastic gradient descent on the squared error over observed entries plus
L2 regularization. Training is seeded and single-threaded, so the same config
always produces the same factors. Predictions are clamped to the rating scale
only when a matrix is completed, never during training.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import EmptyMatrix, IndexOutOfRange
from .model import RATING_MAX, RATING_MIN, EvaluationMatrix, ProjectModel

Observed = Mapping[tuple[int, int], float]  # (requirement_index, stakeholder_index) -> rating


@dataclass(frozen=True)
class TrainConfig:
    k: int = 3
    learning_rate: float = 0.01
    regularization: float = 0.02
    max_epochs: int = 5000
    seed: int = 0
    convergence_tolerance: float = 1e-6

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.regularization < 0:
            raise ValueError(f"regularization must be non-negative, "
                             f"got {self.regularization}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be positive, got {self.max_epochs}")
        if self.convergence_tolerance <= 0:
            raise ValueError(f"convergence_tolerance must be positive, "
                             f"got {self.convergence_tolerance}")


@dataclass(frozen=True)
class FactorModel:
    user_factors: np.ndarray  # k x stakeholders
    item_factors: np.ndarray  # requirements x k
    k: int


def predict(model: FactorModel, user: int, req: int) -> float:
    """Dot product of one requirement row with one stakeholder column; unclamped."""
    n, _ = model.item_factors.shape
    _, m = model.user_factors.shape
    if not 0 <= user < m:
        raise IndexOutOfRange(f"stakeholder index {user} outside 0..{m - 1}")
    if not 0 <= req < n:
        raise IndexOutOfRange(f"requirement index {req} outside 0..{n - 1}")
    return float(model.item_factors[req] @ model.user_factors[:, user])


def loss(model: FactorModel, observed: Observed, regularization: float) -> float:
    """Squared error over observed entries plus L2 penalty on all factors."""
    total = 0.0
    for (i, j), r in observed.items():
        e = r - float(model.item_factors[i] @ model.user_factors[:, j])
        total += e * e
    total += regularization * (float(np.sum(model.user_factors ** 2))
                               + float(np.sum(model.item_factors ** 2)))
    return total


def factorize(observed: Observed, n_requirements: int, n_stakeholders: int,
              cfg: TrainConfig = TrainConfig()) -> FactorModel:
    """Fit factors to the observed entries of one dimension's rating matrix."""
    if not observed:
        raise EmptyMatrix("cannot factorize a matrix with no observed entries")
    rng = np.random.default_rng(cfg.seed)
    U = rng.uniform(0.0, 0.1, size=(cfg.k, n_stakeholders))
    R = rng.uniform(0.0, 0.1, size=(n_requirements, cfg.k))
    cells = sorted(observed.items())
    lr, reg = cfg.learning_rate, cfg.regularization
    prev = loss(FactorModel(U, R, cfg.k), observed, reg)
    for _ in range(cfg.max_epochs):
        for idx in rng.permutation(len(cells)):
            (i, j), r = cells[idx]
            p = R[i].copy()
            q = U[:, j].copy()
            e = r - float(p @ q)
            R[i] = p + lr * (e * q - reg * p)
            U[:, j] = q + lr * (e * p - reg * q)
        current = loss(FactorModel(U, R, cfg.k), observed, reg)
        if abs(prev - current) <= cfg.convergence_tolerance:
            prev = current
            break
        prev = current
    return FactorModel(user_factors=U, item_factors=R, k=cfg.k)


def complete_matrix(project: ProjectModel, dimension: str,
                    cfg: TrainConfig = TrainConfig()) -> EvaluationMatrix:
    """Dense copy of one dimension: observed cells verbatim, gaps filled with
    predictions clamped to the rating scale."""
    req_ids = project.requirement_ids()
    user_ids = project.stakeholder_ids()
    observed = {}
    for i, rid in enumerate(req_ids):
        for j, sid in enumerate(user_ids):
            r = project.evaluations.get(sid, rid, dimension)
            if r is not None:
                observed[(i, j)] = r
    model = factorize(observed, len(req_ids), len(user_ids), cfg)
    entries = {}
    for i, rid in enumerate(req_ids):
        for j, sid in enumerate(user_ids):
            if (i, j) in observed:
                entries[(sid, rid, dimension)] = observed[(i, j)]
            else:
                entries[(sid, rid, dimension)] = min(
                    RATING_MAX, max(RATING_MIN, predict(model, j, i)))
    return EvaluationMatrix(entries=entries)


def gradient_check(cfg: TrainConfig, probe: FactorModel, observed: Observed,
                   step: float = 1e-5) -> float:
    """Maximum relative discrepancy between the analytic loss gradient and
    central finite differences over every factor entry."""
    reg = cfg.regularization
    U = probe.user_factors.astype(float).copy()
    R = probe.item_factors.astype(float).copy()

    grad_U = 2.0 * reg * U
    grad_R = 2.0 * reg * R
    for (i, j), r in observed.items():
        e = r - float(R[i] @ U[:, j])
        grad_R[i] += -2.0 * e * U[:, j]
        grad_U[:, j] += -2.0 * e * R[i]

    def loss_at(U_mat, R_mat):
        return loss(FactorModel(U_mat, R_mat, probe.k), observed, reg)

    worst = 0.0

    def compare(matrix, grad):
        nonlocal worst
        for idx in np.ndindex(matrix.shape):
            orig = matrix[idx]
            matrix[idx] = orig + step
            up = loss_at(U, R)
            matrix[idx] = orig - step
            down = loss_at(U, R)
            matrix[idx] = orig
            numeric = (up - down) / (2.0 * step)
            analytic = grad[idx]
            denom = max(abs(numeric), abs(analytic), 1e-8)
            worst = max(worst, abs(numeric - analytic) / denom)

    compare(U, grad_U)
    compare(R, grad_R)
    return worst
