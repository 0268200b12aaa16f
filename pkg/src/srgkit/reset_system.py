"""Reset (hybrid) system model: linear flow, quadratic jump condition,
constant reset map; plus the two-state reset element and its scaled-graph
bound used for controller certificates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex_sets import (
    HalfDiscUnion,
    Region,
    region_radius,
    scale_region,
    translate_region,
    Disc,
)
from .lti import TransferFunction

__all__ = [
    "ResetSystem",
    "SgBound",
    "make_sore",
    "in_jump_set",
    "sore_sg_bound",
    "controller_sg_bound",
    "base_linear",
    "SORE_BOUND_RIGHT",
    "SORE_BOUND_LEFT",
]

# scaled-graph bound of the two-state reset element (alpha = 0.9):
# right half-disc radius 0.85, left half-disc radius 0.504
SORE_BOUND_RIGHT = 0.85
SORE_BOUND_LEFT = 0.504


@dataclass(eq=False)
class ResetSystem:
    """State-space flow with reset map R_J and symmetric condition matrix M.

    The flow set is ``{xi : xi' M xi >= 0}`` and the jump set its
    complement, for the stacked vector ``xi = [x; u]``.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: float
    R_J: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.B = np.asarray(self.B, dtype=float).reshape(-1)
        self.C = np.asarray(self.C, dtype=float).reshape(-1)
        self.D = float(self.D)
        self.R_J = np.atleast_2d(np.asarray(self.R_J, dtype=float))
        self.M = np.atleast_2d(np.asarray(self.M, dtype=float))
        n = self.A.shape[0]
        if self.A.shape != (n, n):
            raise ValueError("A must be square")
        if self.B.shape != (n,) or self.C.shape != (n,):
            raise ValueError("B and C must have length n")
        if self.R_J.shape != (n, n):
            raise ValueError("R_J must be n x n")
        if self.M.shape != (n + 1, n + 1):
            raise ValueError("M must be (n+1) x (n+1)")
        if not np.allclose(self.M, self.M.T, atol=1e-12):
            raise ValueError("M must be symmetric")

    @property
    def order(self):
        return self.A.shape[0]

    def to_dict(self):
        return {
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "C": self.C.tolist(),
            "D": self.D,
            "RJ": self.R_J.tolist(),
            "M": self.M.tolist(),
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(doc["A"], doc["B"], doc["C"], doc["D"], doc["RJ"], doc["M"])


def make_sore(alpha=0.9):
    """Two-state reset element that resets when alpha^2 x1^2 - x2^2 <= 0."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    A = np.array([[-1.0, 0.0], [1.0, -1.0]])
    B = np.array([1.0, 0.0])
    C = np.array([0.0, 1.0])
    M = np.diag([alpha * alpha, -1.0, 0.0])
    return ResetSystem(A, B, C, 0.0, np.zeros((2, 2)), M)


def in_jump_set(sys, x, u):
    """True when the stacked vector [x; u] satisfies xi' M xi <= 0."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != sys.order:
        raise ValueError(f"state must have length {sys.order}")
    xi = np.concatenate([x, [float(u)]])
    return bool(xi @ sys.M @ xi <= 0.0)


@dataclass(frozen=True)
class SgBound:
    """A region guaranteed to contain the scaled graph of an operator,
    with its gain (containing-disc radius) and star anchor recorded."""

    shape: Region
    gain: float
    kappa: float

    @classmethod
    def from_shape(cls, shape, kappa):
        return cls(shape=shape, gain=region_radius(shape), kappa=float(kappa))


def sore_sg_bound():
    """Half-disc-union bound of the reset element: gain 0.85, anchor 0."""
    shape = HalfDiscUnion(r_right=SORE_BOUND_RIGHT, r_left=SORE_BOUND_LEFT)
    return SgBound.from_shape(shape, kappa=0.0)


def controller_sg_bound(kp, kr):
    """Bound for the parallel controller kp + kr * (reset element).

    Composes the element bound affinely; kr = 0 degenerates to the
    singleton {kp}.
    """
    kp, kr = float(kp), float(kr)
    if kr == 0.0:
        return SgBound.from_shape(Disc(kp, 0.0), kappa=kp)
    shape = translate_region(scale_region(sore_sg_bound().shape, kr), kp)
    return SgBound.from_shape(shape, kappa=kp)


def base_linear(sys):
    """Transfer function of the flow dynamics, reset condition removed.

    Uses the Faddeev-LeVerrier recursion for C (sI - A)^{-1} B + D.
    """
    A, B, C, D = sys.A, sys.B, sys.C, sys.D
    n = A.shape[0]
    den = np.empty(n + 1)
    den[0] = 1.0
    Mk = np.eye(n)
    num = np.empty(n)
    for k in range(1, n + 1):
        num[k - 1] = C @ Mk @ B
        AM = A @ Mk
        ck = -np.trace(AM) / k
        den[k] = ck
        Mk = AM + ck * np.eye(n)
    num_full = np.concatenate([[0.0], num]) + D * den
    return TransferFunction(num_full, den)
