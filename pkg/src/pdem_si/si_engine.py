"""Deformed shape-invariance machinery: superpotential classes and parameter chains.

A superpotential class fixes a base function phi and the algebraic form of W.
Both W^2 - f W' and W^2 + f W' expand in a fixed 3-term basis with closed-form
coefficients, so the two matching conditions

    V_eff = W(l0)^2 - f W'(l0) + eps0
    W(li)^2 + f W'(li) = W(l_{i+1})^2 - f W'(l_{i+1}) + eps_{i+1}

reduce to exact coefficient equations solved here, never to numerical fits.
Class 0 (W = lambda*phi) is subsumed into class 1 with mu = B = B' = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    ChainError,
    DeformingFunction,
    DegenerateClass,
    NoRealRoot,
    SingularPoint,
    deforming_eval,
)

# phi(x) and its analytic derivative; the derivative is evaluated at x directly
# (never through the polynomial relation in y, which cancels catastrophically
# where phi approaches +-1 or blows up).
_PHI = {
    "tan": (np.tan, lambda x: 1.0 / np.cos(x) ** 2),
    "tanh": (np.tanh, lambda x: 1.0 / np.cosh(x) ** 2),
    "cot": (lambda x: 1.0 / np.tan(x), lambda x: -1.0 / np.sin(x) ** 2),
    "coth": (lambda x: 1.0 / np.tanh(x), lambda x: -1.0 / np.sinh(x) ** 2),
    "x": (lambda x: np.asarray(x, dtype=float), lambda x: np.ones_like(np.asarray(x, dtype=float))),
    "inv_x": (lambda x: 1.0 / np.asarray(x, dtype=float), lambda x: -1.0 / np.asarray(x, dtype=float) ** 2),
    "exp_neg": (lambda x: np.exp(-np.asarray(x, dtype=float)), lambda x: -np.exp(-np.asarray(x, dtype=float))),
    "sin": (np.sin, np.cos),
}

_PHI_BLOWUP = 1e12


@dataclass(frozen=True)
class SuperpotentialClass:
    """One of the three solvable superpotential forms.

    class1: W = lam*phi + mu,           phi' = A phi^2 + B phi + C
    class2: W = lam*phi + mu/phi,       phi' = A phi^2 + B
    class3: W = (lam*phi + mu)/sqrt(A phi^2 + B),
                                        phi' = (C phi + D) sqrt(A phi^2 + B)

    ``consts`` holds (A, B, C[, D]); ``primed`` the deformation constants
    (A', B', C'[, D']) already evaluated at the deformation parameters.
    """

    class_id: str
    phi: str
    consts: tuple
    primed: tuple
    class0: bool = False  # enforce mu = 0 (requires B = B' = 0)

    def __post_init__(self):
        if self.class_id not in ("class1", "class2", "class3"):
            raise DegenerateClass(f"unknown class id {self.class_id!r}")
        if self.phi not in _PHI:
            raise SingularPoint(f"unknown base function {self.phi!r}")
        if self.class_id == "class3":
            A, B, C, D = self.consts
            if A == 0.0 or B == 0.0:
                raise DegenerateClass("class3 requires A, B != 0")

    # -- barred constants: coefficients of f*phi' -------------------------
    @property
    def barred(self) -> tuple:
        return tuple(c + p for c, p in zip(self.consts, self.primed))

    def phi_val(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return _PHI[self.phi][0](x)

    def phi_prime_at(self, x):
        """Analytic phi'(x); agrees with the class relation by construction."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return _PHI[self.phi][1](x)

    def phi_prime(self, y):
        """phi' through the class relation in y (algebraic checks only)."""
        if self.class_id == "class1":
            A, B, C = self.consts
            return A * y**2 + B * y + C
        if self.class_id == "class2":
            A, B = self.consts
            return A * y**2 + B
        A, B, C, D = self.consts
        return (C * y + D) * np.sqrt(A * y**2 + B)

    def g_reconstructed(self, x):
        """g from the class formula (numerator of primed over phi'), for cross-checks."""
        y = self.phi_val(x)
        if self.class_id == "class1":
            A, B, C = self.consts
            Ap, Bp, Cp = self.primed
            return (Ap * y**2 + Bp * y + Cp) / (A * y**2 + B * y + C)
        if self.class_id == "class2":
            A, B = self.consts
            Ap, Bp = self.primed
            return (Ap * y**2 + Bp) / (A * y**2 + B)
        A, B, C, D = self.consts
        Cp, Dp = self.primed[2], self.primed[3]
        return (Cp * y + Dp) / (C * y + D)

    # -- basis coefficients of W^2 -+ f W' --------------------------------
    # class1 basis {phi^2, phi, 1}; class2 {phi^2, phi^-2, 1};
    # class3: numerator {phi^2, phi, 1} over the common denominator A phi^2 + B.
    def minus_coeffs(self, lam: float, mu: float) -> tuple:
        if self.class_id == "class1":
            Ab, Bb, Cb = self.barred
            return (lam * lam - Ab * lam, 2 * lam * mu - Bb * lam, mu * mu - Cb * lam)
        if self.class_id == "class2":
            Ab, Bb = self.barred
            return (lam * lam - Ab * lam, mu * mu + Bb * mu, 2 * lam * mu - Bb * lam + Ab * mu)
        A, B = self.consts[0], self.consts[1]
        Cb, Db = self.barred[2], self.barred[3]
        return (lam * lam + A * Cb * mu, 2 * lam * mu - B * Cb * lam + A * Db * mu, mu * mu - B * Db * lam)

    def plus_coeffs(self, lam: float, mu: float) -> tuple:
        if self.class_id == "class1":
            Ab, Bb, Cb = self.barred
            return (lam * lam + Ab * lam, 2 * lam * mu + Bb * lam, mu * mu + Cb * lam)
        if self.class_id == "class2":
            Ab, Bb = self.barred
            return (lam * lam + Ab * lam, mu * mu - Bb * mu, 2 * lam * mu + Bb * lam - Ab * mu)
        A, B = self.consts[0], self.consts[1]
        Cb, Db = self.barred[2], self.barred[3]
        return (lam * lam - A * Cb * mu, 2 * lam * mu + B * Cb * lam - A * Db * mu, mu * mu + B * Db * lam)

    def eps_unit(self) -> tuple:
        """Coefficients of a constant in the class basis (class3 carries the denominator)."""
        if self.class_id == "class3":
            return (self.consts[0], 0.0, self.consts[1])
        return (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class WValues:
    W: float
    W_prime: float


def w_eval(sp: SuperpotentialClass, lam: float, mu: float, x) -> WValues:
    """Superpotential and its derivative at x via the analytic phi' relation."""
    y = sp.phi_val(x)
    if np.any(~np.isfinite(np.asarray(y))) or np.any(np.abs(np.asarray(y)) > _PHI_BLOWUP):
        raise SingularPoint(f"phi({x}) blows up")
    dphi = sp.phi_prime_at(x)
    if sp.class_id == "class1":
        return WValues(lam * y + mu, lam * dphi)
    if sp.class_id == "class2":
        if np.any(np.asarray(y) == 0.0):
            raise SingularPoint("class2 superpotential singular at phi = 0")
        return WValues(lam * y + mu / y, (lam - mu / y**2) * dphi)
    A, B, C, D = sp.consts
    if sp.phi == "sin" and A == -1.0 and B == 1.0:
        rad = np.cos(x) ** 2  # avoids the 1 - sin^2 cancellation near the walls
    else:
        rad = A * y**2 + B
    if np.any(np.asarray(rad) <= 0.0):
        raise SingularPoint("class3 radicand A phi^2 + B not positive")
    W = (lam * y + mu) / np.sqrt(rad)
    Wp = (lam * B - mu * A * y) * (C * y + D) / rad
    return WValues(W, Wp)


@dataclass(frozen=True)
class ChainProblem:
    """Inputs of the coefficient-matching solve for one catalog entry + params."""

    sp: SuperpotentialClass
    v_coeffs: tuple  # target coefficients of V_eff in the class basis
    df: DeformingFunction
    v_eff: Callable
    lam_branch: float = 1.0  # sign of the square root picked for lambda_0
    mu_branch: float = 1.0  # class2: sign picked for mu_0; class3: branch of d


@dataclass(frozen=True)
class ParameterChain:
    """Solved (lambda_i, mu_i, eps_i) sequence; E_n are exact partial sums."""

    lambda_seq: tuple
    mu_seq: tuple
    eps_seq: tuple

    @property
    def depth(self) -> int:
        return len(self.lambda_seq) - 1

    @property
    def energies(self) -> tuple:
        out, tot = [], 0.0
        for e in self.eps_seq:
            tot += e
            out.append(tot)
        return tuple(out)

    def energy(self, n: int) -> float:
        if n < 0 or n > self.depth:
            raise ChainError(f"chain solved to depth {self.depth}, level {n} requested")
        return self.energies[n]


def _solve_quadratic_branch(coef_lin: float, target: float, branch: float, what: str) -> float:
    # t^2 - coef_lin * t = target, branch picks the root (coef_lin +- sqrt)/2
    disc = coef_lin * coef_lin + 4.0 * target
    if disc < 0.0:
        raise NoRealRoot(f"no real {what}: discriminant {disc} < 0")
    return 0.5 * (coef_lin + branch * math.sqrt(disc))


def _solve_initial_condition(problem: ChainProblem) -> tuple:
    sp = problem.sp
    t2, t1, t0 = problem.v_coeffs
    if sp.class_id == "class1":
        Ab, Bb, Cb = sp.barred
        lam = _solve_quadratic_branch(Ab, t2, problem.lam_branch, "lambda")
        if sp.class0:
            if Bb != 0.0 or abs(t1) > 1e-12:
                raise DegenerateClass("class0 requires B = B' = 0 and no linear term")
            mu = 0.0
        else:
            if lam == 0.0:
                raise DegenerateClass("lambda = 0 leaves mu undetermined")
            mu = (t1 + Bb * lam) / (2.0 * lam)
        eps = t0 - mu * mu + Cb * lam
        return lam, mu, eps
    if sp.class_id == "class2":
        Ab, Bb = sp.barred
        lam = _solve_quadratic_branch(Ab, t2, problem.lam_branch, "lambda")
        mu = _solve_quadratic_branch(-Bb, t1, problem.mu_branch, "mu")
        eps = t0 - (2.0 * lam * mu - Bb * lam + Ab * mu)
        return lam, mu, eps
    return _solve_initial_condition_class3(problem)


def _class3_sd_consts(sp: SuperpotentialClass) -> tuple:
    A, B, C, D = sp.consts
    if not (A == -1.0 and B == 1.0 and C == 0.0):
        raise DegenerateClass(
            "class3 coefficient matching implemented for phi' = D*sqrt(1 - phi^2) structure"
        )
    Cb, Db = sp.barred[2], sp.barred[3]
    return Cb, Db


def _solve_initial_condition_class3(problem: ChainProblem) -> tuple:
    # Decouples in s = lam + mu, d = lam - mu:
    #   s^2 - (Cb + Db) s = t0 + t1 + t2,  d^2 - (Db - Cb) d = t0 + t2 - t1
    sp = problem.sp
    Cb, Db = _class3_sd_consts(sp)
    t2, t1, t0 = problem.v_coeffs
    s = _solve_quadratic_branch(Cb + Db, t0 + t1 + t2, problem.lam_branch, "s = lambda + mu")
    d = _solve_quadratic_branch(Db - Cb, t0 + t2 - t1, problem.mu_branch, "d = lambda - mu")
    lam, mu = 0.5 * (s + d), 0.5 * (s - d)
    eps = t0 - mu * mu + Db * lam
    resid = (lam * lam - Cb * mu - eps) - t2
    if abs(resid) > 1e-9 * max(1.0, abs(t2), abs(eps)):
        raise DegenerateClass(f"class3 matching inconsistent (residual {resid})")
    return lam, mu, eps


def _chain_step(sp: SuperpotentialClass, lam: float, mu: float) -> tuple:
    plus = sp.plus_coeffs(lam, mu)
    if sp.class_id == "class1":
        Ab, Bb, Cb = sp.barred
        lam2 = lam + Ab
        if sp.class0:
            mu2 = 0.0
        else:
            if lam2 == 0.0:
                raise DegenerateClass("lambda_{i+1} = 0 in chain step")
            mu2 = (plus[1] + Bb * lam2) / (2.0 * lam2)
        eps2 = plus[2] - mu2 * mu2 + Cb * lam2
        return lam2, mu2, eps2
    if sp.class_id == "class2":
        Ab, Bb = sp.barred
        lam2 = lam + Ab
        mu2 = mu - Bb
        eps2 = plus[2] - (2.0 * lam2 * mu2 - Bb * lam2 + Ab * mu2)
        return lam2, mu2, eps2
    Cb, Db = _class3_sd_consts(sp)
    s2 = (lam + mu) + (Cb + Db)
    d2 = (lam - mu) + (Db - Cb)
    lam2, mu2 = 0.5 * (s2 + d2), 0.5 * (s2 - d2)
    eps2 = plus[2] - mu2 * mu2 + Db * lam2
    resid = (lam2 * lam2 - Cb * mu2 - eps2) - plus[0]
    if abs(resid) > 1e-9 * max(1.0, abs(plus[0]), abs(eps2)):
        raise DegenerateClass(f"class3 chain step inconsistent (residual {resid})")
    return lam2, mu2, eps2


def solve_chain(problem: ChainProblem, depth: int) -> ParameterChain:
    """Solve the first matching condition, then iterate the second to ``depth``."""
    if depth < 0:
        raise ChainError("depth must be >= 0")
    lam, mu, eps = _solve_initial_condition(problem)
    lams, mus, epss = [lam], [mu], [eps]
    for _ in range(depth):
        lam, mu, eps = _chain_step(problem.sp, lam, mu)
        lams.append(lam)
        mus.append(mu)
        epss.append(eps)
    return ParameterChain(tuple(lams), tuple(mus), tuple(epss))


@dataclass(frozen=True)
class ResidualValues:
    r1: float
    r2: float


def si_residual(problem: ChainProblem, chain: ParameterChain, i: int, x) -> ResidualValues:
    """Pointwise residuals of the two matching conditions at chain index i.

    r1 is meaningful for i = 0 only; r2 couples levels i and i+1 and needs the
    chain solved to depth >= i+1.
    """
    if i < 0 or i + 1 > chain.depth:
        raise ChainError(f"residual at i={i} needs chain depth >= {i + 1}")
    f = deforming_eval(problem.df, x).f
    w0 = w_eval(problem.sp, chain.lambda_seq[0], chain.mu_seq[0], x)
    r1 = w0.W**2 - f * w0.W_prime + chain.eps_seq[0] - float(np.asarray(problem.v_eff(x)))
    wi = w_eval(problem.sp, chain.lambda_seq[i], chain.mu_seq[i], x)
    wj = w_eval(problem.sp, chain.lambda_seq[i + 1], chain.mu_seq[i + 1], x)
    r2 = wi.W**2 + f * wi.W_prime - wj.W**2 + f * wj.W_prime - chain.eps_seq[i + 1]
    return ResidualValues(float(r1), float(r2))


def partner_potential(problem: ChainProblem, chain: ParameterChain, x) -> float:
    """First deformed partner potential V_eff(x) + 2 f(x) W'(lambda_0; x)."""
    f = deforming_eval(problem.df, x).f
    w0 = w_eval(problem.sp, chain.lambda_seq[0], chain.mu_seq[0], x)
    return float(np.asarray(problem.v_eff(x)) + 2.0 * f * w0.W_prime)
