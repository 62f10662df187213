"""Floating-point stage: univariate roots, numeric rank, Newton refinement."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, asdict
from typing import NamedTuple, Sequence

import numpy as np

from . import univariate as U
from .arith import to_complex
from .poly import MultiPoly

__all__ = [
    "NumericTolerances",
    "NumericFailure",
    "NotOnSection",
    "Root",
    "NumericRank",
    "univariate_roots",
    "aberth",
    "numeric_rank",
    "newton_refine",
]


class NumericFailure(RuntimeError):
    """An iteration failed to converge; ``diagnostics`` holds the details."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class NotOnSection(NumericFailure):
    """A critical point of the gradient system that does not lie on f = 0."""


@dataclass(frozen=True)
class NumericTolerances:
    rank_threshold: float = 1e-8
    root_tolerance: float = 1e-13
    newton_tolerance: float = 1e-12
    dedupe_tolerance: float = 1e-7
    max_newton_iters: int = 100

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"tolerance {name} must be strictly positive, got {value}")

    def as_dict(self):
        return asdict(self)


class Root(NamedTuple):
    value: complex
    multiplicity: int


class NumericRank(NamedTuple):
    rank: int
    kernel: np.ndarray          # columns span the numeric nullspace
    singular_values: np.ndarray

    @property
    def gap(self):
        """Ratio between the smallest accepted and largest rejected singular value."""
        s = self.singular_values
        if self.rank == 0 or self.rank == len(s):
            return math.inf
        return s[self.rank - 1] / max(s[self.rank], np.finfo(float).tiny)


def aberth(coeffs: Sequence[complex], tol: float = 1e-14, max_iter: int = 500):
    """Simultaneous Aberth–Ehrlich iteration for all roots of a polynomial.

    ``coeffs`` run from the constant term up; the leading one must be nonzero.
    Each root is frozen once its correction drops below ``tol`` relative to
    its modulus or its residual reaches the roundoff level of evaluation, so
    noise cannot keep the iteration alive.
    """
    a = np.asarray(coeffs, dtype=complex)
    n = len(a) - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    a = a / a[-1]
    if n == 1:
        return np.array([-a[0]])
    dp = a[1:] * np.arange(1, n + 1)
    # initial guesses on a circle within the Fujiwara bound, off-axis to break symmetry
    radius = 2 * max(abs(a[n - k]) ** (1.0 / k) for k in range(1, n + 1))
    radius = max(radius, 1e-3)
    z = radius * np.exp(2j * np.pi * (np.arange(n) + 0.25) / n) * 0.5
    horner = np.polynomial.polynomial.polyval
    abs_a = np.abs(a)
    active = np.ones(n, dtype=bool)
    for it in range(max_iter):
        p = horner(z, a)
        d = horner(z, dp)
        ratio = np.where(d != 0, p / np.where(d != 0, d, 1), p)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = (1.0 / diff).sum(axis=1) - 1.0
        denom = 1 - ratio * s
        w = ratio / np.where(denom != 0, denom, 1)
        noise = 8 * n * np.finfo(float).eps * horner(np.abs(z), abs_a)
        active &= np.abs(p) > noise
        w = np.where(active, w, 0)
        z = z - w
        active &= np.abs(w) > tol * np.abs(z)
        if not active.any():
            return z
    raise NumericFailure("Aberth iteration did not converge", iterations=max_iter,
                         last_correction=float(np.max(np.abs(w))))


def _polish(coeffs, z, steps=3):
    poly = np.polynomial.polynomial
    dc = poly.polyder(coeffs)
    for _ in range(steps):
        d = poly.polyval(z, dc)
        if d == 0:
            break
        z = z - poly.polyval(z, coeffs) / d
    return z


def univariate_roots(p: MultiPoly, tol: NumericTolerances | None = None) -> list[Root]:
    """All complex roots of an exact univariate polynomial, with multiplicities.

    The multiplicities come from an exact square-free decomposition; each
    square-free factor is solved by Aberth–Ehrlich and the roots are checked
    against a backward-error residual bound.
    """
    tol = tol or NumericTolerances()
    a = U.from_multipoly(p)
    if len(U.strip(a)) < 2:
        raise ValueError("polynomial of degree >= 1 required")
    roots = []
    for factor, mult in U.squarefree_decomposition(a):
        if not factor[0]:
            # exact zero root; a square-free factor has it at most once
            roots.append(Root(0j, mult))
            factor = factor[1:]
            if len(factor) < 2:
                continue
        c = np.array([to_complex(x) for x in factor])
        zs = aberth(c)
        for z in zs:
            z = _polish(c, z)
            scale = float(np.sum(np.abs(c) * np.abs(z) ** np.arange(len(c))))
            resid = abs(np.polynomial.polynomial.polyval(z, c))
            if resid > max(tol.root_tolerance, 64 * np.finfo(float).eps) * scale * len(c):
                raise NumericFailure("root residual check failed", root=complex(z),
                                     residual=float(resid), scale=scale)
            roots.append(Root(complex(z), mult))
    roots.sort(key=lambda r: (round(r.value.real, 12), round(r.value.imag, 12)))
    return roots


def numeric_rank(M, tol: NumericTolerances | None = None) -> NumericRank:
    tol = tol or NumericTolerances()
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return NumericRank(0, np.zeros((A.shape[1] if A.ndim == 2 else 0, 0)), np.zeros(0))
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    _, s, vh = np.linalg.svd(A)
    smax = s[0] if len(s) else 0.0
    if smax == 0:
        r = 0
    else:
        r = int(np.sum(s > tol.rank_threshold * smax))
    kernel = vh[r:].conj().T
    return NumericRank(r, kernel, s)


def _numeric_system(polys):
    return [p.to_numeric() if p.is_exact() else p for p in polys]


def _eval(p: MultiPoly, x):
    total = 0j
    for m, c in p.terms.items():
        t = c
        for xi, k in zip(x, m):
            if k:
                t *= xi ** k
        total += t
    return total


def _term_scale(p: MultiPoly, x):
    """Sum of term moduli at ``x``: the roundoff scale of evaluating ``p``."""
    ax = np.abs(x)
    total = 0.0
    for m, c in p.terms.items():
        t = abs(c)
        for xi, k in zip(ax, m):
            if k:
                t *= xi ** k
        total += t
    return total


def newton_refine(system: Sequence[MultiPoly], f: MultiPoly, start: Sequence[complex],
                  tol: NumericTolerances | None = None):
    """Refine a solution of ``system = 0`` (the gradient of ``f``).

    Uses Gauss–Newton least-squares steps with the Hessian as Jacobian, which
    degrade gracefully to damped steps when the target is a degenerate
    critical point.  Convergence is judged by backward error: each residual
    is compared with the sum of its term moduli at the current point, so
    points far out in a chart are not held to an unreachable absolute bound.
    Returns ``(point, iterations)``.
    """
    tol = tol or NumericTolerances()
    grads = _numeric_system(system)
    fn = _numeric_system([f])[0]
    variables = f.variables
    jac = [[g.diff(v) for v in variables] for g in grads]
    x = np.array([complex(v) for v in start], dtype=complex)

    def residual(x):
        return np.array([_eval(g, x) for g in grads])

    def weights(x):
        return np.array([1.0 / max(1.0, _term_scale(g, x)) for g in grads])

    r = residual(x)
    it = 0
    while True:
        w = weights(x)
        if np.all(np.abs(w * r) <= tol.newton_tolerance):
            break
        if it >= tol.max_newton_iters:
            raise NumericFailure("Newton refinement hit the iteration cap", iterations=it,
                                 residual=float(np.max(np.abs(r))), point=x.tolist())
        J = np.array([[_eval(e, x) for e in row] for row in jac])
        # equilibrate rows and columns so the cutoff sees the true conditioning
        cols = np.maximum(1.0, np.abs(x))
        A = w[:, None] * J * cols[None, :]
        base = np.linalg.norm(w * r)
        best = None
        # full-precision step first; the rank cutoff tames degenerate points
        for rcond in (None, tol.rank_threshold):
            y, *_ = np.linalg.lstsq(A, -w * r, rcond=rcond)
            step = cols * y
            lam = 1.0
            while lam >= 1e-4:
                trial = x + lam * step
                rt = residual(trial)
                score = np.linalg.norm(w * rt)
                if np.all(np.isfinite(rt)) and score < base:
                    if best is None or score < best[0]:
                        best = (score, trial, rt)
                    break
                lam *= 0.5
        it += 1
        if best is None:
            raise NumericFailure("Newton refinement stalled", iterations=it,
                                 residual=float(np.max(np.abs(r))), point=x.tolist())
        _, x, r = best
    fval = _eval(fn, x)
    if abs(fval) > tol.newton_tolerance * max(1.0, _term_scale(fn, x)):
        raise NotOnSection("critical point is not on the section", value=complex(fval),
                           point=x.tolist())
    return x, it
