"""Problem instances u = T u + f on [0, 1] and their admissibility checks.

The operator is ``T u(x) = phi(x) * u(phi1(x)) + (1 - phi(x)) * u(phi2(x))``,
a generalized convex combination with nonlocally mixed arguments.  A problem
is admissible when

* ``phi(0) = 0``, ``phi(1) = 1`` and ``0 <= phi <= 1`` on [0, 1],
* ``phi1(1) = 1``, ``phi2(0) = 0`` and ``0 <= phi1, phi2 <= 1`` on [0, 1],
* the source ``f`` vanishes at both endpoints (homogeneous case).

Under these conditions T maps functions vanishing at the boundary to
functions vanishing at the boundary, and it is a contraction in the
Lipschitz seminorm whenever ``(1 + |phi|)(|phi1| + |phi2|) < 1``, which
gives a unique solution with ``|u| <= |f| / margin``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

BOUNDS_TOL = 1e-12
SEMINORM_SAMPLES = 4096


@dataclass(frozen=True)
class Coefficient:
    """A real coefficient function, total and finite on [0, 1].

    ``seminorm`` is an optional analytic Lipschitz seminorm supplied by the
    definer; when absent, a divided-difference estimate is used instead.
    ``vectorized`` marks ``fn`` as accepting numpy arrays elementwise.
    """

    fn: Callable[[float], float]
    seminorm: Optional[float] = None
    name: str = ""
    vectorized: bool = False

    def __call__(self, x: float) -> float:
        return float(self.fn(x))

    def eval_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.vectorized:
            out = np.asarray(self.fn(xs), dtype=float)
            if out.shape != xs.shape:  # scalar-constant fn
                out = np.broadcast_to(out, xs.shape).copy()
            return out
        return np.array([float(self.fn(float(t))) for t in xs.ravel()]).reshape(
            xs.shape
        )


@dataclass(frozen=True)
class Problem:
    """One instance of u = T u + f with boundary values u(0)=u0, u(1)=u1.

    ``raw_bounds`` records the boundary values of the original unknown when
    this problem was produced by :func:`homogenize` (or is a catalog entry
    stored in shifted form), so the physical solution can be recovered.
    """

    phi: Coefficient
    phi1: Coefficient
    phi2: Coefficient
    f: Coefficient
    u0: float = 0.0
    u1: float = 0.0
    name: str = ""
    raw_bounds: Optional[tuple[float, float]] = None

    @property
    def homogeneous(self) -> bool:
        return self.u0 == 0.0 and self.u1 == 0.0

    def coefficient_seminorms(self) -> dict[str, "SeminormInfo"]:
        out = {}
        for label in ("phi", "phi1", "phi2", "f"):
            out[label] = resolve_seminorm(getattr(self, label))
        return out

    def contraction_margin(self) -> float:
        s = self.coefficient_seminorms()
        return 1.0 - (1.0 + s["phi"].value) * (s["phi1"].value + s["phi2"].value)


@dataclass(frozen=True)
class SeminormInfo:
    value: float
    source: str  # "analytic" | "estimated"
    estimate: float  # numeric estimate, kept for cross-checking


@dataclass
class ValidationReport:
    assumption_violations: list[tuple[str, float, float]]
    seminorms: dict[str, SeminormInfo]
    contraction_margin: float
    apriori_bound: Optional[float]

    @property
    def ok(self) -> bool:
        return not self.assumption_violations


def sampled_seminorm(fn: Callable[[float], float], samples: int) -> float:
    """Max divided difference over consecutive uniform sample points."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    xs = np.linspace(0.0, 1.0, samples)
    if isinstance(fn, Coefficient):
        ys = fn.eval_array(xs)
    else:
        ys = np.array([float(fn(float(t))) for t in xs])
    return float(np.max(np.abs(np.diff(ys) / np.diff(xs))))


def seminorm_estimate(c: Coefficient, samples: int) -> float:
    """Lipschitz seminorm of ``c``: the analytic value when the coefficient
    carries one, otherwise the divided-difference estimate."""
    if c.seminorm is not None:
        return float(c.seminorm)
    return sampled_seminorm(c, samples)


def resolve_seminorm(c: Coefficient, samples: int = SEMINORM_SAMPLES) -> SeminormInfo:
    estimate = sampled_seminorm(c, samples)
    if c.seminorm is not None:
        return SeminormInfo(float(c.seminorm), "analytic", estimate)
    return SeminormInfo(estimate, "estimated", estimate)


def apply_T(p: Problem, v: Callable[[float], float], x: float) -> float:
    """The mixing operator: phi(x)*v(phi1(x)) + (1 - phi(x))*v(phi2(x))."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x!r} outside [0, 1]")
    w = p.phi(x)
    return w * float(v(p.phi1(x))) + (1.0 - w) * float(v(p.phi2(x)))


def homogenize(p: Problem) -> Problem:
    """Shift the unknown by h(x) = (1-x)*u0 + x*u1 so boundary values vanish.

    The shift is absorbed into the source: f_new = f + T h - h.  Returns
    ``p`` unchanged when it is already homogeneous.
    """
    if p.homogeneous:
        return p
    u0, u1 = p.u0, p.u1
    phi, phi1, phi2, f = p.phi, p.phi1, p.phi2, p.f

    def h(x):
        return (1.0 - x) * u0 + x * u1

    def f_new(x):
        w = phi.fn(x)
        return f.fn(x) + w * h(phi1.fn(x)) + (1.0 - w) * h(phi2.fn(x)) - h(x)

    vec = all(c.vectorized for c in (phi, phi1, phi2, f))
    shifted = Coefficient(f_new, name="f", vectorized=vec)
    return replace(p, f=shifted, u0=0.0, u1=0.0, raw_bounds=(u0, u1))


def validate(p: Problem, samples: int = 1000) -> ValidationReport:
    """Check the admissibility conditions on a sampled grid.

    Conditions are checked at ``samples`` uniform points plus both endpoints
    with tolerance 1e-12 (coefficients are opaque callables, so symbolic
    verification is out of reach).  A nonpositive contraction margin is a
    warning, not an error: the sufficient condition is not necessary and
    such problems are often solvable in practice.
    """
    xs = np.linspace(0.0, 1.0, samples + 2)
    violations: list[tuple[str, float, float]] = []

    def check_point(label: str, x: float, observed: float, expected: float):
        if abs(observed - expected) > BOUNDS_TOL:
            violations.append((label, x, observed))

    def check_bounds(label: str, values: np.ndarray):
        low = float(np.min(values))
        high = float(np.max(values))
        if low < -BOUNDS_TOL:
            violations.append((f"{label} >= 0", float(xs[np.argmin(values)]), low))
        if high > 1.0 + BOUNDS_TOL:
            violations.append((f"{label} <= 1", float(xs[np.argmax(values)]), high))

    phi_vals = p.phi.eval_array(xs)
    phi1_vals = p.phi1.eval_array(xs)
    phi2_vals = p.phi2.eval_array(xs)

    check_point("phi(0) = 0", 0.0, float(phi_vals[0]), 0.0)
    check_point("phi(1) = 1", 1.0, float(phi_vals[-1]), 1.0)
    check_bounds("phi", phi_vals)
    check_point("phi1(1) = 1", 1.0, float(phi1_vals[-1]), 1.0)
    check_bounds("phi1", phi1_vals)
    check_point("phi2(0) = 0", 0.0, float(phi2_vals[0]), 0.0)
    check_bounds("phi2", phi2_vals)
    if p.homogeneous:
        check_point("f(0) = 0", 0.0, p.f(0.0), 0.0)
        check_point("f(1) = 0", 1.0, p.f(1.0), 0.0)

    seminorms = p.coefficient_seminorms()
    margin = 1.0 - (1.0 + seminorms["phi"].value) * (
        seminorms["phi1"].value + seminorms["phi2"].value
    )
    apriori = seminorms["f"].value / margin if margin > 0.0 else None
    return ValidationReport(violations, seminorms, margin, apriori)
