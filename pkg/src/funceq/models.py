"""Built-in problem instances with analytic seminorms and known solutions.

Three families:

* ``fish(alpha, beta)`` — the two-choice learning model with linear mixing
  maps, stored in shifted (homogeneous) form; the physical solution is
  recovered as v(x) = u(x) + x.  ``fish_raw`` is the unshifted variant with
  boundary values 0 and 1 and zero source, for exercising homogenization.
* ``manufactured_smooth(alpha)`` — coefficients with a known smooth solution
  sin(pi*x); the source is defined pointwise as f = u - T u, so the exact
  solution satisfies the equation by construction.
* ``manufactured_nonsmooth(alpha)`` — a solution with square-root behavior
  at both endpoints (Holder continuous of order 1/2, not Lipschitz), for
  probing the scheme outside its regularity assumptions.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .problem import Coefficient, Problem


def _manufactured_source(phi, phi1, phi2, exact) -> Coefficient:
    # f := u - T u, evaluated on the fly; eliminates transcription errors
    # and makes the residual identity hold by construction.
    def f(x):
        w = phi(x)
        return exact(x) - (w * exact(phi1(x)) + (1.0 - w) * exact(phi2(x)))

    return Coefficient(f, name="f", vectorized=True)


def fish(alpha: float, beta: float) -> Problem:
    """Learning-model problem, shifted form: f(x) = (beta-alpha)(1-x)x.

    Admissible parameters: 0 < alpha <= beta < 1.  When alpha == beta the
    source vanishes and the only solution is u = 0 (physical v(x) = x).
    """
    if not 0.0 < alpha <= beta < 1.0:
        raise ValueError(f"fish requires 0 < alpha <= beta < 1, got {alpha}, {beta}")
    c = beta - alpha
    return Problem(
        phi=Coefficient(lambda x: x * np.ones_like(x) if np.ndim(x) else x,
                        seminorm=1.0, name="phi", vectorized=True),
        phi1=Coefficient(lambda x: 1.0 - alpha + alpha * x,
                         seminorm=alpha, name="phi1", vectorized=True),
        phi2=Coefficient(lambda x: beta * x,
                         seminorm=beta, name="phi2", vectorized=True),
        f=Coefficient(lambda x: c * (1.0 - x) * x,
                      seminorm=c, name="f", vectorized=True),
        u0=0.0,
        u1=0.0,
        name=f"fish(alpha={alpha}, beta={beta})",
        raw_bounds=(0.0, 1.0),
    )


def fish_raw(alpha: float, beta: float) -> Problem:
    """Unshifted learning model: boundary values 0 and 1, zero source."""
    if not 0.0 < alpha <= beta < 1.0:
        raise ValueError(f"fish requires 0 < alpha <= beta < 1, got {alpha}, {beta}")
    return Problem(
        phi=Coefficient(lambda x: x * np.ones_like(x) if np.ndim(x) else x,
                        seminorm=1.0, name="phi", vectorized=True),
        phi1=Coefficient(lambda x: 1.0 - alpha + alpha * x,
                         seminorm=alpha, name="phi1", vectorized=True),
        phi2=Coefficient(lambda x: beta * x,
                         seminorm=beta, name="phi2", vectorized=True),
        f=Coefficient(lambda x: 0.0 * x, seminorm=0.0, name="f", vectorized=True),
        u0=0.0,
        u1=1.0,
        name=f"fish-raw(alpha={alpha}, beta={beta})",
    )


def manufactured_smooth(alpha: float) -> tuple[Problem, Callable]:
    """Quadratic mixing weight with one exponential delay map; exact
    solution sin(pi*x).  Contraction product is 3*alpha, so alpha < 1/3."""
    if not 0.0 < alpha < 1.0 / 3.0:
        raise ValueError(f"manufactured_smooth requires alpha in (0, 1/3), got {alpha}")

    def phi(x):
        return x * x

    def phi1(x):
        return 1.0 - 0.5 * alpha * (1.0 - x)

    def phi2(x):
        return 1.0 - np.exp(-0.5 * alpha * x)

    def exact(x):
        return np.sin(np.pi * x)

    exact.lipschitz = True
    p = Problem(
        phi=Coefficient(phi, seminorm=2.0, name="phi", vectorized=True),
        phi1=Coefficient(phi1, seminorm=0.5 * alpha, name="phi1", vectorized=True),
        phi2=Coefficient(phi2, seminorm=0.5 * alpha, name="phi2", vectorized=True),
        f=_manufactured_source(phi, phi1, phi2, exact),
        name=f"smooth(alpha={alpha})",
    )
    return p, exact


def manufactured_nonsmooth(alpha: float) -> tuple[Problem, Callable]:
    """Linear mixing maps with exact solution sqrt(1/2 - |x - 1/2|), which
    is Holder continuous of order 1/2 only.  Contraction product 2*alpha."""
    if not 0.0 < alpha < 0.5:
        raise ValueError(
            f"manufactured_nonsmooth requires alpha in (0, 1/2), got {alpha}"
        )

    def phi(x):
        return x * np.ones_like(x) if np.ndim(x) else x

    def phi1(x):
        return 1.0 - 0.5 * alpha * (1.0 - x)

    def phi2(x):
        return 0.5 * alpha * x

    def exact(x):
        return np.sqrt(0.5 - np.abs(x - 0.5))

    exact.lipschitz = False
    p = Problem(
        phi=Coefficient(phi, seminorm=1.0, name="phi", vectorized=True),
        phi1=Coefficient(phi1, seminorm=0.5 * alpha, name="phi1", vectorized=True),
        phi2=Coefficient(phi2, seminorm=0.5 * alpha, name="phi2", vectorized=True),
        f=_manufactured_source(phi, phi1, phi2, exact),
        name=f"nonsmooth(alpha={alpha})",
    )
    return p, exact


def build(name: str, params: dict[str, float]) -> tuple[Problem, Optional[Callable]]:
    """Construct a catalog model by name; returns (problem, exact or None)."""
    merged = dict(DEFAULT_PARAMS[name])
    unknown = set(params) - set(merged)
    if unknown:
        raise ValueError(f"model '{name}' has no parameter(s) {sorted(unknown)}")
    merged.update(params)
    if name == "fish":
        return fish(merged["alpha"], merged["beta"]), None
    if name == "fish-raw":
        return fish_raw(merged["alpha"], merged["beta"]), None
    if name == "smooth":
        return manufactured_smooth(merged["alpha"])
    if name == "nonsmooth":
        return manufactured_nonsmooth(merged["alpha"])
    raise ValueError(f"unknown model '{name}' (have: {', '.join(sorted(MODEL_NAMES))})")


DEFAULT_PARAMS: dict[str, dict[str, float]] = {
    "fish": {"alpha": 0.1, "beta": 0.2},
    "fish-raw": {"alpha": 0.1, "beta": 0.2},
    "smooth": {"alpha": 0.3},
    "nonsmooth": {"alpha": 0.45},
}

MODEL_NAMES = tuple(sorted(DEFAULT_PARAMS))
