"""Curated test bodies used across the suite and the experiment scripts.

Amplitudes are frozen at values that pass convexity validation with healthy
margins; the harmonic combinations were normalized to the quoted sup amplitude
on a dense grid and hardened into literals for reproducibility.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .geometry import Body, BodySpec, make_body

# degree-4 combination (zonal + 2-fold sectorial), sup amplitude 0.08: exactly
# four unstable points at t = 1, settling to two under stretching either way
WOBBLY_C40 = 0.09453227982537286
WOBBLY_C42 = 0.028359683947611857

# degree-3 combination, sup amplitude 0.08: no central symmetry, nonzero raw
# centroid (exercises recentering), counts (S,U,N) = (4,4,6)
LUMPY_C3M2 = 0.03317933686003462
LUMPY_C31 = 0.04423911581337949
LUMPY_C32 = 0.11059778953344872


def _harm_coeffs(pairs: dict) -> tuple:
    L = max(l for l, _ in pairs)
    c = [0.0] * (L + 1) ** 2
    c[0] = 2.0 * math.sqrt(math.pi)  # Y00 coefficient giving the unit term
    for (l, m), val in pairs.items():
        c[l * l + l + m] = val
    return tuple(c)


def zoo_specs() -> list[BodySpec]:
    """The ten-body zoo: five 3D, five 2D."""
    return [
        BodySpec(3, "ellipsoid", (1.0, 1.2, 1.5), "ell3"),
        BodySpec(3, "ellipsoid", (1.0, 1.0, 2.0), "prolate"),
        BodySpec(3, "ellipsoid", (0.8, 1.0, 1.25), "oblate"),
        BodySpec(3, "harmonics3d",
                 _harm_coeffs({(4, 0): WOBBLY_C40, (4, 2): WOBBLY_C42}), "wobbly"),
        BodySpec(3, "harmonics3d",
                 _harm_coeffs({(3, -2): LUMPY_C3M2, (3, 1): LUMPY_C31,
                               (3, 2): LUMPY_C32}), "lumpy"),
        BodySpec(2, "ellipsoid", (1.0, 1.4), "ellipse"),
        BodySpec(2, "fourier2d", (1.0, 0.0, 0.0, 0.1), "f2"),
        BodySpec(2, "fourier2d", (1.0, 0.0, 0.0, 0.1, 0.0, 0.0, 0.03), "fmix"),
        BodySpec(2, "fourier2d", (1.0, 0.0, 0.0, 0.0, 0.0, 0.08), "f3"),
        BodySpec(2, "fourier2d", (1.0, 0.0, 0.0, 0.0, 0.02, 0.0, 0.0, 0.05), "f4mix"),
    ]


@lru_cache(maxsize=1)
def _built() -> tuple:
    return tuple(make_body(s) for s in zoo_specs())


def zoo_bodies() -> list[Body]:
    """All ten validated zoo bodies (built once per process)."""
    return list(_built())


def zoo_body(label: str) -> Body:
    for b in _built():
        if b.label == label:
            return b
    raise KeyError(f"no zoo body labeled {label!r}")


def conjecture_zoo() -> list[Body]:
    """The designated five-body subset for the averaged-system experiment."""
    wanted = ("ell3", "wobbly", "ellipse", "fmix", "f4mix")
    return [zoo_body(w) for w in wanted]
