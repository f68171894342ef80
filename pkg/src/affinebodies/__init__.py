"""Isoperimetric ratio and static equilibria of convex bodies under
one-parameter orthogonal affinity."""

__version__ = "0.1.0"

from .geometry import (AffinityParams, Body, BodySpec, SphereGrid,
                       apply_affinity, centroid, load_spec, make_body,
                       mean_radius, save_spec, scale_body, section_body,
                       sphere_grid, surface_area, volume)
from .isoperimetric import (IsoCurve, ball_ratio, check_quasiconcave,
                            iso_curve, iso_derivative, iso_max, iso_ratio,
                            surface_second_derivative)
from .basis import (CriticalBasis, SlopeField, complete_frame, critical_basis,
                    find_zero_on_arc, slope)
from .equilibria import (CorollaryReport, EquilibriumCounts, EquilibriumPoint,
                         corollary_check, counts, counts_vs_t,
                         equilibria_2d_graph, find_equilibria, find_t_star,
                         graph_system_residual)
from .averaging import (AveragingConfig, BinAverages, FieldTable, bin_averages,
                        conjecture_report, critical_number, sample_field)
from .zoo import conjecture_zoo, zoo_bodies, zoo_body, zoo_specs

__all__ = [name for name in dir() if not name.startswith("_")]
