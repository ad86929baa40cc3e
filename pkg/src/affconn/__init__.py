"""Numerical verification engine for weighted affine-connection geometry."""

from .charts import (ChartedManifold, FramePoint, WeightParams,
                     euclidean_chart, eval_metric, halton_points,
                     orthonormal_frame, polar_disk_chart, sphere3_chart,
                     sphere_chart)
from .connections import (ConnectionCoeffs, affine_coeffs, amari_chentsov,
                          amari_chentsov_closed_form, christoffel_lc,
                          dual_coeffs, duality_residual, equiaffine_residual)
from .curvature import (CurvatureReport, curvature_bound_scan, ricci_tensor,
                        riemann_tensor, static_ricci, weighted_ricci)
from .dual import Dual, derivative
from .tensors import TensorValue

__version__ = "0.1.0"

from .meshes import SurfaceMesh, build_mesh, disk_mesh, hemisphere_mesh
from .operators import (DomainRegion, Hypersurface, d_minimal_residual,
                        grad_D, hess_D, lap_D, reilly_residual,
                        second_fundamental)
from .scenarios import Scenario, get_scenario, scenario_names
from .spectral import (SpectralProblem, assemble, choi_wang_certificate,
                       harmonic_extension_2d, smallest_nonzero_eigenvalue)
from .suite import emit_convergence, report_json, run_suite

__all__ = [
    "ChartedManifold", "FramePoint", "WeightParams", "TensorValue",
    "ConnectionCoeffs", "CurvatureReport", "Dual",
    "euclidean_chart", "sphere_chart", "sphere3_chart", "polar_disk_chart",
    "eval_metric", "orthonormal_frame", "halton_points", "derivative",
    "christoffel_lc", "affine_coeffs", "dual_coeffs", "duality_residual",
    "amari_chentsov", "amari_chentsov_closed_form", "equiaffine_residual",
    "riemann_tensor", "ricci_tensor", "static_ricci", "weighted_ricci",
    "curvature_bound_scan",
    "SurfaceMesh", "build_mesh", "disk_mesh", "hemisphere_mesh",
    "DomainRegion", "Hypersurface", "d_minimal_residual",
    "grad_D", "hess_D", "lap_D", "reilly_residual", "second_fundamental",
    "Scenario", "get_scenario", "scenario_names",
    "SpectralProblem", "assemble", "choi_wang_certificate",
    "harmonic_extension_2d", "smallest_nonzero_eigenvalue",
    "emit_convergence", "report_json", "run_suite",
    "__version__",
]
