"""symrad: Radon / symplectic (M2) tomography toolkit.

Forward line-integral transforms, the degree -1 homogeneity bijection to
the symplectic tomogram, three independent inversion algorithms, an n = 3
generalization, and a benchmark harness comparing their cost and accuracy.
"""
from .bench import (CSV_COLUMNS, METHODS, BenchmarkReport, ExperimentConfig,
                    MethodResult, format_table, run_benchmark, write_csv,
                    write_report)
from .errors import (DimensionMismatch, FormatError, InsufficientSupport,
                     OutOfSupport, SingularDirection, TomographyError,
                     Unsupported)
from .fileio import (read_field, read_phantom, read_sinogram, write_field,
                     write_phantom, write_sinogram)
from .forward import (QuadratureSpec, Sinogram, SinogramSpec, edge_magnitude,
                      m2_evaluate, m2_mass_at_origin, radon_forward,
                      radon_forward_field, sinogram_interp)
from .grids import Field, GridSpec, total_mass
from .inversion import (CircleMeanParams, SpectralParams, backproject,
                        circle_mean, circle_mean_estimates,
                        extrapolate_sqrt_eps, fractional_laplacian,
                        invert_helgason, invert_m2_fourier,
                        invert_radon_circle_mean, reconstruction_error)
from .ndim import (DirectionSet, TomogramND, fibonacci_sphere,
                   invert_m2_fourier_nd, m2_evaluate_nd, plane_quadrature,
                   radon_forward_field_nd, radon_forward_nd)
from .phantoms import (Phantom, analytic_m2, analytic_radon, phantom_eval,
                       phantom_to_field)

__version__ = "0.1.0"
