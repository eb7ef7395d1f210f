"""Entanglement measures for (1+1)d bosonic field theories.

The package builds truncated free-boson and sine-Gordon Hamiltonians on an
interval, splits the field modes across a spatial cut with a Bogoliubov
transformation, assembles the change-of-basis matrix between the full and
split Fock bases, and computes entanglement entropies, mutual information
and logarithmic negativity for ground, thermal and quenched states.  An
independent lattice covariance-matrix oracle covers the free-field cases.
"""

from .cache import CacheStore, cache_key, load_matrix, save_matrix
from .entanglement import (EntropyRecord, Keep, entanglement_hamiltonian,
                           fourier_spectrum, log_negativity, partial_trace,
                           pure_state_measures, renyi, schmidt_values,
                           split_density, von_neumann)
from .errors import (BudgetExceededError, ConfigError, HtentError,
                     SingularSplitError, UnphysicalStateError)
from .fock import (BasisTable, ModeFamily, ProductBasis, dump_basis_csv,
                   enumerate_full_basis, enumerate_half_mode_basis,
                   enumerate_split_basis, partition_count, product_basis)
from .gaussian import (CovarianceMatrix, LatticeConfig, dispersion,
                       entropy_at_cut,
                       gaussian_renyi, gaussian_vn, quench_covariance,
                       reduce_covariance, symplectic_spectrum,
                       thermal_covariance)
from .models import (HamiltonianMatrix, Model, ModelParams, breather_mass,
                     h_massive, h_massless, h_sine_gordon, kappa,
                     vertex_matrix)
from .overlap import SplitIsometry, build_U_T, iso_defect, matrix_element
from .pairing import (DerivativeSpec, DerivIndex, TContext, dump_strings_csv,
                      enumerate_pairings, evaluate_derivative, full_index,
                      multiplicity, split_index)
from .pipeline import (build_hamiltonian, build_transform, check_commensurate,
                       entropy_profile, oracle_profile, oracle_quench,
                       quench_series, shift_align)
from .splitting import (BogoliubovMatrix, CutBC, CutConfig, CutoffScheme,
                        GammaSet, Rounding, SqueezeKernel, allocate_modes,
                        assemble_M, gamma_coefficients, split_frequencies,
                        squeeze_kernel, symplectic_deviation)
from .states import (DensityMatrix, SpectralDecomposition, decompose,
                     ground_state, quench_evolve, thermal_state)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
