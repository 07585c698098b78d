"""Numerical laboratory for slow heating in driven power-law spin systems.

The package has four layers.  Operator foundations: exact Pauli-string
algebra, power-law class certificates, Fourier-indexed periodic operators,
and a dense backend for systems up to 14 sites.  An effective-Hamiltonian
engine that constructs the rotating frame order by order and certifies each
order against its combinatorial growth bound.  A family of Lieb-Robinson
bounds with lattice-certified constants, evaluated against exactly measured
commutators.  Experiments on top: binned linear response with rigorous
per-pair suppression bounds, stroboscopic heating traces, and observable
drift against calibrated envelopes.

Attributes resolve lazily so that importing the package root stays free of
numpy; the console entry point relies on this to pin BLAS thread pools
before any numerics load.
"""

import importlib

__version__ = "0.1.0"

_EXPORTS = {
    # errors
    "AccuracyError": ".errors",
    "DegenerateInputError": ".errors",
    "DomainError": ".errors",
    "ResourceLimitError": ".errors",
    "SchemaError": ".errors",
    # lattice geometry
    "Lattice": ".lattice",
    "LatticeConstants": ".lattice",
    "SiteSet": ".lattice",
    "boundary_area": ".lattice",
    "chain": ".lattice",
    "distance": ".lattice",
    "enclosing_radius": ".lattice",
    "lattice_constants": ".lattice",
    "set_distance": ".lattice",
    # operator algebra
    "CertificateReport": ".pauli",
    "OperatorSum": ".pauli",
    "PauliString": ".pauli",
    "PowerLawSpec": ".pauli",
    "X": ".pauli",
    "Y": ".pauli",
    "Z": ".pauli",
    "adjoint_power": ".pauli",
    "commutator": ".pauli",
    "local_norm": ".pauli",
    "matrix_on_sites": ".pauli",
    "operator_norm": ".pauli",
    "pauli_op": ".pauli",
    "powerlaw_certificate": ".pauli",
    # periodic operators
    "FourierOperator": ".fourier",
    "fourier_commutator": ".fourier",
    # dense backend
    "DenseOperator": ".dense",
    "eigensystem": ".dense",
    "expectation": ".dense",
    "floquet_propagator": ".dense",
    "heisenberg_evolve": ".dense",
    "operator_norm_dense": ".dense",
    "propagator_to": ".dense",
    "thermal_state": ".dense",
    "to_matrix": ".dense",
    # model builders
    "driven_hamiltonian": ".models",
    "power_law_ising": ".models",
    "uniform_field": ".models",
    # effective Hamiltonian engine
    "MagnusConfig": ".magnus",
    "MagnusResult": ".magnus",
    "advance_order": ".magnus",
    "build_effective": ".magnus",
    "compute_Gq": ".magnus",
    "lemma_prefactor": ".magnus",
    "local_norm_bound": ".magnus",
    "max_residual_norm": ".magnus",
    "residual_drive_exact": ".magnus",
    "select_qmax": ".magnus",
    "stirling_local_bound": ".magnus",
    # Lieb-Robinson bounds
    "BOUND_KINDS": ".lr_bounds",
    "DOMINATION_ATOL": ".lr_bounds",
    "BoundParams": ".lr_bounds",
    "ConeSeries": ".lr_bounds",
    "HkSeriesResult": ".lr_bounds",
    "bound_on_grid": ".lr_bounds",
    "eval_bound": ".lr_bounds",
    "hk_series_oracle": ".lr_bounds",
    "jk_convolution": ".lr_bounds",
    "light_cone_contour": ".lr_bounds",
    "measure_commutator": ".lr_bounds",
    "measure_cone": ".lr_bounds",
    "minimize_time_slice": ".lr_bounds",
    "params_from_lattice": ".lr_bounds",
    "time_slice_transform": ".lr_bounds",
    # linear response
    "C1_SMEAR": ".response",
    "PairBound": ".response",
    "ResponseConfig": ".response",
    "ResponseResult": ".response",
    "SmearCheck": ".response",
    "TotalRate": ".response",
    "gaussian_smear_check": ".response",
    "kappa_analytic": ".response",
    "pair_bound_table": ".response",
    "per_pair_exponential_bound": ".response",
    "response_binned": ".response",
    "smeared_response": ".response",
    "smeared_response_quadrature": ".response",
    "spatial_envelope": ".response",
    "thermal_probs": ".response",
    "total_rate_bound": ".response",
    # heating experiments
    "DeltaTrace": ".heating",
    "ENVELOPE_KINDS": ".heating",
    "HeatingTrace": ".heating",
    "ScanConfig": ".heating",
    "ScanPoint": ".heating",
    "ScanResult": ".heating",
    "coarse_grained": ".heating",
    "envelope_shape": ".heating",
    "fit_scan_points": ".heating",
    "frequency_scan": ".heating",
    "heating_time": ".heating",
    "observable_delta": ".heating",
    "run_heating": ".heating",
    "validate_envelope_spec": ".heating",
    "xi_factor": ".heating",
    # combinatorial inequalities
    "LemmaReport": ".inequalities",
    "TailSum": ".inequalities",
    "adjoint_closure_check": ".inequalities",
    "c1_sum": ".inequalities",
    "compositions": ".inequalities",
    "factorial_composition_sum": ".inequalities",
    "incomplete_gamma_tail": ".inequalities",
    "lemma_closure_suite": ".inequalities",
    "lemma_factorial_suite": ".inequalities",
    "lemma_stirling_suite": ".inequalities",
    "lemma_tail_suite": ".inequalities",
    "random_powerlaw": ".inequalities",
    "run_all_lemmas": ".inequalities",
    "shifted_composition_sum": ".inequalities",
    "tail_sum": ".inequalities",
    # configuration
    "SCHEMA_VERSION": ".config",
    "apply_overrides": ".config",
    "default_config": ".config",
    "load_config": ".config",
    "load_raw": ".config",
}

__all__ = sorted(_EXPORTS) + ["__version__"]


def __getattr__(name):
    try:
        module_name = _EXPORTS[name]
    except KeyError:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    value = getattr(importlib.import_module(module_name, __name__), name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(set(globals()) | set(_EXPORTS))
