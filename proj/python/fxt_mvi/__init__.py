"""Fixed-time proximal dynamics for mixed variational inequalities."""

from ._core import (
    Error,
    a_coef,
    alpha1_window,
    bounds,
    contraction_factor,
    epsilon_of_c,
    example1_operator,
    generate_dataset,
    k_star,
    lambda_upper_bound,
    preset_certificate,
    project_ball,
    project_box,
    property_suite,
    prox_l1,
    q_coef,
    reference_solution,
    run_cli,
    settling_time_bound_xi,
    solve,
    xi_params,
)

__all__ = [
    "Error",
    "a_coef",
    "alpha1_window",
    "bounds",
    "contraction_factor",
    "epsilon_of_c",
    "example1_operator",
    "generate_dataset",
    "k_star",
    "lambda_upper_bound",
    "preset_certificate",
    "project_ball",
    "project_box",
    "property_suite",
    "prox_l1",
    "q_coef",
    "reference_solution",
    "run_cli",
    "settling_time_bound_xi",
    "solve",
    "xi_params",
]
