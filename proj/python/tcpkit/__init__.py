"""Tensor complementarity problems: solvers, property checks and spectra.

Vectors are numpy arrays; tensor indices are 0-based here and 1-based in the
JSON file format. Reports are returned as dicts with the same layout as the
``tcpkit`` command-line tool prints.
"""

from ._tcpkit import (
    Error,
    Tensor,
    TcpInstance,
    apply_power,
    check,
    eigenpairs,
    enumerate_solutions,
    form_value,
    gus_probe,
    instance_from_json,
    instance_to_json,
    is_solution,
    natural_residual_norm,
    principal_subtensor,
    random_tensor,
    repro,
    residuals,
    solve_iterative,
    strong_p_objective,
    p_objective,
    tensor_from_json,
    tensor_to_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
