"""Score-based structure learning of sparse Bayesian networks.

The package estimates directed acyclic graphs from observational and
experimental data by penalized maximum likelihood, traced along a full
regularization path. Continuous data gets a linear Gaussian model with
scalar penalties (lasso or MCP); categorical data gets multi-logit
conditionals with a group penalty per edge. Interventions are handled by
masking each node's likelihood to the rows where that node was not fixed
by the experimenter.
"""

from .data import (
    CONTINUOUS,
    DISCRETE,
    Dataset,
    RowPartition,
    new_dataset,
    observed_mask,
    read_data_csv,
    read_interventions,
    read_levels,
    row_partition,
    standardize,
    write_data_csv,
    write_interventions,
    write_levels,
)
from .discrete import (
    DiscreteParams,
    discrete_lambda_max,
    estimate_dag_discrete,
    multilogit_negloglik,
    multilogit_negloglik_grad,
    multilogit_prob,
)
from .fit import (
    estimate_covariance,
    estimate_parameters_discrete,
    estimate_parameters_gaussian,
    estimate_precision,
    implied_covariance,
    implied_precision,
    refit_loglik,
)
from .gaussian import (
    GaussianParams,
    estimate_dag_gaussian,
    gaussian_negloglik,
    gaussian_negloglik_grad,
)
from .graph import (
    Dag,
    format_dot,
    format_edge_list,
    from_adjacency,
    from_edges,
    parse_edge_list,
)
from .penalties import (
    GROUP,
    L1,
    MCP,
    Penalty,
    group_threshold,
    penalty_value,
    scalar_threshold,
)
from .priors import (
    PriorKnowledge,
    effective_blacklist,
    read_edge_csv,
    specify_prior,
    validate_prior,
    write_edge_csv,
)
from .selection import default_lambdas, generate_lambdas, select, select_parameter
from .simulate import (
    FAMILIES,
    constant_gaussian_params,
    per_node_intervention_plan,
    random_dag,
    random_discrete_params,
    random_gaussian_params,
    shd,
    simulate_discrete,
    simulate_gaussian,
    tile_network,
    tpr,
)
from .solpath import (
    LearnOptions,
    PathEstimate,
    SolutionPath,
    path_from_dict,
    path_to_dict,
    read_path,
    write_path,
)

__version__ = "0.1.0"

__all__ = [
    "CONTINUOUS",
    "DISCRETE",
    "Dag",
    "Dataset",
    "DiscreteParams",
    "FAMILIES",
    "GROUP",
    "GaussianParams",
    "L1",
    "LearnOptions",
    "MCP",
    "PathEstimate",
    "Penalty",
    "PriorKnowledge",
    "RowPartition",
    "SolutionPath",
    "constant_gaussian_params",
    "default_lambdas",
    "discrete_lambda_max",
    "effective_blacklist",
    "estimate_covariance",
    "estimate_dag_discrete",
    "estimate_dag_gaussian",
    "estimate_parameters_discrete",
    "estimate_parameters_gaussian",
    "estimate_precision",
    "format_dot",
    "format_edge_list",
    "from_adjacency",
    "from_edges",
    "gaussian_negloglik",
    "gaussian_negloglik_grad",
    "generate_lambdas",
    "group_threshold",
    "implied_covariance",
    "implied_precision",
    "multilogit_negloglik",
    "multilogit_negloglik_grad",
    "multilogit_prob",
    "new_dataset",
    "observed_mask",
    "parse_edge_list",
    "path_from_dict",
    "path_to_dict",
    "penalty_value",
    "per_node_intervention_plan",
    "random_dag",
    "random_discrete_params",
    "random_gaussian_params",
    "read_data_csv",
    "read_edge_csv",
    "read_interventions",
    "read_levels",
    "read_path",
    "refit_loglik",
    "row_partition",
    "scalar_threshold",
    "select",
    "select_parameter",
    "shd",
    "simulate_discrete",
    "simulate_gaussian",
    "specify_prior",
    "standardize",
    "tile_network",
    "tpr",
    "validate_prior",
    "write_data_csv",
    "write_edge_csv",
    "write_interventions",
    "write_levels",
    "write_path",
]
