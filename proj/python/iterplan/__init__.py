"""Iterator-based task planning for a fixed-wing UAV."""

from ._core import (
    IterplanError,
    builtin_names,
    canonical_spec,
    cover_scenario,
    csv_header,
    id_of,
    name_of,
    ordered_patrol_scenario,
    plan_trajectory,
    plot_csv,
    run_config,
    sort_order,
    synthesize,
)

__all__ = [
    "IterplanError",
    "builtin_names",
    "canonical_spec",
    "cover_scenario",
    "csv_header",
    "id_of",
    "name_of",
    "ordered_patrol_scenario",
    "plan_trajectory",
    "plot_csv",
    "run_config",
    "sort_order",
    "synthesize",
]
