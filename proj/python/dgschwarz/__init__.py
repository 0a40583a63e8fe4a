"""hp-DG discretization and two-level Schwarz preconditioning on polygonal meshes."""

from ._core import (
    ConfigError,
    Mesh,
    MeshError,
    SolverError,
    agglomerate,
    assemble_sipdg,
    default_config,
    fit_loglog_slope,
    lshape16,
    quad_grid,
    random_rhs,
    read_mesh,
    refine_cells,
    run_experiment,
    solve_two_level,
    solve_unpreconditioned,
    voronoi,
    write_mesh,
)

__all__ = [
    "ConfigError",
    "Mesh",
    "MeshError",
    "SolverError",
    "agglomerate",
    "assemble_sipdg",
    "default_config",
    "fit_loglog_slope",
    "lshape16",
    "quad_grid",
    "random_rhs",
    "read_mesh",
    "refine_cells",
    "run_experiment",
    "solve_two_level",
    "solve_unpreconditioned",
    "voronoi",
    "write_mesh",
]
