"""Spectral quantities of the Hill operator behind the KdV action variables.

Modules
-------
potential   band-limited zero-mean potentials, weights and norms
hill        discriminant, periodic spectrum, matrix oracle
actions     action variables on all levels, F on the bands
hierarchy   KdV Hamiltonians from the s_n recursion
verify      numerical checks of identities and estimates
corpus      the fixed ten-member test corpus
cli         command-line entry point
"""

__version__ = "0.1.0"

from .potential import Potential, Weight, sobolev_norm, weighted_norm  # noqa: E402
from .hill import discriminant, matrix_spectrum, periodic_spectrum  # noqa: E402
from .actions import action, all_actions, action_levels, action_norm, birkhoff_norm  # noqa: E402
from .hierarchy import hamiltonian, hamiltonians  # noqa: E402

__all__ = [
    "__version__",
    "Potential",
    "Weight",
    "sobolev_norm",
    "weighted_norm",
    "discriminant",
    "matrix_spectrum",
    "periodic_spectrum",
    "action",
    "all_actions",
    "action_levels",
    "action_norm",
    "birkhoff_norm",
    "hamiltonian",
    "hamiltonians",
]
