"""Two-particle Anderson Hamiltonians on finite boxes and Wegner-bound checks.

Points, distributions and configs use the same JSON shapes as the CLI:
a pair point is ``[[x1...], [x2...]]``, a distribution is a dict such as
``{"kind": "uniform", "lo": 0, "hi": 1}``.
"""

import json

import numpy as np

from . import _core
from ._core import PreconditionError, TheoremViolation

__version__ = _core.__version__

__all__ = [
    "PreconditionError",
    "TheoremViolation",
    "box_size",
    "classify_separation",
    "cli",
    "concentration",
    "dist_between_spectra",
    "dist_to_energy",
    "distance_condition",
    "eigenvalues",
    "hamiltonian",
    "projection_union_size",
    "run_single_volume",
    "run_two_volume",
    "stollmann_exact",
    "sup_norm_pair",
]


def _j(obj):
    return json.dumps(obj)


def sup_norm_pair(a, b):
    return _core.sup_norm_pair(_j(a), _j(b))


def box_size(center, radius):
    return _core.box_size(_j(center), radius)


def projection_union_size(center, radius):
    return _core.projection_union_size(_j(center), radius)


def distance_condition(u, u_prime, radius):
    return _core.distance_condition(_j(u), _j(u_prime), radius)


def classify_separation(u, u_prime, radius):
    """Names of the separation relations that hold, e.g. ``["A", "D"]``."""
    return _core.classify_separation(_j(u), _j(u_prime), radius)


def concentration(distribution, eps):
    return _core.concentration(_j(distribution), eps)


def hamiltonian(config, field):
    """Dense matrix of the box Hamiltonian.

    ``field`` maps sites to potential values, either as a dict keyed by
    coordinate tuples or as a list of ``[[coords...], value]`` entries.
    """
    if isinstance(field, dict):
        field = [[list(k) if isinstance(k, (tuple, list)) else [k], v] for k, v in field.items()]
    return np.asarray(_core.hamiltonian(_j(config), _j(field)))


def eigenvalues(matrix):
    return np.asarray(_core.eigenvalues(np.asarray(matrix, dtype=float)))


def dist_to_energy(spectrum, energy):
    return _core.dist_to_energy(list(map(float, spectrum)), energy)


def dist_between_spectra(a, b):
    return _core.dist_between_spectra(list(map(float, a)), list(map(float, b)))


def run_single_volume(config, threads=1):
    return json.loads(_core.run_single_volume(_j(config), threads))


def run_two_volume(config, threads=1):
    return json.loads(_core.run_two_volume(_j(config), threads))


def stollmann_exact(function, arity, distribution, interval):
    """Returns ``(probability, bound, holds)`` by exact enumeration."""
    lower, upper = interval
    return _core.stollmann_exact(function, arity, _j(distribution), lower, upper)


def cli(*args):
    """Runs a CLI subcommand in-process; returns ``(exit_code, stdout, stderr)``."""
    return _core.cli([str(a) for a in args])
