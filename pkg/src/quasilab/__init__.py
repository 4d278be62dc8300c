"""Finite-horizon experiments on two minimal systems.

The Morse-square subshift and the skew product ``(x, y) -> (x + alpha, x + y)``
on the two-torus, with finite closed sets, time nets approximating
enveloping-semigroup elements, cluster sets along nets, and recurrence,
proximality and quasifactor probes.  ``quasilab.harness`` runs JSON scenario
configs; ``python -m quasilab`` is the command line front end.
"""
from .hyperspace import FiniteClosedSet, closed_set, hausdorff
from .limits import (
    ClusterSet,
    EmptyNetError,
    TimeNet,
    cluster_set,
    compose_nets,
    constant_net,
    d_star_estimate,
    proximal_pair,
    quasifactor_check,
    recurrence_report,
    timenet_for_idempotent,
    torus_identity_net,
)
from .spaces import FURSTENBERG, MORSE_SQUARE, SymbolicPoint, SystemSpec, TorusPoint, shift_point
from .symbolic import A, ABAR, B, BBAR, TABLES, U1, U2, V1, V2, base_point
from .torus import skew_power, verify_dT_density

__version__ = "0.1.0"

__all__ = [
    "A", "ABAR", "B", "BBAR", "ClusterSet", "EmptyNetError", "FURSTENBERG", "FiniteClosedSet",
    "MORSE_SQUARE", "SymbolicPoint", "SystemSpec", "TABLES", "TimeNet", "TorusPoint", "U1", "U2",
    "V1", "V2", "base_point", "closed_set", "cluster_set", "compose_nets", "constant_net",
    "d_star_estimate", "hausdorff", "proximal_pair", "quasifactor_check", "recurrence_report",
    "shift_point", "skew_power", "timenet_for_idempotent", "torus_identity_net", "verify_dT_density",
]
