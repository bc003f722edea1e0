"""Exact and certified computations on squared Farey gaps."""

__version__ = "0.1.0"

from .numeric import Interval, constants, interval_log, rational_to_interval  # noqa: E402
from .sieve import SieveTables, build_sieve, farey_count  # noqa: E402
from .stream import FareyFraction, RationalInterval, farey_iter, neighbor_pairs  # noqa: E402
from .spacing import s2_direct, s2_moebius, s2_omega  # noqa: E402
from .asymptotics import C_of_Q, G, main_term, r14_bound, verify_conjecture  # noqa: E402

__all__ = [
    "Interval", "constants", "interval_log", "rational_to_interval",
    "SieveTables", "build_sieve", "farey_count",
    "FareyFraction", "RationalInterval", "farey_iter", "neighbor_pairs",
    "s2_direct", "s2_moebius", "s2_omega",
    "C_of_Q", "G", "main_term", "r14_bound", "verify_conjecture",
]
