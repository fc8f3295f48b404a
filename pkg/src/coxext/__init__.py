"""Permutation statistics on finite Coxeter groups and Gumbel limits of their row maxima."""

from .groups import GroupDescriptor, IrreducibleFactor, Kind, degrees, group_summary, parse_descriptor
from .statistics import (
    Moments,
    Pmf,
    Stat,
    descent_bernoulli_params,
    eulerian_pmf,
    eulerian_polynomial,
    mahonian_pmf,
    moments,
    sample,
)

__version__ = "0.1.0"

__all__ = [
    "GroupDescriptor",
    "IrreducibleFactor",
    "Kind",
    "Moments",
    "Pmf",
    "Stat",
    "degrees",
    "descent_bernoulli_params",
    "eulerian_pmf",
    "eulerian_polynomial",
    "group_summary",
    "mahonian_pmf",
    "moments",
    "parse_descriptor",
    "sample",
]
