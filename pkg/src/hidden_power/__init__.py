"""Interpolation and identity testing of a hidden monic polynomial from its power oracle."""

from .ff import FieldCtx, validate_params
from .group import SubgroupCtx, amm_root, bsgs_dlog, subgroup_generator
from .idtest import known_g_test, medium_e_budget, prefix_test, randomized_test, small_e_budget
from .interp import InterpConfig, InterpResult, naive_interpolate, randomized_interpolate
from .oracle import LocalOracle, PowerOracle, RemoteOracle
from .poly import MonicPoly, monic_interpolate, random_monic

__version__ = "0.1.0"
