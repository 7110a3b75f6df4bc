"""Exact intersection theory for snc pairs, log Chern invariants and degree-zero DT series."""

from .chowring import ChowClass, ChowRing, make_ring, normal_form
from .cobordism import FormalSum, Relation, bundle_pair, check_relation, decompose3, normal_cone_relation, product
from .dtseries import RationalSeries, macmahon, plane_partition_count, pow_rational, z_series
from .errors import LogcobError
from .logchern import Partition, alpha, c_lambda, log_tangent_chern, nu, tensor_line_chern
from .varieties import (
    DivisorComponent,
    Proj,
    Product,
    ProjBundle,
    SncPair,
    build_chow,
    builtin,
    builtin_pairs,
    section_classes,
    tangent_chern,
    validate_pair,
)

__version__ = "0.1.0"
