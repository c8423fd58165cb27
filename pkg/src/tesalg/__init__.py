"""Finite-horizon timed-event-stream components and their algebra."""

from .algebra import LAWS, ProductLawReport, check_law, component_union, product, product_all, unit_component, zero_component
from .core import (
    Component,
    Coord,
    Event,
    Observation,
    Tes,
    TesError,
    closed_under_silent_insertion,
    contained,
    empty_tes,
    ev,
    grid_points,
    refines,
    silent_closure,
    tes_at,
    tes_contained,
)
from .decomposition import (
    CandidateUniverse,
    ConformanceQuery,
    ConformanceResult,
    NoCoordinator,
    NoLowerBound,
    NotDivisible,
    QuotientQuery,
    QuotientResult,
    ResourceBoundError,
    SubsetBoundExceeded,
    UniverseTooLarge,
    divide,
    enumerate_coordinators,
    enumerate_quotients,
    principal_coordinator,
    rank_interfaces,
    sound_maximal_set,
)
from .signatures import RF, SYNC, InteractionSignature, link_signature, make_rf, pointwise_signature, rf_composable, sync_composable, union_compose, velocity_of

__version__ = "0.1.0"
