"""
Simulation Engine

Gossip slot loop, conductance estimation and closed-form predictions.
"""

from .gossip import (
    GossipMode,
    IncrementEstimate,
    InformedSet,
    SpreadTrajectory,
    default_max_slots,
    deliver,
    draw_contacts,
    gossip_round,
    increment_estimate,
    run_spread,
    spreading_time,
    write_trajectories,
)
from .conductance import (
    AxisCut,
    ConductanceEstimate,
    CrossingEstimate,
    CutFamily,
    CutRule,
    FamilyKind,
    FixedCut,
    MixingProfile,
    QuotientKind,
    bisection,
    brute_force_min,
    cut_quotient_sample,
    edge_count_quotient,
    estimate_cut_quotient,
    evaluate_family,
    expected_crossing_edges,
    minimize_over_family,
    mixing_profile,
    write_estimates,
)
from .theory import (
    Prediction,
    PredictionKind,
    anchored_table1_phi,
    contact_pairs_integral,
    density_profile,
    mobility_connectivity_ratio,
    optimal_time_floor,
    spreading_time_bound,
    static_phi,
    table1_phi,
    velocity_phi,
    velocity_prediction,
)

__all__ = [
    # Gossip
    'GossipMode',
    'IncrementEstimate',
    'InformedSet',
    'SpreadTrajectory',
    'default_max_slots',
    'deliver',
    'draw_contacts',
    'gossip_round',
    'increment_estimate',
    'run_spread',
    'spreading_time',
    'write_trajectories',

    # Conductance
    'AxisCut',
    'ConductanceEstimate',
    'CrossingEstimate',
    'CutFamily',
    'CutRule',
    'FamilyKind',
    'FixedCut',
    'MixingProfile',
    'QuotientKind',
    'bisection',
    'brute_force_min',
    'cut_quotient_sample',
    'edge_count_quotient',
    'estimate_cut_quotient',
    'evaluate_family',
    'expected_crossing_edges',
    'minimize_over_family',
    'mixing_profile',
    'write_estimates',

    # Theory
    'Prediction',
    'PredictionKind',
    'anchored_table1_phi',
    'contact_pairs_integral',
    'density_profile',
    'mobility_connectivity_ratio',
    'optimal_time_floor',
    'spreading_time_bound',
    'static_phi',
    'table1_phi',
    'velocity_phi',
    'velocity_prediction',
]
