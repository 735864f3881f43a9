"""
Boids steering: separation, alignment and cohesion as in the library flocking model
"""

from typing import Sequence

from src.core.geometry import bearing, circular_mean, turn_at_most, turn_away
from src.flocking.world import BirdDecision, BirdState, FlockParams, FlockWorld, NeighborObs, neighbors_of


def flock_decision(heading: float, neighbors: Sequence[NeighborObs], params: FlockParams) -> float:
    """
    New heading for a bird seeing `neighbors`

    A too-close nearest neighbor triggers separation only. Otherwise the bird
    aligns with the mean neighbor heading, then coheres toward the mean
    bearing of the neighbors' positions.
    """
    if not neighbors:
        return heading

    nearest = min(neighbors, key=lambda n: n.distance)
    if nearest.distance < params.minimum_separation:
        return turn_away(heading, nearest.heading, params.max_separate_turn)

    mean_heading = circular_mean(n.heading for n in neighbors)
    if mean_heading is not None:
        heading = turn_at_most(heading, mean_heading, params.max_align_turn)

    mean_bearing = circular_mean(bearing(n.rel_x, n.rel_y) for n in neighbors)
    if mean_bearing is not None:
        heading = turn_at_most(heading, mean_bearing, params.max_cohere_turn)
    return heading


def rule_based_bird_policy(world: FlockWorld, bird: BirdState, params: FlockParams) -> BirdDecision:
    neighbors = neighbors_of(world, bird, params.vision)
    return BirdDecision(new_heading=flock_decision(bird.heading, neighbors, params))
