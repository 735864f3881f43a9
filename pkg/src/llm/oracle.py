"""
Scripted oracle: a deterministic stand-in for the remote model

It reads the rendered user prompt text, applies the deployed prompt's rules
and answers in the format a well-behaved model would use, so the whole
render -> respond -> parse path runs without a network.
"""

from src.ants.actions import AntAction, format_ant_response
from src.ants.behavior import ant_decision_table
from src.ants.prompts import parse_ant_user_prompt
from src.flocking.behavior import flock_decision
from src.flocking.prompts import format_bird_response, parse_bird_user_prompt
from src.flocking.world import BirdDecision, FlockParams
from src.utils.errors import OracleError


def oracle_ant_decision(user_prompt_text: str) -> AntAction:
    return ant_decision_table(parse_ant_user_prompt(user_prompt_text))


def oracle_bird_decision(user_prompt_text: str) -> BirdDecision:
    heading, turns, neighbors = parse_bird_user_prompt(user_prompt_text)
    # vision is not part of the prompt; every listed bird is already in range
    params = FlockParams.model_construct(**turns)
    new_heading = flock_decision(heading, neighbors, params)

    if not neighbors:
        rationale = 'No neighbors in vision radius, so the heading is kept.'
    elif min(n.distance for n in neighbors) < params.minimum_separation:
        rationale = 'Nearest neighbor is closer than the minimum separation, so only a separation turn is applied.'
    else:
        rationale = (
            f'{len(neighbors)} neighbor(s) at a safe distance: aligned with their mean heading, '
            'then turned toward their mean position.'
        )
    return BirdDecision(new_heading=new_heading, rationale=rationale)


class OracleBackend:
    """Answers prompts locally; never fails on transport, raises OracleError on unreadable prompts."""

    is_remote = False
    model_name = 'scripted-oracle'

    def __init__(self, scenario: str):
        if scenario not in ('ants', 'flocking'):
            raise OracleError(f"no oracle for scenario {scenario!r}")
        self.scenario = scenario

    def body(self, system_text: str, user_text: str) -> dict:
        return {
            'model': self.model_name,
            'temperature': 0.0,
            'messages': [
                {'role': 'system', 'content': system_text},
                {'role': 'user', 'content': user_text},
            ],
        }

    def request(self, system_text: str, user_text: str) -> str:
        if self.scenario == 'ants':
            return format_ant_response(oracle_ant_decision(user_text))
        return format_bird_response(oracle_bird_decision(user_text))
