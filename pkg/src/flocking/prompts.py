"""
Flocking prompt texts, renderers and response decoding

flocking/v5 is the deployed prompt; v1-v4 are the earlier tuning iterations
and share the first iteration's user layout.
"""

import json
import math
import re
from typing import Dict, List, Optional, Sequence, Tuple

from src.flocking.world import BirdDecision, FlockParams, NeighborObs
from src.utils.errors import OracleError, ResponseParseError
from src.utils.text import find_first_object, strip_code_fences

_PRINCIPLES = (
    'determine your new heading based on the flocking principles of separation turn, alignment turn '
    '(average heading of neighbors), and coherence turn (average heading towards flockmates).'
)
_INTRO = 'You are an agent in a 2D simulation. Your task is to ' + _PRINCIPLES
_INTRO_COMPASS = 'You are an agent in a 2D simulation. Following the compass convention, your task is to ' + _PRINCIPLES
_INPUTS = (
    ' The parameters for these principles are: maximum-separate-turn, maximum-align-turn, maximum-cohere-turn, '
    'minimum-separation-distance. The simulation provides the following information: Current heading, '
    'Neighbors in vision radius.'
)
_SHORTEST_PATH = (
    ' When calculating the alignment turn, always choose the shortest path (clockwise or counterclockwise) '
    'to align with the average heading of neighbors. '
)
_PROVIDE = 'Provide your final new heading after applying these rules, expressed as an angle in degrees. '
_OUT_V1 = (
    _PROVIDE + 'The result should be in JSON format, with the key and value: "new-heading" '
    '(value: heading in degrees). Summarize your answer in no more than 120 words.'
)
_OUT_V2 = (
    _PROVIDE + 'The result should be in JSON format only, with the key and value: "new-heading" '
    '(value: heading in degrees). Summarize your answer in no more than 120 words.'
)
_OUT_V4 = (
    _PROVIDE + 'The result should be in JSON format only, with the keys and values: "rationale" '
    '(value: your explanation) and "new-heading" (value: heading in degrees).'
)
_OUT_V5 = (
    _PROVIDE + "The result should be in JSON format only, with the keys and values: 'rationale' "
    "(value: your explanation) and 'new-heading' (value: heading in degrees)."
)

FLOCK_SYSTEM_TEXTS: Dict[str, str] = {
    'v1': _INTRO + _INPUTS + '\n\n' + _OUT_V1,
    'v2': _INTRO + _INPUTS + '\n\n' + _OUT_V2,
    'v3': _INTRO_COMPASS + _INPUTS + '\n\n' + _OUT_V2,
    'v4': _INTRO_COMPASS + _INPUTS + '\n\n' + _OUT_V4,
    'v5': _INTRO_COMPASS + _INPUTS + _SHORTEST_PATH + '\n\n' + _OUT_V5,
}


def _deg(heading: float) -> int:
    return int(round(heading)) % 360


def _coord(value: float) -> str:
    text = f'{value:.2f}'
    return '0.00' if text == '-0.00' else text


def _neighbor_list(neighbors: Sequence[NeighborObs]) -> str:
    if not neighbors:
        return 'none'
    return ', '.join(
        f'neighbor_{k}: x: {_coord(n.rel_x)}, y: {_coord(n.rel_y)}, heading: {_deg(n.heading)} deg'
        for k, n in enumerate(neighbors, 1)
    )


def render_bird_user_prompt(heading: float, params: FlockParams, neighbors: Sequence[NeighborObs]) -> str:
    return (
        'These are the flocking parameters: \n'
        f'   -Maximum separate turn: {params.max_separate_turn:g}, \n'
        f'   -Maximum align turn: {params.max_align_turn:g}, \n'
        f'   -Maximum cohere turn: {params.max_cohere_turn:g}, \n'
        f'   -Minimum separation: {params.minimum_separation:g}; \n'
        '   \n'
        'This is your current environment: \n'
        f'   -Current heading: {_deg(heading)} deg, \n'
        f'   -Neighbors in vision radius: {_neighbor_list(neighbors)};'
    )


def render_first_layout_user_prompt(heading: float, params: FlockParams, neighbors: Sequence[NeighborObs]) -> str:
    """User layout of the earliest iterations (v1-v4)."""
    return (
        'These are the flocking parameters:\n'
        '\n'
        f'    Maximum separate turn: {params.max_separate_turn:g}\n'
        f'    Maximum align turn: {params.max_align_turn:g}\n'
        f'    Maximum cohere turn: {params.max_cohere_turn:g}\n'
        f'    Minimum separation: {params.minimum_separation:g}\n'
        '\n'
        'This is your current environment:\n'
        '\n'
        f'    Current heading: {_deg(heading)} deg\n'
        f'    Neighbors in vision radius: {_neighbor_list(neighbors)}'
    )


def render_bird_prompts(
    bird, params: FlockParams, neighbors: Sequence[NeighborObs], version: str = 'v5'
) -> Tuple[str, str]:
    """(system, user) texts for a bird; `bird` is anything with a heading."""
    system = FLOCK_SYSTEM_TEXTS[version]
    if version == 'v5':
        return system, render_bird_user_prompt(bird.heading, params, neighbors)
    return system, render_first_layout_user_prompt(bird.heading, params, neighbors)


# -- responses -----------------------------------------------------------------

_HEADING_VALUE = re.compile(
    r"[\"']new[-_]heading[\"']\s*:\s*([-+]?\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)", re.IGNORECASE
)
_RATIONALE_VALUE = re.compile(
    r"[\"']rationale[\"']\s*:\s*(.*?)\s*,?\s*[\"']new[-_]heading[\"']", re.IGNORECASE | re.DOTALL
)


def _decision(heading: float, rationale: Optional[str], text: str) -> BirdDecision:
    if not math.isfinite(heading):
        raise ResponseParseError(f"new-heading is not finite: {heading}", text)
    return BirdDecision(new_heading=heading, rationale=rationale)


def parse_bird_response(text: str) -> BirdDecision:
    """
    Decode an LLM reply into a BirdDecision

    Well-formed JSON objects are read directly. Replies whose rationale is not
    a quoted string (the model sometimes writes it bare) fall back to reading
    the "new-heading" value out of the text.

    Raises:
        ResponseParseError: no numeric new-heading found
    """
    if not isinstance(text, str):
        raise ResponseParseError(f"expected text, got {type(text).__name__}", str(text))

    cleaned = strip_code_fences(text)
    body = find_first_object(cleaned)
    if body is not None:
        try:
            data = json.loads(body)
        except (ValueError, RecursionError):
            data = None
        if isinstance(data, dict):
            normalized = {str(k).strip().lower().replace('_', '-'): v for k, v in data.items()}
            if 'new-heading' not in normalized:
                raise ResponseParseError("response has no 'new-heading' key", text)
            value = normalized['new-heading']
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ResponseParseError(f"new-heading is not numeric: {value!r}", text)
            rationale = normalized.get('rationale')
            try:
                heading = float(value)
            except OverflowError:
                raise ResponseParseError(f"new-heading is out of range: {value}", text) from None
            return _decision(heading, None if rationale is None else str(rationale), text)

    match = _HEADING_VALUE.search(cleaned)
    if match is None:
        raise ResponseParseError("no numeric new-heading in response", text)
    rationale_match = _RATIONALE_VALUE.search(cleaned)
    rationale = None
    if rationale_match is not None:
        rationale = rationale_match.group(1).strip().strip('"\'')
    return _decision(float(match.group(1)), rationale, text)


def format_bird_response(decision: BirdDecision) -> str:
    return json.dumps({'rationale': decision.rationale or '', 'new-heading': round(decision.new_heading, 2)})


# -- reading a user prompt back -----------------------------------------------

def _number(label: str) -> re.Pattern:
    return re.compile(re.escape(label) + r':\s*(-?\d+(?:\.\d+)?)')


_PARAM_PATTERNS = {
    'max_separate_turn': _number('Maximum separate turn'),
    'max_align_turn': _number('Maximum align turn'),
    'max_cohere_turn': _number('Maximum cohere turn'),
    'minimum_separation': _number('Minimum separation'),
}
_CURRENT_HEADING = re.compile(r'Current heading:\s*(-?\d+) deg')
_NEIGHBORS_LINE = re.compile(r'Neighbors in vision radius:\s*(.*?)\s*;?\s*$', re.DOTALL)
_NEIGHBOR = re.compile(
    r'neighbor_(\d+): x: (-?\d+(?:\.\d+)?), y: (-?\d+(?:\.\d+)?), heading: (-?\d+) deg'
)


def parse_bird_user_prompt(text: str) -> Tuple[float, Dict[str, float], List[NeighborObs]]:
    """
    Recover (heading, turn parameters, neighbors) from a rendered user prompt

    Raises:
        OracleError: if the text does not follow a known layout
    """
    values = {}
    for name, pattern in _PARAM_PATTERNS.items():
        match = pattern.search(text)
        if match is None:
            raise OracleError(f"flocking prompt has no readable '{name}': {text!r}")
        values[name] = float(match.group(1))

    heading_match = _CURRENT_HEADING.search(text)
    line_match = _NEIGHBORS_LINE.search(text)
    if heading_match is None or line_match is None:
        raise OracleError(f"flocking prompt has no heading or neighbor list: {text!r}")

    listing = line_match.group(1)
    neighbors = [
        NeighborObs(agent_id=int(k), rel_x=float(x), rel_y=float(y), heading=float(h))
        for k, x, y, h in _NEIGHBOR.findall(listing)
    ]
    if not neighbors and listing != 'none':
        raise OracleError(f"unreadable neighbor list: {listing!r}")
    return float(heading_match.group(1)), values, neighbors
