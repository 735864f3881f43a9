"""
Ant prompt texts and renderers

ants/v9 is the deployed prompt. v1-v8 are the earlier tuning iterations,
kept for ablation runs: v1-v4 show numeric sensor readings, v5 onward
directional cues.
"""

import re
from typing import Dict, Optional

from src.ants.actions import AntPerception, Direction
from src.ants.behavior import AntSnapshot, SensorTriple
from src.utils.errors import OracleError

_V1_FORMAT = (
    'Format your actions as a Python dictionary with these keys and options:\n'
    '    "move-forward": True or False,\n'
    '    "rotate": "left", "right", or "none",\n'
    '    "pick-up-food": True or False,\n'
    '    "drop-pheromone": True or False,\n'
    '    "drop-food": True or False.\n'
    '\n'
    'You will be provided with environment information. Keep your response concise, under 35 tokens.'
)

_TASK_V1 = (
    'You are an ant in a 2D simulation tasked with finding food, marking the path to food with '
    'trails of pheromones, and using nest scent to navigate back to the nest when carrying food.'
)
_TASK_V2 = (
    'You are an ant in a 2D simulation tasked with finding food, marking the path to food with '
    'pheromone trails, and using nest scent to navigate back to the nest when carrying food. '
    'Prioritize nest scent over pheromone trails when carrying food.'
)
_GOAL = 'You are an ant in a 2D simulation. Your task is to pick up food and release it at the nest.'
_RELEASE = 'Release pheromone on food source and while you are carrying food.'
_NEST = 'Use nest scent to navigate back to the nest when carrying food, prioritizing nest scent over pheromones.'
_NEST_ONLY = (
    'Use nest scent to navigate back to the nest only when carrying food, prioritizing nest scent over pheromones.'
)
_FOLLOW = 'Use highest pheromone scent to navigate to food when not carrying any.'
_EXPLORE = (
    'Move away from nest and rotate randomly if you are not carrying any food and you are not sensing any pheromone.'
)

_TASK_V4 = ' '.join([_GOAL, _NEST, _FOLLOW])
_TASK_V6 = ' '.join([_GOAL, _RELEASE, _NEST, _FOLLOW])
_TASK_V7 = ' '.join([_GOAL, _RELEASE, _NEST_ONLY, _FOLLOW])
_TASK_V8 = ' '.join([_GOAL, _RELEASE, _NEST_ONLY, _FOLLOW, _EXPLORE])

ANT_SYSTEM_V9 = (
    _TASK_V8 + ' Format your actions as a Python dictionary with these keys and options: \n'
    '\n'
    '   "move-forward" (options: True, False)\n'
    '   "rotate" (options: "left", "right", "none", "random" )\n'
    '   "pick-up-food" (options: True, False)\n'
    '   "drop-pheromone" (options: True, False)\n'
    '   "drop-food" (options: True, False). \n'
    '   \n'
    'You will be provided with environment information. Keep your response concise, under 45 tokens.'
)

ANT_SYSTEM_TEXTS: Dict[str, str] = {
    'v1': _TASK_V1 + '\n\n' + _V1_FORMAT,
    'v2': _TASK_V2 + '\n\n' + _V1_FORMAT,
    'v3': _TASK_V2 + '\n\n' + _V1_FORMAT,
    'v4': _TASK_V4 + '\n\n' + _V1_FORMAT,
    'v5': _TASK_V4 + '\n\n' + _V1_FORMAT,
    'v6': _TASK_V6 + '\n\n' + _V1_FORMAT,
    'v7': _TASK_V7 + '\n\n' + _V1_FORMAT,
    'v8': _TASK_V8 + '\n\n' + _V1_FORMAT,
    'v9': ANT_SYSTEM_V9,
}


def render_ant_system_prompt(version: str = 'v9') -> str:
    return ANT_SYSTEM_TEXTS[version]


def _label(direction: Direction) -> str:
    return direction.value.capitalize()


def _at_nest(value: bool) -> str:
    return 'True (You are currently at the nest)' if value else 'False (You are not currently at the nest)'


def _carrying(value: bool) -> str:
    return 'True (You are currently carrying food)' if value else 'False (You are not currently carrying food)'


def render_ant_user_prompt(p: AntPerception) -> str:
    """The deployed user prompt for one perception."""
    return (
        'This is your current environment: \n'
        f'   -Highest Pheromone Concentration: {_label(p.highest_pheromone_dir)},\n'
        f'   -Nest Presence: {_at_nest(p.nest_presence)},\n'
        f'   -Stronger Nest Scent: {_label(p.stronger_nest_scent_dir)},\n'
        f'   -Food Concentration at your location: {p.food_here},\n'
        f'   -Carrying Food Status: {_carrying(p.carrying)}.'
    )


def render_directional_user_prompt(p: AntPerception) -> str:
    """Iterations 5-8: directional cues under a plain header."""
    return (
        'Current environment:\n'
        f'    -Higher Pheromone Concentration: {_label(p.highest_pheromone_dir)},\n'
        f'    -Nest Presence: {_at_nest(p.nest_presence)},\n'
        f'    -Stronger Nest Scent: {_label(p.stronger_nest_scent_dir)},\n'
        f'    -Food Concentration at your location: {p.food_here},\n'
        f'    -Carrying Food Status: {_carrying(p.carrying)}'
    )


def _reading(value: float) -> str:
    text = f'{value:.2f}'.rstrip('0').rstrip('.')
    return '0' if text in ('', '-0') else text


def _triple(readings: SensorTriple) -> str:
    return f'Left: {_reading(readings.left)}, Front: {_reading(readings.front)}, Right: {_reading(readings.right)}'


def render_numeric_user_prompt(snapshot: AntSnapshot, clarify: bool = False) -> str:
    """
    Iterations 1-4: raw sensor readings

    With clarify set (iterations 3 and 4) the nest and carrying lines spell
    out the ant's status.
    """
    p = snapshot.perception
    nest = _at_nest(p.nest_presence) if clarify else str(p.nest_presence)
    carrying = _carrying(p.carrying) if clarify else str(p.carrying)
    return (
        'Current environment:\n'
        f'    -Pheromone concentration ({_triple(snapshot.pheromone)}),\n'
        f'    -Nest presence: {nest},\n'
        f'    -Nest scent ({_triple(snapshot.nest_scent)}),\n'
        f'    -Food concentration at your location: {p.food_here},\n'
        f'    -Carrying food status: {carrying}'
    )


def render_user_for_version(version: str, snapshot: AntSnapshot) -> str:
    if version in ('v1', 'v2'):
        return render_numeric_user_prompt(snapshot)
    if version in ('v3', 'v4'):
        return render_numeric_user_prompt(snapshot, clarify=True)
    if version == 'v9':
        return render_ant_user_prompt(snapshot.perception)
    return render_directional_user_prompt(snapshot.perception)


# -- reading a directional prompt back ----------------------------------------

_FIELD_PATTERNS = {
    'pheromone': re.compile(r'-(?:Highest|Higher) Pheromone Concentration: (Left|Front|Right|None),'),
    'nest': re.compile(r'-Nest Presence: (True|False) \(You are (?:not )?currently at the nest\),'),
    'scent': re.compile(r'-Stronger Nest Scent: (Left|Front|Right),'),
    'food': re.compile(r'-Food Concentration at your location: (\d+),'),
    'carrying': re.compile(r'-Carrying Food Status: (True|False) \(You are (?:not )?currently carrying food\)'),
}


def parse_ant_user_prompt(text: str) -> AntPerception:
    """
    Recover the perception from a directional (v5-v9) user prompt

    Raises:
        OracleError: if any field is missing
    """
    found: Dict[str, Optional[str]] = {}
    for name, pattern in _FIELD_PATTERNS.items():
        match = pattern.search(text)
        if match is None:
            raise OracleError(f"ant prompt has no readable '{name}' field: {text!r}")
        found[name] = match.group(1)

    return AntPerception(
        highest_pheromone_dir=Direction(found['pheromone'].lower()),
        nest_presence=found['nest'] == 'True',
        stronger_nest_scent_dir=Direction(found['scent'].lower()),
        food_here=int(found['food']),
        carrying=found['carrying'] == 'True',
    )
