"""
Ant action vocabulary and perception, plus decoding of LLM responses

The action dictionary has exactly the five keys the deployed prompt asks
for. Perception is categorical: directions and integer food counts only.
"""

import ast
import re
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, StrictBool, ValidationError, field_validator

from src.utils.errors import ResponseParseError
from src.utils.text import find_first_object, strip_code_fences


class Rotate(str, Enum):
    LEFT = 'left'
    RIGHT = 'right'
    NONE = 'none'
    RANDOM = 'random'


class Direction(str, Enum):
    LEFT = 'left'
    FRONT = 'front'
    RIGHT = 'right'
    NONE = 'none'


class AntAction(BaseModel):
    """One decoded ant command."""

    model_config = ConfigDict(frozen=True, extra='forbid', populate_by_name=True)

    move_forward: StrictBool = Field(alias='move-forward')
    rotate: Rotate
    pick_up_food: StrictBool = Field(alias='pick-up-food')
    drop_pheromone: StrictBool = Field(alias='drop-pheromone')
    drop_food: StrictBool = Field(alias='drop-food')

    @field_validator('rotate', mode='before')
    @classmethod
    def _lower_rotate(cls, value):
        if isinstance(value, str):
            return value.strip().lower()
        return value

    def to_prompt_dict(self) -> dict:
        """Hyphenated keys, as the prompt spells them."""
        return self.model_dump(by_alias=True, mode='json')


class AntPerception(BaseModel):
    """What an LLM ant is told about its surroundings."""

    model_config = ConfigDict(frozen=True)

    highest_pheromone_dir: Direction
    nest_presence: bool
    stronger_nest_scent_dir: Direction
    food_here: int = Field(ge=0)
    carrying: bool

    @field_validator('stronger_nest_scent_dir')
    @classmethod
    def _nest_scent_has_direction(cls, value):
        if value == Direction.NONE:
            raise ValueError('nest scent always has a strongest direction')
        return value


IDLE_ACTION = AntAction(
    move_forward=False, rotate=Rotate.NONE, pick_up_food=False, drop_pheromone=False, drop_food=False
)
FALLBACK_ACTION = AntAction(
    move_forward=False, rotate=Rotate.RANDOM, pick_up_food=False, drop_pheromone=False, drop_food=False
)

_STRING_OR_BARE = re.compile(r"(\"(?:[^\"\\]|\\.)*\"|'(?:[^'\\]|\\.)*')|\b(true|false|null)\b")
_BARE_TO_PYTHON = {'true': 'True', 'false': 'False', 'null': 'None'}


def _pythonize(literal: str) -> str:
    """Rewrite JSON-style bare words so ast.literal_eval accepts them."""

    def _swap(match: re.Match) -> str:
        if match.group(1) is not None:
            return match.group(1)
        return _BARE_TO_PYTHON[match.group(2)]

    return _STRING_OR_BARE.sub(_swap, literal)


def parse_ant_response(text: str) -> AntAction:
    """
    Decode an LLM reply into an AntAction

    Accepts Python- or JSON-style booleans, either quote style, markdown
    fences and surrounding prose. All five keys are required and no others
    are allowed.

    Raises:
        ResponseParseError: carrying the raw text, for anything else
    """
    if not isinstance(text, str):
        raise ResponseParseError(f"expected text, got {type(text).__name__}", str(text))

    body = find_first_object(strip_code_fences(text))
    if body is None:
        raise ResponseParseError("no dictionary found in response", text)

    try:
        data = ast.literal_eval(_pythonize(body))
    except (ValueError, SyntaxError, TypeError, MemoryError, RecursionError) as e:
        raise ResponseParseError(f"response dictionary is not a literal: {e}", text) from None

    if not isinstance(data, dict):
        raise ResponseParseError("response is not a key/value dictionary", text)

    normalized = {}
    for key, value in data.items():
        if not isinstance(key, str):
            raise ResponseParseError(f"non-string key {key!r}", text)
        normalized[key.strip().lower().replace('_', '-')] = value

    try:
        return AntAction.model_validate(normalized)
    except ValidationError as e:
        problems = '; '.join(
            f"{'.'.join(str(p) for p in err['loc']) or 'action'}: {err['msg']}" for err in e.errors()
        )
        raise ResponseParseError(f"invalid action ({problems})", text) from None


def format_ant_response(action: AntAction) -> str:
    """Render an action the way the deployed prompt's example reply is laid out."""

    def _value(v) -> str:
        if isinstance(v, bool):
            return 'True' if v else 'False'
        return f'"{v}"'

    lines = [f'   "{key}": {_value(value)}' for key, value in action.to_prompt_dict().items()]
    return '{\n' + ',\n'.join(lines) + '\n}'


def direction_to_rotate(direction: Optional[Direction]) -> Rotate:
    if direction == Direction.LEFT:
        return Rotate.LEFT
    if direction == Direction.RIGHT:
        return Rotate.RIGHT
    return Rotate.NONE
