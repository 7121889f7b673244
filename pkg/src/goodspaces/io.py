"""Loaders for the on-disk formats: group tables, actions, integer representations.

Table file: whitespace-separated integers; first the order n, then the n*n
entries of the multiplication table row by row (identity is inferred).

Action file (JSON)::

    {"actor": "C(2)", "target": "C(3)", "generators": {"1": [0, 2, 1]}}

``actor`` and ``target`` are finite group expressions in the DSL.  Keys of
``generators`` are actor element names (falling back to decimal indices);
values are the images of target elements 0..n-1.  ``"images"`` may replace
``"generators"`` with one permutation per actor element.

Representation file: JSON ``{"rank": r, "generators": [[[...]...]...]}`` or
plain text ``r count`` followed by the count*r*r entries row-major.
"""
from __future__ import annotations

import json
from pathlib import Path

from .actions import FiniteAction, action_from_generators, build_action
from .errors import ResourceLimitError, ValidationError
from .exprcalc import finite_group_of, finite_order, parse_group_expr
from .groups import FiniteGroup, build_group, element_by_name, explicit
from .zlattice import IntegerRepresentation


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise ValidationError(f"{what}: non-integer entry ({exc})") from None


def parse_table(text: str) -> FiniteGroup:
    nums = _ints(text, "table file")
    if not nums:
        raise ValidationError("table file is empty")
    n = nums[0]
    if n < 1 or len(nums) != 1 + n * n:
        raise ValidationError(f"table file: expected order then {n}*{n} entries, got {len(nums) - 1}")
    rows = [nums[1 + i * n : 1 + (i + 1) * n] for i in range(n)]
    return build_group(explicit(rows))


def load_table(path: str | Path) -> FiniteGroup:
    return parse_table(Path(path).read_text())


def finite_group_from_text(text: str) -> FiniteGroup:
    e = parse_group_expr(text)
    if finite_order(e) is None:
        raise ValidationError(f"{text} is not a finite group")
    G = finite_group_of(e)
    if G is None:
        raise ResourceLimitError(f"{text} is too large to tabulate")
    return G


def _element(G: FiniteGroup, key: str) -> int:
    try:
        return element_by_name(G, key)
    except ValidationError:
        pass
    try:
        g = int(key)
    except ValueError:
        raise ValidationError(f"unknown actor element {key!r}") from None
    if not 0 <= g < G.order:
        raise ValidationError(f"actor element index {g} out of range")
    return g


def action_from_dict(data: dict) -> FiniteAction:
    if not isinstance(data, dict):
        raise ValidationError("action file must hold a JSON object")
    for key in ("actor", "target"):
        if not isinstance(data.get(key), str):
            raise ValidationError(f"action file needs a string {key!r}")
    actor = finite_group_from_text(data["actor"])
    target = finite_group_from_text(data["target"])
    if "images" in data:
        return build_action(actor, target, data["images"])
    gens = data.get("generators")
    if not isinstance(gens, dict):
        raise ValidationError("action file needs 'generators' (object) or 'images' (list)")
    if not gens:
        if actor.order == 1:
            return build_action(actor, target, [list(target.elements)])
        raise ValidationError("empty generator list for a nontrivial actor")
    return action_from_generators(actor, target, {_element(actor, k): v for k, v in gens.items()})


def load_action(path: str | Path) -> FiniteAction:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"action file is not valid JSON: {exc}") from None
    return action_from_dict(data)


def parse_representation(text: str, max_order: int = 24) -> IntegerRepresentation:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"representation file is not valid JSON: {exc}") from None
        try:
            return IntegerRepresentation(int(data["rank"]), tuple(data["generators"]), max_order)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"representation JSON needs 'rank' and 'generators' ({exc})") from None
    nums = _ints(text, "representation file")
    if len(nums) < 2:
        raise ValidationError("representation file: expected rank and generator count")
    r, count = nums[:2]
    if r < 1 or count < 0 or len(nums) != 2 + count * r * r:
        raise ValidationError(f"representation file: expected {count}*{r}*{r} entries after the header")
    body = nums[2:]
    gens = tuple(
        tuple(tuple(body[k * r * r + i * r : k * r * r + (i + 1) * r]) for i in range(r)) for k in range(count)
    )
    return IntegerRepresentation(r, gens, max_order)


def load_representation(path: str | Path, max_order: int = 24) -> IntegerRepresentation:
    return parse_representation(Path(path).read_text(), max_order)
