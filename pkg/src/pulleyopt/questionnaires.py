"""Scoring for the SUS, Van der Laan acceptance scale and a modified UEQ."""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

SUS_ITEMS = 10
VDL_ITEMS = 9
# 1-based items worded in the opposite direction on the Van der Laan form
VDL_REVERSED = (3, 6, 8)
VDL_USEFULNESS = (1, 3, 5, 7, 9)
VDL_SATISFYING = (2, 4, 6, 8)


class ResponseError(ValueError):
    pass


def _check_items(items, n, low, high, what):
    items = list(items)
    if n is not None and len(items) != n:
        raise ResponseError(f"{what}: expected {n} items, got {len(items)}")
    if not items:
        raise ResponseError(f"{what}: no items")
    for i, v in enumerate(items, start=1):
        if isinstance(v, bool) or int(v) != v:
            raise ResponseError(f"{what}: item {i} is not an integer ({v!r})")
        if not low <= v <= high:
            raise ResponseError(f"{what}: item {i} = {v} outside [{low}, {high}]")
    return tuple(int(v) for v in items)


@dataclass(frozen=True)
class SusResponse:
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", _check_items(self.items, SUS_ITEMS, 1, 5, "SUS"))


@dataclass(frozen=True)
class VanDerLaanResponse:
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", _check_items(self.items, VDL_ITEMS, -2, 2, "Van der Laan"))


@dataclass(frozen=True)
class UeqResponse:
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", _check_items(self.items, None, -2, 2, "UEQ"))


def sus_score(r: SusResponse | Sequence[int]) -> float:
    """0-100. Odd items contribute ``x - 1``, even items ``5 - x``; sum times 2.5."""
    if not isinstance(r, SusResponse):
        r = SusResponse(tuple(r))
    total = sum((x - 1) if i % 2 == 1 else (5 - x) for i, x in enumerate(r.items, start=1))
    return 2.5 * total


def vanderlaan_scores(r: VanDerLaanResponse | Sequence[int]) -> dict:
    """Usefulness and satisfying subscale means, each in [-2, 2]."""
    if not isinstance(r, VanDerLaanResponse):
        r = VanDerLaanResponse(tuple(r))
    signed = {i: (-x if i in VDL_REVERSED else x) for i, x in enumerate(r.items, start=1)}
    return {
        "usefulness": sum(signed[i] for i in VDL_USEFULNESS) / len(VDL_USEFULNESS),
        "satisfying": sum(signed[i] for i in VDL_SATISFYING) / len(VDL_SATISFYING),
    }


def ueq_score(responses: Sequence[UeqResponse | Sequence[int]]) -> dict:
    responses = [r if isinstance(r, UeqResponse) else UeqResponse(tuple(r)) for r in responses]
    if not responses:
        raise ResponseError("UEQ: no respondents")
    n_items = {len(r.items) for r in responses}
    if len(n_items) != 1:
        raise ResponseError(f"UEQ: ragged item counts {sorted(n_items)}")
    per_respondent = [statistics.fmean(r.items) for r in responses]
    per_item = [statistics.fmean(col) for col in zip(*(r.items for r in responses))]
    return {
        "per_item_mean": per_item,
        "per_respondent_mean": per_respondent,
        "median": statistics.median(per_respondent),
    }


def read_responses(path, n_items: int | None = None, low: int = -2, high: int = 2) -> list:
    """One respondent per row; integer item columns. An optional leading
    non-numeric ``id`` column is skipped.

    Returns ``[(respondent_id, items), ...]``; errors name line and column.
    """
    path = Path(path)
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ResponseError(f"{path}: empty file") from None
        has_id = bool(header) and header[0].lower() in ("id", "respondent", "participant")
        item_cols = header[1:] if has_id else header
        if n_items is not None and len(item_cols) != n_items:
            raise ResponseError(f"{path}:1: expected {n_items} item columns, got {len(item_cols)}")
        for line, record in enumerate(reader, start=2):
            if not record or all(not c.strip() for c in record):
                continue
            if len(record) != len(header):
                raise ResponseError(f"{path}:{line}: expected {len(header)} fields, got {len(record)}")
            rid = record[0].strip() if has_id else str(line - 1)
            cells = record[1:] if has_id else record
            items = []
            for col, cell in zip(item_cols, cells):
                try:
                    v = int(cell.strip())
                except ValueError:
                    raise ResponseError(f"{path}:{line}: column '{col}': not an integer: {cell!r}") from None
                if not low <= v <= high:
                    raise ResponseError(f"{path}:{line}: column '{col}': {v} outside [{low}, {high}]")
                items.append(v)
            out.append((rid, tuple(items)))
    return out
