"""Enumerate unit-coefficient cover inequalities ``sum of k ribbons - line >= 0``."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from marginal_bell.core import Scenario, get_config, support_bitset

from .forms import LinearForm, MarginalTerm, term

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class CoverSearchResult:
    """Proven forms in lexicographic candidate order.

    ``truncated`` is set when the enumeration stopped at ``limit`` candidates
    before exhausting the template.
    """

    forms: Tuple[LinearForm, ...]
    examined: int
    truncated: bool


def _candidates(
    scenario: Scenario, target: MarginalTerm, relevant_only: bool
) -> List[MarginalTerm]:
    target_bits = support_bitset(scenario, target.settings, target.outcomes)
    pool = []
    for settings in scenario.setting_vectors():
        if settings == target.settings:
            continue
        for outcomes in scenario.outcome_tuples():
            if relevant_only and not support_bitset(scenario, settings, outcomes) & target_bits:
                continue
            pool.append(term(settings, outcomes))
    return pool


def search_covers(
    scenario: Scenario,
    k: int,
    target: Optional[MarginalTerm] = None,
    *,
    limit: Optional[int] = None,
    relevant_only: bool = True,
) -> CoverSearchResult:
    """Find every ``k``-term unit cover of ``target`` (default the all-zeros line).

    A candidate ``P_t1 + ... + P_tk - P_target`` is proven exactly when the
    union of the chosen supports contains the target support, since cells
    outside the target never carry a negative coefficient. With
    ``relevant_only`` terms whose support misses the target entirely are
    skipped; such terms can be appended to any cover and add nothing.
    """

    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if target is None:
        target = term((0,) * scenario.parties, (0,) * scenario.parties)
    target = term(
        scenario.validate_settings(target.settings), scenario.validate_outcomes(target.outcomes)
    )
    bound = get_config().search.limit if limit is None else limit

    target_bits = support_bitset(scenario, target.settings, target.outcomes)
    pool = _candidates(scenario, target, relevant_only)
    masks = [support_bitset(scenario, item.settings, item.outcomes) for item in pool]
    negative = term(target.settings, target.outcomes, -1)

    found: List[LinearForm] = []
    examined = 0
    truncated = False
    for chosen in itertools.combinations(range(len(pool)), k):
        if examined >= bound:
            truncated = True
            break
        examined += 1
        covered = 0
        for index in chosen:
            covered |= masks[index]
        if covered & target_bits == target_bits:
            found.append(
                LinearForm.build(scenario, [pool[index] for index in chosen] + [negative])
            )

    if truncated:
        logger.warning(
            "cover search stopped after %d candidates; results are partial", examined
        )
    logger.debug("cover search: %d of %d candidates proven", len(found), examined)
    return CoverSearchResult(forms=tuple(found), examined=examined, truncated=truncated)


def contains_form(result: CoverSearchResult, form: LinearForm) -> bool:
    key = form.canonical_key()
    return any(candidate.canonical_key() == key for candidate in result.forms)


__all__ = ["CoverSearchResult", "contains_form", "search_covers"]
