import pytest

from marginal_bell.core import TWO_BY_TWO, MarginalBellConfig, Scenario, set_config
from marginal_bell.inequality import (
    certify,
    contains_form,
    n_party_hardy,
    search_covers,
    term,
)


def test_three_term_covers_include_hardy_form() -> None:
    result = search_covers(TWO_BY_TWO, 3)

    assert not result.truncated
    assert contains_form(result, n_party_hardy(2))
    assert all(certify(form).proven for form in result.forms)


def test_single_ribbon_cannot_cover_a_line() -> None:
    result = search_covers(TWO_BY_TWO, 1, term((0, 0), (0, 0)))

    assert result.forms == ()
    assert result.examined > 0


def test_three_party_one_hot_template_includes_hardy() -> None:
    result = search_covers(Scenario(parties=3, settings=2), 4)

    assert contains_form(result, n_party_hardy(3))


def test_results_are_in_deterministic_order() -> None:
    first = search_covers(TWO_BY_TWO, 2, term((1, 1), (0, 1)))
    second = search_covers(TWO_BY_TWO, 2, term((1, 1), (0, 1)))

    assert [f.canonical_key() for f in first.forms] == [f.canonical_key() for f in second.forms]


def test_limit_flags_partial_results() -> None:
    result = search_covers(TWO_BY_TWO, 3, limit=10)

    assert result.truncated
    assert result.examined == 10


def test_configured_limit_applies_when_none_given() -> None:
    config = MarginalBellConfig()
    config.search.limit = 5
    set_config(config)

    assert search_covers(TWO_BY_TWO, 3).examined == 5


def test_irrelevant_terms_widen_the_pool() -> None:
    narrow = search_covers(TWO_BY_TWO, 2, relevant_only=True)
    wide = search_covers(TWO_BY_TWO, 2, relevant_only=False)

    assert wide.examined > narrow.examined
    assert len(wide.forms) >= len(narrow.forms)


def test_k_must_be_positive() -> None:
    with pytest.raises(ValueError):
        search_covers(TWO_BY_TWO, 0)
