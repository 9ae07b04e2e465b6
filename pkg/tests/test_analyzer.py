import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from datause import analyzer
from datause.catalog import VenueRecord
from datause.detector import CITED_AND_MENTIONED, ONLY_CITED, ONLY_MENTIONED
from datause.harvester import PaperRecord


def make_paper(paper_id="p", venue_id="miccai", year=2015, fulltext="available",
               abstract=True, references=True):
    return PaperRecord(
        paper_id=paper_id, venue_id=venue_id, year=year, title="T",
        fulltext_status=fulltext,
        abstract_source="openalex" if abstract else "none",
        abstract_text="words" if abstract else None,
        referenced_work_ids=["W1"] if references else None,
    )


# -- group assignment -----------------------------------------------------------------


CUBE_EXPECTATIONS = {
    # (fulltext, abstract, references) -> group
    (True, True, True): analyzer.GROUP1,
    (True, False, True): analyzer.GROUP1,   # only the indexed abstract missing
    (True, True, False): analyzer.GROUP3,
    (True, False, False): analyzer.GROUP3,
    (False, True, True): analyzer.GROUP2,
    (False, True, False): analyzer.GROUP2,
    (False, False, True): analyzer.GROUP2,  # references-only processing
    (False, False, False): analyzer.DISCARDED,
}


def test_group_assignment_covers_the_full_availability_cube():
    for (fulltext, abstract, references), expected in CUBE_EXPECTATIONS.items():
        paper = make_paper(fulltext="available" if fulltext else "unavailable",
                           abstract=abstract, references=references)
        assignment = analyzer.assign_group(paper)
        assert assignment.group == expected, (fulltext, abstract, references)
        assert assignment.reason


def test_group_assignment_is_deterministic():
    paper = make_paper()
    assert analyzer.assign_group(paper) == analyzer.assign_group(paper)


def test_scraped_fulltext_counts_as_available():
    assert analyzer.assign_group(make_paper(fulltext="scraped")).group == \
        analyzer.GROUP1


def test_empty_reference_list_counts_as_missing_references():
    paper = make_paper(references=True)
    paper.referenced_work_ids = []
    assert analyzer.assign_group(paper).group == analyzer.GROUP3


# -- presence aggregation ----------------------------------------------------------------


def presence_fixture():
    papers = {}
    records = []
    spec = [(ONLY_CITED, 3), (ONLY_MENTIONED, 1), (CITED_AND_MENTIONED, 6)]
    i = 0
    for presence, count in spec:
        for _ in range(count):
            paper_id = f"p{i}"
            papers[paper_id] = make_paper(paper_id=paper_id, year=2014 + i % 5)
            records.append(analyzer.PresenceRecord(paper_id, "brats", presence))
            i += 1
    return papers, records


def test_aggregate_presence_hand_computed_fixture():
    papers, records = presence_fixture()
    summaries = analyzer.aggregate_presence(records, papers)
    assert len(summaries) == 1
    summary = summaries[0]
    assert (summary.dataset_id, summary.venue_id) == ("brats", "miccai")
    assert summary.total == 10
    assert summary.counts[ONLY_CITED] == 3
    assert summary.counts[ONLY_MENTIONED] == 1
    assert summary.counts[CITED_AND_MENTIONED] == 6
    # proportions 0.3 / 0.1 / 0.6
    assert summary.counts[ONLY_CITED] / summary.total == pytest.approx(0.3)
    assert summary.counts[ONLY_MENTIONED] / summary.total == pytest.approx(0.1)
    assert summary.counts[CITED_AND_MENTIONED] / summary.total == pytest.approx(0.6)


def test_aggregate_presence_empty_input():
    assert analyzer.aggregate_presence([], {}) == []


def test_aggregate_presence_dangling_ref():
    with pytest.raises(analyzer.DanglingPaperRef):
        analyzer.aggregate_presence(
            [analyzer.PresenceRecord("ghost", "acdc", ONLY_CITED)], {})


def test_counts_partition_the_subset():
    papers, records = presence_fixture()
    for summary in analyzer.aggregate_presence(records, papers):
        assert sum(summary.counts.values()) == summary.total


# -- cumulative series ---------------------------------------------------------------------


VENUES = [VenueRecord("miccai", "conf/miccai", "MICCAI", (2013, 2017))]


def test_single_cited_paper_step_function():
    papers = {"p0": make_paper(paper_id="p0", year=2015)}
    records = [analyzer.PresenceRecord("p0", "acdc", ONLY_CITED)]
    series = analyzer.cumulative_series(records, papers, VENUES)
    by_kind = {s.kind: s for s in series}
    assert by_kind["citations"].years == (2013, 2014, 2015, 2016, 2017)
    assert by_kind["citations"].counts == (0, 0, 1, 1, 1)
    assert by_kind["mentions"].counts == (0, 0, 0, 0, 0)


def test_cited_and_mentioned_increments_both_series():
    papers = {"p0": make_paper(paper_id="p0", year=2014)}
    records = [analyzer.PresenceRecord("p0", "acdc", CITED_AND_MENTIONED)]
    series = {s.kind: s for s in analyzer.cumulative_series(records, papers, VENUES)}
    assert series["citations"].counts == (0, 1, 1, 1, 1)
    assert series["mentions"].counts == (0, 1, 1, 1, 1)


def brute_force_prefix_sums(records, papers, years, kind):
    """Oracle: count qualifying papers per year, then running-sum by hand."""
    qualifying = {
        "citations": (ONLY_CITED, CITED_AND_MENTIONED),
        "mentions": (ONLY_MENTIONED, CITED_AND_MENTIONED),
    }[kind]
    per_year = [0] * len(years)
    for record in records:
        if record.presence in qualifying:
            year = papers[record.paper_id].year
            if years[0] <= year <= years[-1]:
                per_year[year - years[0]] += 1
    return tuple(itertools.accumulate(per_year))


def test_five_paper_fixture_matches_prefix_sum_oracle():
    plan = [(2013, ONLY_CITED), (2013, CITED_AND_MENTIONED), (2015, ONLY_MENTIONED),
            (2016, CITED_AND_MENTIONED), (2016, ONLY_CITED)]
    papers = {}
    records = []
    for i, (year, presence) in enumerate(plan):
        papers[f"p{i}"] = make_paper(paper_id=f"p{i}", year=year)
        records.append(analyzer.PresenceRecord(f"p{i}", "drive", presence))
    series = {s.kind: s for s in analyzer.cumulative_series(records, papers, VENUES)}
    years = series["citations"].years
    for kind in ("citations", "mentions"):
        assert series[kind].counts == brute_force_prefix_sums(
            records, papers, years, kind)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(min_value=2013, max_value=2017),
                          st.sampled_from([ONLY_CITED, ONLY_MENTIONED,
                                           CITED_AND_MENTIONED])),
                max_size=30))
def test_series_monotone_and_final_value_counts_distinct_papers(plan):
    papers = {}
    records = []
    for i, (year, presence) in enumerate(plan):
        papers[f"p{i}"] = make_paper(paper_id=f"p{i}", year=year)
        records.append(analyzer.PresenceRecord(f"p{i}", "x", presence))
    for series in analyzer.cumulative_series(records, papers, VENUES):
        assert all(a <= b for a, b in zip(series.counts, series.counts[1:]))
        qualifying = {
            "citations": (ONLY_CITED, CITED_AND_MENTIONED),
            "mentions": (ONLY_MENTIONED, CITED_AND_MENTIONED),
        }[series.kind]
        distinct = {r.paper_id for r in records if r.presence in qualifying}
        assert series.counts[-1] == len(distinct)


# -- index comparison -------------------------------------------------------------------


def test_identity_comparison():
    comparison = analyzer.compare_citation_indexes({"a", "b"}, {"a", "b"})
    assert (comparison.a_in_b, comparison.b_in_a) == (1.0, 1.0)


def test_four_vs_three_containment():
    comparison = analyzer.compare_citation_indexes({"x", "y", "z", "w"},
                                                   {"x", "y", "z"})
    assert comparison.a_in_b == 0.75
    assert comparison.b_in_a == 1.0


def test_swapping_arguments_swaps_the_pair():
    a, b = {"1", "2", "3"}, {"2", "3", "4", "5"}
    fwd = analyzer.compare_citation_indexes(a, b)
    rev = analyzer.compare_citation_indexes(b, a)
    assert (fwd.a_in_b, fwd.b_in_a) == (rev.b_in_a, rev.a_in_b)


def test_empty_set_containment_is_undefined_not_an_error():
    comparison = analyzer.compare_citation_indexes(set(), {"a"})
    assert comparison.a_in_b is None
    assert comparison.b_in_a == 0.0
    assert comparison.to_dict()["a_in_b"] is None
