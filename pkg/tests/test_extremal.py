from __future__ import annotations

import json
import multiprocessing

import pytest

from kreversible import (
    Configuration,
    ConjectureReport,
    Graph,
    ParseError,
    config_orbit_code,
    cross_validate_generator,
    expected_tree_count,
    generate_extremal_family,
    max_transient_search,
    parse_config,
    run_trajectory,
    sweep,
    verify_conjecture,
)
from kreversible.extremal import ExtremalRecord
from kreversible.serialize import CSV_COLUMNS, canonical_json, edges_to_text, records_to_csv
from kreversible.trees import canonical_code


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def test_search_path5():
    found = max_transient_search(path_graph(5), 2)
    assert found.tau_max == 2
    assert found.mod_negation_count == 1
    assert found.raw_config_count == 2
    assert found.orbit_count == 1
    assert found.records[0].config == parse_config("+-+-+", 5)


def test_search_star_against_scalar_mini_oracle():
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    found = max_transient_search(star, 2)
    taus = {
        bits: run_trajectory(star, Configuration(4, bits), 2).tau
        for bits in range(16)
        if bits & 1  # vertex 1 fixed at +1, matching the half-space sweep
    }
    tau_max = max(taus.values())
    assert found.tau_max == tau_max
    assert sorted(r.config.bits for r in found.records) == sorted(
        bits for bits, tau in taus.items() if tau == tau_max
    )


def test_search_top_tree(top_tree_n8):
    found = max_transient_search(top_tree_n8, 2)
    assert found.tau_max == 5
    assert [r.config.to_string() for r in found.records] == ["+-+-+-+-", "+-+-+--+"]
    assert found.raw_config_count == 4
    assert found.mod_negation_count == 2
    assert found.orbit_count == 1  # the two attaining starts are automorphic images


def test_search_rejects_bad_input(triangle):
    with pytest.raises(ValueError):
        max_transient_search(triangle, 2)
    with pytest.raises(ValueError):
        max_transient_search(path_graph(6), 2, limit=5)


def test_expected_tree_count_values():
    assert [expected_tree_count(n) for n in range(5, 14)] == [1, 3, 2, 4, 3, 5, 4, 6, 5]


def test_conjecture_n5_is_honest():
    # exhaustive truth at n = 5: two extremal trees, not the predicted one
    report = verify_conjecture(5)
    assert report.tau_max == 2
    assert report.expected_tau_max == 2
    assert report.tree_count == 2
    assert report.expected_tree_count == 1
    assert report.verdict == "fail"
    assert sorted(report.configs_per_tree_mod_negation.values()) == [1, 3]
    assert sorted(report.configs_per_tree_mod_automorphism.values()) == [1, 2]


def test_conjecture_small_n_passes_and_records_replay():
    for n in (6, 7, 8):
        report = verify_conjecture(n)
        assert report.verdict == "pass"
        assert report.tau_max == n - 3
        assert report.tree_count == expected_tree_count(n)
        codes = set()
        for r in report.extremal_records:
            tree = Graph.from_edges(n, r.tree_edges)
            assert canonical_code(tree).hex() == r.tree_code
            traj = run_trajectory(tree, r.config, 2)
            assert (traj.tau, traj.period) == (r.tau, r.period) == (n - 3, r.period)
            codes.add(r.tree_code)
        assert codes == set(report.configs_per_tree_raw)
        for code in codes:
            assert report.configs_per_tree_raw[code] == 2 * report.configs_per_tree_mod_negation[code]


def test_conjecture_raw_counts_match_full_space_sweep():
    n = 6
    report = verify_conjecture(n)
    seen: dict[str, int] = {}
    for r in report.extremal_records:
        if r.tree_code in seen:
            continue
        tree = Graph.from_edges(n, r.tree_edges)
        full = sweep(tree, 2, half_space=False)
        seen[r.tree_code] = int((full.taus == report.tau_max).sum())
    assert seen == report.configs_per_tree_raw


def test_conjecture_domain_errors(tmp_path):
    with pytest.raises(ValueError):
        verify_conjecture(4)
    with pytest.raises(ValueError):
        verify_conjecture(17)
    with pytest.raises(ValueError):
        verify_conjecture(6, workers=0)


def test_checkpoint_resume_roundtrip(tmp_path):
    path = tmp_path / "ledger.jsonl"
    fresh = verify_conjecture(6, checkpoint_path=path)
    lines = path.read_text().splitlines()
    assert len(lines) == 6  # one per free tree on 6 vertices

    # a second run serves everything from the ledger and appends nothing
    resumed = verify_conjecture(6, checkpoint_path=path)
    assert path.read_text().splitlines() == lines
    assert resumed.to_json_dict() == fresh.to_json_dict()

    # prefix truncation: drop the last three lines, resume, same report
    path.write_text("\n".join(lines[:3]) + "\n")
    assert verify_conjecture(6, checkpoint_path=path).to_json_dict() == fresh.to_json_dict()
    assert len(path.read_text().splitlines()) == 6

    # torn final line (killed mid-write) is dropped, truncated away, and
    # recomputed; the healed ledger must stay parseable for a further run
    path.write_text("\n".join(lines[:3]) + "\n" + lines[3][: len(lines[3]) // 2])
    assert verify_conjecture(6, checkpoint_path=path).to_json_dict() == fresh.to_json_dict()
    healed = path.read_text()
    assert healed.endswith("\n")
    assert len(healed.splitlines()) == 6
    assert all(json.loads(line) for line in healed.splitlines())
    assert verify_conjecture(6, checkpoint_path=path).to_json_dict() == fresh.to_json_dict()


def test_checkpoint_rejects_foreign_and_corrupt_ledgers(tmp_path):
    path = tmp_path / "ledger.jsonl"
    verify_conjecture(6, checkpoint_path=path)
    with pytest.raises(ParseError):
        verify_conjecture(7, checkpoint_path=path)
    with pytest.raises(ParseError):
        verify_conjecture(6, k=1, checkpoint_path=path)

    lines = path.read_text().splitlines()
    lines[1] = "{ not json"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ParseError):
        verify_conjecture(6, checkpoint_path=path)


def test_worker_count_does_not_change_the_report():
    single = verify_conjecture(9, workers=1)
    pooled = verify_conjecture(9, workers=3)
    assert pooled.to_json_dict() == single.to_json_dict()
    assert canonical_json(pooled.to_json_dict()) == canonical_json(single.to_json_dict())


def test_family_n5_golden():
    family = generate_extremal_family(5)
    assert len(family) == 1
    tree, config = family[0]
    assert tree.edges == ((0, 1), (1, 2), (2, 3), (2, 4))
    assert config == parse_config("+-+-+", 5)


def test_family_structure_and_transients():
    for n in range(5, 17):
        family = generate_extremal_family(n)
        assert len(family) == expected_tree_count(n)
        codes = {canonical_code(tree).hex() for tree, _ in family}
        assert len(codes) == len(family)  # pairwise non-isomorphic
        for tree, config in family:
            assert tree.n == n
            assert tree.num_edges == n - 1
            assert config.states == tuple(1 if i % 2 == 0 else -1 for i in range(n))
            assert run_trajectory(tree, config, 2).tau == n - 3
    with pytest.raises(ValueError):
        generate_extremal_family(4)


def test_cross_validation_passes_for_small_n():
    for n in (6, 7, 8):
        report = verify_conjecture(n)
        cv = cross_validate_generator(n, report=report)
        assert cv.verdict == "pass"
        assert cv.all_reach_bound
        assert cv.codes_match
        assert cv.configs_match
        assert cv.mismatches == ()
        assert cv.family_codes == cv.extremal_codes


def test_cross_validation_reports_the_n5_gap():
    cv = cross_validate_generator(5)
    assert cv.verdict == "fail"
    assert cv.all_reach_bound  # the generated tree itself is fine
    assert not cv.codes_match
    assert len(cv.family_codes) == 1
    assert len(cv.extremal_codes) == 2
    kinds = sorted(m.split(" ")[0] for m in cv.mismatches)
    assert any(m.startswith("extremal trees not generated:") for m in cv.mismatches)
    assert any("outside the family orbit" in m for m in cv.mismatches)
    assert len(cv.mismatches) == 2
    assert kinds == ["extremal", "tree"]


def test_orbit_code_collapses_negation_and_relabeling(p3):
    x = parse_config("+-+", 3)
    assert config_orbit_code(p3, x) == config_orbit_code(p3, parse_config("-+-", 3))
    assert config_orbit_code(p3, parse_config("++-", 3)) == config_orbit_code(
        p3, parse_config("-++", 3)
    )
    assert config_orbit_code(p3, x) != config_orbit_code(p3, parse_config("++-", 3))


def test_records_to_csv_golden():
    record = ExtremalRecord("ab", ((0, 1), (1, 2)), parse_config("+-+", 3), 1, 1)
    text = records_to_csv([record])
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1] == "ab,1-2;2-3,+-+,1,1"
    assert edges_to_text(((0, 1), (1, 2))) == "1-2;2-3"


def test_canonical_json_is_deterministic():
    a = canonical_json({"b": 1, "a": [2, 1]})
    b = canonical_json({"a": [2, 1], "b": 1})
    assert a == b
    assert a.index('"a"') < a.index('"b"')
    assert json.loads(a) == {"a": [2, 1], "b": 1}


def test_report_json_shape():
    report = verify_conjecture(6)
    d = report.to_json_dict()
    assert list(d) == [
        "n",
        "k",
        "tau_max",
        "expected_tau_max",
        "tree_count",
        "expected_tree_count",
        "extremal_records",
        "configs_per_tree_raw",
        "configs_per_tree_mod_negation",
        "configs_per_tree_mod_automorphism",
        "verdict",
    ]
    assert isinstance(report, ConjectureReport)
    for entry in d["extremal_records"]:
        assert set(entry) == {"tree_code", "edges", "config", "tau", "period"}
        assert min(min(e) for e in entry["edges"]) >= 1  # 1-based on the wire
    json.dumps(d)  # fully serializable


def test_pool_worker_entrypoint_is_importable():
    # the multiprocessing path pickles the worker by qualified name
    from kreversible.extremal import _summarize_tree

    ctx = multiprocessing.get_start_method()
    assert ctx in {"fork", "spawn", "forkserver"}
    out = _summarize_tree((5, 2, ((0, 1), (1, 2), (2, 3), (3, 4)), 16))
    assert out[2] == 2
