"""Exhaustive maximum-transient search over unlabeled trees at k = 2.

For each tree every initial configuration with vertex 1 fixed at +1 is swept
(global negation covers the other half); the trees attaining the global
maximum transient, together with all attaining configurations, become
ExtremalRecords. verify_conjecture aggregates a full report for one n and
compares against the expected pattern: tau_max = n - 3 and n/2 extremal
trees for even n, (n-1)/2 - 1 for odd n.

The per-tree work is embarrassingly parallel; results are merged by
canonical code, so reports are byte-identical regardless of worker count.
An append-only JSONL checkpoint ledger makes long runs resumable: completed
trees are skipped by canonical-code lookup, and a final line torn by a kill
mid-write is dropped and truncated away before new results are appended.

generate_extremal_family builds the known extremal family directly: starting
from the path on v_1..v_{n-1} with the extra leaf v_n attached at v_{n-2},
edges are swapped one position at a time, every tree paired with the
alternating configuration. cross_validate_generator checks this family
against the brute-force search.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from .dynamics import Configuration, negate, parse_config, run_trajectory
from .errors import InternalInvariantError, ParseError
from .graphs import Edge, Graph, is_tree
from .tables import sweep
from .trees import canonical_code, enumerate_free_trees

DEFAULT_EXHAUSTIVE_LIMIT = 16


@dataclass(frozen=True)
class ExtremalRecord:
    """One (tree, initial configuration) pair attaining the maximum transient."""

    tree_code: str  # canonical code, lowercase hex
    tree_edges: tuple[Edge, ...]  # 0-based, normalized
    config: Configuration
    tau: int
    period: int

    def to_json_dict(self) -> dict:
        return {
            "tree_code": self.tree_code,
            "edges": [[u + 1, v + 1] for u, v in self.tree_edges],
            "config": self.config.to_string(),
            "tau": self.tau,
            "period": self.period,
        }


def config_orbit_code(g: Graph, x: Configuration) -> bytes:
    """Canonical code of a colored tree modulo relabeling AND global negation;
    equal codes mean the configurations are the same up to symmetry."""
    colors = [(x.bits >> v) & 1 for v in range(g.n)]
    inverted = [1 - c for c in colors]
    return min(canonical_code(g, colors), canonical_code(g, inverted))


@dataclass(frozen=True)
class SearchResult:
    """Maximum transient of one tree with every attaining configuration."""

    tree_code: str
    k: int
    tau_max: int
    records: tuple[ExtremalRecord, ...]
    raw_config_count: int       # both half-spaces
    mod_negation_count: int     # representatives with vertex 1 at +1
    orbit_count: int            # distinct modulo negation + tree automorphism

    def to_json_dict(self) -> dict:
        return {
            "tree_code": self.tree_code,
            "k": self.k,
            "tau_max": self.tau_max,
            "records": [r.to_json_dict() for r in self.records],
            "raw_config_count": self.raw_config_count,
            "mod_negation_count": self.mod_negation_count,
            "orbit_count": self.orbit_count,
        }


def max_transient_search(
    tree: Graph, k: int, limit: int = DEFAULT_EXHAUSTIVE_LIMIT
) -> SearchResult:
    """Sweep every configuration of a tree (vertex 1 fixed at +1) and report
    the maximum transient with all attaining configurations.

    Every record is re-verified through the scalar trajectory path, and so is
    its global negation — the raw count being twice the modulo-negation count
    is checked, not assumed. Sweep-wide bound violations raise.
    """
    if not is_tree(tree):
        raise ValueError("extremal search is scoped to trees")
    if tree.n > limit:
        raise ValueError(f"n={tree.n} above the exhaustive limit {limit}")
    res = sweep(tree, k)
    if np.any(res.taus > res.plateau_energies + tree.n - 1):
        raise InternalInvariantError("transient exceeded plateau-energy bound")
    if np.any(res.taus > tree.n * (k + 1) - 1):
        raise InternalInvariantError("transient exceeded the tree bound n(k+1)-1")
    tau_max = res.max_tau()
    attaining = res.taus == tau_max
    code = canonical_code(tree).hex()
    records = []
    for bits, period in sorted(
        zip(res.start_bits[attaining].tolist(), res.periods[attaining].tolist())
    ):
        x = Configuration(tree.n, bits)
        for probe in (x, negate(x)):
            check = run_trajectory(tree, probe, k)
            if (check.tau, check.period) != (tau_max, period):
                raise InternalInvariantError(
                    f"sweep result for {probe} not reproduced by scalar run"
                )
        records.append(ExtremalRecord(code, tree.edges, x, tau_max, int(period)))
    orbit_count = len({config_orbit_code(tree, r.config) for r in records})
    return SearchResult(
        tree_code=code,
        k=k,
        tau_max=tau_max,
        records=tuple(records),
        raw_config_count=2 * len(records),
        mod_negation_count=len(records),
        orbit_count=orbit_count,
    )


def expected_tree_count(n: int) -> int:
    """The claimed number of extremal trees: n/2 (n even), (n-1)/2 - 1 (n odd)."""
    return n // 2 if n % 2 == 0 else (n - 1) // 2 - 1


@dataclass(frozen=True)
class ConjectureReport:
    """Aggregate result of the exhaustive search over all trees for one n.

    verdict is "pass" iff tau_max = n - 3 and the extremal tree count matches
    expected_tree_count. Configuration counts per extremal tree are reported
    raw, modulo negation, and modulo negation + automorphism, so the counting
    claim can be audited under each reading.
    """

    n: int
    k: int
    tau_max: int
    expected_tau_max: int
    tree_count: int
    expected_tree_count: int
    extremal_records: tuple[ExtremalRecord, ...]
    configs_per_tree_raw: dict[str, int]
    configs_per_tree_mod_negation: dict[str, int]
    configs_per_tree_mod_automorphism: dict[str, int]
    verdict: str

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "tau_max": self.tau_max,
            "expected_tau_max": self.expected_tau_max,
            "tree_count": self.tree_count,
            "expected_tree_count": self.expected_tree_count,
            "extremal_records": [r.to_json_dict() for r in self.extremal_records],
            "configs_per_tree_raw": dict(sorted(self.configs_per_tree_raw.items())),
            "configs_per_tree_mod_negation": dict(
                sorted(self.configs_per_tree_mod_negation.items())
            ),
            "configs_per_tree_mod_automorphism": dict(
                sorted(self.configs_per_tree_mod_automorphism.items())
            ),
            "verdict": self.verdict,
        }


# A tree summary is the unit of checkpointing and parallel work:
# (code hex, 0-based edges, tau_max, ((config string, period), ...)).
_TreeSummary = tuple[str, tuple[Edge, ...], int, tuple[tuple[str, int], ...]]


def _summarize_tree(task: tuple[int, int, tuple[Edge, ...], int]) -> _TreeSummary:
    n, k, edges, limit = task
    tree = Graph.from_edges(n, edges)
    found = max_transient_search(tree, k, limit)
    configs = tuple((r.config.to_string(), r.period) for r in found.records)
    return found.tree_code, tree.edges, found.tau_max, configs


def _load_checkpoint(path: str, n: int, k: int) -> tuple[dict[str, _TreeSummary], int]:
    """Parse a ledger, returning the completed summaries and the byte offset
    just past the last intact line.

    A final line without its terminating newline is a mid-write kill: it is
    dropped (that tree is recomputed) and the caller truncates the file to
    the returned offset so appended lines never concatenate onto the torn
    fragment. Corruption anywhere else raises ParseError.
    """
    done: dict[str, _TreeSummary] = {}
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except FileNotFoundError:
        return done, 0
    valid_end = 0
    cursor = 0
    lines = raw.split(b"\n")
    for index, line_bytes in enumerate(lines):
        end = cursor + len(line_bytes)
        cursor = end + 1
        terminated = index < len(lines) - 1  # split removed a "\n" after it
        if not line_bytes.strip():
            if terminated:
                valid_end = end + 1
            continue
        try:
            entry = json.loads(line_bytes.decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError):
            if not terminated:
                break  # killed mid-write; recompute that tree
            raise ParseError(f"checkpoint line {index + 1} is corrupt") from None
        if not terminated:
            break  # the newline never landed; treat the write as incomplete
        if entry.get("n") != n or entry.get("k") != k:
            raise ParseError(f"checkpoint line {index + 1} belongs to a different run")
        edges = tuple((u - 1, v - 1) for u, v in entry["edges"])
        configs = tuple((c, int(p)) for c, p in entry["configs"])
        done[entry["code"]] = (entry["code"], edges, int(entry["tau_max"]), configs)
        valid_end = end + 1
    return done, valid_end


def _checkpoint_line(summary: _TreeSummary, n: int, k: int) -> str:
    code, edges, tau_max, configs = summary
    return json.dumps(
        {
            "n": n,
            "k": k,
            "code": code,
            "edges": [[u + 1, v + 1] for u, v in edges],
            "tau_max": tau_max,
            "configs": [[c, p] for c, p in configs],
        },
        sort_keys=True,
    )


def verify_conjecture(
    n: int,
    k: int = 2,
    workers: int = 1,
    checkpoint_path: str | os.PathLike | None = None,
    limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> ConjectureReport:
    """Exhaustively search every tree on n vertices and build the report.

    The verdict compares against the k = 2 pattern (tau_max = n - 3 and the
    expected extremal tree count); other k values run fine but the verdict
    then simply records whether the k = 2 pattern happens to hold.
    """
    if n < 5:
        raise ValueError(f"the transient pattern is scoped to n >= 5, got n={n}")
    if n > limit:
        raise ValueError(f"n={n} above the exhaustive limit {limit}")
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    summaries: dict[str, _TreeSummary] = {}
    valid_end = 0
    if checkpoint_path is not None:
        loaded, valid_end = _load_checkpoint(os.fspath(checkpoint_path), n, k)
        summaries.update(loaded)

    pending = [
        (n, k, tree.edges, limit)
        for tree in enumerate_free_trees(n)
        if canonical_code(tree).hex() not in summaries
    ]

    ledger = None
    if checkpoint_path is not None:
        ledger = open(checkpoint_path, "a", encoding="utf-8")
        ledger.truncate(valid_end)  # drop any torn tail before appending
    try:

        def collect(produced) -> None:
            for summary in produced:
                summaries[summary[0]] = summary
                if ledger is not None:
                    ledger.write(_checkpoint_line(summary, n, k) + "\n")
                    ledger.flush()

        if workers == 1 or len(pending) < 2:
            collect(map(_summarize_tree, pending))
        else:
            with Pool(processes=workers) as pool:
                chunk = max(1, len(pending) // (8 * workers))
                collect(pool.imap_unordered(_summarize_tree, pending, chunksize=chunk))
    finally:
        if ledger is not None:
            ledger.close()

    tau_max = max(s[2] for s in summaries.values())
    records: list[ExtremalRecord] = []
    raw: dict[str, int] = {}
    mod_neg: dict[str, int] = {}
    mod_auto: dict[str, int] = {}
    for code in sorted(summaries):
        _, edges, tree_tau, configs = summaries[code]
        if tree_tau != tau_max:
            continue
        tree = Graph.from_edges(n, edges)
        orbit_codes = set()
        for config_str, period in sorted(configs):
            x = parse_config(config_str, n)
            records.append(ExtremalRecord(code, edges, x, tau_max, period))
            orbit_codes.add(config_orbit_code(tree, x))
        raw[code] = 2 * len(configs)
        mod_neg[code] = len(configs)
        mod_auto[code] = len(orbit_codes)
    verdict = "pass" if tau_max == n - 3 and len(raw) == expected_tree_count(n) else "fail"
    return ConjectureReport(
        n=n,
        k=k,
        tau_max=tau_max,
        expected_tau_max=n - 3,
        tree_count=len(raw),
        expected_tree_count=expected_tree_count(n),
        extremal_records=tuple(records),
        configs_per_tree_raw=raw,
        configs_per_tree_mod_negation=mod_neg,
        configs_per_tree_mod_automorphism=mod_auto,
        verdict=verdict,
    )


def _ordered_pair(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def generate_extremal_family(n: int) -> list[tuple[Graph, Configuration]]:
    """Build the extremal family directly, without searching.

    Tree 1 is the path v_1..v_{n-1} with the extra leaf v_n attached at
    v_{n-2}; each odd position i = 3, 5, ... up to n - 3 swaps the edge
    (v_i, v_{i-1}) for (v_{i-1}, v_{i+1}) and emits the tree; for even n one
    final swap replaces (v_{n-2}, v_n) with (v_{n-3}, v_n). Every tree is
    paired with the alternating configuration (+1 at odd positions).
    """
    if n < 5:
        raise ValueError(f"the extremal family is defined for n >= 5, got n={n}")
    current: set[Edge] = {(i, i + 1) for i in range(n - 2)}
    current.add((n - 3, n - 1))
    config = Configuration.from_states([1 if i % 2 == 0 else -1 for i in range(n)])
    family = [(Graph.from_edges(n, sorted(current)), config)]
    for i in range(3, n - 2):  # positions are 1-based in the construction
        if i % 2 == 1:
            current.remove(_ordered_pair(i - 1, i - 2))
            current.add(_ordered_pair(i - 2, i))
            family.append((Graph.from_edges(n, sorted(current)), config))
        if i == n - 3 and n % 2 == 0:
            current.remove(_ordered_pair(i, i + 2))
            current.add(_ordered_pair(i - 1, i + 2))
            family.append((Graph.from_edges(n, sorted(current)), config))
    return family


@dataclass(frozen=True)
class CrossValidation:
    """Comparison of the direct family against the brute-force search.

    Checks: (a) every family pair simulates to tau = n - 3 at k = 2;
    (b) the family's canonical codes equal the extremal tree codes;
    (c) per tree, the family configuration is itself extremal and every
    extremal configuration is equivalent to it modulo negation + automorphism.
    """

    n: int
    expected_tau: int
    all_reach_bound: bool
    family_codes: tuple[str, ...]
    extremal_codes: tuple[str, ...]
    codes_match: bool
    configs_match: bool
    mismatches: tuple[str, ...]
    verdict: str

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "expected_tau": self.expected_tau,
            "all_reach_bound": self.all_reach_bound,
            "family_codes": list(self.family_codes),
            "extremal_codes": list(self.extremal_codes),
            "codes_match": self.codes_match,
            "configs_match": self.configs_match,
            "mismatches": list(self.mismatches),
            "verdict": self.verdict,
        }


def cross_validate_generator(
    n: int,
    workers: int = 1,
    checkpoint_path: str | os.PathLike | None = None,
    limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    report: ConjectureReport | None = None,
) -> CrossValidation:
    """Validate generate_extremal_family against the exhaustive search at
    k = 2. Failures land in the verdict, not in exceptions."""
    family = generate_extremal_family(n)
    mismatches: list[str] = []

    all_reach = True
    for index, (tree, x) in enumerate(family, start=1):
        tau = run_trajectory(tree, x, 2).tau
        if tau != n - 3:
            all_reach = False
            mismatches.append(f"family tree {index} reaches tau={tau}, expected {n - 3}")

    if report is None:
        report = verify_conjecture(n, 2, workers, checkpoint_path, limit)

    family_by_code: dict[str, tuple[Graph, Configuration]] = {}
    for tree, x in family:
        code = canonical_code(tree).hex()
        if code in family_by_code:
            mismatches.append(f"family emits isomorphic duplicates ({code})")
        family_by_code[code] = (tree, x)
    family_codes = tuple(sorted(family_by_code))
    extremal_codes = tuple(sorted({r.tree_code for r in report.extremal_records}))
    codes_match = family_codes == extremal_codes and len(family_by_code) == len(family)
    if not codes_match:
        missing = set(extremal_codes) - set(family_codes)
        extra = set(family_codes) - set(extremal_codes)
        if missing:
            mismatches.append(f"extremal trees not generated: {sorted(missing)}")
        if extra:
            mismatches.append(f"generated trees not extremal: {sorted(extra)}")

    configs_match = True
    for code, (tree, x) in sorted(family_by_code.items()):
        found = [r for r in report.extremal_records if r.tree_code == code]
        if not found:
            configs_match = False
            continue  # already reported as a code mismatch
        # records live on the enumeration labeling, the family tree on its
        # own; orbit codes are the labeling-invariant comparison
        orbits = {config_orbit_code(Graph.from_edges(n, r.tree_edges), r.config) for r in found}
        if orbits != {config_orbit_code(tree, x)}:
            configs_match = False
            mismatches.append(
                f"tree {code} has extremal configurations outside the family orbit"
            )

    verdict = "pass" if all_reach and codes_match and configs_match else "fail"
    return CrossValidation(
        n=n,
        expected_tau=n - 3,
        all_reach_bound=all_reach,
        family_codes=family_codes,
        extremal_codes=extremal_codes,
        codes_match=codes_match,
        configs_match=configs_match,
        mismatches=tuple(mismatches),
        verdict=verdict,
    )
