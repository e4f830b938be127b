#!/usr/bin/env python3
"""Drive every bundled fixture through the engine and print the result tables.

Usage: python scripts/run_examples.py [--seed N]
"""

import argparse

from reqplan.project_io import load_fixture
from reqplan import reports


def section(title):
    print(f"\n=== {title} " + "=" * max(0, 68 - len(title)))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    early = load_fixture("early_re.json")
    section("group utility ranking (early requirements)")
    print(reports.render_table(reports.prioritize_payload(early)))

    sparse = load_fixture("sparse_ratings.json")
    section("matrix completion of the sparse relevance table")
    print(reports.render_table(reports.complete_payload(sparse, seed=args.seed)))

    basic = load_fixture("basic_planning.json")
    section("minimum viable product selection")
    print(reports.render_table(reports.mvp_payload(basic)))
    section("consensus release plan from stakeholder wishes")
    print(reports.render_table(reports.consensus_payload(basic)))

    release = load_fixture("release_planning.json")
    section("constraint-based plan (hard dependencies + preferences)")
    print(reports.render_table(reports.plan_payload(release)))
    section("minimal conflicts against the dependencies")
    print(reports.render_table(reports.conflicts_payload(release)))
    section("minimal conflicts, consensus semantics (no dependencies)")
    print(reports.render_table(reports.conflicts_payload(release, background=False)))
    section("minimal diagnosis")
    print(reports.render_table(reports.diagnose_payload(release)))

    keywords = load_fixture("keyword_match.json")
    section("stakeholder-requirement similarity")
    print(reports.render_table(reports.assign_payload(keywords)))


if __name__ == "__main__":
    main()
