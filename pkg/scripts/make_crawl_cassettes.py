#!/usr/bin/env python3
"""Regenerate the bundled replay cassettes for the crawl demo.

The set covers two search pages for language=go (with one off-language
item and one pre-cutover item mixed in as server noise) plus the PR
detail, file list, and content lookups for every Go pull request.
"""

from __future__ import annotations

import shutil
from pathlib import Path

from codeagent.ingest.apiclient import write_fixture

CASSETTE_DIR = Path(__file__).resolve().parent.parent / (
    "src/codeagent/fixtures/data/cassettes"
)

SINCE = "2023-04-01"
PER_PAGE = 50

GO_PRS = [
    # (repo, number, sha, created_at, merged)
    ("demo/gateway", 11, "a1" * 20, "2023-05-02T09:00:00Z", True),
    ("demo/gateway", 14, "b2" * 20, "2023-05-20T10:30:00Z", False),
    ("demo/scheduler", 3, "c3" * 20, "2023-06-11T16:45:00Z", True),
    ("demo/scheduler", 8, "d4" * 20, "2023-07-01T08:15:00Z", True),
    ("demo/parser", 21, "e5" * 20, "2023-07-19T13:00:00Z", False),
    ("demo/parser", 27, "f6" * 20, "2023-08-03T11:20:00Z", True),
]

NOISE_PYTHON_ITEM = {
    "repo": "demo/maths",
    "number": 5,
    "sha": "09" * 20,
    "language": "Python",
    "created_at": "2023-05-05T12:00:00Z",
}

OLD_GO_ITEM = {
    "repo": "demo/legacy",
    "number": 2,
    "sha": "aa" * 20,
    "language": "Go",
    "created_at": "2023-03-15T12:00:00Z",
}


def _item(pr) -> dict:
    repo, number, sha, created_at, _ = pr
    return {
        "repo": repo,
        "number": number,
        "sha": sha,
        "language": "Go",
        "created_at": created_at,
    }


def _pr_fixtures(pr) -> None:
    repo, number, sha, created_at, merged = pr
    slug = repo.split("/", 1)[1]
    filename = f"internal/{slug}/worker.go"
    title = f"Tune retry budget for {slug} worker"
    body = f"Raise the retry budget of the {slug} worker loop and log each attempt."
    write_fixture(
        CASSETTE_DIR,
        f"/repos/{repo}/pulls/{number}",
        None,
        {
            "title": title,
            "body": body,
            "state": "closed",
            "merged": merged,
            "created_at": created_at,
            "head": {"sha": sha},
            "base": {"ref": "main"},
        },
    )
    patch = (
        "@@ -1,4 +1,5 @@\n"
        " package main\n"
        " \n"
        f"-const retries = 2 // {slug}\n"
        f"+const retries = 5 // {slug}\n"
        "+const backoff = 250\n"
    )
    write_fixture(
        CASSETTE_DIR,
        f"/repos/{repo}/pulls/{number}/files",
        None,
        [{"filename": filename, "status": "modified", "patch": patch}],
    )
    content = f"package main\n\nconst retries = 5 // {slug}\nconst backoff = 250\n"
    import base64

    write_fixture(
        CASSETTE_DIR,
        f"/repos/{repo}/contents/{filename}",
        {"ref": sha},
        {
            "content": base64.b64encode(content.encode()).decode(),
            "encoding": "base64",
        },
    )


def main() -> None:
    if CASSETTE_DIR.exists():
        shutil.rmtree(CASSETTE_DIR)
    CASSETTE_DIR.mkdir(parents=True)

    page1_items = [_item(GO_PRS[0]), _item(GO_PRS[1]), NOISE_PYTHON_ITEM, _item(GO_PRS[2])]
    page2_items = [_item(GO_PRS[3]), OLD_GO_ITEM, _item(GO_PRS[4]), _item(GO_PRS[5])]
    base_params = {"language": "go", "since": SINCE, "per_page": PER_PAGE}
    write_fixture(
        CASSETTE_DIR,
        "/search/pulls",
        {**base_params, "page": 1},
        {"items": page1_items, "next_page": 2},
    )
    write_fixture(
        CASSETTE_DIR,
        "/search/pulls",
        {**base_params, "page": 2},
        {"items": page2_items, "next_page": None},
    )
    for pr in GO_PRS:
        _pr_fixtures(pr)
    count = len(list(CASSETTE_DIR.glob("*.json")))
    print(f"wrote {count} cassette files to {CASSETTE_DIR}")


if __name__ == "__main__":
    main()
