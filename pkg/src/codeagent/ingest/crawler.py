"""Pull-request retrieval and the dataset crawler.

``fetch_pull_request`` assembles one ReviewRequest from the PR detail,
per-file patches, and head-version file contents.  ``crawl`` walks a
paginated search endpoint, emits schema-valid records, and checkpoints
its cursor after every record so an interrupted run resumes mid-page
without duplicates.  The crawler assigns no task labels.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Mapping

from ..core import ReviewRequest, SourceFile
from .apiclient import ApiClient, require
from .dataset import CRAWL_CUTOVER_DATE, DatasetRecord, parse_timestamp, record_violations

PAGE_SIZE = 50


def _pr_status(detail: Mapping[str, Any]) -> str:
    if detail.get("merged"):
        return "merged"
    if detail.get("state") == "closed":
        return "closed"
    return "unknown"


def _combined_diff(files: list[Mapping[str, Any]], context: str) -> str:
    parts: list[str] = []
    for entry in files:
        filename = require(entry, "filename", context)
        status = entry.get("status", "modified")
        patch = entry.get("patch")
        if patch is None:
            continue  # binary or oversized file: API omits the patch
        if status == "added":
            old_path, new_path = "/dev/null", filename
        elif status == "removed":
            old_path, new_path = filename, "/dev/null"
        elif status == "renamed":
            old_path = entry.get("previous_filename", filename)
            new_path = filename
        else:
            old_path = new_path = filename
        if not patch.endswith("\n"):
            patch += "\n"
        parts.append(f"--- {old_path}\n+++ {new_path}\n{patch}")
    return "".join(parts)


def _decode_content(payload: Mapping[str, Any], context: str) -> str:
    content = require(payload, "content", context)
    if payload.get("encoding") == "base64":
        return base64.b64decode(content).decode("utf-8", errors="replace")
    return content


def fetch_pull_request(
    client: ApiClient,
    repo: str,
    pr_number: int,
) -> tuple[ReviewRequest, str]:
    """Assemble a ReviewRequest for one PR; returns (request, pr_status)."""
    context = f"{repo}#{pr_number}"
    detail = client.get_json(f"/repos/{repo}/pulls/{pr_number}")
    title = require(detail, "title", context)
    body = detail.get("body") or ""
    head = require(detail, "head", context)
    head_sha = require(head, "sha", context)

    files = client.get_json(f"/repos/{repo}/pulls/{pr_number}/files")
    diff = _combined_diff(files, context)

    originals: list[SourceFile] = []
    for entry in files:
        filename = entry["filename"]
        if entry.get("status") == "removed":
            continue
        payload = client.get_json(
            f"/repos/{repo}/contents/{filename}", params={"ref": head_sha}
        )
        originals.append(SourceFile(path=filename, content=_decode_content(payload, filename)))

    status = _pr_status(detail)
    commit_message = title if not body else f"{title}\n\n{body}"
    request = ReviewRequest(
        id=context,
        commit_message=commit_message,
        diff=diff,
        original_files=tuple(originals),
        pr_status=status,
    )
    return request, status


@dataclass
class CrawlCheckpoint:
    """Resumable cursor: next (page, item) to process and emitted count."""

    page: int = 1
    item_index: int = 0
    emitted: int = 0

    @classmethod
    def load(cls, path: str | Path) -> "CrawlCheckpoint":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            page=data.get("page", 1),
            item_index=data.get("item_index", 0),
            emitted=data.get("emitted", 0),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps({"page": self.page, "item_index": self.item_index,
                        "emitted": self.emitted}),
            encoding="utf-8",
        )


def crawl(
    client: ApiClient,
    language: str,
    since_date: str = CRAWL_CUTOVER_DATE,
    limit: int = 100,
    checkpoint_path: str | Path | None = None,
    allow_early_since: bool = False,
    page_size: int = PAGE_SIZE,
) -> Iterator[DatasetRecord]:
    """Stream dataset records for one language from the search endpoint.

    ``since_date`` earlier than the collection cut-over is rejected
    unless explicitly overridden; records created before ``since_date``
    are never emitted.  Task labels are left empty.
    """
    if since_date < CRAWL_CUTOVER_DATE and not allow_early_since:
        raise ValueError(
            f"since_date {since_date} predates the collection cut-over "
            f"{CRAWL_CUTOVER_DATE}; pass allow_early_since to override"
        )
    since = parse_timestamp(f"{since_date}T00:00:00+00:00")

    checkpoint = CrawlCheckpoint()
    if checkpoint_path and Path(checkpoint_path).exists():
        checkpoint = CrawlCheckpoint.load(checkpoint_path)

    page: int | None = checkpoint.page
    skip_items = checkpoint.item_index
    emitted = checkpoint.emitted

    while page is not None and emitted < limit:
        payload = client.get_json(
            "/search/pulls",
            params={
                "language": language.lower(),
                "since": since_date,
                "page": page,
                "per_page": page_size,
            },
        )
        items = require(payload, "items", "search page")
        for index, item in enumerate(items):
            if index < skip_items:
                continue
            if emitted >= limit:
                return
            item_language = require(item, "language", "search item")
            created = require(item, "created_at", "search item")
            # Filter on the search metadata before paying for the fetches.
            keep = (
                item_language.lower() == language.lower()
                and parse_timestamp(created) >= since
            )
            record = _record_from_item(client, item) if keep else None
            if record is not None:
                problems = record_violations(record)
                if problems:
                    raise ValueError(
                        f"crawled record {record.sha} violates the schema: "
                        f"{'; '.join(problems)}"
                    )
                emitted += 1
            # Cursor advances past this item before the record is handed out.
            checkpoint = CrawlCheckpoint(page=page, item_index=index + 1, emitted=emitted)
            if checkpoint_path:
                checkpoint.save(checkpoint_path)
            if record is not None:
                yield record
        skip_items = 0
        page = payload.get("next_page")
        if page is not None:
            checkpoint = CrawlCheckpoint(page=page, item_index=0, emitted=emitted)
            if checkpoint_path:
                checkpoint.save(checkpoint_path)


def _record_from_item(client: ApiClient, item: Mapping[str, Any]) -> DatasetRecord:
    """Fetch the full PR behind one search hit and shape it as a record."""
    repo = require(item, "repo", "search item")
    number = require(item, "number", "search item")
    request, status = fetch_pull_request(client, repo, number)
    return DatasetRecord(
        sha=require(item, "sha", "search item"),
        repo=repo,
        language=item["language"],
        pr_status=status,
        task_labels={},
        commit_message=request.commit_message,
        diff=request.diff,
        original_files=request.original_files,
        created_at=item["created_at"],
    )
