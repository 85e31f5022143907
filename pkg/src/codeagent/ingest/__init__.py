"""Ingestion: diff parsing, detection, API client, crawler, dataset."""

from .apiclient import (
    ApiClient,
    ApiClientConfig,
    ApiError,
    FixtureMissError,
    NotFoundError,
    RateLimitedError,
    SchemaError,
    write_fixture,
)
from .crawler import CrawlCheckpoint, crawl, fetch_pull_request
from .dataset import (
    DatasetError,
    DatasetLoadResult,
    DatasetRecord,
    DatasetSummary,
    load_dataset,
    record_violations,
    summarize,
    write_dataset,
)
from .detect import (
    CODE_EXTENSIONS,
    LANGUAGE_EXTENSIONS,
    NINE_LANGUAGES,
    detect_language,
    detect_modality,
    normalize_language,
)
from .diffs import (
    DEV_NULL,
    DiffParseError,
    FileDelta,
    Hunk,
    HunkLine,
    changed_paths,
    parse_unified_diff,
    render_file_delta,
    render_file_deltas,
)

__all__ = [
    "ApiClient",
    "ApiClientConfig",
    "ApiError",
    "CODE_EXTENSIONS",
    "CrawlCheckpoint",
    "DEV_NULL",
    "DatasetError",
    "DatasetLoadResult",
    "DatasetRecord",
    "DatasetSummary",
    "DiffParseError",
    "FileDelta",
    "FixtureMissError",
    "Hunk",
    "HunkLine",
    "LANGUAGE_EXTENSIONS",
    "NINE_LANGUAGES",
    "NotFoundError",
    "RateLimitedError",
    "SchemaError",
    "changed_paths",
    "crawl",
    "detect_language",
    "detect_modality",
    "fetch_pull_request",
    "load_dataset",
    "normalize_language",
    "parse_unified_diff",
    "record_violations",
    "render_file_delta",
    "render_file_deltas",
    "summarize",
    "write_dataset",
    "write_fixture",
]
