"""Command-line interface.

Subcommands: ``review`` (run the pipeline on a change), ``eval`` (score
predictions against a dataset), ``crawl`` (collect dataset records),
and ``simulate-qa`` (the refinement convergence lab).  Output files are
written atomically via a temp-file rename, so re-runs are idempotent.

Exit codes: 0 success, 1 invalid input, 2 report contains inconclusive
verdicts, 3 run aborted, 64 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from .agents.backends import BackendConfig, create_backend
from .config import CONFIG_ENV, load_app_config
from .core import DEFAULT_TASKS, ReviewRequest, SourceFile, TaskKind, report_to_dict
from .ingest.apiclient import ApiClient, ApiClientConfig, ApiError
from .ingest.dataset import DatasetError, load_dataset, record_to_dict
from .ingest.crawler import crawl
from .metrics.evaluate import evaluate
from .pipeline.plan import default_plan
from .pipeline.review import AbortedRunError, InvalidRequestError, ReviewSession
from .qachecker.convergence import converge, random_objective
from . import fixtures

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INCONCLUSIVE = 2
EXIT_ABORTED = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse with the conventional usage-error exit code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp-{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _parse_tasks(raw: str) -> list[TaskKind]:
    tasks = [TaskKind.parse(part) for part in raw.split(",") if part.strip()]
    if not tasks:
        raise ValueError("no tasks given")
    return tasks


# -- review -------------------------------------------------------------------


def _load_request(diff_path: Path, message_path: Path, files_dir: Path | None) -> ReviewRequest:
    for required in (diff_path, message_path):
        if not required.exists():
            raise FileNotFoundError(f"input file does not exist: {required}")
    diff = diff_path.read_text(encoding="utf-8")
    message = message_path.read_text(encoding="utf-8")
    originals: list[SourceFile] = []
    if files_dir is not None:
        if not files_dir.is_dir():
            raise FileNotFoundError(f"files directory does not exist: {files_dir}")
        for path in sorted(files_dir.rglob("*")):
            if path.is_file():
                originals.append(
                    SourceFile(
                        path=path.relative_to(files_dir).as_posix(),
                        content=path.read_text(encoding="utf-8", errors="replace"),
                    )
                )
    request_id = hashlib.sha256((diff + message).encode("utf-8")).hexdigest()[:12]
    return ReviewRequest(
        id=request_id,
        commit_message=message,
        diff=diff,
        original_files=tuple(originals),
    )


def cmd_review(args: argparse.Namespace) -> int:
    config = load_app_config(args.config)
    try:
        request = _load_request(
            Path(args.diff), Path(args.message), Path(args.files) if args.files else None
        )
    except (FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    tasks = _parse_tasks(args.tasks) if args.tasks else list(DEFAULT_TASKS)
    backend_kind = args.backend or config.backend.kind
    if backend_kind == "scripted":
        script = config.backend.script or fixtures.golden_script(tasks)
        backend_config = BackendConfig(kind="scripted", script=tuple(script))
    elif backend_kind == "replay":
        cassette = args.cassette or config.backend.cassette_path
        backend_config = BackendConfig(kind="replay", cassette_path=cassette)
    else:
        if config.backend.kind != "live":
            print(
                "error: --backend live needs a live backend in the config file",
                file=sys.stderr,
            )
            return EXIT_INVALID
        backend_config = config.backend
    backend = create_backend(backend_config)

    out = Path(args.out)
    log_path = Path(args.log) if args.log else out.with_suffix(".log.jsonl")
    max_rounds = args.max_rounds or config.max_rounds
    try:
        session = ReviewSession(
            request,
            backend,
            tasks=tasks,
            plan=default_plan(tasks, max_rounds=max_rounds),
            qa_config=config.qa,
            run_log_path=log_path,
        )
        report = session.run()
    except InvalidRequestError as exc:
        for violation in exc.violations:
            print(f"violation: {violation}", file=sys.stderr)
        return EXIT_INVALID
    except AbortedRunError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ABORTED

    _atomic_write(out, json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n")
    print(f"report written to {out} (run log: {log_path})")
    return EXIT_INCONCLUSIVE if report.inconclusive else EXIT_OK


# -- eval ----------------------------------------------------------------------


def _load_predictions(path: Path) -> dict[str, object]:
    predictions: dict[str, object] = {}
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
                predictions[entry["sha"]] = entry["prediction"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DatasetError(f"bad prediction line: {exc}", lineno) from exc
    return predictions


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        loaded = load_dataset(args.dataset)
        predictions = _load_predictions(Path(args.predictions))
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    run = evaluate(loaded.records, predictions, TaskKind.parse(args.task), args.segment)
    out = Path(args.out)
    _atomic_write(out, run.to_json() + "\n")
    table_path = out.with_suffix(".txt")
    _atomic_write(table_path, run.render_table() + "\n")
    print(f"evaluated {len(run.pairs)} records, skipped {len(run.skipped)}")
    print(f"report written to {out} and {table_path}")
    return EXIT_OK


# -- crawl ---------------------------------------------------------------------


def cmd_crawl(args: argparse.Namespace) -> int:
    config = load_app_config(args.config)
    if args.fixtures:
        api_config = ApiClientConfig(kind="replay", fixture_dir=args.fixtures)
    elif config.api is not None:
        api_config = config.api
    else:
        print("error: no API configuration; pass --fixtures or configure [api]",
              file=sys.stderr)
        return EXIT_INVALID

    out = Path(args.out)
    checkpoint = Path(args.checkpoint) if args.checkpoint else out.with_suffix(
        ".checkpoint.json"
    )
    seen: set[str] = set()
    if out.exists():
        for line in out.read_text(encoding="utf-8").splitlines():
            if line.strip():
                seen.add(json.loads(line)["sha"])

    client = ApiClient(api_config)
    written = 0
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("a", encoding="utf-8") as handle:
            for record in crawl(
                client,
                language=args.language,
                since_date=args.since,
                limit=args.limit,
                checkpoint_path=checkpoint,
                allow_early_since=args.allow_early_since,
            ):
                if record.sha in seen:
                    continue
                handle.write(json.dumps(record_to_dict(record), ensure_ascii=False) + "\n")
                handle.flush()
                seen.add(record.sha)
                written += 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ApiError as exc:
        print(f"error: {exc} (checkpoint kept at {checkpoint})", file=sys.stderr)
        return EXIT_ABORTED
    finally:
        client.close()
    print(f"wrote {written} records to {out} (checkpoint: {checkpoint})")
    return EXIT_OK


# -- simulate-qa -----------------------------------------------------------------


def cmd_simulate_qa(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    objective = random_objective(args.dim, args.alpha, rng)
    start = objective.optimum + rng.normal(scale=2.0, size=args.dim)
    result = converge(objective, start, tol=args.tol, max_iter=args.max_iter)
    print(f"dim={args.dim} alpha={args.alpha} seed={args.seed}")
    print(f"iterations: {result.iterations}")
    print("trajectory:")
    for step, value in enumerate(result.trajectory):
        print(f"  {step:3d}  {value: .9e}")
    print(f"converged: {result.converged}")
    return EXIT_OK if result.converged else EXIT_INVALID


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="codeagent", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", help=f"config file (or ${CONFIG_ENV})")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    review = commands.add_parser("review", help="run a review over one change")
    review.add_argument("--diff", required=True, help="unified diff file")
    review.add_argument("--message", required=True, help="commit message file")
    review.add_argument("--files", help="directory with the original files")
    review.add_argument("--tasks", help="comma list of ca,va,fa,cr (default: all)")
    review.add_argument("--backend", choices=["live", "scripted", "replay"],
                        help="override the configured backend kind")
    review.add_argument("--cassette", help="cassette file for the replay backend")
    review.add_argument("--max-rounds", type=int, help="gate round cap per conversation")
    review.add_argument("--log", help="run log path (default: <out>.log.jsonl)")
    review.add_argument("--out", required=True, help="report output path")
    review.set_defaults(func=cmd_review)

    evaluation = commands.add_parser("eval", help="evaluate predictions over a dataset")
    evaluation.add_argument("--dataset", required=True, help="JSON Lines dataset file")
    evaluation.add_argument("--predictions", required=True,
                            help='JSON Lines of {"sha", "prediction"}')
    evaluation.add_argument("--task", required=True, help="ca, va, fa, or cr")
    evaluation.add_argument("--segment", default="all", choices=["merged", "closed", "all"])
    evaluation.add_argument("--out", required=True, help="report output path")
    evaluation.set_defaults(func=cmd_eval)

    crawl_cmd = commands.add_parser("crawl", help="collect dataset records")
    crawl_cmd.add_argument("--language", required=True)
    crawl_cmd.add_argument("--since", default="2023-04-01", help="ISO date lower bound")
    crawl_cmd.add_argument("--limit", type=int, default=100)
    crawl_cmd.add_argument("--fixtures", help="replay fixture directory")
    crawl_cmd.add_argument("--checkpoint", help="checkpoint file (default: <out>.checkpoint.json)")
    crawl_cmd.add_argument("--allow-early-since", action="store_true",
                           help="permit since dates before the collection cut-over")
    crawl_cmd.add_argument("--out", required=True, help="JSON Lines output path")
    crawl_cmd.set_defaults(func=cmd_crawl)

    simulate = commands.add_parser("simulate-qa", aliases=["simulate_qa"],
                                   help="run the refinement convergence lab")
    simulate.add_argument("--dim", type=int, default=8)
    simulate.add_argument("--alpha", type=float, default=0.5, help="learning rate in (0, 1]")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--tol", type=float, default=1e-6)
    simulate.add_argument("--max-iter", type=int, default=50)
    simulate.set_defaults(func=cmd_simulate_qa)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
