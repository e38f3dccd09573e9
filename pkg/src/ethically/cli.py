"""Command-line interface: file-based reviews, corpus evaluation, serving.

Exit codes are part of the contract: 0 report, 3 refusal, 4 malformed model
output, 2 validation/configuration errors, 5 provider failure, 1 evaluation
runs where any case failed to execute. Stderr carries redacted diagnostics
only - never proposal content.

Invoking `review` affirms that personally identifying information has been
removed from the input files, mirroring the web form's confirmation checkbox.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .gateway import (
    API_KEY_ENV,
    BASE_URL_ENV,
    DEFAULT_BASE_URL,
    DEFAULT_MODEL_ID,
    MODEL_ENV,
    HttpProvider,
    MockProvider,
    Provider,
    ProviderError,
)
from .harness import (
    CorpusFormatError,
    DuplicateCaseId,
    bundled_corpus_path,
    load_corpus,
    mock_provider_for,
    run_corpus,
    emit_summary,
)
from .model import ProposalSubmission
from .parsing import ResponseKind, render_canonical
from .pipeline import SubmissionRejected, run_review
from .prompting import BudgetExceeded, PromptConfig

EXIT_REPORT = 0
EXIT_CASE_FAILURES = 1
EXIT_USAGE = 2
EXIT_REFUSAL = 3
EXIT_MALFORMED = 4
EXIT_PROVIDER = 5

LIVE_WARNING = (
    "warning: --live calls a paid, nondeterministic provider API; results "
    "vary between runs and incur cost."
)


def _live_provider() -> Provider | None:
    """Provider from the environment, or None (with a diagnostic) if unset."""
    api_key = os.environ.get(API_KEY_ENV, "")
    if not api_key:
        print(f"error: live mode needs {API_KEY_ENV} in the environment", file=sys.stderr)
        return None
    return HttpProvider(api_key=api_key, base_url=os.environ.get(BASE_URL_ENV, DEFAULT_BASE_URL))


def _cmd_review(args: argparse.Namespace) -> int:
    try:
        proposal = Path(args.infile).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read input file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    supplement = None
    if args.supplement:
        try:
            supplement = Path(args.supplement).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot read supplement file: {exc}", file=sys.stderr)
            return EXIT_USAGE

    if args.mock:
        try:
            provider: Provider | None = MockProvider(
                [Path(args.mock).read_text(encoding="utf-8")]
            )
        except OSError as exc:
            print(f"error: cannot read mock script: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        provider = _live_provider()
    if provider is None:
        return EXIT_USAGE

    submission = ProposalSubmission(
        field_of_research=args.field,
        country_region=args.region,
        proposal_text=proposal,
        supplementary_materials=supplement,
        pii_confirmed=True,
    )
    cfg = PromptConfig(variant=args.variant)
    try:
        outcome = run_review(
            submission,
            provider,
            prompt_config=cfg,
            model_id=os.environ.get(MODEL_ENV, DEFAULT_MODEL_ID),
        )
    except SubmissionRejected as exc:
        for failure in exc.validation_failures:
            print(f"error: {failure.code}: {failure.message}", file=sys.stderr)
        for reason in exc.guardrail_reasons:
            print(f"error: guardrail: {reason.value}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProviderError as exc:
        print(
            f"error: provider failure after {exc.attempts} attempt(s): "
            f"{exc.kind.value}",
            file=sys.stderr,
        )
        return EXIT_PROVIDER

    if args.out == "json":
        print(json.dumps(outcome.to_dict(), indent=2))
    else:
        if outcome.kind is ResponseKind.REPORT:
            print(render_canonical(outcome.report), end="")
        else:
            print(outcome.raw_text)
    for notice in outcome.notices:
        print(f"notice: {notice}", file=sys.stderr)
    for warning in outcome.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if outcome.kind is ResponseKind.REFUSAL:
        return EXIT_REFUSAL
    if outcome.kind is ResponseKind.MALFORMED:
        for failure in outcome.failures:
            print(f"failure: {failure}", file=sys.stderr)
        return EXIT_MALFORMED
    return EXIT_REPORT


def _cmd_eval(args: argparse.Namespace) -> int:
    corpus_path = Path(args.corpus) if args.corpus else bundled_corpus_path()
    try:
        cases = load_corpus(corpus_path)
    except (CorpusFormatError, DuplicateCaseId, OSError) as exc:
        print(f"error: corpus: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.live:
        print(LIVE_WARNING, file=sys.stderr)
        provider = _live_provider()
        if provider is None:
            return EXIT_USAGE
    elif args.mock:
        mock_dir = Path(args.mock)
        responses = {}
        for case in cases:
            script = mock_dir / f"{case.id}.txt"
            if script.exists():
                responses[case.id] = script.read_text(encoding="utf-8")
        provider = mock_provider_for(cases, responses)
    else:
        print(
            "error: eval needs --mock DIR or --live (default runs are offline)",
            file=sys.stderr,
        )
        return EXIT_USAGE

    model_id = os.environ.get(MODEL_ENV, DEFAULT_MODEL_ID)

    def pipeline(submission: ProposalSubmission):
        return run_review(submission, provider, model_id=model_id)

    summary, results = run_corpus(cases, pipeline, parallelism=args.parallel)
    for r in results:
        kind = r.kind.value if r.kind else "Error"
        line = (
            f"{r.id}: kind={kind} detected={str(r.detected).lower()} "
            f"risk={r.risk_value if r.risk_value is not None else '-'}"
        )
        if r.matched_markers:
            line += " markers=" + ",".join(r.matched_markers)
        if r.error:
            line += f" error={r.error}"
        print(line)
    print(emit_summary(summary, args.format), end="")
    return EXIT_CASE_FAILURES if summary.errors else EXIT_REPORT


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.from_env()
    bind = args.bind or config.bind_address
    if not os.environ.get(API_KEY_ENV):
        print(f"error: serving needs {API_KEY_ENV} in the environment", file=sys.stderr)
        return EXIT_USAGE
    host, _, port = bind.partition(":")
    app = create_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return EXIT_REPORT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ethically",
        description="Research ethics support for the social sciences and humanities.",
        epilog=(
            "Running `review` confirms that personally identifying information "
            "has been removed from the submitted files."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    review = sub.add_parser("review", help="review one proposal file")
    review.add_argument("--in", dest="infile", required=True, help="proposal text file")
    review.add_argument("--field", required=True, help="field of research")
    review.add_argument("--region", required=True, help="country/region")
    review.add_argument("--supplement", help="optional supplementary materials file")
    review.add_argument("--out", choices=("json", "markdown"), default="markdown")
    review.add_argument("--mock", help="scripted response file instead of a live call")
    review.add_argument(
        "--variant", choices=("condensed", "full"), default="condensed",
        help="system prompt variant",
    )
    review.set_defaults(func=_cmd_review)

    evaluate = sub.add_parser("eval", help="run the annotated corpus through the pipeline")
    evaluate.add_argument("--corpus", help="corpus JSONL file (default: bundled corpus)")
    evaluate.add_argument("--parallel", type=int, default=1, help="concurrent cases")
    evaluate.add_argument("--mock", help="directory of scripted responses, one <case-id>.txt each")
    evaluate.add_argument("--live", action="store_true", help="call the live provider (paid)")
    evaluate.add_argument(
        "--format", choices=("markdown", "json", "csv"), default="markdown"
    )
    evaluate.set_defaults(func=_cmd_eval)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--bind", help="host:port (default from ETHICALLY_BIND)")
    serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
