"""``refmail`` command line: scan, eval, kb, robustness, spearmail, calibrate."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from refmail.config import BASELINE_THRESHOLD, ConfigError, ScanConfig, load_config_file
from refmail.ingest.readers import FORMATS

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_PHISHING", "EXIT_FATAL"]

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PHISHING = 2

log = logging.getLogger("refmail")


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def _scan_options(p, with_input=True):
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--kb", help="knowledge base (JSON lines); falls back to $REFMAIL_KB")
    if with_input:
        p.add_argument("--input", help="file, directory, or - for stdin (default: -)")
        p.add_argument("--format", choices=FORMATS, help="input format (default: detect)")
    p.add_argument("--threshold", type=float, help=f"identity-matching threshold (default {BASELINE_THRESHOLD})")
    p.add_argument("--require-action", type=_bool, metavar="BOOL",
                   help="only alert when a call-to-action is present (default true)")
    p.add_argument("--adapter-tagger", metavar="ENDPOINT", help="cmd:COMMAND, unix:PATH or HOST:PORT")
    p.add_argument("--adapter-embed", metavar="ENDPOINT", help="embedding adapter endpoint")
    p.add_argument("--workers", type=int, help="parallel scan workers (default 1)")
    p.add_argument("--output", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="refmail", description="Reference-based phishing email detection")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="scan messages, one verdict JSON line per message")
    _scan_options(p)

    p = sub.add_parser("eval", help="scan a labeled dataset and report precision/recall/FPR")
    _scan_options(p)
    p.add_argument("--labels", required=True, help="JSON object or CSV mapping message id -> label")

    p = sub.add_parser("kb", help="knowledge-base maintenance")
    kb_sub = p.add_subparsers(dest="kb_command", required=True)
    q = kb_sub.add_parser("validate", help="report curation problems")
    q.add_argument("path", nargs="?")
    q = kb_sub.add_parser("add", help="add or replace an entry")
    q.add_argument("path", nargs="?")
    q.add_argument("--id", required=True, dest="identity_id")
    q.add_argument("--name")
    q.add_argument("--alias", action="append", required=True)
    q.add_argument("--domain", action="append", default=[])
    q.add_argument("--internal", action="store_true")
    q.add_argument("--output", help="write here instead of updating PATH in place")
    q = kb_sub.add_parser("export", help="print the canonical form")
    q.add_argument("path", nargs="?")
    q.add_argument("--output")

    p = sub.add_parser("robustness", help="recognition and matching rates under text mutations")
    _scan_options(p, with_input=False)
    p.add_argument("--corpus", help="labeled JSON-lines corpus (default: synthesized from the KB)")
    p.add_argument("--synonyms", help="verb synonym table (default: bundled)")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("spearmail", help="generate synthetic spear-phishing fixtures into a maildir")
    p.add_argument("--profiles", required=True, help="JSON lines {profile, m, n} or a plain-text profile")
    p.add_argument("-m", type=int, default=6, help="interests per profile")
    p.add_argument("-n", type=int, default=5, help="activities per interest")
    p.add_argument("--backend", default="mock", help="'mock' or an adapter endpoint")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=0)
    p.add_argument("--max-inflight", type=int, default=1)
    p.add_argument("--kb", help="knowledge base used to check organizations")
    p.add_argument("--output", required=True, help="maildir to write")
    p.add_argument("--plan-json", help="also write the plans as JSON")

    p = sub.add_parser("calibrate", help="choose the matching threshold by F-beta")
    p.add_argument("--kb")
    p.add_argument("--pairs", help="JSON lines {query, identity, match} (default: typo'd KB aliases)")
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--adapter-embed", metavar="ENDPOINT")
    p.add_argument("--output")
    return parser


# -- helpers --------------------------------------------------------------------


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _config(args) -> ScanConfig:
    base = {}
    if getattr(args, "config", None):
        base = load_config_file(args.config)
    cfg = ScanConfig(**base)
    return cfg.merged(
        kb_path=args.kb,
        input=getattr(args, "input", None),
        input_format=getattr(args, "format", None),
        threshold=args.threshold,
        require_action=args.require_action,
        adapter_tagger=args.adapter_tagger,
        adapter_embed=args.adapter_embed,
        workers=args.workers,
        output=args.output,
    )


def _client(endpoint, deadline):
    from refmail.adapter import JsonLinesClient

    return JsonLinesClient.from_endpoint(endpoint, deadline=deadline)


def _detector(cfg: ScanConfig):
    from refmail.detector import PhishingDetector
    from refmail.kb import load_kb
    from refmail.matching.match import AdapterEmbedder
    from refmail.tagging.baseline import BaselineTagger
    from refmail.tagging.model import ModelTagger

    kb = load_kb(cfg.resolved_kb())
    tagger = embedder = None
    if cfg.adapter_tagger:
        fallback = BaselineTagger([a for a, _ in kb.aliases()]).fit()
        tagger = ModelTagger(_client(cfg.adapter_tagger, cfg.adapter_deadline), fallback, cfg.adapter_deadline)
    if cfg.adapter_embed:
        embedder = AdapterEmbedder(_client(cfg.adapter_embed, cfg.adapter_deadline), deadline=cfg.adapter_deadline)
    return PhishingDetector(kb, threshold=cfg.threshold, require_action=cfg.require_action,
                            tagger=tagger, embedder=embedder, max_bytes=cfg.max_bytes).fit()


def _kb_path(args):
    import os

    from refmail.config import KB_ENV

    path = args.path or os.environ.get(KB_ENV)
    if not path:
        raise ConfigError(f"no knowledge base given (pass a path or set {KB_ENV})")
    return path


# -- commands -------------------------------------------------------------------


def cmd_scan(args) -> int:
    from refmail.service import scan_messages

    cfg = _config(args)
    detector = _detector(cfg)
    source = cfg.input or "-"
    alerts = 0
    with _output(cfg.output) as out:
        for v in scan_messages(detector, None if source == "-" else source,
                               "stream" if source == "-" else cfg.input_format, workers=cfg.workers):
            out.write(v.to_json() + "\n")
            alerts += v.is_alert
    return EXIT_PHISHING if alerts else EXIT_OK


def cmd_eval(args) -> int:
    from refmail.service import evaluate, load_labels, scan_messages

    cfg = _config(args)
    detector = _detector(cfg)
    labels = load_labels(args.labels)
    source = cfg.input or "-"
    verdicts = scan_messages(detector, None if source == "-" else source,
                             "stream" if source == "-" else cfg.input_format, workers=cfg.workers)
    report = evaluate(verdicts, labels)
    for d in report.diagnostics:
        log.warning(d)
    with _output(cfg.output) as out:
        out.write(report.to_json(indent=2) + "\n")
    return EXIT_OK


def cmd_kb(args) -> int:
    from refmail.kb import KbCollisionError, KbEntry, KbError, dumps_kb, load_kb, loads_kb, validate_kb

    path = _kb_path(args)
    if args.kb_command == "validate":
        try:
            kb = load_kb(path, strict=False)
        except KbError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FATAL
        diags = validate_kb(kb)
        for d in diags:
            print(str(d), file=sys.stderr)
        return EXIT_FATAL if any(d.level == "error" for d in diags) else EXIT_OK
    if args.kb_command == "export":
        kb = load_kb(path)
        with _output(args.output) as out:
            out.write(dumps_kb(kb))
        return EXIT_OK
    # add
    kb = load_kb(path) if Path(path).exists() else loads_kb("")
    try:
        entry = KbEntry(args.identity_id, args.name or args.alias[0], tuple(args.alias),
                        frozenset(args.domain), args.internal)
        kb = kb.with_entry(entry)
    except KbCollisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except KbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    problems = [d for d in validate_kb(kb) if d.identity_id == entry.identity_id]
    for d in problems:
        print(str(d), file=sys.stderr)
    if any(d.level == "error" for d in problems):
        return EXIT_FATAL
    Path(args.output or path).write_text(dumps_kb(kb), encoding="utf-8")
    return EXIT_OK


def cmd_robustness(args) -> int:
    from refmail.adversarial.metrics import robustness_report
    from refmail.resources import load_synonyms
    from refmail.synth import kb_samples
    from refmail.tagging.corpus import load_corpus

    cfg = _config(args)
    detector = _detector(cfg)
    samples = load_corpus(args.corpus) if args.corpus else kb_samples(detector.kb_, args.seed)
    report = robustness_report(detector.tagger_, samples, detector.matcher_, detector.kb_,
                               cfg.threshold, load_synonyms(args.synonyms), args.seed)
    with _output(cfg.output) as out:
        out.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def cmd_spearmail(args) -> int:
    from refmail.kb import load_kb
    from refmail.spearmail import AdapterClient, MockClient, generate_plan, load_profiles, write_maildir

    kb = load_kb(args.kb) if args.kb else None
    if args.backend == "mock":
        client = MockClient(args.seed)
    else:
        client = AdapterClient(_client(args.backend, 60.0))
    plans = [generate_plan(spec, client, kb=kb, seed=args.seed, retries=args.retries,
                           max_inflight=args.max_inflight)
             for spec in load_profiles(args.profiles, args.m, args.n)]
    written = write_maildir(plans, args.output)
    errors = [e for p in plans for e in p.errors]
    for stage, where, msg in errors:
        log.warning("%s %s: %s", stage, where, msg)
    if args.plan_json:
        Path(args.plan_json).write_text(json.dumps([p.to_dict() for p in plans], indent=2), encoding="utf-8")
    print(f"wrote {len(written)} messages to {args.output}", file=sys.stderr)
    return EXIT_FATAL if errors else EXIT_OK


def cmd_calibrate(args) -> int:
    import os

    from refmail.config import KB_ENV
    from refmail.kb import load_kb
    from refmail.matching.calibrate import calibrate_threshold
    from refmail.matching.match import AdapterEmbedder, IdentityMatcher
    from refmail.synth import calibration_pairs

    path = args.kb or os.environ.get(KB_ENV)
    if not path:
        raise ConfigError(f"no knowledge base given (use --kb or set {KB_ENV})")
    kb = load_kb(path)
    embedder = AdapterEmbedder(_client(args.adapter_embed, 0.5)) if args.adapter_embed else None
    matcher = IdentityMatcher(embedder).fit(kb)
    if args.pairs:
        pairs = []
        for line in Path(args.pairs).read_text(encoding="utf-8").splitlines():
            if line.strip():
                obj = json.loads(line)
                pairs.append((obj["query"], obj["identity"], bool(obj["match"])))
    else:
        pairs = calibration_pairs(kb, matcher, args.seed)
    result = calibrate_threshold(pairs, matcher, args.beta)
    with _output(args.output) as out:
        out.write(result.to_json(indent=2) + "\n")
    return EXIT_OK


COMMANDS = {
    "scan": cmd_scan,
    "eval": cmd_eval,
    "kb": cmd_kb,
    "robustness": cmd_robustness,
    "spearmail": cmd_spearmail,
    "calibrate": cmd_calibrate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="refmail: %(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not an error
        sys.stderr.close()
        return EXIT_OK
    except (ConfigError, OSError, ValueError) as exc:
        print(f"refmail: error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
