import argparse
import glob
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.analysis.pipeline import analyze_sequence
from src.config.config_file_handler import ConfigFileHandler
from src.errors import ArticulationError, IoError
from src.evaluation.metrics import evaluate
from src.evaluation.summary import format_csv, format_table, load_scored_reports, summarize
from src.ingest.annotations import load_ground_truth, load_report, save_report
from src.ingest.scene_store import MANIFEST_NAME, ensure_directory, load_sequence
from src.logging_utils.logger import enable_file_logging, logger, set_verbosity
from src.synth.generator import SceneSpec, generate, write_labeled_scene
from src.synth.suite import builtin_suite


def cmd_synth(args: argparse.Namespace) -> int:
    specs = builtin_suite() if args.suite else [SceneSpec.from_file(args.spec)]
    overrides = {name: value for name, value in (("noise", args.noise), ("seed", args.seed)) if value is not None}
    if overrides:
        specs = [spec.with_overrides(**overrides) for spec in specs]
    out = Path(args.out)
    ensure_directory(out)
    for spec in specs:
        scene = generate(spec)
        truth_path = write_labeled_scene(scene, out / spec.name)
        logger.info("Wrote scene %s (%d parts) with truth %s", spec.name, scene.sequence.num_parts, truth_path)
    logger.info("Generated %d scene(s) under %s", len(specs), out)
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = ConfigFileHandler(args.config).load(seed=args.seed)
    if args.save_config:
        ConfigFileHandler(args.save_config).save(cfg)
        logger.info("Effective config written to %s", args.save_config)
    sequence = load_sequence(args.scene_dir)
    logger.info("Analyzing %s: %d frames, %d parts", args.scene_dir, sequence.num_frames, sequence.num_parts)
    report = analyze_sequence(sequence, cfg, trace_path=args.trace)
    save_report(report, args.report)
    logger.info("Report written to %s", args.report)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    report = load_report(args.report)
    truth_path = Path(args.truth)
    truth = load_ground_truth(truth_path)
    sequence = None
    if (truth_path.parent / MANIFEST_NAME).is_file():
        sequence = load_sequence(truth_path.parent)
    else:
        logger.warning("No scene next to %s; IOU falls back to label level", truth_path)

    report.metrics = evaluate(report, truth, sequence)
    save_report(report, args.report)
    sys.stdout.write(format_table(summarize({Path(args.report): report})[:1]))
    logger.debug("Metrics for %s: %s", args.report, report.metrics.to_dict())
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    paths = [Path(p) for p in glob.glob(args.pattern, recursive=True)]
    if not paths:
        raise IoError("no report files match", args.pattern)
    rows = summarize(load_scored_reports(paths))
    sys.stdout.write(format_csv(rows) if args.csv else format_table(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="articulate",
        description="Recover motion parts, types and screw axes from segmented point-cloud sequences.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log debug detail")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="log warnings and errors only")
    parser.add_argument("--log-dir", help="also write the log to a dated file in this directory")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="generate labeled synthetic scenes")
    source = synth.add_mutually_exclusive_group(required=True)
    source.add_argument("--suite", action="store_true", help="the built-in benchmark scenes")
    source.add_argument("--spec", metavar="PATH", help="one scene spec (JSON)")
    synth.add_argument("--noise", type=float, metavar="F", help="override the noise level of every scene")
    synth.add_argument("--seed", type=int, metavar="N", help="override the seed of every scene")
    synth.add_argument("out", metavar="OUT")
    synth.set_defaults(handler=cmd_synth)

    analyze = sub.add_parser("analyze", help="analyze a scene directory")
    analyze.add_argument("scene_dir", metavar="SCENE_DIR")
    analyze.add_argument("--config", metavar="PATH", help="analysis config (JSON)")
    analyze.add_argument("--seed", type=int, metavar="N", help="override the config seed")
    analyze.add_argument("--trace", metavar="PATH", help="write the loss trace as CSV")
    analyze.add_argument("--save-config", metavar="PATH", help="write the effective config (JSON)")
    analyze.add_argument("report", metavar="REPORT")
    analyze.set_defaults(handler=cmd_analyze)

    evaluate_cmd = sub.add_parser("eval", help="score a report against ground truth")
    evaluate_cmd.add_argument("report", metavar="REPORT")
    evaluate_cmd.add_argument("truth", metavar="TRUTH")
    evaluate_cmd.set_defaults(handler=cmd_eval)

    report = sub.add_parser("report", help="summarize scored reports by category")
    report.add_argument("--csv", action="store_true", help="print CSV instead of a text table")
    report.add_argument("pattern", metavar="GLOB")
    report.set_defaults(handler=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if args.verbose:
        set_verbosity(logging.DEBUG)
    elif args.quiet:
        set_verbosity(logging.WARNING)
    else:
        set_verbosity(logging.INFO)

    try:
        if args.log_dir:
            enable_file_logging(args.log_dir)
        return args.handler(args)
    except ArticulationError as exc:
        logger.error("error: %s", exc)
        return 1
    except OSError as exc:
        logger.error("error: %s", exc)
        return 1
