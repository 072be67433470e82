"""Offline command line harness.

`gesture-rps pipeline` runs selected stages over image files and writes the
stage images (PGM/PPM), a JSON report, a delimited feature row and matplotlib
figures. `gesture-rps simulate` plays scripted games headlessly with a seeded
generator. `gesture-rps serve` starts the HTTP/WebSocket service. All file
outputs are bit-reproducible for identical inputs and arguments.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from random import Random
from typing import Optional

from . import geometry, imaging, netpbm
from .config import config_path_from_env, load_app_config
from .errors import DegenerateHistogram, GestureRpsError
from .game import MatchVerdict, always_lose, always_win, run_game, scripted
from .i18n import PhraseTable, load_locale_tag
from .recognition import Calibration, Gesture, classify

STAGES = ("gray", "otsu", "subtract", "sobel", "hull", "features", "classify")
_STAGE_DEPS = {
    "gray": (),
    "otsu": ("gray",),
    "subtract": (),
    "sobel": ("otsu",),
    "hull": ("sobel",),
    "features": ("hull",),
    "classify": ("features",),
}

_GESTURE_KEY = {"rock": "Rock", "paper": "Paper", "scissors": "Scissors", "unknown": "Unknown"}
_VERDICT_KEY = {
    MatchVerdict.PLAYER: "You win the match",
    MatchVerdict.OPPONENT: "You lose the match",
    MatchVerdict.DRAWN: "Match drawn, play again",
}


class CliError(GestureRpsError):
    """Usage or input problem; exits with status 2."""


def parse_stages(text: str) -> list[str]:
    """Validate a comma-separated stage list and put it in pipeline order."""
    wanted = [s.strip() for s in text.split(",") if s.strip()]
    if not wanted:
        raise CliError("no stages selected")
    unknown = [s for s in wanted if s not in STAGES]
    if unknown:
        raise CliError(f"unknown stages {unknown}; choose from {', '.join(STAGES)}")
    selected = set(wanted)
    for stage in wanted:
        missing = [dep for dep in _STAGE_DEPS[stage] if dep not in selected]
        if missing:
            raise CliError(f"stage '{stage}' needs {missing} selected as well")
    return [s for s in STAGES if s in selected]


def _phrases(lang: Optional[str], default: str) -> PhraseTable:
    tag = lang or default
    try:
        return load_locale_tag(tag)
    except FileNotFoundError:
        return PhraseTable(tag)


def run_pipeline(args: argparse.Namespace) -> int:
    stages = parse_stages(args.stages)
    app_cfg = load_app_config(config_path_from_env(args.config))
    background_k = args.threshold_k if args.threshold_k is not None else app_cfg.background_k
    edge_level = args.edge_level if args.edge_level is not None else app_cfg.edge_level

    try:
        frame = netpbm.load_frame(args.input)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read input {args.input}: {exc}") from exc
    background = None
    if "subtract" in stages:
        if not args.background:
            raise CliError("stage 'subtract' needs --background")
        try:
            background = netpbm.load_frame(args.background)
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot read background {args.background}: {exc}") from exc

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    report: dict = {
        "schema": 1,
        "input": str(args.input),
        "background": str(args.background) if args.background else None,
        "stages": stages,
        "params": {"background_k": background_k, "edge_level": edge_level},
    }
    rasters: list[tuple[str, imaging.AnyImage]] = []

    gray = foreground = binary = mask = edges = None
    hull = None
    features = None
    hist = None
    if "gray" in stages:
        gray = imaging.to_grayscale(frame)
        netpbm.save_pgm(gray, out_dir / "gray.pgm")
        rasters.append(("gray", gray))
    if "subtract" in stages:
        foreground = imaging.background_subtract(background, frame, background_k)
        netpbm.save_pgm(foreground, out_dir / "subtract.pgm")
        rasters.append(("subtract", foreground))
    if "otsu" in stages:
        hist = imaging.histogram(gray)
        try:
            otsu_k: Optional[int] = imaging.otsu_threshold(hist)
            threshold_used = otsu_k
        except DegenerateHistogram:
            otsu_k = None
            threshold_used = imaging.OTSU_FALLBACK_LEVEL
        binary = imaging.binarize(gray, threshold_used)
        netpbm.save_pgm(binary, out_dir / "otsu.pgm")
        rasters.append(("otsu", binary))
        report["otsu_k"] = otsu_k
        report["threshold_used"] = threshold_used
        mask = imaging.mask_and(foreground, binary) if foreground is not None else binary
    if "sobel" in stages:
        edges = imaging.sobel(mask, edge_level)
        netpbm.save_pgm(edges, out_dir / "sobel.pgm")
        rasters.append(("sobel", edges))
    if "hull" in stages:
        points = geometry.extract_points(edges)
        hull = geometry.jarvis_hull(geometry.row_extremes(points)) if points else None
        report["hull"] = hull.to_json() if hull else None
        outline = geometry.draw_polygon_outline(edges, hull.vertices) if hull else edges
        netpbm.save_pgm(outline, out_dir / "hull.pgm")
    if "features" in stages:
        features = (
            geometry.compute_features(hull, mask) if hull else geometry.HullFeatures.empty()
        )
        report.update(features.to_json())
        white = geometry.hull_white_mask(hull, mask) if hull else imaging.BinaryImage.from_array(
            mask.values * 0
        )
        netpbm.save_pgm(white, out_dir / "features.pgm")
        rasters.append(("features", white))
    if "classify" in stages:
        if args.calib_extent is None:
            raise CliError("stage 'classify' needs --calib-extent (fist span in pixels)")
        calib = Calibration(rock_extent=args.calib_extent, captured_at=0, valid=True)
        reading = classify(features, calib, app_cfg.recognition)
        phrases = _phrases(args.lang, app_cfg.default_language)
        report["label"] = reading.label.value
        report["label_text"] = phrases.lookup(_GESTURE_KEY[reading.label.value])
        report["notes"] = reading.confidence_notes
        report["calib_extent"] = args.calib_extent

    (out_dir / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    _write_features_csv(out_dir / "features.csv", report)
    if not args.no_figures:
        _write_figures(out_dir, hist, report.get("otsu_k"), rasters, edges, hull, features, report)
    print(f"wrote {out_dir / 'report.json'}")
    return 0


def _write_features_csv(path: Path, report: dict) -> None:
    columns = [
        "schema",
        "input",
        "otsu_k",
        "threshold_used",
        "total_area",
        "white_area",
        "ratio",
        "extent",
        "label",
    ]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerow([report.get(c, "") for c in columns])


def _write_figures(out_dir, hist, otsu_k, rasters, edges, hull, features, report) -> None:
    from . import figures  # matplotlib import deferred to the report path

    fig_dir = out_dir / "figures"
    fig_dir.mkdir(exist_ok=True)
    if hist is not None:
        figures.save_histogram_figure(hist, otsu_k, fig_dir / "histogram.png")
    if rasters:
        figures.save_stage_grid(rasters, fig_dir / "stages.png")
    if edges is not None and features is not None:
        figures.save_hull_overlay(
            edges, hull, features, report.get("label"), fig_dir / "hull_overlay.png"
        )


def run_simulate(args: argparse.Namespace) -> int:
    app_cfg = load_app_config(config_path_from_env(args.config))
    phrases = _phrases(args.lang, app_cfg.default_language)
    script = args.script
    if script == "always-win":
        strategy = always_win
    elif script == "always-lose":
        strategy = always_lose
    else:
        try:
            moves = [Gesture(m.strip().lower()) for m in script.split(",") if m.strip()]
        except ValueError as exc:
            raise CliError(f"bad script {script!r}: {exc}") from exc
        if not moves or Gesture.UNKNOWN in moves:
            raise CliError("script must be a comma list of rock/paper/scissors moves")
        strategy = scripted(moves)

    records = run_game(app_cfg.game, Random(args.seed), strategy)

    lines = [f"# gesture-rps simulate seed={args.seed} script={script} lang={phrases.locale}"]
    respect_track = [app_cfg.game.initial_respect]
    for i, match in enumerate(records, start=1):
        opponent = (
            phrases.lookup("Boss")
            if match.opponent_kind == "boss"
            else f"{phrases.lookup('Servant')} {match.opponent_id}"
        )
        lines.append(f"match {i:03d} opponent={match.opponent_kind}:{match.opponent_id or '-'} ({opponent})")
        for j, rnd in enumerate(match.rounds, start=1):
            lines.append(
                f"  round {j}: player={phrases.lookup(_GESTURE_KEY[rnd.player.value])}"
                f" opponent={phrases.lookup(_GESTURE_KEY[rnd.opponent.value])}"
                f" outcome={rnd.outcome.value}"
            )
        lines.append(
            f"  result: {phrases.lookup(_VERDICT_KEY[match.verdict])}"
            f" respect={match.respect_after}"
        )
        respect_track.append(match.respect_after)
    final_phase = records[-1].phase_after.value if records else "selecting_opponent"
    lines.append(f"final phase={final_phase} respect={respect_track[-1]} matches={len(records)}")
    transcript = "\n".join(lines) + "\n"
    sys.stdout.write(transcript)

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "transcript.txt").write_text(transcript, encoding="utf-8")
        with open(out_dir / "respect.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["match", "opponent_kind", "opponent_id", "verdict", "respect_after"])
            for i, match in enumerate(records, start=1):
                writer.writerow(
                    [i, match.opponent_kind, match.opponent_id or "", match.verdict.value, match.respect_after]
                )
        from . import figures

        figures.save_respect_trajectory(respect_track, out_dir / "respect.png")
    return 0


def run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(config_path=config_path_from_env(args.config))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gesture-rps",
        description="Hand-gesture rock-paper-scissors: offline pipeline, game simulation, service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pipe = sub.add_parser("pipeline", help="run pipeline stages on image files")
    pipe.add_argument("--input", required=True, help="input frame (.ppm, or .png with Pillow)")
    pipe.add_argument("--background", help="background frame (required by the subtract stage)")
    pipe.add_argument(
        "--stages",
        default=",".join(STAGES),
        help=f"comma list from: {', '.join(STAGES)} (default: all)",
    )
    pipe.add_argument("--out", required=True, help="output directory")
    pipe.add_argument("--threshold-k", type=int, help="background subtraction threshold [0, 765]")
    pipe.add_argument("--edge-level", type=int, help="edge magnitude threshold (default 128)")
    pipe.add_argument("--calib-extent", type=float, help="fist hull span substituting calibration")
    pipe.add_argument("--config", help="configuracao.conf path (or $GESTURE_RPS_CONFIG)")
    pipe.add_argument("--lang", help="locale tag for display strings (e.g. pt_BR)")
    pipe.add_argument("--no-figures", action="store_true", help="skip matplotlib figures")
    pipe.set_defaults(func=run_pipeline)

    sim = sub.add_parser("simulate", help="play scripted games headlessly")
    sim.add_argument("--seed", type=int, required=True, help="random seed (reproducible runs)")
    sim.add_argument(
        "--script",
        default="always-win",
        help="'always-win', 'always-lose', or a comma list of moves to cycle",
    )
    sim.add_argument("--config", help="configuracao.conf path (or $GESTURE_RPS_CONFIG)")
    sim.add_argument("--lang", help="locale tag for display strings")
    sim.add_argument("--out", help="directory for transcript.txt, respect.csv, respect.png")
    sim.set_defaults(func=run_simulate)

    serve = sub.add_parser("serve", help="run the HTTP/WebSocket service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--config", help="configuracao.conf path (or $GESTURE_RPS_CONFIG)")
    serve.set_defaults(func=run_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GestureRpsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
