"""
Command-line surface: decide separation for one or more scene files.

    semisep scenes/segment_split.json --mode full --out report.json --svg figure.svg

The process exits with the worst status over all scenes:
0 separable, 1 generically separable only, 2 not separable,
3 unsupported instance, 4 input error.
"""
import argparse
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from semisep import __version__
from semisep.config import Config
from semisep.core.errors import ExitStatus, SemisepError
from semisep.core.observability import logger
from semisep.core.records import Report
from semisep.engine.scene import Scene
from semisep.main_engine import MODES, SeparationEngine
from semisep.tools.report import summary, to_json
from semisep.tools.render import render_svg
from semisep.tools.scene_parser import load_scene

# pyplot state is process-global
_RENDER_LOCK = threading.Lock()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semisep",
        description="Decide strict and generic polynomial separation of plane semialgebraic sets.",
    )
    parser.add_argument("scenes", nargs="+", help="scene files (JSON)")
    parser.add_argument("--mode", choices=MODES, default="full")
    parser.add_argument("--degree-sweep", type=int, metavar="N", help="run the sampling oracle up to degree N")
    parser.add_argument("--max-blowups", type=int, metavar="N", help="blow-up guard")
    parser.add_argument("--var-order", choices=Config.VAR_ORDERS, help="projection order of the decomposition")
    parser.add_argument("--out", metavar="PATH", help="machine report (a directory when several scenes are given)")
    parser.add_argument("--svg", metavar="PATH", help="SVG figure (a directory when several scenes are given)")
    parser.add_argument("--jobs", type=int, default=0, help="scenes decided concurrently (default: one per scene, at most 4)")
    parser.add_argument("--quiet", action="store_true", help="no log output on the console")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def _target(option: Optional[str], scene_name: str, suffix: str, many: bool) -> Optional[Path]:
    if option is None:
        return None
    path = Path(option)
    if many:
        path.mkdir(parents=True, exist_ok=True)
        return path / f"{scene_name}{suffix}"
    return path


def _load(path: str, args: argparse.Namespace) -> Tuple[Optional[Scene], Optional[Report]]:
    try:
        scene = load_scene(path)
    except SemisepError as exc:
        logger.error("CLI", f"{path}: {exc.message}", exc.to_dict())
        return None, Report(scene=Path(path).stem, mode=args.mode, status=int(exc.exit_status), error=exc.to_dict())
    except OSError as exc:
        error = {"code": "E_IO", "message": str(exc)}
        logger.error("CLI", f"{path}: cannot read", error)
        return None, Report(scene=Path(path).stem, mode=args.mode, status=int(ExitStatus.INPUT_ERROR), error=error)
    scene = scene.with_options(
        var_order=args.var_order,
        max_blowups=args.max_blowups,
        degree_sweep=args.degree_sweep,
    )
    return scene, None


def run_one(path: str, args: argparse.Namespace, many: bool) -> Report:
    scene, failed = _load(path, args)
    if failed is not None:
        return failed
    report = SeparationEngine().run(scene, args.mode)
    out = _target(args.out, scene.name, ".json", many)
    if out is not None:
        out.write_text(to_json(report), encoding="utf-8")
    svg = _target(args.svg, scene.name, ".svg", many)
    if svg is not None and report.error is None:
        with _RENDER_LOCK:
            render_svg(scene, report, svg)
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger.configure(quiet=args.quiet or Config.QUIET, log_file=Config.LOG_FILE if Config.LOG_TO_FILE else None)
    try:
        Config.validate()
    except ValueError as exc:
        logger.error("CLI", f"configuration error: {exc}")
        return int(ExitStatus.INPUT_ERROR)

    many = len(args.scenes) > 1
    jobs = args.jobs or min(4, len(args.scenes))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        reports: List[Report] = list(pool.map(lambda p: run_one(p, args, many), args.scenes))

    for report in reports:
        print(summary(report))
    return max(r.status for r in reports)


if __name__ == "__main__":
    sys.exit(main())
