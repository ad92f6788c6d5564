"""
Separation engine: orchestrator of the decision pipeline.
"""
import time
from typing import Optional

from semisep.config import Config
from semisep.core.errors import ExitStatus, SemisepError
from semisep.core.observability import logger
from semisep.core.records import Report, Verdict
from semisep.engine.decide import decide_separation, generic_separation
from semisep.engine.oracle import cross_check
from semisep.engine.scene import Scene

MODES = ("generic", "full", "oracle-only")


def verdict_status(verdict: Verdict, mode: str) -> ExitStatus:
    if not verdict.generic:
        return ExitStatus.NOT_SEPARABLE
    if mode == "generic":
        return ExitStatus.GENERIC_ONLY
    return ExitStatus.SEPARABLE if verdict.strict else ExitStatus.GENERIC_ONLY


class SeparationEngine:
    def __init__(self, run_oracle: Optional[bool] = None, seed: Optional[int] = None):
        # None: the oracle runs in full mode only when a degree sweep is requested
        self.run_oracle = run_oracle
        self.seed = seed
        logger.log("Engine", "Initialized", {"run_oracle": run_oracle, "max_blowups": Config.MAX_BLOWUPS})

    def _wants_oracle(self, scene: Scene, mode: str) -> bool:
        if mode == "oracle-only":
            return True
        if mode == "generic":
            return False
        if self.run_oracle is not None:
            return self.run_oracle
        return scene.options.degree_sweep is not None

    def run(self, scene: Scene, mode: str = "full") -> Report:
        """Run one scene through the pipeline and return its report."""
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
        logger.log("Engine", f"Running {scene.name}", {"mode": mode, "options": scene.options.to_dict()})
        report = Report(scene=scene.name, mode=mode, status=int(ExitStatus.INPUT_ERROR))
        started = time.perf_counter()
        try:
            verdict = None
            if mode == "generic":
                verdict = generic_separation(scene, scene.options.max_blowups)
            elif mode == "full":
                verdict = decide_separation(scene, scene.options.max_blowups)
            report.timing["decide"] = time.perf_counter() - started

            if self._wants_oracle(scene, mode):
                t0 = time.perf_counter()
                report.oracle = cross_check(
                    scene.A,
                    scene.B,
                    scene.complex(),
                    verdict,
                    d_max=scene.options.resolved_degree_sweep,
                    budget=scene.options.resolved_sample_budget,
                    seed=self.seed,
                )
                report.timing["oracle"] = time.perf_counter() - t0

            report.verdict = verdict
            if verdict is not None:
                report.status = int(verdict_status(verdict, mode))
            else:
                found = report.oracle.certificate is not None
                report.status = int(ExitStatus.SEPARABLE if found else ExitStatus.NOT_SEPARABLE)
        except SemisepError as exc:
            logger.log("Engine", f"{scene.name}: {exc.message}", exc.to_dict(), level="ERROR")
            report.status = int(exc.exit_status)
            report.error = exc.to_dict()
        report.timing["total"] = time.perf_counter() - started
        logger.log("Engine", f"{scene.name} finished with status {report.status}", report.timing)
        return report
