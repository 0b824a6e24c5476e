import logging

from django.conf import settings
from django.core.management.base import CommandError

from regularization.sweep import SCALES, coupling_grid, render_rows, run_sweep

from ._numeric import EXIT_DOMAIN, NumericCommand

logger = logging.getLogger(__name__)


class Command(NumericCommand):
    help = (
        "Evaluate the second iteration on a grid of coupling values and write "
        "one row per value. Failed rows carry an error message instead of numbers."
    )
    formats = ("csv", "json")

    def add_command_arguments(self, parser):
        parser.add_argument("--g-min", type=float, required=True)
        parser.add_argument("--g-max", type=float, required=True)
        parser.add_argument("--points", type=int, required=True)
        parser.add_argument("--scale", choices=SCALES, default="log")
        parser.add_argument(
            "--out", default="-", help="Output file, '-' for stdout (default)."
        )
        parser.add_argument(
            "--jobs",
            type=int,
            default=settings.UVREG_JOBS,
            help="Worker processes (default: %(default)s).",
        )
        parser.add_argument("--without-j", action="store_true")

    def compute(
        self,
        g_min,
        g_max,
        points,
        scale="log",
        jobs=1,
        without_j=False,
        tol=None,
        **options,
    ):
        if jobs < 1:
            raise CommandError(
                f"--jobs must be at least 1, got {jobs}", returncode=EXIT_DOMAIN
            )
        grid = coupling_grid(g_min, g_max, points, scale)
        return run_sweep(
            grid,
            jobs=jobs,
            rel_tol=tol,
            include_j=not without_j,
            max_evaluations=settings.UVREG_MAX_EVALUATIONS,
        )

    def emit(self, payload, fmt, out="-", **options):
        text = render_rows(payload, fmt)
        if out == "-":
            self.stdout.write(text, ending="")
            return
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        failed = sum(1 for row in payload if row["error"])
        logger.info("Wrote %d rows (%d failed) to %s", len(payload), failed, out)
