from django.conf import settings
from django.core.management.base import CommandError

from regularization.checks import LEVELS, run_checks
from regularization.serializers import CheckOutcomeSerializer

from ._numeric import EXIT_CHECK_FAILED, NumericCommand


class Command(NumericCommand):
    help = (
        "Run the oracle suite: closed-form identities, limits, finite "
        "differences and the Monte-Carlo J oracle. Exits 1 if any check fails."
    )
    serializer_class = CheckOutcomeSerializer
    many = True

    def add_command_arguments(self, parser):
        parser.add_argument("--level", choices=LEVELS, default="fast")
        parser.add_argument(
            "--seed",
            type=int,
            default=settings.UVREG_SEED,
            help="Seed of the Monte-Carlo oracle (default: %(default)s).",
        )
        parser.add_argument(
            "--samples",
            type=int,
            default=None,
            help="Monte-Carlo samples (default: set by --level).",
        )

    def compute(self, level="fast", seed=None, samples=None, tol=None, **options):
        if samples is None:
            samples = (
                settings.UVREG_MC_SAMPLES_FAST
                if level == "fast"
                else settings.UVREG_MC_SAMPLES_FULL
            )
        return run_checks(level=level, seed=seed, rel_tol=tol, samples=samples)

    def emit(self, payload, fmt, **options):
        super().emit(payload, fmt, **options)
        failed = [outcome.name for outcome in payload if not outcome.passed]
        if failed:
            raise CommandError(
                f"{len(failed)} of {len(payload)} checks failed: {', '.join(failed)}",
                returncode=EXIT_CHECK_FAILED,
            )
