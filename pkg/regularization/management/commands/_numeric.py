"""Shared plumbing of the numerical management commands.

Subclasses declare their own flags in ``add_command_arguments``, return a
payload from ``compute`` and let ``emit`` render it. Library errors are
turned into ``CommandError`` with these return codes:

    1  a check failed (raised by ``verify`` itself)
    2  argument outside the domain of the operation
    3  quadrature, root finding or minimization did not converge
    4  the output could not be written
"""
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from regularization.exceptions import (
    DegeneratePole,
    DomainError,
    NoSignChange,
    NonConvergence,
    PoleNotBracketed,
)
from regularization.serializers import render_json

EXIT_CHECK_FAILED = 1
EXIT_DOMAIN = 2
EXIT_NONCONVERGENCE = 3
EXIT_IO = 4

CONVERGENCE_ERRORS = (NonConvergence, PoleNotBracketed, DegeneratePole, NoSignChange)


def format_value(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_text(data) -> str:
    """Aligned ``key: value`` lines; a list of records becomes a table."""
    if isinstance(data, dict):
        width = max(len(key) for key in data)
        lines = [
            f"{key + ':':<{width + 1}} {format_value(value)}"
            for key, value in data.items()
        ]
        return "\n".join(lines) + "\n"

    records = list(data)
    if not records:
        return ""
    columns = list(records[0])
    cells = [[format_value(record[column]) for column in columns] for record in records]
    widths = [
        max(len(column), *(len(row[i]) for row in cells))
        for i, column in enumerate(columns)
    ]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


class NumericCommand(BaseCommand):
    formats = ("text", "json")
    serializer_class = None
    many = False

    # Django's own system checks have nothing to inspect here.
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument(
            "--tol",
            type=float,
            default=settings.UVREG_REL_TOL,
            help="Relative tolerance of every integral (default: %(default)g).",
        )
        parser.add_argument(
            "--format",
            choices=self.formats,
            default=self.formats[0],
            help="Output format (default: %(default)s).",
        )
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def compute(self, **options):
        raise NotImplementedError("subclasses of NumericCommand must provide compute()")

    def handle(self, *args, **options):
        if not options["tol"] > 0.0:
            raise CommandError(
                f"--tol must be positive, got {options['tol']}", returncode=EXIT_DOMAIN
            )
        try:
            payload = self.compute(**options)
            self.emit(payload, options["format"], **options)
        except DomainError as exc:
            raise CommandError(str(exc), returncode=EXIT_DOMAIN) from exc
        except CONVERGENCE_ERRORS as exc:
            raise CommandError(
                f"{type(exc).__name__}: {exc}", returncode=EXIT_NONCONVERGENCE
            ) from exc
        except OSError as exc:
            raise CommandError(str(exc), returncode=EXIT_IO) from exc

    def serialize(self, payload):
        return self.serializer_class(payload, many=self.many).data

    def emit(self, payload, fmt, **options):
        data = self.serialize(payload)
        if fmt == "json":
            self.stdout.write(render_json(data), ending="")
        else:
            self.stdout.write(render_text(data), ending="")
