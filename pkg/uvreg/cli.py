"""Console entry point of the ``uvreg`` script.

``uvreg <command> [flags]`` is ``manage.py <command> [flags]`` with the
project settings preselected. Django reserves the name ``check`` for its
system checks, so ``uvreg check`` runs the ``verify`` command.
"""
import os
import sys

COMMAND_ALIASES = {"check": "verify"}


def main(argv=None):
    """Run a uvreg management command."""
    argv = list(sys.argv if argv is None else argv)
    if len(argv) > 1:
        argv[1] = COMMAND_ALIASES.get(argv[1], argv[1])
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "uvreg.settings.base")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    execute_from_command_line(argv)


if __name__ == "__main__":
    main()
