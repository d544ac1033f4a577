#!/usr/bin/env python
"""Django's command-line utility for the envelope toolkit."""
import os
import sys


def main(argv=None):
    """Run a management command and return its exit code."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'varanalysis.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    try:
        execute_from_command_line(sys.argv if argv is None else argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else (0 if exc.code is None else 2)
    return 0


if __name__ == '__main__':
    sys.exit(main())
