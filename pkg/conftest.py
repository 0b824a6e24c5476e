"""Configure Django before pytest collects the Django test modules."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "uvreg.settings.base")
django.setup()
