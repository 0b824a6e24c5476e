"""
Django settings for the uvreg project.

The project has no database, no URL routing and no templates: it is a
numerical library packaged as a Django app plus management commands.

Every numerical default can be overridden from the environment or a .env
file, see https://github.com/henriquebastos/python-decouple
"""
from pathlib import Path

from decouple import config
from dotenv import find_dotenv, load_dotenv

load_dotenv(find_dotenv())

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Nothing is signed; Django refuses to start without a key.
SECRET_KEY = config("SECRET_KEY", default="uvreg-local-only")

DEBUG = config("DEBUG", default=False, cast=bool)

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    # Third-party apps
    "rest_framework",
    # Project apps
    "regularization.apps.RegularizationConfig",
]

DATABASES = {}

USE_TZ = True

TIME_ZONE = "UTC"


# Django REST Framework
# Serializers and renderers only; no views are exposed.

REST_FRAMEWORK = {
    "DEFAULT_RENDERER_CLASSES": ["rest_framework.renderers.JSONRenderer"],
    "DEFAULT_PARSER_CLASSES": ["rest_framework.parsers.JSONParser"],
    "UNAUTHENTICATED_USER": None,
    "STRICT_JSON": True,
    "COERCE_DECIMAL_TO_STRING": False,
}


# Numerics

# Relative tolerance of every physics integral (`--tol` overrides it).
UVREG_REL_TOL = config("UVREG_REL_TOL", default=1e-10, cast=float)

# Integrand evaluation budget of one adaptive integral.
UVREG_MAX_EVALUATIONS = config("UVREG_MAX_EVALUATIONS", default=1_000_000, cast=int)

# Seed of the Monte-Carlo J oracle (`--seed` overrides it).
UVREG_SEED = config("UVREG_SEED", default=0xC0FFEE, cast=int)

# Worker processes of a sweep (`--jobs` overrides it).
UVREG_JOBS = config("UVREG_JOBS", default=1, cast=int)

UVREG_MC_SAMPLES_FAST = config("UVREG_MC_SAMPLES_FAST", default=200_000, cast=int)
UVREG_MC_SAMPLES_FULL = config("UVREG_MC_SAMPLES_FULL", default=10_000_000, cast=int)


# Logging
# Results go to stdout, diagnostics go to stderr through this config.

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "[%(asctime)s] %(levelname)s [%(name)s:%(lineno)s] %(message)s",
            "datefmt": "%d/%b/%Y %H:%M:%S",
        },
        "simple": {"format": "%(levelname)s %(message)s"},
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": True,
        },
        "regularization": {
            "handlers": ["console"],
            "level": config("UVREG_LOG_LEVEL", default="INFO"),
            "propagate": False,
        },
    },
}
