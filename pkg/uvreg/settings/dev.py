from .base import *

# Quick-start development settings - chatty logging, nothing else changes.

DEBUG = True

LOGGING["loggers"]["regularization"]["level"] = "DEBUG"
LOGGING["handlers"]["console"]["formatter"] = "simple"
