from django.apps import AppConfig


class RegularizationConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "regularization"
    verbose_name = "UV regularization"
