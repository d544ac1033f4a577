from django.apps import AppConfig


class InfconvConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'infconv'
    verbose_name = 'Infimal convolution toolkit'
