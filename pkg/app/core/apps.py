from django.apps import AppConfig


class CoreConfig(AppConfig):
    """Shared errors, random streams, report writers and the commands."""

    name = 'core'
