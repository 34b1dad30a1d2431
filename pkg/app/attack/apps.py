from django.apps import AppConfig


class AttackConfig(AppConfig):
    name = 'attack'
