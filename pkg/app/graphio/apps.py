from django.apps import AppConfig


class GraphioConfig(AppConfig):
    name = 'graphio'
