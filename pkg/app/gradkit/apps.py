from django.apps import AppConfig


class GradkitConfig(AppConfig):
    name = 'gradkit'
