from django.apps import AppConfig


class QpsurfConfig(AppConfig):
    name = "qpsurf"
    verbose_name = "Quivers with potentials on surfaces"
