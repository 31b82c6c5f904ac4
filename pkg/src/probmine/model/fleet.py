"""The bundled test fleet of finite content spaces."""
from __future__ import annotations

from importlib import resources

from .content import parse_model

FLEET_NAMES = ("two", "sub4", "three", "sub6", "point", "trivial")


def model_text(name):
    return resources.files("probmine.data").joinpath(f"{name}.model").read_text()


def fleet_model(name):
    return parse_model(model_text(name), name=name)[0]


def fleet():
    return [fleet_model(n) for n in FLEET_NAMES]
