"""Exact Hermitian geometry on nilmanifold-type Lie models and Fourier tori."""

from .forms import Form, basis_form, exterior_algebra
from .hermitian import Metric, model_metric
from .models import CATALOG_NAMES, LieModel, TorusModel, catalog_model, resolve_model, validate_model
from .scalars import GaussianRational, gr

__version__ = "0.1.0"

__all__ = [
    "CATALOG_NAMES",
    "Form",
    "GaussianRational",
    "LieModel",
    "Metric",
    "TorusModel",
    "basis_form",
    "catalog_model",
    "exterior_algebra",
    "gr",
    "model_metric",
    "resolve_model",
    "validate_model",
]
