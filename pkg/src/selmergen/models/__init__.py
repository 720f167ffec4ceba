# models/__init__.py
from .policy import Policy
from .config import GenerationConfig, GenerationSettings
