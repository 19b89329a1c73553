from .runner import DecompositionRunner

__all__ = ["DecompositionRunner"]
