"""neutro: espacios métricos neutrosóficos, contracciones y puntos fijos."""

__version__ = "0.1.0"
