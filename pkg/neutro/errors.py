"""
Excepciones del paquete.

Las comprobaciones (axiomas, contracción, familia cuasi-métrica) nunca lanzan
por un fallo: lo devuelven en su informe. Estas excepciones son para entradas
inválidas y para fallos de cálculo.
"""


class NeutroError(Exception):
    """Raíz de todos los errores de neutro."""


class DomainError(NeutroError, ValueError):
    """Valor fuera de dominio: s fuera de [0,1], índice fuera de rango, etc."""


class PreconditionError(NeutroError):
    pass


class SearchFailureError(NeutroError):
    """La búsqueda en rejilla no encontró testigo (operación no continua)."""


class ConstructionError(NeutroError):
    pass


class CeilingTooSmallError(NeutroError):
    """El predicado de h_eps no se cumple ni en lambda_max."""


class DegeneratePairError(NeutroError):
    pass


class DivergenceError(NeutroError):
    pass


class InsufficientDataError(NeutroError):
    pass


class ConfigError(NeutroError):
    """Config JSON mal formada o inválida (mensaje anclado a una línea)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"línea {line}: " if line is not None else ""
        super().__init__(prefix + message)
