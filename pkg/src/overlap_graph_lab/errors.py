"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class OverlapGraphError(Exception):
    exit_code = 1


class ConfigError(OverlapGraphError, ValueError):
    """Invalid configuration, flags or distribution spec."""

    exit_code = 1


class ParseError(ConfigError):
    """Malformed input text (edge lists, pattern specs, CSV files)."""


class SchemaError(ConfigError):
    """A CSV input lacks a required column."""


class DomainError(OverlapGraphError, ValueError):
    exit_code = 3


class SizeError(OverlapGraphError, ValueError):
    """An enumeration guard was hit."""

    exit_code = 3


class LayerSizeError(SizeError):
    """A sampled layer is larger than the ambient node count."""

    def __init__(self, layer: int, size: int, n: int):
        super().__init__(f"layer {layer}: sampled size {size} exceeds n={n}")
        self.layer = layer
        self.size = size
        self.n = n
