"""Error taxonomy for the figure renderer."""


class FigureConfigError(ValueError):
    """Malformed figure spec: unknown keys, bad kind, missing fields."""


class SchemaError(ValueError):
    """CSV does not provide what the spec references."""


class ArtifactMismatchError(ValueError):
    """CSV bytes do not match the hash recorded in the metadata."""
