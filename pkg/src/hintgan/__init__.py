"""Story-aligned commonsense assertions, hint-augmented datasets, and an
adversarially trained toy generator/discriminator pair."""

__version__ = "0.1.0"
