"""Spatial aggregation mining: streamline bundling over sampled fields,
ambiguity-driven sampling for pocket finding, and perturbation-based Jordan
structure inference."""

__version__ = "0.1.0"
