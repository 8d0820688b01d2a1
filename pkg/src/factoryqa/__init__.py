"""Retrieval-augmented question answering over factory manuals and
worker-shared issue reports, with a benchmarking harness for comparing
chat-completion endpoints on factuality, completeness, and hallucination."""

__version__ = "0.1.0"
