"""Knowledge-graph digital twin for household electricity data.

An RDF store with a small SPARQL engine, a question-to-query
transformer, and a retrieval-augmented prompt pipeline, exposed over a
CLI and an HTTP service.
"""

__version__ = "0.1.0"
