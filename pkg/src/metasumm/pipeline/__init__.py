"""Command-line orchestration: ingest, training stages, evaluation, routing."""
