"""Annotation service: project storage plus the HTTP API used by the web UI."""
