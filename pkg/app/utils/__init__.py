"""Shared helpers: errors, logging, console formatting and worker pools."""
