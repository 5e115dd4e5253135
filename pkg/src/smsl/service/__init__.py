"""HTTP supervision service: inspection, sessions, decisions, events."""

from .app import ServiceConfig, create_app, load_document

__all__ = ["ServiceConfig", "create_app", "load_document"]
