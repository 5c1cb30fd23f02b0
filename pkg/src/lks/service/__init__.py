"""FastAPI service wrapping the core package.

The handlers are plain functions over pydantic request/response models; the
HTTP app and the CLI are both thin clients of the same handlers, so file
and wire outputs are byte-identical.
"""

from .app import create_app

__all__ = ["create_app"]
