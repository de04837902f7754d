from .http import HttpProvider
from .mock import MockProvider
from .types import CONDITIONS, RenderedImage, StylizeRequest, TextureRequest

__all__ = [
    "CONDITIONS",
    "HttpProvider",
    "MockProvider",
    "RenderedImage",
    "StylizeRequest",
    "TextureRequest",
]
