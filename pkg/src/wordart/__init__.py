"""wordart: a user-steerable artistic typography engine.

Subpackages:
    glyph      font outline parsing and exact Bezier curve algebra
    raster     differentiable soft rasterization with analytic gradients
    semtypo    region selection and the semantic optimization loop
    llm        prompt templates, concretization parsing, chat backends
    providers  stylize/texture rendering stages (mock + HTTP)
    ranker     candidate scoring and Top-X evaluation
    pipeline   end-to-end orchestration with the quality feedback loop
    service    HTTP/SSE facade for the studio UI
"""

__version__ = "0.1.0"
