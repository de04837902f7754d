"""Exception hierarchy shared across the engine.

Every error raised on purpose derives from WordArtError so callers can
catch engine failures without swallowing programming errors.
"""


class WordArtError(Exception):
    pass


# --- font / geometry ---

class MalformedFont(WordArtError):
    """A required TrueType table is missing or does not parse."""


class MissingGlyph(WordArtError):
    """The requested codepoint is not mapped in the font's cmap."""


class UnsupportedOutlineFormat(WordArtError):
    """Outline data we deliberately do not handle (CFF, deep composites)."""


class InvalidParameter(WordArtError):
    """A numeric argument is outside its legal range."""


class DegenerateBBox(WordArtError):
    """Non-empty outline with a zero-area bounding box."""


class InvalidGeometry(WordArtError):
    """Parameter vector does not reconstruct a closed outline."""


class ShapeMismatch(WordArtError):
    """Array dimensions disagree with the structure they must match."""


# --- rasterizer / optimization ---

class CropTooLarge(WordArtError):
    pass


class EmptyOutline(WordArtError):
    pass


class RegionInfeasible(WordArtError):
    """Too few control points to satisfy the requested region length."""


class NonFiniteLoss(WordArtError):
    """Optimization produced NaN/Inf; carries the last good snapshot."""

    def __init__(self, message, snapshot=None, trajectory=None):
        super().__init__(message)
        self.snapshot = snapshot
        self.trajectory = trajectory


class DenoiserFailure(WordArtError):
    """A guidance provider raised; original error attached as __cause__."""


# --- llm engine ---

class EmptyConcept(WordArtError):
    pass


class NoJsonFound(WordArtError):
    pass


class JsonSyntaxError(WordArtError):
    pass


class SchemaError(WordArtError):
    pass


class ParseFailure(WordArtError):
    pass


class BackendUnavailable(WordArtError):
    pass


class ExhaustedRetries(WordArtError):
    """All attempts failed validation; .attempts lists each attempt's error."""

    def __init__(self, message, attempts=None):
        super().__init__(message)
        self.attempts = attempts or []


# --- render providers ---

class ProviderUnavailable(WordArtError):
    pass


class ProviderRejected(WordArtError):
    def __init__(self, message, code=None):
        super().__init__(message)
        self.code = code


# --- ranker / pipeline ---

class MissingScores(WordArtError):
    pass


class IoFailure(WordArtError):
    pass
