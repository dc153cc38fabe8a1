"""Conversational scripting errors."""


class ScriptingError(Exception):
    """Base class for scripting failures."""


class LlmTransport(ScriptingError):
    """The language-model endpoint could not be reached."""


class MalformedToolCall(ScriptingError):
    """The model kept answering without a usable tool invocation."""


class InvalidChoice(ScriptingError):
    """Menu selection outside 0-4, or option 0 without a description."""
