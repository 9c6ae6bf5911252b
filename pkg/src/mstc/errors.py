class MstcError(Exception):
    """Base class for user-facing errors."""


class InputError(MstcError, ValueError):
    """Invalid arguments or instance data."""


class ParseError(InputError):
    """Malformed instance or solution text, located by line number."""

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        self.message = message
        super().__init__(self._render())

    def _render(self):
        where = self.source or "<input>"
        if self.line is not None:
            where = f"{where}:{self.line}"
        return f"{where}: {self.message}"

    def with_source(self, source):
        return ParseError(self.message, self.line, source)
