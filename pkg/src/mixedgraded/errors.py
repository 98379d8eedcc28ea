"""Exception types shared across the package."""


class InvariantViolation(ValueError):
    """A structural law failed: which law, and where."""

    def __init__(self, law, where=None, detail=""):
        self.law = law
        self.where = where
        self.detail = detail
        msg = law if where is None else f"{law} at {where}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class ParseError(ValueError):
    """Malformed document; ``position`` is a character offset or a JSON path."""

    def __init__(self, position, message):
        self.position = position
        self.message = message
        super().__init__(f"{position}: {message}")


class UnsupportedInput(ValueError):
    pass


class NotInHeart(ValueError):
    pass


class GenerationFailure(RuntimeError):
    pass
