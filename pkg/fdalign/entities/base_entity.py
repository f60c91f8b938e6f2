class BaseEntity:
    """Entities print as their JSON-ready dict form."""

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.to_dict()})"

    __str__ = __repr__
