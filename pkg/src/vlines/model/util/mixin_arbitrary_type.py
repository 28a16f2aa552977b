# Mixins which do not add fields, validators or other things that pydantic
# needs to be aware of are not required to subclass pydantic.BaseModel


class ArbitraryTypeMixin(object):
    """
    Teach pydantic how to validate a plain (non-pydantic) class.

    A field annotated with a subclass accepts instances of that subclass as-is and
    hands anything else to the subclass' `coerce` classmethod.
    """

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, v):
        if isinstance(v, cls):
            return v
        return cls.coerce(v)

    @classmethod
    def coerce(cls, v):
        raise TypeError(f"{cls.__name__} expected, got [{type(v).__name__}]")
