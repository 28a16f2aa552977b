import re

from pydantic import BaseModel as PydanticBaseModel
from pydantic import Extra, root_validator

COMMENT_REGEX = r"^(.*[_-])?comment$"


def is_comment(thing: str) -> bool:
    return re.match(COMMENT_REGEX, thing) is not None


# Mixins which add fields, validators or other things that pydantic
# needs to be aware of must subclass pydantic.BaseModel


class CommentableModelMixin(PydanticBaseModel):
    """
    Let hand-written documents carry free-form comments.

    Any key matching COMMENT_REGEX (`comment`, `d2-comment`, `source_comment`, ...) is
    accepted and ignored. Every other unknown key is still an error.
    """

    class Config:
        extra = Extra.allow

    @root_validator(pre=True)
    @classmethod
    def check_extra_fields(cls, values: dict):
        for key in values:
            if key in cls.__fields__:
                continue
            if any(key == field.alias for field in cls.__fields__.values()):
                continue
            if not is_comment(key):
                raise ValueError(f'"{cls.__name__}" has no field "{key}"')
        return values

    def comments(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if is_comment(k)}
