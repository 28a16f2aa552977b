from fractions import Fraction

from pydantic import BaseModel as PydanticBaseModel
from pydantic import Extra


class BaseModel(PydanticBaseModel):
    """
    Baseclass for every vlines value type, report and document.

    Instances are immutable once validated. Values that are expensive to derive
    (homology presentations, cofibers) are memoized in private attributes.
    """

    class Config:
        extra: str = Extra.forbid
        allow_mutation = False
        arbitrary_types_allowed = True
        # Nested values (complexes inside maps, levels inside towers) keep their identity.
        copy_on_model_validation = "none"
        json_encoders = {Fraction: lambda v: str(v)}
