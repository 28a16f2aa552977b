# Document models live in vlines.model.documents; they depend on the algebra modules,
# which in turn use vlines.model.util, so they are not imported here.

from .supported_versions import CURRENT_VERSION, SUPPORTED_VERSIONS

from .util import (  # isort:skip
    ArbitraryTypeMixin,
    BaseModel,
    COMMENT_REGEX,
    CommentableModelMixin,
    DocumentInput,
    Exporter,
    Loader,
    Rational,
    SchemaVersion,
    SemVer,
    is_comment,
    parse_rational,
)
