from .base_model import BaseModel
from .import_export import DocumentInput, Exporter, Loader
from .mixin_arbitrary_type import ArbitraryTypeMixin
from .mixin_commentable_model import COMMENT_REGEX, CommentableModelMixin, is_comment
from .rational import Rational, parse_rational
from .schema_version import SchemaVersion, SemVer
