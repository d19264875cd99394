# Model markup package

from src.markup.document import ParseResult, load_model, parse_model, serialize_model
from src.markup.grammar import MARKUP_GRAMMAR, MarkupError, parse_literal, parse_signature

__all__ = [
    "MARKUP_GRAMMAR",
    "MarkupError",
    "ParseResult",
    "load_model",
    "parse_literal",
    "parse_model",
    "parse_signature",
    "serialize_model",
]
