""" Schema / Shape of the header line of embedding files. """

from marshmallow import Schema, fields, validate, RAISE


class EmbeddingHeaderSchema(Schema):
    """Validation schema for `#fkt v1` header fields."""

    class Meta:  # pylint: disable=too-few-public-methods
        unknown = RAISE

    n = fields.Integer(required=True, strict=False, validate=validate.Range(min=1))
    d = fields.Integer(required=True, strict=False, validate=validate.Range(min=1))
    c = fields.Integer(required=True, strict=False, validate=validate.Range(min=2))
    domain = fields.Str(required=True, validate=validate.OneOf(["source", "target"]))
