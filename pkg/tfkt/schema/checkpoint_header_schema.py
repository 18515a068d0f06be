""" Schema / Shape of the header line of checkpoint files. """

from marshmallow import Schema, fields, validate, RAISE


class CheckpointHeaderSchema(Schema):
    """Validation schema for `#fkt-checkpoint v1` header fields."""

    class Meta:  # pylint: disable=too-few-public-methods
        unknown = RAISE

    d = fields.Integer(required=True, validate=validate.Range(min=1))
    generator_hidden = fields.Integer(required=True, validate=validate.Range(min=1))
    feature_dim = fields.Integer(required=True, validate=validate.Range(min=1))
    classifier_hidden = fields.Integer(required=True, validate=validate.Range(min=1))
    c = fields.Integer(required=True, validate=validate.Range(min=2))
    seed = fields.Integer(required=True)
    step = fields.Integer(required=True, validate=validate.Range(min=0))
    temperature = fields.Float(required=True, validate=validate.Range(min=0, min_inclusive=False))
    learning_rate = fields.Float(required=True, validate=validate.Range(min=0, min_inclusive=False))
