""" Validation schema for the synthetic domain-shift generator. """

from marshmallow import Schema, fields, validate, validates_schema, ValidationError, post_load

from tfkt.models.embedding_dataset import SyntheticTaskSpec


class SyntheticTaskSchema(Schema):
    """Validation schema for synthetic task parameters."""
    class_count = fields.Integer(required=True, validate=validate.Range(min=2))
    dim = fields.Integer(required=True, validate=validate.Range(min=2))
    per_class_source = fields.Integer(required=True, validate=validate.Range(min=1))
    per_class_target = fields.Integer(required=True, validate=validate.Range(min=1))
    minority_classes = fields.List(fields.Integer(validate=validate.Range(min=0)),
                                   load_default=list)
    shots = fields.Integer(load_default=1, validate=validate.Range(min=1))
    mixing_angle = fields.Float(load_default=0.0, allow_nan=False)
    translation = fields.Float(load_default=0.0, validate=validate.Range(min=0))
    noise_std = fields.Float(load_default=0.0, validate=validate.Range(min=0))
    separation = fields.Float(load_default=4.0, validate=validate.Range(min=0))
    seed = fields.Integer(load_default=0, validate=validate.Range(min=0, max=2 ** 64 - 1))

    @validates_schema
    def validate_minority(self, data, **kwargs):  # pylint: disable=unused-argument
        """Minority ids must be distinct classes of the task."""
        minority = data.get("minority_classes", [])
        if any(c >= data["class_count"] for c in minority):
            raise ValidationError("minority class id out of range", "minority_classes")
        if len(set(minority)) != len(minority):
            raise ValidationError("minority class ids must be distinct", "minority_classes")

    @post_load
    def make_spec(self, data, **kwargs):  # pylint: disable=unused-argument
        """Build the immutable task specification."""
        data["minority_classes"] = tuple(data["minority_classes"])
        return SyntheticTaskSpec(**data)
