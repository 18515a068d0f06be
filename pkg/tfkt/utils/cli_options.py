""" Click options generated from the run configuration schema, and config resolution. """

from functools import reduce

import click
from marshmallow import fields

from tfkt.schema.run_config_schema import RunConfig, RunConfigSchema
from tfkt.utils.config_file import read_config_file

ABLATION_FLAGS = (
    ("--no-cpa", "use_cpa", "Drop both alignment terms (w/o CPA)."),
    ("--no-cpa-intra", "use_cpa_intra", "Drop M_c (w/o CPA_intra)."),
    ("--no-cpa-inter", "use_cpa_inter", "Drop M_d (w/o CPA_inter)."),
    ("--no-cda", "use_cda", "Drop every synthetic set (w/o CDA)."),
    ("--no-cda-s", "use_cda_s", "Drop the EP set (w/o CDA_s)."),
    ("--no-cda-t", "use_cda_t", "Drop the KP set (w/o CDA_t)."),
    ("--no-cda-mix", "use_cda_mix", "Drop the MIX set (w/o CDA_mix)."),
)

_CLICK_TYPES = {
    fields.Integer: int,
    fields.Float: float,
    fields.String: str,
}


def _option_for(key: str, field: fields.Field):
    default = field.load_default() if callable(field.load_default) else field.load_default
    if isinstance(default, list):
        default = ",".join(str(part) for part in default) or "none"
    shown = "required" if field.required else default
    help_text = f"{field.metadata.get('help', '')} [default: {shown}]"
    name = key.replace("_", "-")
    if isinstance(field, fields.Boolean):
        return click.option(f"--{name}/--no-{name}", key, default=None, help=help_text)
    click_type = _CLICK_TYPES.get(type(field), str)
    return click.option(f"--{name}", key, type=click_type, default=None, help=help_text)


def config_options(func):
    """Add one option per run configuration key, plus --config and the ablation flags."""
    decorators = []
    for name, field in RunConfigSchema().fields.items():
        if field.metadata.get("cli", True) is False:
            continue
        decorators.append(_option_for(field.data_key or name, field))
    for flag, key, help_text in ABLATION_FLAGS:
        decorators.append(click.option(flag, f"ablate_{key}", is_flag=True, help=help_text))
    decorators.append(click.option(
        "--config", "config_file", type=str, default=None,
        help="key=value file; flags override it, it overrides the defaults.",
    ))
    return reduce(lambda wrapped, decorator: decorator(wrapped), reversed(decorators), func)


def resolve_run_config(options: dict, config_file: str | None, debug: bool = False,
                       **overrides) -> RunConfig:
    """Defaults, then the config file, then flags; validated by RunConfigSchema."""
    raw = read_config_file(config_file) if config_file else {}
    for _, key, _ in ABLATION_FLAGS:
        if options.pop(f"ablate_{key}", False):
            raw[key] = False
    raw.update({key: value for key, value in options.items() if value is not None})
    raw.update(overrides)
    return RunConfigSchema(context={"debug": debug}).load(raw)


def parse_class_ids(ctx, param, value):  # pylint: disable=unused-argument
    """Click callback turning `0,3,5` into a tuple of ints."""
    if value is None:
        return ()
    try:
        return tuple(int(part) for part in value.replace(" ", "").split(",") if part)
    except ValueError as e:
        raise click.BadParameter("expected comma-separated class ids") from e
