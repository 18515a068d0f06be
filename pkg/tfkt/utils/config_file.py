""" Reads `key=value` run configuration files. """

from marshmallow import ValidationError


def read_config_file(file_path: str) -> dict[str, str]:
    """
    Parse a `key=value` file into raw strings; blank lines and `#` comments are skipped.

    Values are validated later by the run configuration schema.
    """
    values: dict[str, str] = {}
    with open(file_path, encoding="utf-8") as handle:
        for line_number, raw_line in enumerate(handle, start=1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(
                    {"config": [f"{file_path} line {line_number}: expected key=value"]}
                )
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values
