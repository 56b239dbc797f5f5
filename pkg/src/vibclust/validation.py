import os
import jsonschema
import yaml
from .config import package_dir, yamlLoader

schemas_dir = os.path.join(package_dir, "data", "schemas", "json")

_schemas = {}

def getSchema(
        name : str,
        base_path : str = schemas_dir
    ) -> dict:
    """
    Reads a json schema (cached after the first read)

    Parameters:
    -----------
    name : str
        Schema name (file name without extension, case insensitive)

    base_path : str = schemas_dir
        Directory of the schema files

    Returns:
    --------
    dict : the parsed schema. Cross references are kept inside the file ($defs)
    """
    key = (name.lower(), base_path)
    if key not in _schemas:
        with open(os.path.join(base_path, "%s.json" % name.lower())) as schema_file:
            _schemas[key] = yaml.load(schema_file, yamlLoader())
    return _schemas[key]

def validate(
    params : dict,
    schema : dict
    ) -> None:
    """
    Validate dict against schema. Keys with None values are ignored

    Raises:
    -------
    jsonschema.exceptions.ValidationError:

        if the instance is invalid

    jsonschema.exceptions.SchemaError:

        if the schema itself is invalid
    """
    instancedict = {key: value for key, value in params.items() if key != "self" and value is not None}
    return jsonschema.validate(
        instance=instancedict,
        schema=schema)

def getSchemaAndValidate(
        params : dict,
        name : str
    ) -> None:
    """
    Validate dict against the named packaged json schema

    Parameters:
    -----------
    params : dict

        Dict to validate

    name : str

        Name of the schema: one of DatasetManifest, SyntheticSpec, RunConfig

    Raises:
    -------
    jsonschema.exceptions.ValidationError:

        if the instance is invalid
    """
    return validate(params, getSchema(name))
