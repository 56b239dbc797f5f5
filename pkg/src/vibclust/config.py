import yaml
import os

package_dir = os.path.dirname(os.path.abspath(__file__))

def yamlLoader():
    return getattr(yaml, "CSafeLoader", yaml.SafeLoader)

def loadConfig() -> dict:
    """Reads packaged defaults and merges $VIBCLUST_DIR/config/config.yml over them, if present"""
    with open(os.path.join(package_dir, "data", "config", "defaults.yml")) as defaults_file:
        defaults = yaml.load(defaults_file, yamlLoader())

    config = {}
    if "VIBCLUST_DIR" in os.environ:
        config_path = os.path.join(os.environ["VIBCLUST_DIR"], "config", "config.yml")
        if os.path.exists(config_path):
            with open(config_path) as config_file:
                config = yaml.load(config_file, yamlLoader()) or {}

    for key, value in defaults.items():
        if key not in config:
            config[key] = value
        elif isinstance(value, dict) and isinstance(config[key], dict):
            config[key] = dict(value, **config[key])

    return config

config = loadConfig()
