import os
import json
import logging
from dotenv import load_dotenv

from errors import ConfigurationError

VERSION = "0.3.0"
ENV_PREFIX = "THICKLINKS"

# Pick up a local .env before any setting is read
load_dotenv()

# (category, key, value, data_type)
DEFAULT_SETTINGS = [
    # Run settings
    ('run', 'seed', '42', 'integer'),
    ('run', 'samples', '1000000', 'integer'),
    ('run', 'workers', '4', 'integer'),
    ('run', 'chunk_size', '100000', 'integer'),

    # Tolerances
    ('tolerance', 'unit_norm', '1e-12', 'float'),
    ('tolerance', 'fiber_agreement', '2e-3', 'float'),
    ('tolerance', 'contact', '1e-6', 'float'),
    ('tolerance', 'mc_sigmas', '4.0', 'float'),
    ('tolerance', 'mc_resolution', '5e-3', 'float'),

    # Curve validation
    ('curves', 'min_samples', '8', 'integer'),
    ('curves', 'sample_norm', '1e-9', 'float'),

    # Logging
    ('logging', 'level', 'INFO', 'string'),
]


def env_name(category, key):
    """Environment variable that overrides a setting"""
    return f"{ENV_PREFIX}_{category}_{key}".upper()


def convert_value(value, data_type):
    """Convert string value to proper data type"""
    if data_type == 'boolean':
        return value.strip().lower() in ('true', '1', 'yes')
    elif data_type == 'integer':
        return int(float(value))
    elif data_type == 'float':
        return float(value)
    elif data_type == 'json':
        return json.loads(value)
    return value


def _lookup_default(category, key):
    for cat, k, value, data_type in DEFAULT_SETTINGS:
        if cat == category and k == key:
            return value, data_type
    return None, 'string'


def get_setting(category, key, default=None):
    """Helper function to get a setting value (environment first, then the defaults table)"""
    table_value, data_type = _lookup_default(category, key)
    raw = os.getenv(env_name(category, key))

    if raw is not None:
        try:
            return convert_value(raw, data_type)
        except (ValueError, json.JSONDecodeError):
            logging.warning(f"Ignoring malformed {env_name(category, key)}={raw!r}, using default")

    if table_value is None:
        if default is None:
            raise ConfigurationError(f"unknown setting {category}.{key}")
        return default
    return convert_value(table_value, data_type)


def current_settings():
    """All settings in effect, keyed "category.key", recorded in every output's metadata"""
    return {f"{cat}.{key}": get_setting(cat, key) for cat, key, _, _ in DEFAULT_SETTINGS}


DEFAULT_SEED = get_setting('run', 'seed')
DEFAULT_SAMPLES = get_setting('run', 'samples')
WORKERS = max(1, get_setting('run', 'workers'))
CHUNK_SIZE = max(1, get_setting('run', 'chunk_size'))
UNIT_NORM_TOL = get_setting('tolerance', 'unit_norm')
FIBER_AGREEMENT_TOL = get_setting('tolerance', 'fiber_agreement')
CONTACT_TOL = get_setting('tolerance', 'contact')
MC_SIGMAS = get_setting('tolerance', 'mc_sigmas')
MC_RESOLUTION = get_setting('tolerance', 'mc_resolution')
MIN_CURVE_SAMPLES = get_setting('curves', 'min_samples')
CURVE_NORM_TOL = get_setting('curves', 'sample_norm')
LOG_LEVEL = str(get_setting('logging', 'level')).upper()
