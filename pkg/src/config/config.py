import os


def get_env(key, default=None):
    """Get environment variable and strip inline comments if present."""
    value = os.environ.get(key, default)
    if value is not None and isinstance(value, str) and '#' in value:
        value = value.split('#')[0].strip()
    return value


class Config:
    """Base configuration."""
    # Application
    APP_NAME = "FOCIR-Net"
    APP_DESCRIPTION = "Zone-level ride-hailing demand and supply-demand gap forecasting"
    VERSION = "1.0.0"

    DEBUG = False
    TESTING = False
    LOG_LEVEL = get_env('LOG_LEVEL', 'INFO')

    # Run artifacts
    CHECKPOINT = get_env('FOCIRNET_CHECKPOINT')
    DATA_DIR = get_env('FOCIRNET_DATA_DIR')

    # Prediction service
    HOST = get_env('HOST', '127.0.0.1')
    PORT = int(get_env('PORT', '20001'))
    JSON_SORT_KEYS = False


class DevelopmentConfig(Config):
    """Development configuration."""
    DEBUG = True
    LOG_LEVEL = get_env('LOG_LEVEL', 'DEBUG')


class TestingConfig(Config):
    """Testing configuration."""
    TESTING = True
    DEBUG = True
    LOG_LEVEL = get_env('LOG_LEVEL', 'WARNING')


class ProductionConfig(Config):
    """Production configuration."""
    HOST = get_env('HOST', '0.0.0.0')
    PORT = int(get_env('PORT', '8000'))


config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig
}
