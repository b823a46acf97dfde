"""Routes package."""

from flask import Blueprint

# Create blueprints
api = Blueprint('api', __name__, url_prefix='/api')
system = Blueprint('system', __name__, url_prefix='/system')

# Import routes
from src.routes import api_routes, system_routes  # noqa: E402,F401

# Register routes with blueprints
# This is done in the import of the route modules

__all__ = ['api', 'system']
