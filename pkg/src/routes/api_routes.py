"""API routes."""

from src.controllers import api_controller
from src.routes import api


@api.route('/model')
def model():
    """Served model description."""
    return api_controller.model_info()


@api.route('/predict/<int:slot>')
def predict(slot):
    """Per-zone prediction for one slot."""
    return api_controller.predict(slot)


@api.route('/importance')
def importance():
    """Feature importance ranking."""
    return api_controller.importance()
