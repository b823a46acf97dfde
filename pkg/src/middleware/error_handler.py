"""Error handler middleware."""

from flask import jsonify

from src.utils.errors import FocirError


def setup_error_handlers(app):
    """Set up error handlers for the application."""

    @app.errorhandler(FocirError)
    def toolkit_error(error):
        """Handle configuration, data and numerical errors."""
        app.logger.warning(f"{type(error).__name__}: {error.message}")
        return jsonify({
            "error": type(error).__name__,
            "message": error.message
        }), error.http_status

    @app.errorhandler(404)
    def not_found(error):
        """Handle 404 errors."""
        return jsonify({
            "error": "Not found",
            "message": str(error)
        }), 404

    @app.errorhandler(503)
    def unavailable(error):
        """Handle 503 errors."""
        return jsonify({
            "error": "Service unavailable",
            "message": error.description
        }), 503

    @app.errorhandler(500)
    def server_error(error):
        """Handle 500 errors."""
        return jsonify({
            "error": "Internal server error",
            "message": str(error)
        }), 500
