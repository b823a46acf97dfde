"""WSGI entry point for production deployment.

The served checkpoint and data directory come from FOCIRNET_CHECKPOINT and
FOCIRNET_DATA_DIR.
"""

from src import create_app

# Create the application with production config
app = create_app('production')

if __name__ == "__main__":
    app.run()
