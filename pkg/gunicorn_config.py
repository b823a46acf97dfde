"""Gunicorn configuration file."""

import multiprocessing
import os

# Server socket
bind = os.environ.get('GUNICORN_BIND', '0.0.0.0:8000')
backlog = 2048

# Worker processes; each worker holds its own copy of the model
workers = int(os.environ.get('GUNICORN_WORKERS', min(4, multiprocessing.cpu_count())))
worker_class = 'sync'
timeout = 60
keepalive = 2

# Server mechanics
daemon = False
pidfile = 'gunicorn.pid'
preload_app = True

# Logging
errorlog = 'logs/gunicorn-error.log'
accesslog = 'logs/gunicorn-access.log'
loglevel = os.environ.get('GUNICORN_LOG_LEVEL', 'info')

# Process naming
proc_name = 'focirnet'


# Server hooks
def on_starting(server):
    """Server startup actions."""
    os.makedirs('logs', exist_ok=True)
    print(f"Starting Gunicorn server with {workers} workers on {bind}")
    print(f"Checkpoint: {os.environ.get('FOCIRNET_CHECKPOINT', '(none)')}")


def on_exit(server):
    """Server shutdown actions."""
    print("Gunicorn server shutting down")
