import logging

from waitress import serve

from planarcrn import config
from planarcrn.server.api import api as api_blueprint
from planarcrn.server.app import app as flask_app


flask_app.register_blueprint(api_blueprint)


def main() -> None:
    logger = logging.getLogger("waitress")
    logger.setLevel(logging.INFO)
    serve(flask_app, host=config.get_http_host(), port=config.get_http_port())
